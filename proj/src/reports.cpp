#include "tradectl/reports.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include "tradectl/errors.hpp"

namespace tradectl {

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path);
    if (!out) throw ParseError("cannot open for writing: " + path.string());
    return out;
}

const char* kind_name(TradeKind kind) { return kind == TradeKind::Buy ? "buy" : "sell"; }

// Pads `text` to `width` (left-aligned for the first column, right
// otherwise) — small helper for the text tables.
std::string pad(const std::string& text, size_t width, bool left) {
    if (text.size() >= width) return text;
    const std::string fill(width - text.size(), ' ');
    return left ? text + fill : fill + text;
}

std::string render_table(const std::vector<std::vector<std::string>>& cells) {
    if (cells.empty()) return "";
    std::vector<size_t> width(cells.front().size(), 0);
    for (const auto& row : cells)
        for (size_t c = 0; c < row.size(); ++c) width[c] = std::max(width[c], row[c].size());
    std::ostringstream out;
    for (const auto& row : cells) {
        for (size_t c = 0; c < row.size(); ++c) {
            if (c) out << "  ";
            out << pad(row[c], width[c], c == 0);
        }
        out << '\n';
    }
    return out.str();
}

// Trailing ".0" reads noisy in the text tables; keep one decimal only
// when it is informative.
std::string format_trimmed(double v) {
    std::string s = format_fixed(v, 1);
    if (s.size() > 2 && s.compare(s.size() - 2, 2, ".0") == 0) s.erase(s.size() - 2);
    return s;
}

}  // namespace

std::string format_compact(double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

std::string format_fixed(double v, int decimals) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed, decimals);
    if (ec != std::errc{}) return format_compact(v);
    return std::string(buf, ptr);
}

void write_summary_csv(const std::filesystem::path& path, const std::vector<SummaryRow>& rows) {
    auto out = open_out(path);
    out << "predictor,controller,n_tr_avg,t_min,f_avg,f_min,f_max,f_pos\n";
    for (const SummaryRow& r : rows) {
        out << r.predictor << ',' << r.controller << ',' << format_compact(r.n_tr_avg) << ','
            << r.t_min << ',' << format_compact(r.f_avg) << ',' << format_compact(r.f_min) << ','
            << format_compact(r.f_max) << ',' << format_compact(r.f_pos) << '\n';
    }
}

std::string render_summary_text(const std::vector<SummaryRow>& rows) {
    std::ostringstream out;
    std::string section;
    std::vector<std::vector<std::string>> cells;
    auto flush = [&] {
        if (cells.empty()) return;
        out << "-- " << section << " --\n" << render_table(cells) << '\n';
        cells.clear();
    };
    for (const SummaryRow& r : rows) {
        const std::string name = r.predictor == "baseline" ? "baselines" : "predictor: " + r.predictor;
        if (name != section) {
            flush();
            section = name;
            cells.push_back({"controller", "N_tr", "t_min", "f_avg%", "f_min%", "f_max%", "F_pos%"});
        }
        cells.push_back({r.controller, format_trimmed(r.n_tr_avg), std::to_string(r.t_min),
                         format_fixed(r.f_avg, 1), format_fixed(r.f_min, 1),
                         format_fixed(r.f_max, 1), format_trimmed(r.f_pos)});
    }
    flush();
    return out.str();
}

void write_trades_csv(const std::filesystem::path& path, const RunResult& run) {
    auto out = open_out(path);
    out << "t,date,kind,price,shares,cash_after,wealth_after\n";
    for (const TradeLogEntry& e : run.trades) {
        out << e.t << ',' << e.date << ',' << kind_name(e.kind) << ',' << format_compact(e.price)
            << ',' << e.shares << ',' << format_fixed(e.cash_after, 2) << ','
            << format_fixed(e.wealth_after, 2) << '\n';
    }
}

void write_trace_csv(const std::filesystem::path& path, const RunResult& run) {
    auto out = open_out(path);
    out << "t,date,series,value\n";
    for (size_t t = 0; t < run.wealth_trace.size(); ++t) {
        out << t << ',' << run.dates[t] << ",price," << format_compact(run.price_trace[t]) << '\n';
        out << t << ',' << run.dates[t] << ",wealth," << format_fixed(run.wealth_trace[t], 2)
            << '\n';
    }
}

void write_overfit_csv(const std::filesystem::path& path, const OverfitReport& report) {
    auto out = open_out(path);
    out << "symbol,best_params,f_train,f_val,f_val_bh\n";
    for (const OverfitRow& row : report.rows) {
        std::string params;
        for (size_t i = 0; i < row.best_params.size(); ++i) {
            if (i) params += ';';
            params += format_compact(row.best_params[i]);
        }
        out << row.symbol << ',' << params << ',' << format_compact(row.f_train) << ','
            << format_compact(row.f_val) << ',' << format_compact(row.f_val_bh) << '\n';
    }
    out << "average,," << format_compact(report.avg_f_train) << ','
        << format_compact(report.avg_f_val) << ',' << format_compact(report.avg_f_val_bh) << '\n';
}

std::string render_overfit_text(const OverfitReport& report) {
    std::vector<std::vector<std::string>> cells;
    cells.push_back({"symbol", "best", "f_train%", "f_val%", "f_val_bh%"});
    for (const OverfitRow& row : report.rows)
        cells.push_back({row.symbol, row.best_label, format_fixed(row.f_train, 1),
                         format_fixed(row.f_val, 1), format_fixed(row.f_val_bh, 1)});
    cells.push_back({"average", "", format_fixed(report.avg_f_train, 1),
                     format_fixed(report.avg_f_val, 1), format_fixed(report.avg_f_val_bh, 1)});
    return render_table(cells);
}

void write_trajectory_csv(const std::filesystem::path& path,
                          const std::vector<std::string>& dates,
                          const std::vector<double>& closes, const OptimalTrajectory& traj) {
    auto out = open_out(path);
    out << "t,date,close,signal,wealth\n";
    for (size_t t = 0; t < closes.size(); ++t) {
        out << t << ',' << dates[t] << ',' << format_compact(closes[t]) << ',' << traj.signals[t]
            << ',' << format_fixed(traj.wealth_trace[t], 2) << '\n';
    }
}

std::string render_trajectory_text(const std::string& symbol,
                                   const std::vector<std::string>& dates,
                                   const std::vector<double>& closes,
                                   const OptimalTrajectory& traj, double m0) {
    std::ostringstream out;
    out << "hindsight optimum for " << symbol << " over " << closes.size() << " days\n";
    out << "trades: " << traj.n_trades << "  final wealth: " << format_fixed(traj.final_wealth, 2)
        << "  return: " << format_fixed(performance(traj.final_wealth, m0), 2) << "%\n";
    int shown = 0;
    for (size_t t = 0; t < closes.size() && shown < 20; ++t) {
        const bool flip = t == 0 ? traj.signals[t] == 1 : traj.signals[t] != traj.signals[t - 1];
        if (!flip) continue;
        out << "  " << (traj.signals[t] == 1 ? "buy " : "sell") << "  t=" << t << "  " << dates[t]
            << "  @" << format_compact(closes[t]) << '\n';
        ++shown;
    }
    return out.str();
}

}  // namespace tradectl
