#include "tradectl/market_data.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "tradectl/errors.hpp"

namespace tradectl {

namespace {

std::string trim(const std::string& s) {
    size_t b = 0;
    size_t e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    return cells;
}

bool is_iso_date(const std::string& d) {
    if (d.size() != 10 || d[4] != '-' || d[7] != '-') return false;
    for (size_t i : {0u, 1u, 2u, 3u, 5u, 6u, 8u, 9u})
        if (!std::isdigit(static_cast<unsigned char>(d[i]))) return false;
    const int month = (d[5] - '0') * 10 + (d[6] - '0');
    const int day = (d[8] - '0') * 10 + (d[9] - '0');
    return month >= 1 && month <= 12 && day >= 1 && day <= 31;
}

void strip_bom(std::string& line) {
    if (line.size() >= 3 && line[0] == '\xEF' && line[1] == '\xBB' && line[2] == '\xBF')
        line.erase(0, 3);
}

void strip_cr(std::string& line) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
}

// Round-trip double formatting (shortest representation).
std::string format_double(double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

}  // namespace

PriceSeries PriceSeries::from_columns(std::string symbol,
                                      std::vector<std::string> dates,
                                      std::vector<double> closes,
                                      int eval_start) {
    if (dates.size() != closes.size())
        throw ValidationError("price series \"" + symbol + "\": date/close column length mismatch");
    if (closes.size() < 2)
        throw InsufficientDataError("price series \"" + symbol + "\": need at least 2 rows, got " +
                                    std::to_string(closes.size()));
    for (size_t i = 0; i < closes.size(); ++i) {
        if (!(closes[i] > 0.0) || !std::isfinite(closes[i]))
            throw ValidationError("price series \"" + symbol + "\": non-positive close at " + dates[i]);
        if (i > 0 && !(dates[i - 1] < dates[i]))
            throw ValidationError("price series \"" + symbol + "\": dates not strictly increasing at " +
                                  dates[i]);
    }
    if (eval_start < 0 || eval_start >= static_cast<int>(closes.size()))
        throw ValidationError("price series \"" + symbol + "\": eval_start out of range");

    PriceSeries s;
    s.symbol_ = std::move(symbol);
    s.dates_ = std::move(dates);
    s.closes_ = std::move(closes);
    s.eval_start_ = eval_start;

    const size_t n = s.closes_.size();
    s.close_prefix_.resize(n + 1, 0.0);
    s.abs_delta_prefix_.resize(n, 0.0);
    for (size_t i = 0; i < n; ++i) {
        s.close_prefix_[i + 1] = s.close_prefix_[i] + s.closes_[i];
        if (i > 0)
            s.abs_delta_prefix_[i] = s.abs_delta_prefix_[i - 1] + std::abs(s.closes_[i] - s.closes_[i - 1]);
    }
    return s;
}

PriceSeries PriceSeries::with_eval_start(int eval_start) const {
    return from_columns(symbol_, dates_, closes_, eval_start);
}

double PriceSeries::close_sum(int first, int last) const {
    return close_prefix_[static_cast<size_t>(last) + 1] - close_prefix_[static_cast<size_t>(first)];
}

double PriceSeries::abs_delta_sum(int first, int last) const {
    double lo = first >= 2 ? abs_delta_prefix_[static_cast<size_t>(first) - 1] : 0.0;
    return abs_delta_prefix_[static_cast<size_t>(last)] - lo;
}

HistoryView::HistoryView(const PriceSeries& series, int now) : series_(&series), now_(now) {
    if (now < 0 || now >= series.size())
        throw ContractViolation("HistoryView: now=" + std::to_string(now) + " outside series \"" +
                                series.symbol() + "\" of length " + std::to_string(series.size()));
}

double HistoryView::at(int i) const {
    if (i < 0 || i > now_)
        throw ContractViolation("HistoryView: access to index " + std::to_string(i) +
                                " outside causal window [0," + std::to_string(now_) + "]");
    return series_->close(i);
}

const std::string& HistoryView::date_at(int i) const {
    if (i < 0 || i > now_)
        throw ContractViolation("HistoryView: date access outside causal window");
    return series_->date(i);
}

double HistoryView::mean_ending_at(int last, int count) const {
    if (count < 1) throw ContractViolation("HistoryView::mean_ending_at: count must be >= 1");
    if (last < 0 || last > now_)
        throw ContractViolation("HistoryView::mean_ending_at: window end outside causal window");
    if (last - count + 1 < 0)
        throw InsufficientDataError("moving window of " + std::to_string(count) +
                                    " needs history before the first price");
    return series_->close_sum(last - count + 1, last) / count;
}

double HistoryView::abs_delta_sum_to_now() const {
    if (now_ == 0) return 0.0;
    return series_->abs_delta_sum(1, now_);
}

PriceSeries load_price_series(const std::filesystem::path& csv_path, std::string symbol) {
    std::ifstream in(csv_path);
    if (!in)
        throw ParseError("cannot open price CSV: " + csv_path.string());

    std::string line;
    if (!std::getline(in, line))
        throw ParseError("empty price CSV: " + csv_path.string());
    strip_bom(line);
    strip_cr(line);

    const auto header = split_line(line);
    int date_col = -1;
    int close_col = -1;
    for (size_t i = 0; i < header.size(); ++i) {
        const std::string name = lower(trim(header[i]));
        if (name == "date" && date_col < 0) date_col = static_cast<int>(i);
        if (name == "close" && close_col < 0) close_col = static_cast<int>(i);
    }
    if (date_col < 0 || close_col < 0)
        throw ParseError(csv_path.string() + ": header must contain Date and Close columns");

    std::vector<std::pair<std::string, double>> rows;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        strip_cr(line);
        if (trim(line).empty()) continue;
        const auto cells = split_line(line);
        if (static_cast<int>(cells.size()) <= std::max(date_col, close_col))
            throw ParseError(csv_path.string() + ": row " + std::to_string(line_no) +
                             " has too few columns");
        const std::string date = trim(cells[static_cast<size_t>(date_col)]);
        if (!is_iso_date(date))
            throw ParseError(csv_path.string() + ": row " + std::to_string(line_no) +
                             " has a malformed date \"" + date + "\"");
        const std::string close_text = trim(cells[static_cast<size_t>(close_col)]);
        double close = 0.0;
        const auto [ptr, ec] =
            std::from_chars(close_text.data(), close_text.data() + close_text.size(), close);
        if (ec != std::errc{} || ptr != close_text.data() + close_text.size())
            throw ParseError(csv_path.string() + ": row " + std::to_string(line_no) +
                             " has a malformed close \"" + close_text + "\"");
        if (!(close > 0.0) || !std::isfinite(close))
            throw ValidationError(csv_path.string() + ": row " + std::to_string(line_no) +
                                  " has non-positive close " + close_text);
        rows.emplace_back(date, close);
    }

    std::sort(rows.begin(), rows.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });

    std::vector<std::string> dates;
    std::vector<double> closes;
    dates.reserve(rows.size());
    closes.reserve(rows.size());
    for (auto& [d, c] : rows) {
        dates.push_back(std::move(d));
        closes.push_back(c);
    }
    try {
        return PriceSeries::from_columns(std::move(symbol), std::move(dates), std::move(closes));
    } catch (const ValidationError& e) {
        throw ValidationError(csv_path.string() + ": " + e.what());
    } catch (const InsufficientDataError& e) {
        throw InsufficientDataError(csv_path.string() + ": " + e.what());
    }
}

void save_price_series(const PriceSeries& series, const std::filesystem::path& csv_path) {
    std::ofstream out(csv_path);
    if (!out)
        throw ParseError("cannot open for writing: " + csv_path.string());
    out << "Date,Close\n";
    for (int i = 0; i < series.size(); ++i)
        out << series.date(i) << ',' << format_double(series.close(i)) << '\n';
}

int split_index(const PriceSeries& series, const std::string& boundary_date) {
    if (!is_iso_date(boundary_date))
        throw DomainError("split: boundary \"" + boundary_date + "\" is not an ISO date");
    if (boundary_date < series.date(0) || boundary_date > series.date(series.size() - 1))
        throw DomainError("split: boundary " + boundary_date + " outside series \"" +
                          series.symbol() + "\" range [" + series.date(0) + ", " +
                          series.date(series.size() - 1) + "]");
    const auto& dates = series.dates();
    const auto it = std::lower_bound(dates.begin(), dates.end(), boundary_date);
    return static_cast<int>(it - dates.begin());
}

PriceSeries split_at_date(const PriceSeries& series, const std::string& boundary_date) {
    return series.with_eval_start(split_index(series, boundary_date));
}

std::vector<double> normalize(std::span<const double> closes) {
    if (closes.empty())
        throw DomainError("normalize: empty price vector");
    std::vector<double> out(closes.size());
    for (size_t i = 0; i < closes.size(); ++i) out[i] = closes[i] / closes[0];
    return out;
}

std::vector<ManifestEntry> parse_manifest(const std::filesystem::path& manifest_path) {
    std::ifstream in(manifest_path);
    if (!in)
        throw ParseError("cannot open manifest: " + manifest_path.string());
    const auto base = manifest_path.parent_path();
    std::vector<ManifestEntry> entries;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        strip_cr(line);
        if (line_no == 1) strip_bom(line);
        const std::string text = trim(line);
        if (text.empty() || text[0] == '#') continue;
        const auto comma = text.find(',');
        if (comma == std::string::npos)
            throw ParseError(manifest_path.string() + ": line " + std::to_string(line_no) +
                             " is not a symbol,path pair");
        ManifestEntry e;
        e.symbol = trim(text.substr(0, comma));
        std::filesystem::path p = trim(text.substr(comma + 1));
        if (e.symbol.empty() || p.empty())
            throw ParseError(manifest_path.string() + ": line " + std::to_string(line_no) +
                             " has an empty symbol or path");
        e.path = p.is_absolute() ? p : base / p;
        entries.push_back(std::move(e));
    }
    return entries;
}

}  // namespace tradectl
