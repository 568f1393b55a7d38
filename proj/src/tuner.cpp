#include "tradectl/tuner.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>

#include "tradectl/errors.hpp"
#include "tradectl/parallel.hpp"

namespace tradectl {

namespace {

bool is_tunable(ControllerId id) {
    switch (id) {
        case ControllerId::MaCross:
        case ControllerId::MaSign:
        case ControllerId::TrInside:
        case ControllerId::TrOutside:
        case ControllerId::HistOptRt:
            return true;
        default:
            return false;
    }
}

int as_int(const std::string& name, double v) {
    const int i = static_cast<int>(std::llround(v));
    if (std::abs(v - i) > 1e-9)
        throw ConfigError("grid axis \"" + name + "\": value must be an integer");
    return i;
}

void apply_axis(ControllerSpec& spec, const std::string& name, double value) {
    switch (spec.id) {
        case ControllerId::MaCross:
            if (name == "p_short") { spec.ma_cross.p_short = as_int(name, value); return; }
            if (name == "p_long") { spec.ma_cross.p_long = as_int(name, value); return; }
            break;
        case ControllerId::MaSign:
            if (name == "t_ma") { spec.ma_sign.t_ma = as_int(name, value); return; }
            if (name == "p_ma") { spec.ma_sign.p_ma = as_int(name, value); return; }
            break;
        case ControllerId::TrInside:
        case ControllerId::TrOutside:
            if (name == "t_win") { spec.tr.t_win = as_int(name, value); return; }
            if (name == "p_tr") { spec.tr.p_tr = as_int(name, value); return; }
            if (name == "eps_tr") { spec.tr.eps_tr = value; return; }
            break;
        case ControllerId::HistOptRt:
            if (name == "t_ho") { spec.histopt_rt.t_ho = as_int(name, value); return; }
            break;
        default:
            break;
    }
    throw ConfigError(std::string("grid axis \"") + name + "\" is not a parameter of " +
                      to_string(spec.id));
}

std::string format_value(double v) {
    if (v == std::llround(v) && std::abs(v) < 1e15)
        return std::to_string(static_cast<long long>(std::llround(v)));
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

}  // namespace

ParamGrid default_ma_cross_grid() {
    ParamGrid grid;
    grid.id = ControllerId::MaCross;
    GridAxis p_short{"p_short", {}};
    for (int v = 1; v <= 25; ++v) p_short.values.push_back(v);
    GridAxis p_long{"p_long", {}};
    for (int v = 5; v <= 200; ++v) p_long.values.push_back(v);
    grid.axes = {std::move(p_short), std::move(p_long)};
    return grid;
}

std::vector<ControllerSpec> expand_grid(const ParamGrid& grid, const ControllerSpec& base) {
    if (!is_tunable(grid.id))
        throw ConfigError(std::string("controller ") + to_string(grid.id) +
                          " has no tunable grid; tuning covers the rule-based controllers");
    if (grid.axes.empty()) throw ConfigError("parameter grid has no axes");
    for (const GridAxis& axis : grid.axes)
        if (axis.values.empty())
            throw ConfigError("grid axis \"" + axis.name + "\" has no values");

    std::vector<ControllerSpec> specs;
    std::vector<size_t> idx(grid.axes.size(), 0);
    bool done = false;
    while (!done) {
        ControllerSpec spec = base;
        spec.id = grid.id;
        for (size_t a = 0; a < grid.axes.size(); ++a)
            apply_axis(spec, grid.axes[a].name, grid.axes[a].values[idx[a]]);
        try {
            validate(spec);
            specs.push_back(spec);
        } catch (const ValidationError&) {
            // invalid combination (e.g. p_short >= p_long): skip
        }
        // advance the odometer, last axis fastest
        size_t a = grid.axes.size();
        while (true) {
            if (a == 0) {
                done = true;
                break;
            }
            --a;
            if (++idx[a] < grid.axes[a].values.size()) break;
            idx[a] = 0;
        }
    }
    return specs;
}

std::vector<double> param_tuple(const ControllerSpec& spec) {
    switch (spec.id) {
        case ControllerId::MaCross:
            return {static_cast<double>(spec.ma_cross.p_short),
                    static_cast<double>(spec.ma_cross.p_long)};
        case ControllerId::MaSign:
            return {static_cast<double>(spec.ma_sign.t_ma), static_cast<double>(spec.ma_sign.p_ma)};
        case ControllerId::TrInside:
        case ControllerId::TrOutside:
            return {static_cast<double>(spec.tr.t_win), static_cast<double>(spec.tr.p_tr),
                    spec.tr.eps_tr};
        case ControllerId::HistOptRt:
            return {static_cast<double>(spec.histopt_rt.t_ho)};
        default:
            return {};
    }
}

std::string param_label(const ControllerSpec& spec) {
    const auto tuple = param_tuple(spec);
    std::string out = "(";
    for (size_t i = 0; i < tuple.size(); ++i) {
        if (i) out += ", ";
        out += format_value(tuple[i]);
    }
    out += ")";
    return out;
}

TuneResult grid_search(const PriceSeries& series, const ParamGrid& grid, PredictorKind predictor,
                       const RunConfig& train_cfg) {
    ControllerSpec base;
    base.id = grid.id;
    const auto specs = expand_grid(grid, base);
    if (specs.empty()) throw ConfigError("grid contains no valid parameter combination");

    TuneResult result;
    bool have_best = false;
    std::vector<double> best_tuple;
    for (const ControllerSpec& spec : specs) {
        double f = 0.0;
        try {
            f = run_backtest(series, spec, predictor, train_cfg).f;
        } catch (const ConfigError&) {
            ++result.skipped;  // e.g. warm-up impossible inside this training window
            continue;
        }
        ++result.evaluated;
        const auto tuple = param_tuple(spec);
        if (!have_best || f > result.f_train ||
            (f == result.f_train && tuple < best_tuple)) {
            have_best = true;
            result.best = spec;
            result.f_train = f;
            best_tuple = tuple;
        }
    }
    if (!have_best)
        throw ConfigError("grid_search: no grid point could be evaluated on \"" +
                          series.symbol() + "\"");
    return result;
}

RunResult recursive_retune(const PriceSeries& series, const ParamGrid& grid,
                           PredictorKind predictor, int period, int lookback,
                           const RunConfig& cfg) {
    if (period < 1) throw ConfigError("recursive_retune: period must be >= 1");
    if (lookback < 2) throw ConfigError("recursive_retune: lookback must be >= 2 days");
    validate(cfg.costs);

    const int begin = cfg.eval_begin.value_or(series.eval_start());
    const int end = cfg.eval_end.value_or(series.size() - 1);
    if (begin < 0 || end >= series.size() || end - begin + 1 < 2)
        throw ConfigError("recursive_retune: bad evaluation window");
    if (begin - lookback < 0)
        throw ConfigError("recursive_retune: lookback of " + std::to_string(lookback) +
                          " days needs history before the evaluation window");
    const int last = end - begin;

    const std::string controller_label = std::string(to_string(grid.id)) + ":retuned";
    std::mt19937_64 rng(derive_run_seed(cfg.master_seed, series.symbol(), controller_label,
                                        to_string(predictor)));

    RunResult result;
    result.symbol = series.symbol();
    result.controller = controller_label;
    result.predictor = to_string(predictor);

    PortfolioState state = initial_state(cfg.m0);
    std::unique_ptr<Controller> controller;
    const auto eval_closes =
        series.closes().subspan(static_cast<size_t>(begin), static_cast<size_t>(last) + 1);

    int j_prev = 0;
    int last_trade_t = -1;
    int min_gap = std::numeric_limits<int>::max();
    for (int t = 0; t <= last; ++t) {
        const int a = begin + t;
        const double s_now = series.close(a);

        if (t < last) {
            if (t % period == 0) {
                RunConfig train_cfg = cfg;
                train_cfg.eval_begin = a - lookback;
                train_cfg.eval_end = a - 1;
                controller = make_controller(grid_search(series, grid, predictor, train_cfg).best,
                                             cfg.costs, cfg.m0);
            }
            int j = 0;
            const bool ready = a >= std::max(controller->min_history(),
                                             predictor_min_history(predictor)) &&
                               t >= controller->min_eval_day();
            if (ready) {
                const HistoryView history(series, a);
                const std::optional<double> true_next =
                    is_noncausal(predictor) ? std::optional<double>(series.close(a + 1))
                                            : std::nullopt;
                const double s_hat = predict(predictor, history, true_next, rng);
                const DecisionContext ctx{history,
                                          s_hat,
                                          t,
                                          last,
                                          series.close(begin),
                                          eval_closes.subspan(0, static_cast<size_t>(t) + 1),
                                          j_prev,
                                          rng};
                j = controller->decide(ctx);
            }
            auto [next, trade] = step(state, j, s_now, cfg.costs);
            state = next;
            if (trade) {
                TradeLogEntry e;
                e.t = t;
                e.date = series.date(a);
                e.kind = trade->kind;
                e.price = trade->price;
                e.shares = trade->shares;
                e.cash_after = trade->cash_after;
                e.wealth_after = state.wealth;
                result.trades.push_back(std::move(e));
                if (last_trade_t >= 0) min_gap = std::min(min_gap, t - last_trade_t);
                last_trade_t = t;
            }
            if (ready) controller->observe(s_now, series.close(a + 1), j);
            j_prev = j;
        } else {
            state.wealth = wealth_at(state, s_now);
        }

        result.wealth_trace.push_back(state.wealth);
        result.price_trace.push_back(s_now);
        result.dates.push_back(series.date(a));
    }

    result.n_trades = static_cast<int>(result.trades.size());
    result.t_min_between = result.n_trades >= 2 ? min_gap : 0;
    result.final_wealth = result.wealth_trace.back();
    result.f = performance(result.final_wealth, cfg.m0);
    return result;
}

OverfitReport overfitting_report(const std::vector<PriceSeries>& universe, const ParamGrid& grid,
                                 PredictorKind predictor, const RunConfig& cfg, int jobs) {
    if (universe.empty()) throw ConfigError("overfitting_report: empty universe");

    struct Slot {
        bool ok = false;
        OverfitRow row;
        std::string warning;
    };
    std::vector<Slot> slots(universe.size());

    parallel_for(universe.size(), jobs, [&](size_t i) {
        const PriceSeries& series = universe[i];
        try {
            const int begin = cfg.eval_begin.value_or(series.eval_start());
            if (begin < 2)
                throw ConfigError("no training data before the evaluation window");
            RunConfig train_cfg = cfg;
            train_cfg.eval_begin = 0;
            train_cfg.eval_end = begin - 1;
            const TuneResult tuned = grid_search(series, grid, predictor, train_cfg);

            OverfitRow row;
            row.symbol = series.symbol();
            row.best_label = param_label(tuned.best);
            row.best_params = param_tuple(tuned.best);
            row.f_train = tuned.f_train;
            row.f_val = run_backtest(series, tuned.best, predictor, cfg).f;
            row.f_val_bh = run_buy_and_hold(series, cfg).f;
            slots[i].row = std::move(row);
            slots[i].ok = true;
        } catch (const std::exception& e) {
            slots[i].warning = series.symbol() + ": " + e.what();
        }
    });

    OverfitReport report;
    for (Slot& s : slots) {
        if (s.ok)
            report.rows.push_back(std::move(s.row));
        else
            report.warnings.push_back(std::move(s.warning));
    }
    if (report.rows.empty())
        throw ConfigError("overfitting_report: tuning failed on every series");
    for (const OverfitRow& row : report.rows) {
        report.avg_f_train += row.f_train;
        report.avg_f_val += row.f_val;
        report.avg_f_val_bh += row.f_val_bh;
    }
    const double n = static_cast<double>(report.rows.size());
    report.avg_f_train /= n;
    report.avg_f_val /= n;
    report.avg_f_val_bh /= n;
    return report;
}

}  // namespace tradectl
