#include "tradectl/harness.hpp"

#include <algorithm>
#include <limits>
#include <variant>

#include "tradectl/errors.hpp"
#include "tradectl/histopt.hpp"
#include "tradectl/parallel.hpp"

namespace tradectl {

namespace {

struct EvalWindow {
    int begin = 0;
    int end = 0;  // inclusive
    int last_day() const { return end - begin; }
};

EvalWindow resolve_window(const PriceSeries& series, const RunConfig& cfg) {
    EvalWindow w;
    w.begin = cfg.eval_begin.value_or(series.eval_start());
    w.end = cfg.eval_end.value_or(series.size() - 1);
    if (w.begin < 0 || w.end >= series.size() || w.begin > w.end)
        throw ConfigError("evaluation window [" + std::to_string(w.begin) + ", " +
                          std::to_string(w.end) + "] outside series \"" + series.symbol() + "\"");
    if (w.end - w.begin + 1 < 2)
        throw ConfigError("evaluation window for \"" + series.symbol() +
                          "\" needs at least two days");
    return w;
}

void validate_run_config(const RunConfig& cfg) {
    validate(cfg.costs);
    if (!(cfg.m0 > 0.0)) throw ConfigError("m0 must be positive");
}

// Book-keeping shared by all run flavours.
struct RunRecorder {
    RunResult result;
    int last_trade_t = -1;
    int min_gap = std::numeric_limits<int>::max();

    void record(int t, const std::string& date, const TradeRecord& rec, double wealth_after) {
        TradeLogEntry e;
        e.t = t;
        e.date = date;
        e.kind = rec.kind;
        e.price = rec.price;
        e.shares = rec.shares;
        e.cash_after = rec.cash_after;
        e.wealth_after = wealth_after;
        result.trades.push_back(std::move(e));
        if (last_trade_t >= 0) min_gap = std::min(min_gap, t - last_trade_t);
        last_trade_t = t;
    }

    void finish(double m0) {
        result.n_trades = static_cast<int>(result.trades.size());
        result.t_min_between = result.n_trades >= 2 ? min_gap : 0;
        result.final_wealth = result.wealth_trace.back();
        result.f = performance(result.final_wealth, m0);
    }
};

}  // namespace

RunResult run_backtest(const PriceSeries& series, const ControllerSpec& spec,
                       PredictorKind predictor, const RunConfig& cfg) {
    validate_run_config(cfg);
    const EvalWindow w = resolve_window(series, cfg);
    const int last = w.last_day();

    auto controller = make_controller(spec, cfg.costs, cfg.m0);

    // Warm-up: the first evaluation day with enough history for both the
    // controller and the predictor. Cash is held before that.
    const int need_abs = std::max(controller->min_history(), predictor_min_history(predictor));
    const int first_ready = std::max(controller->min_eval_day(), need_abs - w.begin);
    if (first_ready > last - 1)
        throw ConfigError(std::string("controller ") + to_string(spec.id) + " on \"" +
                          series.symbol() + "\": warm-up needs " + std::to_string(need_abs) +
                          " past days and cannot be satisfied within the evaluation window");

    std::mt19937_64 rng(derive_run_seed(cfg.master_seed, series.symbol(), to_string(spec.id),
                                        to_string(predictor)));

    RunRecorder rec;
    rec.result.symbol = series.symbol();
    rec.result.controller = to_string(spec.id);
    rec.result.predictor = to_string(predictor);
    rec.result.wealth_trace.reserve(static_cast<size_t>(last) + 1);

    const auto eval_closes = series.closes().subspan(static_cast<size_t>(w.begin),
                                                     static_cast<size_t>(last) + 1);

    PortfolioState state = initial_state(cfg.m0);
    int j_prev = 0;
    for (int t = 0; t <= last; ++t) {
        const int a = w.begin + t;
        const double s_now = series.close(a);

        if (t < last) {
            int j = 0;
            const bool ready = t >= first_ready;
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
                                          series.close(w.begin),
                                          eval_closes.subspan(0, static_cast<size_t>(t) + 1),
                                          j_prev,
                                          rng};
                j = controller->decide(ctx);
                if (j != 0 && j != 1)
                    throw ContractViolation("controller returned a signal outside {0,1}");
            }
            auto [next, trade] = step(state, j, s_now, cfg.costs);
            state = next;
            if (trade) rec.record(t, series.date(a), *trade, state.wealth);
            if (ready) controller->observe(s_now, series.close(a + 1), j);
            j_prev = j;
        } else {
            state.wealth = wealth_at(state, s_now);
        }

        rec.result.wealth_trace.push_back(state.wealth);
        rec.result.price_trace.push_back(s_now);
        rec.result.dates.push_back(series.date(a));
    }

    rec.finish(cfg.m0);
    return rec.result;
}

RunResult run_buy_and_hold(const PriceSeries& series, const RunConfig& cfg) {
    ControllerSpec spec;
    spec.id = ControllerId::BuyAndHold;
    RunResult r = run_backtest(series, spec, PredictorKind::Indifferent, cfg);
    r.predictor = "baseline";
    return r;
}

RunResult run_histopt_baseline(const PriceSeries& series, const RunConfig& cfg) {
    validate_run_config(cfg);
    const EvalWindow w = resolve_window(series, cfg);
    const int last = w.last_day();
    const auto closes = series.closes().subspan(static_cast<size_t>(w.begin),
                                                static_cast<size_t>(last) + 1);
    const OptimalTrajectory traj = optimal_trajectory(closes, cfg.m0, cfg.costs);

    RunRecorder rec;
    rec.result.symbol = series.symbol();
    rec.result.controller = "histopt";
    rec.result.predictor = "baseline";

    PortfolioState state = initial_state(cfg.m0);
    for (int t = 0; t <= last; ++t) {
        const int a = w.begin + t;
        auto [next, trade] =
            step(state, traj.signals[static_cast<size_t>(t)], series.close(a), cfg.costs);
        state = next;
        if (trade) rec.record(t, series.date(a), *trade, state.wealth);
        rec.result.wealth_trace.push_back(state.wealth);
        rec.result.price_trace.push_back(series.close(a));
        rec.result.dates.push_back(series.date(a));
    }

    rec.finish(cfg.m0);
    return rec.result;
}

SummaryRow aggregate(const std::vector<RunResult>& runs) {
    if (runs.empty()) throw DomainError("aggregate: no runs");
    SummaryRow row;
    row.controller = runs.front().controller;
    row.predictor = runs.front().predictor;
    row.f_min = runs.front().f;
    row.f_max = runs.front().f;
    row.t_min = runs.front().t_min_between;
    int positive = 0;
    for (const RunResult& r : runs) {
        row.n_tr_avg += r.n_trades;
        row.f_avg += r.f;
        row.f_min = std::min(row.f_min, r.f);
        row.f_max = std::max(row.f_max, r.f);
        row.t_min = std::min(row.t_min, r.t_min_between);
        if (r.f > 0.0) ++positive;
    }
    const double n = static_cast<double>(runs.size());
    row.n_tr_avg /= n;
    row.f_avg /= n;
    row.f_pos = 100.0 * positive / n;
    return row;
}

MatrixResult run_matrix(const std::vector<PriceSeries>& universe,
                        const std::vector<ControllerSpec>& controllers,
                        const std::vector<PredictorKind>& predictors, const RunConfig& cfg,
                        int jobs) {
    if (universe.empty()) throw ConfigError("run_matrix: empty universe");
    if (controllers.empty()) throw ConfigError("run_matrix: no controllers selected");
    if (predictors.empty()) throw ConfigError("run_matrix: no predictors selected");

    struct Task {
        enum class Kind { Run, HistOpt, BuyHold } kind;
        size_t controller = 0;
        size_t predictor = 0;
        size_t series = 0;
    };
    std::vector<Task> tasks;
    for (size_t p = 0; p < predictors.size(); ++p)
        for (size_t c = 0; c < controllers.size(); ++c)
            for (size_t s = 0; s < universe.size(); ++s)
                tasks.push_back({Task::Kind::Run, c, p, s});
    const size_t histopt_base = tasks.size();
    for (size_t s = 0; s < universe.size(); ++s)
        tasks.push_back({Task::Kind::HistOpt, 0, 0, s});
    for (size_t s = 0; s < universe.size(); ++s)
        tasks.push_back({Task::Kind::BuyHold, 0, 0, s});

    std::vector<std::variant<std::monostate, RunResult, std::string>> slots(tasks.size());
    parallel_for(tasks.size(), jobs, [&](size_t i) {
        const Task& task = tasks[i];
        const PriceSeries& series = universe[task.series];
        try {
            switch (task.kind) {
                case Task::Kind::Run:
                    slots[i] = run_backtest(series, controllers[task.controller],
                                            predictors[task.predictor], cfg);
                    break;
                case Task::Kind::HistOpt: slots[i] = run_histopt_baseline(series, cfg); break;
                case Task::Kind::BuyHold: slots[i] = run_buy_and_hold(series, cfg); break;
            }
        } catch (const std::exception& e) {
            std::string label = series.symbol();
            if (task.kind == Task::Kind::Run)
                label += std::string("/") + to_string(controllers[task.controller].id) + "/" +
                         to_string(predictors[task.predictor]);
            else
                label += task.kind == Task::Kind::HistOpt ? "/histopt" : "/buy_and_hold";
            slots[i] = label + ": " + e.what();
        }
    });

    MatrixResult out;
    auto collect = [&](size_t first, size_t count, std::vector<RunResult>& bucket) {
        for (size_t i = first; i < first + count; ++i) {
            if (auto* run = std::get_if<RunResult>(&slots[i]))
                bucket.push_back(*run);
            else if (auto* warning = std::get_if<std::string>(&slots[i]))
                out.warnings.push_back(*warning);
        }
    };

    for (size_t p = 0; p < predictors.size(); ++p) {
        for (size_t c = 0; c < controllers.size(); ++c) {
            const size_t first = (p * controllers.size() + c) * universe.size();
            std::vector<RunResult> bucket;
            collect(first, universe.size(), bucket);
            if (bucket.empty())
                throw ConfigError(std::string("run_matrix: every run failed for ") +
                                  to_string(controllers[c].id) + "/" + to_string(predictors[p]));
            out.rows.push_back(aggregate(bucket));
            for (RunResult& r : bucket) out.runs.push_back(std::move(r));
        }
    }
    for (int b = 0; b < 2; ++b) {
        const size_t first = histopt_base + static_cast<size_t>(b) * universe.size();
        std::vector<RunResult> bucket;
        collect(first, universe.size(), bucket);
        if (bucket.empty())
            throw ConfigError(std::string("run_matrix: every ") +
                              (b == 0 ? "histopt" : "buy_and_hold") + " baseline failed");
        out.rows.push_back(aggregate(bucket));
        for (RunResult& r : bucket) out.runs.push_back(std::move(r));
    }
    return out;
}

}  // namespace tradectl
