#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tradectl/controllers.hpp"
#include "tradectl/market_data.hpp"
#include "tradectl/portfolio.hpp"
#include "tradectl/predictors.hpp"

namespace tradectl {

// Run-level knobs shared by every backtest. The evaluation window
// defaults to [series.eval_start(), last index] and can be overridden
// (the tuner runs on training windows this way).
struct RunConfig {
    double m0 = 100000.0;
    CostModel costs{};
    std::uint64_t master_seed = 1;
    std::optional<int> eval_begin;  // absolute index
    std::optional<int> eval_end;    // absolute index, inclusive (final marking day)
};

struct TradeLogEntry {
    int t = 0;  // evaluation-relative day
    std::string date;
    TradeKind kind = TradeKind::Buy;
    double price = 0.0;
    long long shares = 0;
    double cash_after = 0.0;
    double wealth_after = 0.0;
};

struct RunResult {
    std::string symbol;
    std::string controller;
    std::string predictor;
    int n_trades = 0;
    int t_min_between = 0;  // smallest day gap between consecutive trades; 0 if < 2 trades
    double f = 0.0;         // percent return over the evaluation window
    double final_wealth = 0.0;
    std::vector<TradeLogEntry> trades;
    std::vector<double> wealth_trace;  // one entry per evaluation day
    std::vector<double> price_trace;
    std::vector<std::string> dates;
};

// Runs one (series, controller, predictor) backtest: decisions are made
// on evaluation days 0..T-1 (the final day only marks wealth, since no
// next-day prediction exists for it), trades execute at the current
// close, and the controller holds cash until its warm-up is satisfied.
RunResult run_backtest(const PriceSeries& series, const ControllerSpec& spec,
                       PredictorKind predictor, const RunConfig& cfg);

// Baselines. Buy-and-hold buys on the first evaluation day and never
// sells; the hindsight optimum replays the exact DP solution.
RunResult run_buy_and_hold(const PriceSeries& series, const RunConfig& cfg);
RunResult run_histopt_baseline(const PriceSeries& series, const RunConfig& cfg);

struct SummaryRow {
    std::string controller;
    std::string predictor;
    double n_tr_avg = 0.0;
    int t_min = 0;       // min over runs
    double f_avg = 0.0;  // mean over runs
    double f_min = 0.0;
    double f_max = 0.0;
    double f_pos = 0.0;  // percent of runs with f > 0
};

SummaryRow aggregate(const std::vector<RunResult>& runs);

struct MatrixResult {
    std::vector<SummaryRow> rows;      // predictor-major, controllers in order, then baselines
    std::vector<RunResult> runs;       // every successful run, deterministic order
    std::vector<std::string> warnings; // per-run failures, never silently dropped
};

// Full cross of controllers x predictors over the universe plus the two
// baseline rows. `jobs` > 1 distributes runs over worker threads; the
// result is identical regardless of scheduling.
MatrixResult run_matrix(const std::vector<PriceSeries>& universe,
                        const std::vector<ControllerSpec>& controllers,
                        const std::vector<PredictorKind>& predictors, const RunConfig& cfg,
                        int jobs = 1);

}  // namespace tradectl
