#pragma once

#include <string>
#include <vector>

#include "tradectl/harness.hpp"

namespace tradectl {

// One tunable dimension: parameter name and the candidate values, in the
// order they should be tried.
struct GridAxis {
    std::string name;
    std::vector<double> values;
};

// Exhaustive grid for one rule-based controller. Scenario controllers
// take their parameters from configuration and are not tuned.
struct ParamGrid {
    ControllerId id = ControllerId::MaCross;
    std::vector<GridAxis> axes;
};

// p_short in 1..25 crossed with p_long in 5..200 (combinations with
// p_short >= p_long are dropped when expanding).
ParamGrid default_ma_cross_grid();

// All valid parameter combinations applied on top of `base`, first axis
// slowest. Combinations that fail validation are skipped.
std::vector<ControllerSpec> expand_grid(const ParamGrid& grid, const ControllerSpec& base);

// Canonical parameter tuple per controller, used for tie-breaking and
// reporting: ma_cross (p_short, p_long), ma_sign (t_ma, p_ma),
// tr_* (t_win, p_tr, eps_tr), histopt_rt (t_ho).
std::vector<double> param_tuple(const ControllerSpec& spec);
std::string param_label(const ControllerSpec& spec);

struct TuneResult {
    ControllerSpec best;
    double f_train = 0.0;
    int evaluated = 0;
    int skipped = 0;  // grid points whose run could not be executed
};

// Exhaustive search for the best training-window performance. Exact ties
// resolve to the lexicographically smallest parameter tuple.
TuneResult grid_search(const PriceSeries& series, const ParamGrid& grid, PredictorKind predictor,
                       const RunConfig& train_cfg);

// Walks the evaluation window re-running grid_search every `period` days
// on the trailing `lookback` days and trading with the winner in between.
// The portfolio persists across re-tunes.
RunResult recursive_retune(const PriceSeries& series, const ParamGrid& grid,
                           PredictorKind predictor, int period, int lookback,
                           const RunConfig& cfg);

struct OverfitRow {
    std::string symbol;
    std::string best_label;
    std::vector<double> best_params;
    double f_train = 0.0;
    double f_val = 0.0;
    double f_val_bh = 0.0;
};

// Per-stock train-vs-validation comparison: tune on everything before
// the evaluation window, apply the winner to the evaluation window, and
// put buy-and-hold next to it.
struct OverfitReport {
    std::vector<OverfitRow> rows;
    double avg_f_train = 0.0;
    double avg_f_val = 0.0;
    double avg_f_val_bh = 0.0;
    std::vector<std::string> warnings;
};

OverfitReport overfitting_report(const std::vector<PriceSeries>& universe, const ParamGrid& grid,
                                 PredictorKind predictor, const RunConfig& cfg, int jobs = 1);

}  // namespace tradectl
