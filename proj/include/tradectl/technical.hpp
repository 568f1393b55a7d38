#pragma once

#include <vector>

#include "tradectl/market_data.hpp"

namespace tradectl {

struct MaCrossConfig {
    int p_short = 1;
    int p_long = 50;
};

struct MaSignConfig {
    int t_ma = 10;  // number of MA values that must be strictly increasing
    int p_ma = 100; // MA window
};

struct TrConfig {
    int t_win = 261;      // trailing window scanned for extrema
    int p_tr = 100;       // sub-window width; the last sub-window absorbs the remainder
    double eps_tr = 0.01; // relative corridor tolerance
};

void validate(const MaCrossConfig& cfg);
void validate(const MaSignConfig& cfg);
void validate(const TrConfig& cfg);

// Moving average over the p most recent points with the prediction
// substituted at the head: mean{s_hat, s(t), ..., s(t-p+2)}.
double moving_average(const HistoryView& history, double s_hat, int p);

// Buy when the short MA crosses the long MA from below (d flips <=0 to >0),
// sell on the opposite crossing, otherwise keep the previous signal. The
// t+1 difference uses the prediction; the t difference uses realized prices.
int decide_ma_cross(const HistoryView& history, double s_hat, const MaCrossConfig& cfg, int j_prev);

// Invest only while the p_ma-MA has risen on every one of the last
// t_ma - 1 steps, the newest step using the predicted MA. No memory.
int decide_ma_sign(const HistoryView& history, double s_hat, const MaSignConfig& cfg);

struct Extremum {
    int index = 0;  // absolute series index
    double value = 0.0;
};

// Per-sub-window maxima and minima of the trailing t_win-point window.
// The window is cut into K = floor(t_win / p_tr) forward sub-windows of
// width p_tr, the last one extended to absorb the remainder. Ties inside
// a sub-window resolve to the earliest index.
struct ExtremaSet {
    std::vector<Extremum> maxima;
    std::vector<Extremum> minima;
};

ExtremaSet local_extrema(const HistoryView& history, const TrConfig& cfg);

// Affine extrapolation of the last two maxima/minima to day t_next.
// A side is unusable (flagged invalid) when fewer than two extrema exist
// or the projected value is non-positive.
struct Corridor {
    double y_max = 0.0;
    double y_min = 0.0;
    bool max_valid = false;
    bool min_valid = false;
};

Corridor project_corridor(const ExtremaSet& extrema, int t_next);

// Mean-reversion inside the corridor: sell near the projected ceiling,
// buy near the projected floor, otherwise hold the previous signal.
int tr_inside_signal(const Corridor& corridor, double s_hat, double eps_tr, int j_prev);

// Breakout outside the corridor: buy above the ceiling, sell below the
// floor, otherwise hold the previous signal.
int tr_outside_signal(const Corridor& corridor, double s_hat, double eps_tr, int j_prev);

int decide_tr_inside(const HistoryView& history, double s_hat, const TrConfig& cfg, int j_prev);
int decide_tr_outside(const HistoryView& history, double s_hat, const TrConfig& cfg, int j_prev);

}  // namespace tradectl
