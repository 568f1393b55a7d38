#include "tradectl/technical.hpp"

#include <cmath>

#include "tradectl/errors.hpp"

namespace tradectl {

void validate(const MaCrossConfig& cfg) {
    if (cfg.p_short < 1) throw ValidationError("ma_cross: p_short must be >= 1");
    if (cfg.p_long < 1) throw ValidationError("ma_cross: p_long must be >= 1");
    if (cfg.p_short >= cfg.p_long)
        throw ValidationError("ma_cross: p_short must be smaller than p_long");
}

void validate(const MaSignConfig& cfg) {
    if (cfg.t_ma < 2) throw ValidationError("ma_sign: t_ma must be >= 2");
    if (cfg.p_ma < 1) throw ValidationError("ma_sign: p_ma must be >= 1");
}

void validate(const TrConfig& cfg) {
    if (cfg.p_tr < 1) throw ValidationError("tr: p_tr must be >= 1");
    if (cfg.t_win < cfg.p_tr) throw ValidationError("tr: t_win must be >= p_tr");
    if (!(cfg.eps_tr > 0.0)) throw ValidationError("tr: eps_tr must be > 0");
}

double moving_average(const HistoryView& history, double s_hat, int p) {
    if (p < 1) throw DomainError("moving_average: window must be >= 1");
    if (p == 1) return s_hat;
    // p-1 realized points ending at now, plus the predicted head.
    return (history.mean_ending_at(history.now(), p - 1) * (p - 1) + s_hat) / p;
}

int decide_ma_cross(const HistoryView& history, double s_hat, const MaCrossConfig& cfg, int j_prev) {
    const double d_next = moving_average(history, s_hat, cfg.p_short) -
                          moving_average(history, s_hat, cfg.p_long);
    const double d_now = history.mean_ending_at(history.now(), cfg.p_short) -
                         history.mean_ending_at(history.now(), cfg.p_long);
    if (d_now <= 0.0 && d_next > 0.0) return 1;
    if (d_now >= 0.0 && d_next < 0.0) return 0;
    return j_prev;
}

int decide_ma_sign(const HistoryView& history, double s_hat, const MaSignConfig& cfg) {
    // MA values at days t+1, t, ..., t-t_ma+2, newest first.
    double newer = moving_average(history, s_hat, cfg.p_ma);
    for (int tau = 0; tau <= cfg.t_ma - 2; ++tau) {
        const double older = history.mean_ending_at(history.now() - tau, cfg.p_ma);
        if (!(newer > older)) return 0;
        newer = older;
    }
    return 1;
}

ExtremaSet local_extrema(const HistoryView& history, const TrConfig& cfg) {
    const int start = history.now() - cfg.t_win + 1;
    if (start < 0)
        throw InsufficientDataError("local_extrema: window of " + std::to_string(cfg.t_win) +
                                    " points not yet available");
    const int k = cfg.t_win / cfg.p_tr;
    ExtremaSet set;
    set.maxima.reserve(static_cast<size_t>(k));
    set.minima.reserve(static_cast<size_t>(k));
    for (int i = 0; i < k; ++i) {
        const int lo = start + i * cfg.p_tr;
        const int hi = (i == k - 1) ? history.now() : lo + cfg.p_tr - 1;
        Extremum mx{lo, history.at(lo)};
        Extremum mn{lo, history.at(lo)};
        for (int j = lo + 1; j <= hi; ++j) {
            const double v = history.at(j);
            if (v > mx.value) mx = {j, v};
            if (v < mn.value) mn = {j, v};
        }
        set.maxima.push_back(mx);
        set.minima.push_back(mn);
    }
    return set;
}

namespace {

// Extrapolates the line through the last two extrema to day t_next.
bool project_line(const std::vector<Extremum>& points, int t_next, double& y_out) {
    if (points.size() < 2) return false;
    const Extremum& a = points[points.size() - 2];
    const Extremum& b = points[points.size() - 1];
    if (b.index == a.index) return false;
    const double slope = (b.value - a.value) / (b.index - a.index);
    const double y = b.value + slope * (t_next - b.index);
    if (!(y > 0.0) || !std::isfinite(y)) return false;
    y_out = y;
    return true;
}

}  // namespace

Corridor project_corridor(const ExtremaSet& extrema, int t_next) {
    Corridor c;
    c.max_valid = project_line(extrema.maxima, t_next, c.y_max);
    c.min_valid = project_line(extrema.minima, t_next, c.y_min);
    return c;
}

int tr_inside_signal(const Corridor& corridor, double s_hat, double eps_tr, int j_prev) {
    if (corridor.max_valid && std::abs(s_hat - corridor.y_max) / corridor.y_max < eps_tr) return 0;
    if (corridor.min_valid && std::abs(s_hat - corridor.y_min) / corridor.y_min < eps_tr) return 1;
    return j_prev;
}

int tr_outside_signal(const Corridor& corridor, double s_hat, double eps_tr, int j_prev) {
    if (corridor.max_valid && (s_hat - corridor.y_max) / corridor.y_max > eps_tr) return 1;
    if (corridor.min_valid && (s_hat - corridor.y_min) / corridor.y_min < -eps_tr) return 0;
    return j_prev;
}

int decide_tr_inside(const HistoryView& history, double s_hat, const TrConfig& cfg, int j_prev) {
    const Corridor c = project_corridor(local_extrema(history, cfg), history.now() + 1);
    return tr_inside_signal(c, s_hat, cfg.eps_tr, j_prev);
}

int decide_tr_outside(const HistoryView& history, double s_hat, const TrConfig& cfg, int j_prev) {
    const Corridor c = project_corridor(local_extrema(history, cfg), history.now() + 1);
    return tr_outside_signal(c, s_hat, cfg.eps_tr, j_prev);
}

}  // namespace tradectl
