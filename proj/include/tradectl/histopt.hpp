#pragma once

#include <span>
#include <vector>

#include "tradectl/portfolio.hpp"

namespace tradectl {

// Wealth-optimal binary signal sequence for a fully known price path.
// Terminal wealth is marked at the last price; nothing forces a final
// liquidation. Among equally wealthy sequences the one with fewer trades
// wins, then the lexicographically smallest (J(0) most significant).
struct OptimalTrajectory {
    std::vector<int> signals;
    double final_wealth = 0.0;
    int n_trades = 0;
    std::vector<double> wealth_trace;  // post-rebalance wealth at each step
};

// Exact forward dynamic program. The cash state collapses to a single
// node per step (optimal continuation value is monotone in cash), but
// invested states (cash remainder, share count) can be incomparable, so
// a small Pareto frontier of non-dominated states is kept instead of a
// single node. Transitions go through portfolio step() so every wealth
// value is bit-identical to an engine replay.
OptimalTrajectory optimal_trajectory(std::span<const double> prices, double m0,
                                     const CostModel& costs);

// Exhaustive 2^L search used as the test oracle. Refuses L > 20.
OptimalTrajectory brute_force_optimal(std::span<const double> prices, double m0,
                                      const CostModel& costs);

// Real-time variant: recompute the hindsight optimum over the evaluation
// prices seen so far plus the predicted next price, then follow today's
// optimal signal only if it has been stable for the last t_ho days.
int decide_histopt_rt(std::span<const double> eval_prices_through_t, double s_hat, int t_ho,
                      double m0, const CostModel& costs);

}  // namespace tradectl
