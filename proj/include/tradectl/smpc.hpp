#pragma once

#include <random>
#include <vector>

#include "tradectl/market_data.hpp"

namespace tradectl {

// Parameters shared by the scenario-based deciders. `alpha` drives the
// mean-variance decider, `beta` the single-scenario switching penalty;
// each decider reads only the fields it uses. `eps` is the proportional
// cost charged inside the virtual portfolio dynamics and normally equals
// the engine's buy-side cost.
struct SmpcConfig {
    int m = 100;
    double alpha = 10.0;
    double beta = 1.0;
    double sigma_pert = 0.3;
    double r = 0.0;
    int vol_window = 100;
    double eps = 0.01;
};

void validate(const SmpcConfig& cfg);

// Decision-side replica of the position: virtual wealth w and the
// previous stake u(t-1). Advanced with realized prices once per day.
struct VirtualPortfolio {
    double w = 0.0;
    int u_prev = 0;
};

// Equally weighted one-step price scenarios around the prediction.
struct ScenarioSet {
    std::vector<double> prices;
    std::vector<double> probs;
};

// prices[j] = max(1e-6 * s_hat, s_hat + sigma_pert * eta_j), eta_j ~ N(0,1).
// M standard-normal draws are consumed from `rng` regardless of sigma_pert
// so the stream position does not depend on parameter values.
ScenarioSet generate_scenarios(double s_hat, const SmpcConfig& cfg, std::mt19937_64& rng);

// b = s_next - (1+r) * s_now.
double excess_return(double s_now, double s_next, double r);

// Maximum-likelihood standard deviation (divisor = window) of the last
// `window` one-step log returns ending at the current day:
// ln s(t-window+1)/s(t-window), ..., ln s(t)/s(t-1).
double ml_volatility(const HistoryView& history, int window);

// Virtual wealth after one step under stake u and scenario price s_next:
// (1+r) * (w - eps*s_now*|u - u_prev|) + (s_next - (1+r)*s_now) * u.
double virtual_wealth_next(double s_now, double s_next, const VirtualPortfolio& vp, int u,
                           const SmpcConfig& cfg);

// Single-scenario decider: maximize E[w(t+1)] - beta/2 * (u - u_prev)^2 * sigma,
// u in {0,1}; exact tie keeps u_prev. Requires exactly one scenario.
int decide_qp_eplus(double s_now, const ScenarioSet& scenario, const VirtualPortfolio& vp,
                    double sigma, const SmpcConfig& cfg);

// Mean-variance decider: maximize E[w(t+1)] - alpha/2 * Var[w(t+1)] over
// u in {0,1}; exact tie keeps u_prev.
int decide_m100(double s_now, const ScenarioSet& scenarios, const VirtualPortfolio& vp,
                const SmpcConfig& cfg);

// Trailing high-water mark: max(level, w_now, 0).
double update_trailing_level(double level, double w_now);

// Per-scenario disappointment-hedging references:
// p_j = (1+r)^-(T-(t+1)) * max(s_j - s0, level), with T the final
// evaluation day index and s0 the evaluation-start price.
std::vector<double> reference_scenarios(const ScenarioSet& scenarios, double s0, double level,
                                        int t, int eval_last_day, const SmpcConfig& cfg);

// Minimize the worst-case tracking error max_j |w_j(t+1) - p_j| over
// u in {0,1}; exact tie keeps u_prev.
int decide_dh(double s_now, const ScenarioSet& scenarios, const std::vector<double>& references,
              const VirtualPortfolio& vp, const SmpcConfig& cfg);

// Advance w with the realized next price and the executed stake.
void advance_virtual(VirtualPortfolio& vp, double s_now, double s_next_realized, int u,
                     const SmpcConfig& cfg);

}  // namespace tradectl
