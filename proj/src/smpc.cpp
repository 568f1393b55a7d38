#include "tradectl/smpc.hpp"

#include <algorithm>
#include <cmath>

#include "tradectl/errors.hpp"

namespace tradectl {

namespace {

constexpr double kScenarioFloorScale = 1e-6;

struct Moments {
    double mean = 0.0;
    double var = 0.0;
};

// Two-pass mean/variance so that identical scenario values produce an
// exactly zero-noise variance instead of cancellation residue.
Moments moments_under(const ScenarioSet& s, double s_now, const VirtualPortfolio& vp, int u,
                      const SmpcConfig& cfg) {
    Moments m;
    const size_t n = s.prices.size();
    for (size_t j = 0; j < n; ++j)
        m.mean += s.probs[j] * virtual_wealth_next(s_now, s.prices[j], vp, u, cfg);
    for (size_t j = 0; j < n; ++j) {
        const double d = virtual_wealth_next(s_now, s.prices[j], vp, u, cfg) - m.mean;
        m.var += s.probs[j] * d * d;
    }
    return m;
}

int pick_max(double value0, double value1, int u_prev) {
    if (value1 > value0) return 1;
    if (value0 > value1) return 0;
    return u_prev;
}

}  // namespace

void validate(const SmpcConfig& cfg) {
    if (cfg.m < 1) throw ValidationError("smpc: scenario count must be >= 1");
    if (!(cfg.sigma_pert >= 0.0)) throw ValidationError("smpc: sigma_pert must be >= 0");
    if (!(cfg.alpha >= 0.0)) throw ValidationError("smpc: alpha must be >= 0");
    if (!(cfg.beta >= 0.0)) throw ValidationError("smpc: beta must be >= 0");
    if (!(cfg.r > -1.0)) throw ValidationError("smpc: rate r must be > -1");
    if (cfg.vol_window < 1) throw ValidationError("smpc: vol_window must be >= 1");
    if (!(cfg.eps >= 0.0) || !(cfg.eps < 1.0)) throw ValidationError("smpc: eps must lie in [0, 1)");
}

ScenarioSet generate_scenarios(double s_hat, const SmpcConfig& cfg, std::mt19937_64& rng) {
    if (!(s_hat > 0.0)) throw DomainError("generate_scenarios: prediction must be positive");
    ScenarioSet set;
    set.prices.resize(static_cast<size_t>(cfg.m));
    set.probs.assign(static_cast<size_t>(cfg.m), 1.0 / cfg.m);
    std::normal_distribution<double> eta(0.0, 1.0);
    for (auto& p : set.prices)
        p = std::max(kScenarioFloorScale * s_hat, s_hat + cfg.sigma_pert * eta(rng));
    return set;
}

double excess_return(double s_now, double s_next, double r) {
    return s_next - (1.0 + r) * s_now;
}

double ml_volatility(const HistoryView& history, int window) {
    if (window < 1) throw DomainError("ml_volatility: window must be >= 1");
    if (history.now() < window)
        throw InsufficientDataError("ml_volatility: window of " + std::to_string(window) +
                                    " returns needs " + std::to_string(window + 1) +
                                    " prices, have " + std::to_string(history.now() + 1));
    double mean = 0.0;
    for (int k = 0; k < window; ++k)
        mean += std::log(history.back(k) / history.back(k + 1));
    mean /= window;
    double ss = 0.0;
    for (int k = 0; k < window; ++k) {
        const double d = std::log(history.back(k) / history.back(k + 1)) - mean;
        ss += d * d;
    }
    return std::sqrt(ss / window);
}

double virtual_wealth_next(double s_now, double s_next, const VirtualPortfolio& vp, int u,
                           const SmpcConfig& cfg) {
    const double h = cfg.eps * s_now * std::abs(u - vp.u_prev);
    return (1.0 + cfg.r) * (vp.w - h) + excess_return(s_now, s_next, cfg.r) * u;
}

int decide_qp_eplus(double s_now, const ScenarioSet& scenario, const VirtualPortfolio& vp,
                    double sigma, const SmpcConfig& cfg) {
    if (scenario.prices.size() != 1)
        throw ContractViolation("decide_qp_eplus expects a single scenario");
    auto value = [&](int u) {
        const double mean = moments_under(scenario, s_now, vp, u, cfg).mean;
        const double du = u - vp.u_prev;
        return mean - cfg.beta / 2.0 * du * du * sigma;
    };
    return pick_max(value(0), value(1), vp.u_prev);
}

int decide_m100(double s_now, const ScenarioSet& scenarios, const VirtualPortfolio& vp,
                const SmpcConfig& cfg) {
    if (scenarios.prices.empty())
        throw ContractViolation("decide_m100 expects at least one scenario");
    auto value = [&](int u) {
        const Moments m = moments_under(scenarios, s_now, vp, u, cfg);
        return m.mean - cfg.alpha / 2.0 * m.var;
    };
    return pick_max(value(0), value(1), vp.u_prev);
}

double update_trailing_level(double level, double w_now) {
    return std::max({level, w_now, 0.0});
}

std::vector<double> reference_scenarios(const ScenarioSet& scenarios, double s0, double level,
                                        int t, int eval_last_day, const SmpcConfig& cfg) {
    if (t < 0 || t + 1 > eval_last_day)
        throw DomainError("reference_scenarios: decision day outside the evaluation horizon");
    const double discount = std::pow(1.0 + cfg.r, -static_cast<double>(eval_last_day - (t + 1)));
    std::vector<double> refs(scenarios.prices.size());
    for (size_t j = 0; j < refs.size(); ++j)
        refs[j] = discount * std::max(scenarios.prices[j] - s0, level);
    return refs;
}

int decide_dh(double s_now, const ScenarioSet& scenarios, const std::vector<double>& references,
              const VirtualPortfolio& vp, const SmpcConfig& cfg) {
    if (scenarios.prices.empty())
        throw ContractViolation("decide_dh expects at least one scenario");
    if (references.size() != scenarios.prices.size())
        throw ContractViolation("decide_dh: scenario/reference count mismatch");
    auto tracking_cost = [&](int u) {
        double worst = 0.0;
        for (size_t j = 0; j < scenarios.prices.size(); ++j) {
            const double w_next = virtual_wealth_next(s_now, scenarios.prices[j], vp, u, cfg);
            worst = std::max(worst, std::abs(w_next - references[j]));
        }
        return worst;
    };
    const double c0 = tracking_cost(0);
    const double c1 = tracking_cost(1);
    if (c1 < c0) return 1;
    if (c0 < c1) return 0;
    return vp.u_prev;
}

void advance_virtual(VirtualPortfolio& vp, double s_now, double s_next_realized, int u,
                     const SmpcConfig& cfg) {
    vp.w = virtual_wealth_next(s_now, s_next_realized, vp, u, cfg);
    vp.u_prev = u;
}

}  // namespace tradectl
