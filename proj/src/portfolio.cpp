#include "tradectl/portfolio.hpp"

#include <cmath>

#include "tradectl/errors.hpp"

namespace tradectl {

void validate(const CostModel& costs) {
    if (!(costs.eps_buy >= 0.0) || !(costs.eps_buy < 1.0) || !std::isfinite(costs.eps_buy))
        throw ValidationError("cost model: eps_buy must lie in [0, 1)");
    if (!(costs.eps_sell >= 0.0) || !(costs.eps_sell < 1.0) || !std::isfinite(costs.eps_sell))
        throw ValidationError("cost model: eps_sell must lie in [0, 1)");
}

PortfolioState initial_state(double m0) {
    if (!(m0 > 0.0) || !std::isfinite(m0))
        throw ValidationError("initial budget must be positive");
    return PortfolioState{false, m0, 0, m0};
}

std::pair<long long, double> max_shares(double cash, double price, const CostModel& costs) {
    if (!(price > 0.0) || !std::isfinite(price))
        throw DomainError("max_shares: price must be positive");
    if (!(cash >= 0.0) || !std::isfinite(cash))
        throw DomainError("max_shares: cash must be non-negative");

    const double unit = price * (1.0 + costs.eps_buy);
    auto affordable = [&](long long k) { return cash - static_cast<double>(k) * unit >= 0.0; };

    long long n = static_cast<long long>(std::floor(cash / unit));
    if (n < 0) n = 0;
    // floor() on the quotient can land one off from the definition above
    // when cash is an exact multiple of the unit cost; nudge to match it.
    while (!affordable(n)) --n;
    while (affordable(n + 1)) ++n;
    return {n, cash - static_cast<double>(n) * unit};
}

std::pair<PortfolioState, std::optional<TradeRecord>> step(const PortfolioState& state,
                                                           int signal,
                                                           double price,
                                                           const CostModel& costs) {
    if (signal != 0 && signal != 1)
        throw DomainError("step: signal must be 0 or 1");
    if (!(price > 0.0) || !std::isfinite(price))
        throw DomainError("step: price must be positive");

    PortfolioState next = state;
    std::optional<TradeRecord> record;

    if (!state.invested && signal == 1) {
        const auto [n, residual] = max_shares(state.cash, price, costs);
        if (n >= 1) {
            next.invested = true;
            next.shares = n;
            next.cash = residual;
            record = TradeRecord{TradeKind::Buy, price, n, next.cash};
        }
    } else if (state.invested && signal == 0) {
        const double proceeds = static_cast<double>(state.shares) * price * (1.0 - costs.eps_sell);
        next.invested = false;
        next.cash = state.cash + proceeds;
        next.shares = 0;
        record = TradeRecord{TradeKind::Sell, price, state.shares, next.cash};
    }

    next.wealth = wealth_at(next, price);
    return {next, record};
}

double wealth_at(const PortfolioState& state, double price) {
    return state.cash + static_cast<double>(state.shares) * price;
}

double performance(double final_wealth, double initial_wealth) {
    return (final_wealth - initial_wealth) / initial_wealth * 100.0;
}

}  // namespace tradectl
