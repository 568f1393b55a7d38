#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>

namespace tradectl {

// Proportional transaction costs. Fixed per-trade fees are deliberately
// not modelled (they are zero throughout); only the proportional legs
// are configurable.
struct CostModel {
    double eps_buy = 0.01;
    double eps_sell = 0.01;
};

void validate(const CostModel& costs);

// Full portfolio state: invested flag, cash M, share count N and marked
// wealth W. Shares are integer; cash is exact to double precision and
// only rounded when printed.
struct PortfolioState {
    bool invested = false;
    double cash = 0.0;
    long long shares = 0;
    double wealth = 0.0;
};

PortfolioState initial_state(double m0);

enum class TradeKind { Buy, Sell };

struct TradeRecord {
    TradeKind kind = TradeKind::Buy;
    double price = 0.0;
    long long shares = 0;
    double cash_after = 0.0;
};

// Largest whole-share position affordable at `price` including the buy
// fee, plus the cash left over. Brute-force semantics: the result is the
// largest n with cash - n*price*(1+eps_buy) >= 0 in double arithmetic.
std::pair<long long, double> max_shares(double cash, double price, const CostModel& costs);

// Applies signal J in {0,1} at the given price. Buys all-in on 0->1,
// sells everything on 1->0, otherwise holds. Wealth is re-marked at
// `price` in every case. A buy that cannot afford a single share leaves
// the state in cash and reports no trade.
std::pair<PortfolioState, std::optional<TradeRecord>> step(const PortfolioState& state,
                                                           int signal,
                                                           double price,
                                                           const CostModel& costs);

// cash + shares * price.
double wealth_at(const PortfolioState& state, double price);

// Net percentage return relative to the starting budget.
double performance(double final_wealth, double initial_wealth);

}  // namespace tradectl
