#include "tradectl/histopt.hpp"

#include <algorithm>
#include <cstdint>

#include "tradectl/errors.hpp"

namespace tradectl {

namespace {

// Backtracking link: which node at the previous step this one came from.
constexpr int kFromCash = -1;
constexpr int kRoot = -2;

struct Node {
    PortfolioState st;
    int trades = 0;
    int parent = kRoot;  // kFromCash, kRoot, or index into the previous stock frontier
    std::int8_t j = 0;   // signal taken at this step
};

struct StepNodes {
    bool has_cash = false;
    Node cash;
    std::vector<Node> stock;
};

// Signals along the path ending at `node` (which lives at step `t`).
std::vector<std::int8_t> materialize_signals(const std::vector<StepNodes>& steps, int t,
                                             const Node& node) {
    std::vector<std::int8_t> out(static_cast<size_t>(t) + 1);
    const Node* cur = &node;
    for (int k = t; k >= 0; --k) {
        out[static_cast<size_t>(k)] = cur->j;
        if (k == 0) break;
        const StepNodes& prev = steps[static_cast<size_t>(k) - 1];
        cur = cur->parent == kFromCash ? &prev.cash
                                       : &prev.stock[static_cast<size_t>(cur->parent)];
    }
    return out;
}

// True when `a` should be preferred over `b` given equal wealth:
// fewer trades first, then the lexicographically smaller signal prefix.
bool beats_on_ties(const std::vector<StepNodes>& steps, int t, const Node& a, const Node& b) {
    if (a.trades != b.trades) return a.trades < b.trades;
    return materialize_signals(steps, t, a) < materialize_signals(steps, t, b);
}

void count_and_trace(std::span<const double> prices, const std::vector<int>& signals, double m0,
                     const CostModel& costs, OptimalTrajectory& out) {
    PortfolioState st = initial_state(m0);
    out.wealth_trace.resize(prices.size());
    out.n_trades = 0;
    for (size_t t = 0; t < prices.size(); ++t) {
        auto [next, rec] = step(st, signals[t], prices[t], costs);
        st = next;
        if (rec) ++out.n_trades;
        out.wealth_trace[t] = st.wealth;
    }
    out.final_wealth = st.wealth;
}

}  // namespace

OptimalTrajectory optimal_trajectory(std::span<const double> prices, double m0,
                                     const CostModel& costs) {
    if (prices.empty()) throw DomainError("optimal_trajectory: empty price path");
    validate(costs);

    const int len = static_cast<int>(prices.size());
    std::vector<StepNodes> steps(static_cast<size_t>(len));

    for (int t = 0; t < len; ++t) {
        const double price = prices[static_cast<size_t>(t)];
        StepNodes& cur = steps[static_cast<size_t>(t)];

        // Predecessors: a virtual root before the first step, then the
        // previous step's nodes.
        const StepNodes* prev = t > 0 ? &steps[static_cast<size_t>(t) - 1] : nullptr;
        Node root;
        root.st = initial_state(m0);

        // --- cash node: stay in cash, or sell any invested state.
        {
            std::vector<Node> cands;
            const Node& cash_pred = prev ? prev->cash : root;
            if (!prev || prev->has_cash) {
                Node n;
                n.st = step(cash_pred.st, 0, price, costs).first;
                n.trades = cash_pred.trades;
                n.parent = prev ? kFromCash : kRoot;
                n.j = 0;
                cands.push_back(n);
            }
            if (prev) {
                for (size_t i = 0; i < prev->stock.size(); ++i) {
                    Node n;
                    n.st = step(prev->stock[i].st, 0, price, costs).first;
                    n.trades = prev->stock[i].trades + 1;
                    n.parent = static_cast<int>(i);
                    n.j = 0;
                    cands.push_back(n);
                }
            }
            cur.has_cash = !cands.empty();
            if (cur.has_cash) {
                size_t best = 0;
                for (size_t i = 1; i < cands.size(); ++i) {
                    if (cands[i].st.cash > cands[best].st.cash ||
                        (cands[i].st.cash == cands[best].st.cash &&
                         beats_on_ties(steps, t, cands[i], cands[best])))
                        best = i;
                }
                cur.cash = cands[best];
            }
        }

        // --- stock frontier: hold any invested state, or buy from cash.
        {
            std::vector<Node> cands;
            if (prev) {
                for (size_t i = 0; i < prev->stock.size(); ++i) {
                    Node n;
                    n.st = step(prev->stock[i].st, 1, price, costs).first;
                    n.trades = prev->stock[i].trades;
                    n.parent = static_cast<int>(i);
                    n.j = 1;
                    cands.push_back(n);
                }
            }
            const Node& cash_pred = prev ? prev->cash : root;
            if (!prev || prev->has_cash) {
                auto [bought, rec] = step(cash_pred.st, 1, price, costs);
                if (rec) {  // an unaffordable buy degenerates to the cash node
                    Node n;
                    n.st = bought;
                    n.trades = cash_pred.trades + 1;
                    n.parent = prev ? kFromCash : kRoot;
                    n.j = 1;
                    cands.push_back(n);
                }
            }

            // Merge exact duplicates by tie-break, then drop dominated states.
            std::vector<Node> merged;
            for (const Node& c : cands) {
                bool duplicate = false;
                for (Node& m : merged) {
                    if (m.st.cash == c.st.cash && m.st.shares == c.st.shares) {
                        if (beats_on_ties(steps, t, c, m)) m = c;
                        duplicate = true;
                        break;
                    }
                }
                if (!duplicate) merged.push_back(c);
            }
            for (const Node& c : merged) {
                bool dominated = false;
                for (const Node& d : merged) {
                    if (d.st.cash >= c.st.cash && d.st.shares >= c.st.shares &&
                        (d.st.cash > c.st.cash || d.st.shares > c.st.shares)) {
                        dominated = true;
                        break;
                    }
                }
                if (!dominated) cur.stock.push_back(c);
            }
        }
    }

    // --- pick the best terminal node (wealth already marked at the last price).
    const StepNodes& last = steps[static_cast<size_t>(len) - 1];
    const Node* best = last.has_cash ? &last.cash : nullptr;
    for (const Node& n : last.stock) {
        if (!best || n.st.wealth > best->st.wealth ||
            (n.st.wealth == best->st.wealth && beats_on_ties(steps, len - 1, n, *best)))
            best = &n;
    }
    if (!best) throw DomainError("optimal_trajectory: no reachable state");

    OptimalTrajectory out;
    const auto sig = materialize_signals(steps, len - 1, *best);
    out.signals.assign(sig.begin(), sig.end());
    count_and_trace(prices, out.signals, m0, costs, out);
    if (out.final_wealth != best->st.wealth)
        throw ContractViolation("optimal_trajectory: replay diverged from the DP value");
    return out;
}

OptimalTrajectory brute_force_optimal(std::span<const double> prices, double m0,
                                      const CostModel& costs) {
    if (prices.empty()) throw DomainError("brute_force_optimal: empty price path");
    const int len = static_cast<int>(prices.size());
    if (len > 20)
        throw DomainError("brute_force_optimal: refusing horizon " + std::to_string(len) +
                          " > 20 (2^L sequences)");
    validate(costs);

    std::vector<int> signals(static_cast<size_t>(len));
    std::vector<int> best_signals;
    double best_wealth = 0.0;
    int best_trades = 0;

    // Masks visit signal sequences in lexicographic order (J(0) most
    // significant), so keeping strict improvements only yields the
    // lexicographically smallest winner automatically.
    for (std::uint64_t mask = 0; mask < (1ull << len); ++mask) {
        for (int t = 0; t < len; ++t)
            signals[static_cast<size_t>(t)] = (mask >> (len - 1 - t)) & 1u;
        PortfolioState st = initial_state(m0);
        int trades = 0;
        for (int t = 0; t < len; ++t) {
            auto [next, rec] = step(st, signals[static_cast<size_t>(t)],
                                    prices[static_cast<size_t>(t)], costs);
            st = next;
            if (rec) ++trades;
        }
        if (best_signals.empty() || st.wealth > best_wealth ||
            (st.wealth == best_wealth && trades < best_trades)) {
            best_signals = signals;
            best_wealth = st.wealth;
            best_trades = trades;
        }
    }

    OptimalTrajectory out;
    out.signals = best_signals;
    count_and_trace(prices, out.signals, m0, costs, out);
    return out;
}

int decide_histopt_rt(std::span<const double> eval_prices_through_t, double s_hat, int t_ho,
                      double m0, const CostModel& costs) {
    if (t_ho < 1) throw DomainError("histopt_rt: t_ho must be >= 1");
    if (eval_prices_through_t.empty())
        throw DomainError("histopt_rt: needs at least the current price");
    const int t = static_cast<int>(eval_prices_through_t.size()) - 1;
    if (t < t_ho - 1)
        throw InsufficientDataError("histopt_rt: stability window of " + std::to_string(t_ho) +
                                    " days not yet available");

    std::vector<double> path(eval_prices_through_t.begin(), eval_prices_through_t.end());
    path.push_back(s_hat);
    const OptimalTrajectory traj = optimal_trajectory(path, m0, costs);

    const int j_today = traj.signals[static_cast<size_t>(t)];
    for (int tau = 1; tau <= t_ho - 1; ++tau)
        if (traj.signals[static_cast<size_t>(t - tau)] != j_today) return 0;
    return j_today;
}

}  // namespace tradectl
