#pragma once

#include <memory>
#include <optional>
#include <random>
#include <span>
#include <string>

#include "tradectl/histopt.hpp"
#include "tradectl/market_data.hpp"
#include "tradectl/portfolio.hpp"
#include "tradectl/smpc.hpp"
#include "tradectl/technical.hpp"

namespace tradectl {

enum class ControllerId {
    QpEplus,
    SmpcM100,
    SmpcDh,
    MaCross,
    MaSign,
    TrInside,
    TrOutside,
    HistOptRt,
    BuyAndHold,
};

const char* to_string(ControllerId id);
std::optional<ControllerId> controller_from_string(const std::string& name);

struct HistOptRtConfig {
    int t_ho = 1;  // today's optimal signal must have been stable this many days
};

void validate(const HistOptRtConfig& cfg);

// One controller selection plus every tunable it might need. Only the
// sub-config matching `id` is read.
struct ControllerSpec {
    ControllerId id = ControllerId::MaCross;
    SmpcConfig smpc{};
    MaCrossConfig ma_cross{};
    MaSignConfig ma_sign{};
    TrConfig tr{};
    HistOptRtConfig histopt_rt{};
};

void validate(const ControllerSpec& spec);

// Everything a controller may look at when deciding J(t). The history
// view ends at the current day, so controllers cannot peek ahead; the
// prediction is the only forward-looking input.
struct DecisionContext {
    const HistoryView& history;
    double s_hat = 0.0;
    int eval_day = 0;        // t, relative to the evaluation window
    int eval_last_day = 0;   // T, the final evaluation day index
    double eval_start_price = 0.0;
    std::span<const double> eval_closes_through_now;  // s(0..t), evaluation-relative
    int j_prev = 0;
    std::mt19937_64& rng;
};

class Controller {
public:
    virtual ~Controller() = default;
    virtual ControllerId id() const = 0;

    // Past prices required before the decision day (absolute depth).
    virtual int min_history() const { return 0; }
    // First evaluation-relative day the controller can act on.
    virtual int min_eval_day() const { return 0; }

    virtual int decide(const DecisionContext& ctx) = 0;

    // Realized next price, delivered after every decided day. Scenario
    // controllers advance their virtual portfolio here.
    virtual void observe(double s_now, double s_next, int j) {
        (void)s_now;
        (void)s_next;
        (void)j;
    }
};

std::unique_ptr<Controller> make_controller(const ControllerSpec& spec, const CostModel& costs,
                                            double m0);

}  // namespace tradectl
