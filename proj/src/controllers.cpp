#include "tradectl/controllers.hpp"

#include "tradectl/errors.hpp"

namespace tradectl {

const char* to_string(ControllerId id) {
    switch (id) {
        case ControllerId::QpEplus: return "qp_eplus";
        case ControllerId::SmpcM100: return "smpc_m100";
        case ControllerId::SmpcDh: return "smpc_dh";
        case ControllerId::MaCross: return "ma_cross";
        case ControllerId::MaSign: return "ma_sign";
        case ControllerId::TrInside: return "tr_inside";
        case ControllerId::TrOutside: return "tr_outside";
        case ControllerId::HistOptRt: return "histopt_rt";
        case ControllerId::BuyAndHold: return "buy_and_hold";
    }
    return "?";
}

std::optional<ControllerId> controller_from_string(const std::string& name) {
    if (name == "qp_eplus") return ControllerId::QpEplus;
    if (name == "smpc_m100") return ControllerId::SmpcM100;
    if (name == "smpc_dh") return ControllerId::SmpcDh;
    if (name == "ma_cross") return ControllerId::MaCross;
    if (name == "ma_sign") return ControllerId::MaSign;
    if (name == "tr_inside") return ControllerId::TrInside;
    if (name == "tr_outside") return ControllerId::TrOutside;
    if (name == "histopt_rt") return ControllerId::HistOptRt;
    if (name == "buy_and_hold") return ControllerId::BuyAndHold;
    return std::nullopt;
}

void validate(const HistOptRtConfig& cfg) {
    if (cfg.t_ho < 1) throw ValidationError("histopt_rt: t_ho must be >= 1");
}

void validate(const ControllerSpec& spec) {
    switch (spec.id) {
        case ControllerId::QpEplus:
            validate(spec.smpc);
            if (spec.smpc.m != 1)
                throw ValidationError("qp_eplus is the single-scenario decider; m must be 1");
            break;
        case ControllerId::SmpcM100:
        case ControllerId::SmpcDh:
            validate(spec.smpc);
            break;
        case ControllerId::MaCross: validate(spec.ma_cross); break;
        case ControllerId::MaSign: validate(spec.ma_sign); break;
        case ControllerId::TrInside:
        case ControllerId::TrOutside: validate(spec.tr); break;
        case ControllerId::HistOptRt: validate(spec.histopt_rt); break;
        case ControllerId::BuyAndHold: break;
    }
}

namespace {

// Common base for the three scenario controllers: owns the virtual
// portfolio, lazily initialized to the evaluation-start price.
class SmpcControllerBase : public Controller {
public:
    explicit SmpcControllerBase(const SmpcConfig& cfg) : cfg_(cfg) {}

    void observe(double s_now, double s_next, int j) override {
        advance_virtual(vp_, s_now, s_next, j, cfg_);
    }

protected:
    void ensure_initialized(const DecisionContext& ctx) {
        if (!initialized_) {
            vp_.w = ctx.eval_start_price;
            vp_.u_prev = 0;
            initialized_ = true;
        }
    }

    SmpcConfig cfg_;
    VirtualPortfolio vp_{};
    bool initialized_ = false;
};

class QpEplusController final : public SmpcControllerBase {
public:
    using SmpcControllerBase::SmpcControllerBase;
    ControllerId id() const override { return ControllerId::QpEplus; }
    int min_history() const override { return cfg_.vol_window; }

    int decide(const DecisionContext& ctx) override {
        ensure_initialized(ctx);
        const double sigma = ml_volatility(ctx.history, cfg_.vol_window);
        const ScenarioSet scenario = generate_scenarios(ctx.s_hat, cfg_, ctx.rng);
        return decide_qp_eplus(ctx.history.back(0), scenario, vp_, sigma, cfg_);
    }
};

class M100Controller final : public SmpcControllerBase {
public:
    using SmpcControllerBase::SmpcControllerBase;
    ControllerId id() const override { return ControllerId::SmpcM100; }

    int decide(const DecisionContext& ctx) override {
        ensure_initialized(ctx);
        const ScenarioSet scenarios = generate_scenarios(ctx.s_hat, cfg_, ctx.rng);
        return decide_m100(ctx.history.back(0), scenarios, vp_, cfg_);
    }
};

class DhController final : public SmpcControllerBase {
public:
    using SmpcControllerBase::SmpcControllerBase;
    ControllerId id() const override { return ControllerId::SmpcDh; }

    int decide(const DecisionContext& ctx) override {
        ensure_initialized(ctx);
        level_ = update_trailing_level(level_, vp_.w);
        const ScenarioSet scenarios = generate_scenarios(ctx.s_hat, cfg_, ctx.rng);
        const auto refs = reference_scenarios(scenarios, ctx.eval_start_price, level_,
                                              ctx.eval_day, ctx.eval_last_day, cfg_);
        return decide_dh(ctx.history.back(0), scenarios, refs, vp_, cfg_);
    }

private:
    double level_ = 0.0;
};

class MaCrossController final : public Controller {
public:
    explicit MaCrossController(const MaCrossConfig& cfg) : cfg_(cfg) {}
    ControllerId id() const override { return ControllerId::MaCross; }
    int min_history() const override { return cfg_.p_long - 1; }

    int decide(const DecisionContext& ctx) override {
        return decide_ma_cross(ctx.history, ctx.s_hat, cfg_, ctx.j_prev);
    }

private:
    MaCrossConfig cfg_;
};

class MaSignController final : public Controller {
public:
    explicit MaSignController(const MaSignConfig& cfg) : cfg_(cfg) {}
    ControllerId id() const override { return ControllerId::MaSign; }
    int min_history() const override { return cfg_.t_ma + cfg_.p_ma - 3; }

    int decide(const DecisionContext& ctx) override {
        return decide_ma_sign(ctx.history, ctx.s_hat, cfg_);
    }

private:
    MaSignConfig cfg_;
};

class TrController final : public Controller {
public:
    TrController(const TrConfig& cfg, bool inside) : cfg_(cfg), inside_(inside) {}
    ControllerId id() const override {
        return inside_ ? ControllerId::TrInside : ControllerId::TrOutside;
    }
    int min_history() const override { return cfg_.t_win - 1; }

    int decide(const DecisionContext& ctx) override {
        return inside_ ? decide_tr_inside(ctx.history, ctx.s_hat, cfg_, ctx.j_prev)
                       : decide_tr_outside(ctx.history, ctx.s_hat, cfg_, ctx.j_prev);
    }

private:
    TrConfig cfg_;
    bool inside_;
};

class HistOptRtController final : public Controller {
public:
    HistOptRtController(const HistOptRtConfig& cfg, const CostModel& costs, double m0)
        : cfg_(cfg), costs_(costs), m0_(m0) {}
    ControllerId id() const override { return ControllerId::HistOptRt; }
    int min_eval_day() const override { return cfg_.t_ho - 1; }

    int decide(const DecisionContext& ctx) override {
        return decide_histopt_rt(ctx.eval_closes_through_now, ctx.s_hat, cfg_.t_ho, m0_, costs_);
    }

private:
    HistOptRtConfig cfg_;
    CostModel costs_;
    double m0_;
};

class BuyAndHoldController final : public Controller {
public:
    ControllerId id() const override { return ControllerId::BuyAndHold; }
    int decide(const DecisionContext&) override { return 1; }
};

}  // namespace

std::unique_ptr<Controller> make_controller(const ControllerSpec& spec, const CostModel& costs,
                                            double m0) {
    validate(spec);
    switch (spec.id) {
        case ControllerId::QpEplus: return std::make_unique<QpEplusController>(spec.smpc);
        case ControllerId::SmpcM100: return std::make_unique<M100Controller>(spec.smpc);
        case ControllerId::SmpcDh: return std::make_unique<DhController>(spec.smpc);
        case ControllerId::MaCross: return std::make_unique<MaCrossController>(spec.ma_cross);
        case ControllerId::MaSign: return std::make_unique<MaSignController>(spec.ma_sign);
        case ControllerId::TrInside: return std::make_unique<TrController>(spec.tr, true);
        case ControllerId::TrOutside: return std::make_unique<TrController>(spec.tr, false);
        case ControllerId::HistOptRt:
            return std::make_unique<HistOptRtController>(spec.histopt_rt, costs, m0);
        case ControllerId::BuyAndHold: return std::make_unique<BuyAndHoldController>();
    }
    throw ConfigError("unknown controller id");
}

}  // namespace tradectl
