#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "support/synthetic.hpp"
#include "tradectl/errors.hpp"
#include "tradectl/smpc.hpp"

using namespace tradectl;

namespace {

ScenarioSet fixed_scenarios(std::vector<double> prices) {
    ScenarioSet set;
    set.probs.assign(prices.size(), 1.0 / static_cast<double>(prices.size()));
    set.prices = std::move(prices);
    return set;
}

}  // namespace

TEST_SUITE_BEGIN("smpc");

TEST_CASE("config validation") {
    SmpcConfig ok;
    CHECK_NOTHROW(validate(ok));

    SmpcConfig bad = ok;
    bad.m = 0;
    CHECK_THROWS_AS(validate(bad), ValidationError);
    bad = ok;
    bad.sigma_pert = -0.1;
    CHECK_THROWS_AS(validate(bad), ValidationError);
    bad = ok;
    bad.vol_window = 0;
    CHECK_THROWS_AS(validate(bad), ValidationError);
    bad = ok;
    bad.eps = 1.0;
    CHECK_THROWS_AS(validate(bad), ValidationError);
    bad = ok;
    bad.alpha = -1.0;
    CHECK_THROWS_AS(validate(bad), ValidationError);
    bad = ok;
    bad.r = -1.0;
    CHECK_THROWS_AS(validate(bad), ValidationError);
}

TEST_CASE("scenario generation") {
    SmpcConfig cfg;
    cfg.m = 5;
    cfg.sigma_pert = 0.0;
    std::mt19937_64 rng(3);

    auto set = generate_scenarios(100.0, cfg, rng);
    REQUIRE(set.prices.size() == 5);
    REQUIRE(set.probs.size() == 5);
    for (double p : set.prices) CHECK(p == 100.0);
    for (double q : set.probs) CHECK(q == doctest::Approx(0.2));

    // rng stream position is independent of sigma_pert
    std::mt19937_64 a(11), b(11);
    SmpcConfig zero = cfg, noisy = cfg;
    noisy.sigma_pert = 1.5;
    generate_scenarios(100.0, zero, a);
    generate_scenarios(100.0, noisy, b);
    CHECK(a() == b());
}

TEST_CASE("scenario sample mean converges to the prediction") {
    SmpcConfig cfg;
    cfg.m = 100000;
    cfg.sigma_pert = 0.3;
    std::mt19937_64 rng(17);
    auto set = generate_scenarios(100.0, cfg, rng);

    double mean = 0.0;
    for (double p : set.prices) mean += p;
    mean /= static_cast<double>(set.prices.size());
    CHECK(std::abs(mean - 100.0) < 3.0 * 0.3 / std::sqrt(100000.0));
}

TEST_CASE("scenario floor keeps prices positive") {
    SmpcConfig cfg;
    cfg.m = 1000;
    cfg.sigma_pert = 50.0;  // wild noise relative to a tiny price
    std::mt19937_64 rng(5);
    auto set = generate_scenarios(1.0, cfg, rng);
    for (double p : set.prices) CHECK(p >= 1e-6);
}

TEST_CASE("excess return") {
    CHECK(excess_return(100.0, 103.0, 0.0) == doctest::Approx(3.0));
    CHECK(excess_return(100.0, 103.0, 0.01) == doctest::Approx(2.0));
    CHECK(excess_return(100.0, 95.0, 0.0) == doctest::Approx(-5.0));
}

TEST_CASE("ml volatility of structured series") {
    auto flat = testsupport::series_from_closes("F", {50.0, 50.0, 50.0, 50.0, 50.0});
    CHECK(ml_volatility(HistoryView(flat, 4), 4) == 0.0);

    // alternating +-10%: every log return is +-ln(1.1), mean 0, sd ln(1.1)
    auto alt = testsupport::series_from_closes("A", {100.0, 110.0, 100.0, 110.0, 100.0});
    CHECK(ml_volatility(HistoryView(alt, 4), 4) == doctest::Approx(std::log(1.1)).epsilon(1e-12));

    // constant growth: all returns equal, zero variance
    std::vector<double> geo;
    double s = 100.0;
    for (int i = 0; i < 6; ++i) {
        geo.push_back(s);
        s *= 1.01;
    }
    auto geo_series = testsupport::series_from_closes("G", geo);
    CHECK(ml_volatility(HistoryView(geo_series, 5), 5) == doctest::Approx(0.0).epsilon(1e-12));

    CHECK_THROWS_AS(ml_volatility(HistoryView(alt, 3), 4), InsufficientDataError);
    CHECK_THROWS_AS(ml_volatility(HistoryView(alt, 4), 0), DomainError);
}

TEST_CASE("ml volatility matches a naive two-pass computation") {
    auto series = testsupport::grw_series("V", 200, 21, 100.0, 0.0002, 0.03);
    HistoryView view(series, 180);
    const int window = 100;

    std::vector<double> rets;
    for (int k = 0; k < window; ++k)
        rets.push_back(std::log(view.back(k) / view.back(k + 1)));
    double mean = 0.0;
    for (double r : rets) mean += r;
    mean /= window;
    double acc = 0.0;
    for (double r : rets) acc += (r - mean) * (r - mean);
    double want = std::sqrt(acc / window);

    CHECK(ml_volatility(view, window) == doctest::Approx(want).epsilon(1e-12));
}

TEST_CASE("virtual wealth dynamics") {
    SmpcConfig cfg;
    cfg.eps = 0.01;
    cfg.r = 0.0;
    VirtualPortfolio vp{100.0, 0};

    // staying in cash: w unchanged
    CHECK(virtual_wealth_next(100.0, 110.0, vp, 0, cfg) == doctest::Approx(100.0));
    // entering: pay eps*s_now, collect the excess return
    CHECK(virtual_wealth_next(100.0, 110.0, vp, 1, cfg) == doctest::Approx(99.0 + 10.0));

    VirtualPortfolio held{100.0, 1};
    // holding: no switching cost
    CHECK(virtual_wealth_next(100.0, 110.0, held, 1, cfg) == doctest::Approx(110.0));
    // exiting: pay the cost, no exposure
    CHECK(virtual_wealth_next(100.0, 110.0, held, 0, cfg) == doctest::Approx(99.0));

    SmpcConfig with_r = cfg;
    with_r.r = 0.01;
    // (1+r)(w - h) + (s_next - (1+r) s_now) u
    CHECK(virtual_wealth_next(100.0, 110.0, vp, 1, with_r) ==
          doctest::Approx(1.01 * 99.0 + (110.0 - 101.0)));
}

TEST_CASE("qp_eplus decides by expected gain minus switching penalty") {
    SmpcConfig cfg;
    cfg.m = 1;
    cfg.beta = 1.0;
    cfg.eps = 0.01;
    VirtualPortfolio cash{100.0, 0};

    // flat prediction: gain 0 < cost 1, stay out
    CHECK(decide_qp_eplus(100.0, fixed_scenarios({100.0}), cash, 0.02, cfg) == 0);
    // predicted gain 10 against cost ~1: enter
    CHECK(decide_qp_eplus(100.0, fixed_scenarios({111.0}), cash, 0.02, cfg) == 1);
    // huge smoothing penalty freezes the previous stake
    SmpcConfig heavy = cfg;
    heavy.beta = 1e9;
    CHECK(decide_qp_eplus(100.0, fixed_scenarios({111.0}), cash, 0.02, heavy) == 0);
    VirtualPortfolio held{100.0, 1};
    CHECK(decide_qp_eplus(100.0, fixed_scenarios({80.0}), held, 0.02, heavy) == 1);

    // requires exactly one scenario
    CHECK_THROWS_AS(decide_qp_eplus(100.0, fixed_scenarios({100.0, 101.0}), cash, 0.02, cfg),
                    ContractViolation);
}

TEST_CASE("qp_eplus keeps the previous stake on an exact tie") {
    SmpcConfig cfg;
    cfg.m = 1;
    cfg.beta = 0.0;
    cfg.eps = 0.0;
    cfg.r = 0.0;
    VirtualPortfolio cash{100.0, 0};
    VirtualPortfolio held{100.0, 1};
    // eps=0, s_hat == s_now: both stakes give identical virtual wealth
    CHECK(decide_qp_eplus(100.0, fixed_scenarios({100.0}), cash, 0.5, cfg) == 0);
    CHECK(decide_qp_eplus(100.0, fixed_scenarios({100.0}), held, 0.5, cfg) == 1);
}

TEST_CASE("m100 trades expected gain against variance") {
    SmpcConfig cfg;
    cfg.alpha = 0.0;
    cfg.eps = 0.01;
    VirtualPortfolio cash{100.0, 0};

    // alpha 0: pure expectation; mean gain 10 beats cost 1
    CHECK(decide_m100(100.0, fixed_scenarios({90.0, 130.0}), cash, cfg) == 1);
    // mean gain 0.5 loses to cost 1
    CHECK(decide_m100(100.0, fixed_scenarios({96.0, 105.0}), cash, cfg) == 0);

    // the same gain is rejected once variance is priced in
    SmpcConfig risk_averse = cfg;
    risk_averse.alpha = 1e6;
    CHECK(decide_m100(100.0, fixed_scenarios({90.0, 130.0}), cash, risk_averse) == 0);
    // ... and an invested portfolio exits despite the exit fee
    VirtualPortfolio held{100.0, 1};
    CHECK(decide_m100(100.0, fixed_scenarios({90.0, 130.0}), held, risk_averse) == 0);
}

TEST_CASE("m100 with identical scenarios degenerates to qp_eplus with beta 0") {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> price(10.0, 200.0);
    std::uniform_real_distribution<double> wealth(-50.0, 300.0);
    const double eps_choices[] = {0.0, 0.01, 0.05};
    const double r_choices[] = {0.0, 0.001};
    const double alpha_choices[] = {0.0, 1.0, 10.0};

    for (int trial = 0; trial < 2000; ++trial) {
        double s_now = price(rng);
        double s_hat = price(rng);
        SmpcConfig cfg;
        cfg.eps = eps_choices[trial % 3];
        cfg.r = r_choices[trial % 2];
        cfg.alpha = alpha_choices[trial % 3];
        cfg.beta = 0.0;
        VirtualPortfolio vp{wealth(rng), static_cast<int>(rng() % 2)};

        auto identical = fixed_scenarios(std::vector<double>(100, s_hat));
        SmpcConfig one = cfg;
        one.m = 1;
        int via_m100 = decide_m100(s_now, identical, vp, cfg);
        int via_qp = decide_qp_eplus(s_now, fixed_scenarios({s_hat}), vp, 0.77, one);
        CHECK(via_m100 == via_qp);
    }
}

TEST_CASE("deciders are invariant to shifting the virtual wealth") {
    std::mt19937_64 rng(123);
    std::uniform_real_distribution<double> price(10.0, 200.0);
    SmpcConfig cfg;
    cfg.alpha = 2.0;
    cfg.eps = 0.01;

    for (int trial = 0; trial < 500; ++trial) {
        double s_now = price(rng);
        auto set = fixed_scenarios({price(rng), price(rng), price(rng)});
        int u_prev = static_cast<int>(rng() % 2);
        VirtualPortfolio a{50.0, u_prev};
        VirtualPortfolio b{50.0 + 123.456, u_prev};
        CHECK(decide_m100(s_now, set, a, cfg) == decide_m100(s_now, set, b, cfg));

        SmpcConfig one = cfg;
        one.m = 1;
        auto single = fixed_scenarios({set.prices[0]});
        CHECK(decide_qp_eplus(s_now, single, a, 0.3, one) ==
              decide_qp_eplus(s_now, single, b, 0.3, one));
    }
}

TEST_CASE("trailing level never decreases and floors at zero") {
    CHECK(update_trailing_level(0.0, 50.0) == 50.0);
    CHECK(update_trailing_level(50.0, 40.0) == 50.0);
    CHECK(update_trailing_level(50.0, -10.0) == 50.0);
    CHECK(update_trailing_level(-5.0, -10.0) == 0.0);

    std::mt19937_64 rng(31);
    std::normal_distribution<double> step(0.0, 10.0);
    double level = 0.0, w = 100.0;
    for (int t = 0; t < 500; ++t) {
        w += step(rng);
        double next = update_trailing_level(level, w);
        CHECK(next >= level);
        CHECK(next >= 0.0);
        level = next;
    }
}

TEST_CASE("reference scenarios discount the surplus over the entry price") {
    SmpcConfig cfg;
    cfg.r = 0.0;
    auto set = fixed_scenarios({120.0, 90.0});

    // r = 0: no discounting; max(s_j - s0, level)
    auto refs = reference_scenarios(set, 100.0, 0.0, 3, 10, cfg);
    REQUIRE(refs.size() == 2);
    CHECK(refs[0] == doctest::Approx(20.0));
    CHECK(refs[1] == doctest::Approx(0.0));

    // level lifts the floor
    refs = reference_scenarios(set, 100.0, 25.0, 3, 10, cfg);
    CHECK(refs[0] == doctest::Approx(25.0));
    CHECK(refs[1] == doctest::Approx(25.0));

    // discounting by (1+r)^-(T-(t+1))
    SmpcConfig with_r = cfg;
    with_r.r = 0.01;
    auto single = fixed_scenarios({150.0});
    refs = reference_scenarios(single, 100.0, 0.0, 7, 10, with_r);  // T-(t+1) = 2
    CHECK(refs[0] == doctest::Approx(50.0 / (1.01 * 1.01)).epsilon(1e-12));

    // at the horizon the exponent is zero
    refs = reference_scenarios(single, 100.0, 0.0, 9, 10, with_r);
    CHECK(refs[0] == doctest::Approx(50.0));

    CHECK_THROWS_AS(reference_scenarios(single, 100.0, 0.0, 11, 10, with_r), DomainError);
}

TEST_CASE("dh tracks the reference") {
    SmpcConfig cfg;
    cfg.eps = 0.01;
    cfg.r = 0.0;

    // reference equals current wealth and the price is flat: stay put
    VirtualPortfolio cash{100.0, 0};
    CHECK(decide_dh(100.0, fixed_scenarios({100.0}), {100.0}, cash, cfg) == 0);

    // wealth lags a rising reference: only investing can keep up
    VirtualPortfolio lagging{50.0, 0};
    // u=0: |50 - 100| = 50; u=1: |(50-1) + (200-100) - 100| = 49
    CHECK(decide_dh(100.0, fixed_scenarios({200.0}), {100.0}, lagging, cfg) == 1);

    // wealth already at the reference with a risky scenario: stay in cash
    VirtualPortfolio safe{100.0, 0};
    CHECK(decide_dh(100.0, fixed_scenarios({40.0}), {100.0}, safe, cfg) == 0);

    // mismatched reference count is a programming error
    CHECK_THROWS_AS(decide_dh(100.0, fixed_scenarios({100.0, 110.0}), {100.0}, cash, cfg),
                    ContractViolation);
}

TEST_CASE("dh minimizes the worst case across scenarios") {
    SmpcConfig cfg;
    cfg.eps = 0.0;
    cfg.r = 0.0;
    VirtualPortfolio vp{0.0, 0};
    // scenarios: +50 or -50 around s_now = 100, references at 0
    // u=0: max(|0-0|, |0-0|) = 0; u=1: max(|50|, |-50|) = 50 -> stay out
    CHECK(decide_dh(100.0, fixed_scenarios({150.0, 50.0}), {0.0, 0.0}, vp, cfg) == 0);
    // references at +-50 with matching scenario order: investing tracks exactly
    // u=1 errors: |50-50|=0, |-50+50|=0; u=0 errors: 50 -> invest
    CHECK(decide_dh(100.0, fixed_scenarios({150.0, 50.0}), {50.0, -50.0}, vp, cfg) == 1);
}

TEST_CASE("advance_virtual applies the realized move") {
    SmpcConfig cfg;
    cfg.eps = 0.01;
    cfg.r = 0.0;
    VirtualPortfolio vp{100.0, 0};

    advance_virtual(vp, 100.0, 110.0, 1, cfg);
    CHECK(vp.w == doctest::Approx(99.0 + 10.0));
    CHECK(vp.u_prev == 1);

    advance_virtual(vp, 110.0, 100.0, 1, cfg);
    CHECK(vp.w == doctest::Approx(109.0 - 10.0));
    CHECK(vp.u_prev == 1);

    advance_virtual(vp, 100.0, 90.0, 0, cfg);
    CHECK(vp.w == doctest::Approx(99.0 - 1.0));
    CHECK(vp.u_prev == 0);
}

TEST_SUITE_END();
