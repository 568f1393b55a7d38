#include <algorithm>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "support/synthetic.hpp"
#include "tradectl/errors.hpp"
#include "tradectl/harness.hpp"
#include "tradectl/histopt.hpp"

using namespace tradectl;
using testsupport::grw_series;
using testsupport::series_from_closes;

namespace {

ControllerSpec spec_of(ControllerId id) {
    ControllerSpec spec;
    spec.id = id;
    if (id == ControllerId::QpEplus) spec.smpc.m = 1;
    return spec;
}

RunConfig default_cfg() {
    RunConfig cfg;
    cfg.costs = CostModel{0.01, 0.01};
    return cfg;
}

}  // namespace

TEST_SUITE_BEGIN("harness");

TEST_CASE("buy and hold on a flat series loses exactly the fees") {
    auto series = series_from_closes("FLAT", std::vector<double>(40, 100.0), 5);
    auto run = run_buy_and_hold(series, default_cfg());

    CHECK(run.controller == "buy_and_hold");
    CHECK(run.predictor == "baseline");
    CHECK(run.n_trades == 1);
    CHECK(run.t_min_between == 0);
    CHECK(run.trades.front().t == 0);
    CHECK(run.trades.front().kind == TradeKind::Buy);
    // 990 shares at 100 + 1% fee leave 10 in cash; wealth 99010 forever
    CHECK(run.f == doctest::Approx(-0.99).epsilon(1e-12));
    CHECK(run.final_wealth == doctest::Approx(99010.0).epsilon(1e-12));
    REQUIRE(run.wealth_trace.size() == 35);
    REQUIRE(run.dates.size() == 35);
    CHECK(run.dates.front() == series.date(5));
}

TEST_CASE("buy and hold marks wealth at the final close") {
    auto series = grw_series("G", 60, 12, 80.0, 0.001, 0.02, 10);
    auto cfg = default_cfg();
    auto run = run_buy_and_hold(series, cfg);

    REQUIRE(run.n_trades == 1);
    const auto& trade = run.trades.front();
    double residual = trade.cash_after;
    double want = residual + static_cast<double>(trade.shares) * series.close(series.size() - 1);
    CHECK(run.final_wealth == doctest::Approx(want).epsilon(1e-12));
    CHECK(run.f == doctest::Approx(performance(want, cfg.m0)).epsilon(1e-12));
}

TEST_CASE("scenario controllers under the indifferent predictor never trade") {
    auto series = grw_series("IDLE", 170, 33, 100.0, 0.0, 0.025, 115);

    for (auto id : {ControllerId::QpEplus, ControllerId::SmpcM100}) {
        ControllerSpec spec = spec_of(id);
        spec.smpc.sigma_pert = 0.0;
        auto run = run_backtest(series, spec, PredictorKind::Indifferent, default_cfg());
        CHECK(run.n_trades == 0);
        CHECK(run.f == 0.0);
        CHECK(run.final_wealth == 100000.0);
    }
}

TEST_CASE("m100 with zero perturbation reproduces qp_eplus with zero beta") {
    auto series = grw_series("EQ", 200, 91, 100.0, 0.0, 0.03, 130);

    ControllerSpec m100 = spec_of(ControllerId::SmpcM100);
    m100.smpc.sigma_pert = 0.0;
    m100.smpc.alpha = 10.0;

    ControllerSpec qp = spec_of(ControllerId::QpEplus);
    qp.smpc.sigma_pert = 0.0;
    qp.smpc.beta = 0.0;

    auto run_a = run_backtest(series, m100, PredictorKind::Perfect, default_cfg());
    auto run_b = run_backtest(series, qp, PredictorKind::Perfect, default_cfg());

    CHECK(run_a.f == run_b.f);
    REQUIRE(run_a.trades.size() == run_b.trades.size());
    for (size_t i = 0; i < run_a.trades.size(); ++i) {
        CHECK(run_a.trades[i].t == run_b.trades[i].t);
        CHECK(run_a.trades[i].kind == run_b.trades[i].kind);
    }
}

TEST_CASE("controllers hold cash until their warm-up is satisfied") {
    auto series = grw_series("WARM", 120, 5, 100.0, 0.002, 0.03, 10);
    ControllerSpec spec = spec_of(ControllerId::MaCross);
    spec.ma_cross = {1, 50};

    auto run = run_backtest(series, spec, PredictorKind::Perfect, default_cfg());
    // p_long - 1 = 49 past days; eval starts at index 10, so day 39 is the
    // first with enough history
    for (const auto& trade : run.trades) CHECK(trade.t >= 39);
    CHECK(run.n_trades > 0);  // the perfect predictor finds at least one cross
}

TEST_CASE("histopt_rt respects its stability warm-up") {
    auto series = grw_series("HO", 40, 8, 100.0, 0.0, 0.03, 4);
    ControllerSpec spec = spec_of(ControllerId::HistOptRt);
    spec.histopt_rt.t_ho = 3;

    auto run = run_backtest(series, spec, PredictorKind::Perfect, default_cfg());
    for (const auto& trade : run.trades) CHECK(trade.t >= 2);
}

TEST_CASE("impossible warm-up is a configuration error") {
    auto series = grw_series("SHORT", 60, 3, 100.0, 0.0, 0.02, 5);
    ControllerSpec spec = spec_of(ControllerId::MaCross);
    spec.ma_cross = {1, 200};
    CHECK_THROWS_AS(run_backtest(series, spec, PredictorKind::Indifferent, default_cfg()),
                    ConfigError);
}

TEST_CASE("evaluation window validation") {
    auto series = grw_series("WIN", 30, 4);
    auto cfg = default_cfg();

    cfg.eval_begin = 20;
    cfg.eval_end = 10;
    CHECK_THROWS_AS(run_backtest(series, spec_of(ControllerId::BuyAndHold),
                                 PredictorKind::Indifferent, cfg),
                    ConfigError);

    cfg.eval_begin = 5;
    cfg.eval_end = 30;  // past the last index
    CHECK_THROWS_AS(run_buy_and_hold(series, cfg), ConfigError);

    cfg.eval_begin = 10;
    cfg.eval_end = 10;  // a single day cannot host a decision plus a marking
    CHECK_THROWS_AS(run_buy_and_hold(series, cfg), ConfigError);

    cfg.eval_begin = 10;
    cfg.eval_end = 11;
    CHECK_NOTHROW(run_buy_and_hold(series, cfg));
}

TEST_CASE("runs are deterministic for a fixed master seed") {
    auto series = grw_series("DET", 150, 44, 100.0, 0.0, 0.03, 20);
    ControllerSpec spec = spec_of(ControllerId::MaCross);
    spec.ma_cross = {1, 5};

    auto cfg = default_cfg();
    auto a = run_backtest(series, spec, PredictorKind::Random, cfg);
    auto b = run_backtest(series, spec, PredictorKind::Random, cfg);
    CHECK(a.f == b.f);
    CHECK(a.n_trades == b.n_trades);
    CHECK(a.wealth_trace == b.wealth_trace);

    cfg.master_seed = 2;
    auto c = run_backtest(series, spec, PredictorKind::Random, cfg);
    CHECK(a.wealth_trace != c.wealth_trace);  // different noise, different path
}

TEST_CASE("every strategy run is bounded by the hindsight optimum") {
    auto cfg = default_cfg();
    std::vector<PriceSeries> universe;
    for (int i = 0; i < 3; ++i)
        universe.push_back(grw_series("S" + std::to_string(i), 80, 100 + i, 90.0, 0.0, 0.03, 15));

    ControllerSpec ma = spec_of(ControllerId::MaCross);
    ma.ma_cross = {1, 5};
    auto matrix = run_matrix(universe, {ma, spec_of(ControllerId::HistOptRt)},
                             {PredictorKind::Indifferent, PredictorKind::Perfect}, cfg);

    for (const auto& series : universe) {
        auto histopt = run_histopt_baseline(series, cfg);
        for (const auto& run : matrix.runs) {
            if (run.symbol != series.symbol()) continue;
            CHECK(run.final_wealth <= histopt.final_wealth * (1.0 + 1e-9));
        }
    }
}

TEST_CASE("aggregate summarises runs") {
    RunResult a, b;
    a.controller = b.controller = "x";
    a.predictor = b.predictor = "y";
    a.f = 10.0;
    a.n_trades = 4;
    a.t_min_between = 7;
    b.f = -10.0;
    b.n_trades = 2;
    b.t_min_between = 3;

    auto row = aggregate({a, b});
    CHECK(row.controller == "x");
    CHECK(row.n_tr_avg == doctest::Approx(3.0));
    CHECK(row.t_min == 3);
    CHECK(row.f_avg == doctest::Approx(0.0));
    CHECK(row.f_min == doctest::Approx(-10.0));
    CHECK(row.f_max == doctest::Approx(10.0));
    CHECK(row.f_pos == doctest::Approx(50.0));

    RunResult zero;
    zero.f = 0.0;
    auto strict = aggregate({zero});
    CHECK(strict.f_pos == 0.0);  // f == 0 does not count as positive

    CHECK_THROWS_AS(aggregate({}), DomainError);
}

TEST_CASE("run_matrix produces rows in predictor-major order plus baselines") {
    std::vector<PriceSeries> universe;
    for (int i = 0; i < 2; ++i)
        universe.push_back(grw_series("U" + std::to_string(i), 70, 7 + i, 100.0, 0.0, 0.025, 12));

    ControllerSpec ma = spec_of(ControllerId::MaCross);
    ma.ma_cross = {1, 5};
    ControllerSpec sign = spec_of(ControllerId::MaSign);
    sign.ma_sign = {3, 5};
    std::vector<ControllerSpec> controllers{ma, sign};
    std::vector<PredictorKind> predictors{PredictorKind::Indifferent, PredictorKind::Perfect};

    auto matrix = run_matrix(universe, controllers, predictors, default_cfg());

    REQUIRE(matrix.rows.size() == 6);
    CHECK(matrix.rows[0].controller == "ma_cross");
    CHECK(matrix.rows[0].predictor == "indifferent");
    CHECK(matrix.rows[1].controller == "ma_sign");
    CHECK(matrix.rows[1].predictor == "indifferent");
    CHECK(matrix.rows[2].controller == "ma_cross");
    CHECK(matrix.rows[2].predictor == "perfect");
    CHECK(matrix.rows[3].controller == "ma_sign");
    CHECK(matrix.rows[3].predictor == "perfect");
    CHECK(matrix.rows[4].controller == "histopt");
    CHECK(matrix.rows[4].predictor == "baseline");
    CHECK(matrix.rows[5].controller == "buy_and_hold");
    CHECK(matrix.rows[5].predictor == "baseline");

    CHECK(matrix.runs.size() == 2 * 2 * 2 + 2 * 2);
    CHECK(matrix.warnings.empty());
}

TEST_CASE("run_matrix is independent of the worker count") {
    std::vector<PriceSeries> universe;
    for (int i = 0; i < 3; ++i)
        universe.push_back(grw_series("J" + std::to_string(i), 90, 55 + i, 100.0, 0.0, 0.03, 15));

    ControllerSpec ma = spec_of(ControllerId::MaCross);
    ma.ma_cross = {1, 5};
    std::vector<ControllerSpec> controllers{ma, spec_of(ControllerId::HistOptRt)};
    std::vector<PredictorKind> predictors{PredictorKind::Random, PredictorKind::Perfect};

    auto serial = run_matrix(universe, controllers, predictors, default_cfg(), 1);
    auto threaded = run_matrix(universe, controllers, predictors, default_cfg(), 4);

    REQUIRE(serial.runs.size() == threaded.runs.size());
    for (size_t i = 0; i < serial.runs.size(); ++i) {
        CHECK(serial.runs[i].symbol == threaded.runs[i].symbol);
        CHECK(serial.runs[i].controller == threaded.runs[i].controller);
        CHECK(serial.runs[i].f == threaded.runs[i].f);
        CHECK(serial.runs[i].wealth_trace == threaded.runs[i].wealth_trace);
    }
    REQUIRE(serial.rows.size() == threaded.rows.size());
    for (size_t i = 0; i < serial.rows.size(); ++i)
        CHECK(serial.rows[i].f_avg == threaded.rows[i].f_avg);
}

TEST_CASE("run_matrix reports per-run failures as warnings") {
    std::vector<PriceSeries> universe;
    universe.push_back(grw_series("OK", 90, 3, 100.0, 0.0, 0.02, 20));
    universe.push_back(grw_series("TINY", 12, 4, 100.0, 0.0, 0.02, 2));

    // p_long = 60 is satisfiable on OK (eval starts at 20 of 90) but not on
    // TINY, whose whole history is 12 days
    ControllerSpec ma = spec_of(ControllerId::MaCross);
    ma.ma_cross = {1, 60};
    auto matrix = run_matrix(universe, {ma}, {PredictorKind::Indifferent}, default_cfg());

    REQUIRE(matrix.rows.size() == 3);
    REQUIRE(matrix.warnings.size() == 1);
    CHECK(matrix.warnings.front().find("TINY") != std::string::npos);
    CHECK(matrix.warnings.front().find("ma_cross") != std::string::npos);
    // the aggregate row covers the surviving series only
    CHECK(matrix.rows[0].controller == "ma_cross");
    // baselines still cover both series
    CHECK(matrix.rows[1].controller == "histopt");
}

TEST_CASE("trade log entries carry consistent accounting") {
    auto series = grw_series("LOG", 100, 23, 100.0, 0.0, 0.03, 10);
    ControllerSpec spec = spec_of(ControllerId::MaCross);
    spec.ma_cross = {1, 5};
    auto run = run_backtest(series, spec, PredictorKind::Perfect, default_cfg());

    REQUIRE(run.n_trades >= 2);
    TradeKind expect = TradeKind::Buy;
    int prev_t = -1;
    for (const auto& trade : run.trades) {
        CHECK(trade.kind == expect);
        expect = expect == TradeKind::Buy ? TradeKind::Sell : TradeKind::Buy;
        CHECK(trade.t > prev_t);
        prev_t = trade.t;
        CHECK(trade.shares > 0);
        CHECK(trade.cash_after >= 0.0);
        // wealth right after the trade, marked at the trade price
        if (trade.kind == TradeKind::Buy) {
            CHECK(trade.wealth_after ==
                  doctest::Approx(trade.cash_after +
                                  static_cast<double>(trade.shares) * trade.price)
                      .epsilon(1e-12));
        } else {
            CHECK(trade.wealth_after == doctest::Approx(trade.cash_after).epsilon(1e-12));
        }
    }

    // t_min_between matches the smallest gap in the log
    int min_gap = 1 << 30;
    for (size_t i = 1; i < run.trades.size(); ++i)
        min_gap = std::min(min_gap, run.trades[i].t - run.trades[i - 1].t);
    CHECK(run.t_min_between == min_gap);
}

TEST_CASE("smpc controllers run end to end") {
    auto series = grw_series("SM", 180, 66, 100.0, 0.0, 0.03, 120);
    for (auto id : {ControllerId::QpEplus, ControllerId::SmpcM100, ControllerId::SmpcDh}) {
        ControllerSpec spec = spec_of(id);
        auto run = run_backtest(series, spec, PredictorKind::Perfect, default_cfg());
        CHECK(run.wealth_trace.size() == 60);
        CHECK(run.final_wealth > 0.0);
    }
}

TEST_SUITE_END();
