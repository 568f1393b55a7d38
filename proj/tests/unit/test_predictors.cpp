#include <cmath>
#include <random>
#include <set>
#include <vector>

#include "doctest.h"
#include "support/synthetic.hpp"
#include "tradectl/errors.hpp"
#include "tradectl/predictors.hpp"

using namespace tradectl;

TEST_SUITE_BEGIN("predictors");

TEST_CASE("names round-trip") {
    for (auto kind : {PredictorKind::Perfect, PredictorKind::Indifferent, PredictorKind::Random,
                      PredictorKind::CorrectSign, PredictorKind::WrongSign}) {
        auto back = predictor_from_string(to_string(kind));
        REQUIRE(back.has_value());
        CHECK(*back == kind);
    }
    CHECK_FALSE(predictor_from_string("psychic").has_value());
}

TEST_CASE("causality classification") {
    CHECK(is_noncausal(PredictorKind::Perfect));
    CHECK(is_noncausal(PredictorKind::CorrectSign));
    CHECK(is_noncausal(PredictorKind::WrongSign));
    CHECK_FALSE(is_noncausal(PredictorKind::Indifferent));
    CHECK_FALSE(is_noncausal(PredictorKind::Random));

    CHECK(predictor_min_history(PredictorKind::Random) == 1);
    CHECK(predictor_min_history(PredictorKind::Perfect) == 0);
    CHECK(predictor_min_history(PredictorKind::Indifferent) == 0);
}

TEST_CASE("avg_abs_delta") {
    auto series = testsupport::series_from_closes("A", {100.0, 102.0, 99.0});
    CHECK(avg_abs_delta(HistoryView(series, 2)) == doctest::Approx(2.5).epsilon(1e-12));
    CHECK(avg_abs_delta(HistoryView(series, 1)) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK_THROWS_AS(avg_abs_delta(HistoryView(series, 0)), InsufficientDataError);

    auto flat = testsupport::series_from_closes("F", {50.0, 50.0, 50.0, 50.0});
    CHECK(avg_abs_delta(HistoryView(flat, 3)) == 0.0);
}

TEST_CASE("perfect and indifferent predictions") {
    auto series = testsupport::series_from_closes("P", {100.0, 105.0, 95.0});
    HistoryView view(series, 1);
    std::mt19937_64 rng(1);

    CHECK(predict(PredictorKind::Perfect, view, 95.0, rng) == 95.0);
    CHECK(predict(PredictorKind::Indifferent, view, std::nullopt, rng) == 105.0);
    // the indifferent predictor ignores a supplied next price
    CHECK(predict(PredictorKind::Indifferent, view, 1234.0, rng) == 105.0);
}

TEST_CASE("noncausal kinds demand the realized next price") {
    auto series = testsupport::series_from_closes("P", {100.0, 105.0, 95.0});
    HistoryView view(series, 1);
    std::mt19937_64 rng(1);

    CHECK_THROWS_AS(predict(PredictorKind::Perfect, view, std::nullopt, rng), ContractViolation);
    CHECK_THROWS_AS(predict(PredictorKind::CorrectSign, view, std::nullopt, rng), ContractViolation);
    CHECK_THROWS_AS(predict(PredictorKind::WrongSign, view, std::nullopt, rng), ContractViolation);
}

TEST_CASE("sign predictor cores") {
    CHECK(correct_sign_prediction(100.0, 103.0, 0.5) == doctest::Approx(105.0));
    CHECK(correct_sign_prediction(100.0, 97.0, 0.5) == doctest::Approx(95.0));
    CHECK(correct_sign_prediction(100.0, 100.0, 0.7) == doctest::Approx(100.0));
    CHECK(wrong_sign_prediction(100.0, 103.0, 0.5) == doctest::Approx(95.0));
    CHECK(wrong_sign_prediction(100.0, 97.0, 0.5) == doctest::Approx(105.0));

    // offset is clamped so the prediction stays positive
    CHECK(correct_sign_prediction(5.0, 4.0, 1.0) == doctest::Approx(5e-6));
    CHECK(wrong_sign_prediction(5.0, 6.0, 1.0) == doctest::Approx(5e-6));
}

TEST_CASE("sign predictors match or oppose the realized direction") {
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> price(50.0, 200.0);
    std::uniform_real_distribution<double> xi(0.0, 1.0);

    for (int trial = 0; trial < 10000; ++trial) {
        double s_now = price(rng);
        double s_next = price(rng);
        if (s_now == s_next) continue;
        double x = xi(rng);
        double correct = correct_sign_prediction(s_now, s_next, x);
        double wrong = wrong_sign_prediction(s_now, s_next, x);
        int realized = s_next > s_now ? 1 : -1;
        // s_now >= 50 so the 10*xi offset can never cross the clamp
        if (x > 0.0) {
            CHECK((correct > s_now ? 1 : -1) == realized);
            CHECK((wrong > s_now ? 1 : -1) == -realized);
        }
    }
}

TEST_CASE("random predictor is unbiased with the history's scale") {
    auto series = testsupport::grw_series("R", 120, 5, 100.0, 0.0, 0.02);
    HistoryView view(series, 100);
    const double scale = avg_abs_delta(view);
    REQUIRE(scale > 0.0);

    std::mt19937_64 rng(2024);
    const int n = 100000;
    double sum = 0.0, sum_sq = 0.0;
    for (int i = 0; i < n; ++i) {
        double s_hat = predict(PredictorKind::Random, view, std::nullopt, rng);
        double z = (s_hat - view.back(0)) / scale;
        sum += z;
        sum_sq += z * z;
    }
    double mean = sum / n;
    double var = sum_sq / n - mean * mean;
    CHECK(std::abs(mean) < 3.0 / std::sqrt(static_cast<double>(n)));
    CHECK(var == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("prediction is deterministic for a given rng state") {
    auto series = testsupport::grw_series("D", 50, 9);
    HistoryView view(series, 30);

    std::mt19937_64 a(123), b(123);
    for (int i = 0; i < 20; ++i) {
        CHECK(predict(PredictorKind::Random, view, std::nullopt, a) ==
              predict(PredictorKind::Random, view, std::nullopt, b));
    }
    std::mt19937_64 c(123), d(123);
    for (int i = 0; i < 20; ++i) {
        CHECK(predict(PredictorKind::CorrectSign, view, 105.0, c) ==
              predict(PredictorKind::CorrectSign, view, 105.0, d));
    }
}

TEST_CASE("run seeds separate runs and follow the master seed") {
    auto base = derive_run_seed(1, "AAA", "ma_cross", "random");
    CHECK(base == derive_run_seed(1, "AAA", "ma_cross", "random"));

    std::set<std::uint64_t> seeds;
    seeds.insert(base);
    seeds.insert(derive_run_seed(1, "BBB", "ma_cross", "random"));
    seeds.insert(derive_run_seed(1, "AAA", "ma_sign", "random"));
    seeds.insert(derive_run_seed(1, "AAA", "ma_cross", "perfect"));
    seeds.insert(derive_run_seed(2, "AAA", "ma_cross", "random"));
    CHECK(seeds.size() == 5);

    // label concatenation must not collide across the field boundary
    CHECK(derive_run_seed(1, "AB", "C", "x") != derive_run_seed(1, "A", "BC", "x"));
}

TEST_SUITE_END();
