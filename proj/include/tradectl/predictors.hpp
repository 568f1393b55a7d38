#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>

#include "tradectl/market_data.hpp"

namespace tradectl {

// One-step-ahead close predictors. The noncausal kinds (everything except
// Indifferent and Random) require the realized next price, which the
// harness passes through an explicit channel so the causal code path
// never touches the future by accident.
enum class PredictorKind { Perfect, Indifferent, Random, CorrectSign, WrongSign };

const char* to_string(PredictorKind kind);
std::optional<PredictorKind> predictor_from_string(const std::string& name);

// True for kinds that need s(t+1) to form their prediction.
bool is_noncausal(PredictorKind kind);

// Number of past points the predictor needs before the current day.
int predictor_min_history(PredictorKind kind);

// Mean absolute one-step move over the full history up to `now`
// (sum of |s(k)-s(k-1)| for k=1..now, divided by now). Requires now >= 1.
double avg_abs_delta(const HistoryView& history);

// Deterministic cores for the sign predictors, exposed for testing:
// s_hat = s_now + 10 * xi * sign(s_next - s_now), mirrored for wrong sign.
double correct_sign_prediction(double s_now, double s_next, double xi);
double wrong_sign_prediction(double s_now, double s_next, double xi);

// Predicted s(t+1). `true_next` must be set for noncausal kinds and is
// ignored otherwise. Predictions are clamped to a small positive floor
// (1e-6 * s(t)) so downstream log/ratio code never sees a non-positive
// price.
double predict(PredictorKind kind,
               const HistoryView& history,
               std::optional<double> true_next,
               std::mt19937_64& rng);

// Stable seed for one (symbol, controller, predictor) run. FNV-1a over
// the labels, mixed with the master seed, so runs are independent of
// matrix enumeration order and of each other.
std::uint64_t derive_run_seed(std::uint64_t master_seed,
                              const std::string& symbol,
                              const std::string& controller,
                              const std::string& predictor);

}  // namespace tradectl
