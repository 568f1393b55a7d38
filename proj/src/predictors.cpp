#include "tradectl/predictors.hpp"

#include <algorithm>
#include <cmath>

#include "tradectl/errors.hpp"

namespace tradectl {

namespace {

constexpr double kFloorScale = 1e-6;

double sign_of(double x) {
    if (x > 0.0) return 1.0;
    if (x < 0.0) return -1.0;
    return 0.0;
}

double clamp_prediction(double s_hat, double s_now) {
    return std::max(s_hat, kFloorScale * s_now);
}

}  // namespace

const char* to_string(PredictorKind kind) {
    switch (kind) {
        case PredictorKind::Perfect: return "perfect";
        case PredictorKind::Indifferent: return "indifferent";
        case PredictorKind::Random: return "random";
        case PredictorKind::CorrectSign: return "correct_sign";
        case PredictorKind::WrongSign: return "wrong_sign";
    }
    return "?";
}

std::optional<PredictorKind> predictor_from_string(const std::string& name) {
    if (name == "perfect") return PredictorKind::Perfect;
    if (name == "indifferent") return PredictorKind::Indifferent;
    if (name == "random") return PredictorKind::Random;
    if (name == "correct_sign") return PredictorKind::CorrectSign;
    if (name == "wrong_sign") return PredictorKind::WrongSign;
    return std::nullopt;
}

bool is_noncausal(PredictorKind kind) {
    switch (kind) {
        case PredictorKind::Perfect:
        case PredictorKind::CorrectSign:
        case PredictorKind::WrongSign:
            return true;
        case PredictorKind::Indifferent:
        case PredictorKind::Random:
            return false;
    }
    return false;
}

int predictor_min_history(PredictorKind kind) {
    return kind == PredictorKind::Random ? 1 : 0;
}

double avg_abs_delta(const HistoryView& history) {
    if (history.now() < 1)
        throw InsufficientDataError("avg_abs_delta: needs at least one past price");
    return history.abs_delta_sum_to_now() / history.now();
}

double correct_sign_prediction(double s_now, double s_next, double xi) {
    return clamp_prediction(s_now + 10.0 * xi * sign_of(s_next - s_now), s_now);
}

double wrong_sign_prediction(double s_now, double s_next, double xi) {
    return clamp_prediction(s_now - 10.0 * xi * sign_of(s_next - s_now), s_now);
}

double predict(PredictorKind kind,
               const HistoryView& history,
               std::optional<double> true_next,
               std::mt19937_64& rng) {
    const double s_now = history.back(0);
    if (is_noncausal(kind) && !true_next)
        throw ContractViolation(std::string("predictor \"") + to_string(kind) +
                                "\" requires the realized next price");

    switch (kind) {
        case PredictorKind::Perfect:
            return clamp_prediction(*true_next, s_now);
        case PredictorKind::Indifferent:
            return s_now;
        case PredictorKind::Random: {
            const double scale = avg_abs_delta(history);
            std::normal_distribution<double> noise(0.0, 1.0);
            return clamp_prediction(s_now + noise(rng) * scale, s_now);
        }
        case PredictorKind::CorrectSign: {
            std::uniform_real_distribution<double> xi(0.0, 1.0);
            return correct_sign_prediction(s_now, *true_next, xi(rng));
        }
        case PredictorKind::WrongSign: {
            std::uniform_real_distribution<double> xi(0.0, 1.0);
            return wrong_sign_prediction(s_now, *true_next, xi(rng));
        }
    }
    throw ContractViolation("predict: unknown predictor kind");
}

std::uint64_t derive_run_seed(std::uint64_t master_seed,
                              const std::string& symbol,
                              const std::string& controller,
                              const std::string& predictor) {
    const std::uint64_t fnv_offset = 1469598103934665603ull;
    const std::uint64_t fnv_prime = 1099511628211ull;
    std::uint64_t h = fnv_offset;
    auto mix = [&](const std::string& text) {
        for (const char c : text) {
            h ^= static_cast<std::uint64_t>(static_cast<unsigned char>(c));
            h *= fnv_prime;
        }
        h ^= 0x7c;  // separator so ("ab","c") != ("a","bc")
        h *= fnv_prime;
    };
    mix(symbol);
    mix(controller);
    mix(predictor);
    h ^= master_seed;
    // splitmix64 finalizer to spread the master seed through all bits
    h += 0x9e3779b97f4a7c15ull;
    h = (h ^ (h >> 30)) * 0xbf58476d1ce4e5b9ull;
    h = (h ^ (h >> 27)) * 0x94d049bb133111ebull;
    return h ^ (h >> 31);
}

}  // namespace tradectl
