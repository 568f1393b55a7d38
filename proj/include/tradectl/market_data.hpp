#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace tradectl {

// Daily close history for one instrument. Immutable after construction,
// so instances can be shared across worker threads by const reference.
//
// `eval_start` marks where the evaluation (out-of-sample) window begins;
// everything before it is warm-up/training history.
class PriceSeries {
public:
    PriceSeries() = default;

    // Validates (strictly increasing dates, positive closes, >= 2 points)
    // and builds the prefix caches.
    static PriceSeries from_columns(std::string symbol,
                                    std::vector<std::string> dates,
                                    std::vector<double> closes,
                                    int eval_start = 0);

    const std::string& symbol() const { return symbol_; }
    int size() const { return static_cast<int>(closes_.size()); }
    const std::string& date(int i) const { return dates_[static_cast<size_t>(i)]; }
    double close(int i) const { return closes_[static_cast<size_t>(i)]; }
    const std::vector<std::string>& dates() const { return dates_; }
    std::span<const double> closes() const { return closes_; }
    int eval_start() const { return eval_start_; }

    PriceSeries with_eval_start(int eval_start) const;

    // Sum of closes over the inclusive index range [first, last], O(1).
    double close_sum(int first, int last) const;
    // Sum of |s(k) - s(k-1)| for k in [first, last] (first >= 1), O(1).
    double abs_delta_sum(int first, int last) const;

private:
    std::string symbol_;
    std::vector<std::string> dates_;
    std::vector<double> closes_;
    std::vector<double> close_prefix_;    // close_prefix_[i] = sum of closes_[0..i-1]
    std::vector<double> abs_delta_prefix_; // [i] = sum of |delta| for k in [1..i]
    int eval_start_ = 0;
};

// Causal window over a series: exposes prices up to absolute index `now`
// and nothing later. Controllers and predictors only ever see one of these.
class HistoryView {
public:
    HistoryView(const PriceSeries& series, int now);

    int now() const { return now_; }
    const std::string& symbol() const { return series_->symbol(); }

    // s at absolute index i; throws ContractViolation if i > now.
    double at(int i) const;
    // s(t-k) for k >= 0.
    double back(int k) const { return at(now_ - k); }
    const std::string& date_at(int i) const;

    // Mean of the `count` closes ending at absolute index `last` (inclusive).
    double mean_ending_at(int last, int count) const;
    // Sum of |s(k)-s(k-1)| for k = 1..now. Zero when now == 0.
    double abs_delta_sum_to_now() const;

private:
    const PriceSeries* series_;
    int now_;
};

// Loads a CSV with a header row containing (at least) Date and Close
// columns. Extra columns are ignored; rows are sorted by date ascending.
PriceSeries load_price_series(const std::filesystem::path& csv_path, std::string symbol);

// Writes "Date,Close" rows; load(save(x)) reproduces x's (date, close) pairs.
void save_price_series(const PriceSeries& series, const std::filesystem::path& csv_path);

// Index of the first date >= boundary_date. The boundary must lie within
// [first date, last date] or a DomainError is thrown.
int split_index(const PriceSeries& series, const std::string& boundary_date);

// Convenience: same series with eval_start = split_index(...).
PriceSeries split_at_date(const PriceSeries& series, const std::string& boundary_date);

// closes[i] / closes[0]; first element is exactly 1.
std::vector<double> normalize(std::span<const double> closes);

struct ManifestEntry {
    std::string symbol;
    std::filesystem::path path;  // resolved relative to the manifest's directory
};

// Plain-text manifest: one "symbol,path" pair per line; blank lines and
// lines starting with '#' are skipped.
std::vector<ManifestEntry> parse_manifest(const std::filesystem::path& manifest_path);

}  // namespace tradectl
