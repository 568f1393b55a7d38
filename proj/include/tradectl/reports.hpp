#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "tradectl/harness.hpp"
#include "tradectl/histopt.hpp"
#include "tradectl/tuner.hpp"

namespace tradectl {

// Shortest round-trip representation (locale independent), so identical
// inputs always serialize to identical bytes.
std::string format_compact(double v);
// Fixed decimals, for human-facing money/percentage columns.
std::string format_fixed(double v, int decimals);

void write_summary_csv(const std::filesystem::path& path, const std::vector<SummaryRow>& rows);

// Text table grouped into one section per predictor plus a baseline
// section, mirroring the CSV contents at one decimal place.
std::string render_summary_text(const std::vector<SummaryRow>& rows);

// One trade per row: t,date,kind,price,shares,cash_after,wealth_after.
void write_trades_csv(const std::filesystem::path& path, const RunResult& run);

// Tidy per-day trace: t,date,series,value with series in {price, wealth}.
void write_trace_csv(const std::filesystem::path& path, const RunResult& run);

void write_overfit_csv(const std::filesystem::path& path, const OverfitReport& report);
std::string render_overfit_text(const OverfitReport& report);

// Per-day hindsight table: t,date,close,signal,wealth.
void write_trajectory_csv(const std::filesystem::path& path,
                          const std::vector<std::string>& dates,
                          const std::vector<double>& closes, const OptimalTrajectory& traj);
std::string render_trajectory_text(const std::string& symbol,
                                   const std::vector<std::string>& dates,
                                   const std::vector<double>& closes,
                                   const OptimalTrajectory& traj, double m0);

}  // namespace tradectl
