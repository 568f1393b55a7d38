#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "tradectl/harness.hpp"
#include "tradectl/tuner.hpp"

namespace tradectl {

// Everything a backtest/tune invocation needs, assembled from the JSON
// config file plus command-line overrides. The effective configuration
// is echoed into the output directory so any result can be reproduced
// from its own artifacts.
struct ExperimentConfig {
    std::filesystem::path manifest = "data/synthetic/manifest.txt";
    std::string split_date = "2015-01-06";
    double m0 = 100000.0;
    CostModel costs{};
    std::uint64_t seed = 1;
    std::filesystem::path out_dir = "out";
    int jobs = 1;
    bool write_trades = true;
    bool write_traces = false;
    std::vector<std::string> controllers;  // defaults to all eight
    std::vector<std::string> predictors;   // defaults to all five
    std::map<std::string, ControllerSpec> params;  // resolved per-controller parameters

    std::string tune_controller = "ma_cross";
    std::string tune_predictor = "indifferent";
    std::vector<GridAxis> tune_grid;  // empty -> built-in default grid
};

// Config with every controller's documented default parameters.
ExperimentConfig default_experiment_config();

// Parses the JSON file on top of the defaults. Unknown parameter keys
// inside "params"/"tune" are rejected; the error names the offending key.
ExperimentConfig load_experiment_config(const std::filesystem::path& json_path);

// Serialized effective configuration (stable key order).
std::string experiment_config_json(const ExperimentConfig& cfg);

int cmd_backtest(const ExperimentConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_tune(const ExperimentConfig& cfg, std::ostream& out, std::ostream& err);

struct HistOptArgs {
    std::filesystem::path csv;
    std::string symbol;  // defaults to the file stem
    double m0 = 100000.0;
    CostModel costs{};
    std::filesystem::path out_csv;  // optional
};

int cmd_histopt(const HistOptArgs& args, std::ostream& out, std::ostream& err);

}  // namespace tradectl
