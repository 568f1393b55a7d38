#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "tradectl/cli.hpp"

namespace {

std::vector<std::string> split_names(const std::string& csv) {
    std::vector<std::string> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"feedback-control trading strategy backtester"};
    app.require_subcommand(1);

    // ---- backtest ----------------------------------------------------
    auto* backtest = app.add_subcommand("backtest", "run the controller x predictor matrix");
    std::string bt_config, bt_manifest, bt_split, bt_out, bt_controllers, bt_predictors;
    std::uint64_t bt_seed = 0;
    int bt_jobs = 0;
    backtest->add_option("--config", bt_config, "JSON experiment config");
    backtest->add_option("--manifest", bt_manifest, "symbol,path manifest file");
    backtest->add_option("--split-date", bt_split, "first evaluation date (ISO)");
    backtest->add_option("--seed", bt_seed, "master seed");
    backtest->add_option("--out", bt_out, "output directory");
    backtest->add_option("--controllers", bt_controllers, "comma-separated controller ids");
    backtest->add_option("--predictors", bt_predictors, "comma-separated predictor ids");
    backtest->add_option("--jobs", bt_jobs, "worker threads");

    // ---- tune --------------------------------------------------------
    auto* tune = app.add_subcommand("tune", "grid-search parameters and report overfitting");
    std::string tn_config, tn_out, tn_controller, tn_predictor;
    std::uint64_t tn_seed = 0;
    int tn_jobs = 0;
    tune->add_option("--config", tn_config, "JSON experiment config");
    tune->add_option("--controller", tn_controller, "controller to tune");
    tune->add_option("--predictor", tn_predictor, "predictor used while tuning");
    tune->add_option("--seed", tn_seed, "master seed");
    tune->add_option("--out", tn_out, "output directory");
    tune->add_option("--jobs", tn_jobs, "worker threads");

    // ---- histopt -----------------------------------------------------
    auto* histopt = app.add_subcommand("histopt", "hindsight-optimal trajectory for one CSV");
    tradectl::HistOptArgs ho;
    std::string ho_csv, ho_out;
    histopt->add_option("csv", ho_csv, "price CSV (Date,Close)")->required();
    histopt->add_option("--symbol", ho.symbol, "symbol label (default: file stem)");
    histopt->add_option("--m0", ho.m0, "starting budget");
    histopt->add_option("--eps-buy", ho.costs.eps_buy, "proportional buy cost");
    histopt->add_option("--eps-sell", ho.costs.eps_sell, "proportional sell cost");
    histopt->add_option("--out", ho_out, "write the per-day table to this CSV");

    CLI11_PARSE(app, argc, argv);

    try {
        if (backtest->parsed()) {
            tradectl::ExperimentConfig cfg = bt_config.empty()
                                                 ? tradectl::default_experiment_config()
                                                 : tradectl::load_experiment_config(bt_config);
            if (!bt_manifest.empty()) cfg.manifest = bt_manifest;
            if (!bt_split.empty()) cfg.split_date = bt_split;
            if (backtest->count("--seed")) cfg.seed = bt_seed;
            if (!bt_out.empty()) cfg.out_dir = bt_out;
            if (!bt_controllers.empty()) cfg.controllers = split_names(bt_controllers);
            if (!bt_predictors.empty()) cfg.predictors = split_names(bt_predictors);
            if (backtest->count("--jobs")) cfg.jobs = bt_jobs;
            return tradectl::cmd_backtest(cfg, std::cout, std::cerr);
        }
        if (tune->parsed()) {
            tradectl::ExperimentConfig cfg = tn_config.empty()
                                                 ? tradectl::default_experiment_config()
                                                 : tradectl::load_experiment_config(tn_config);
            if (!tn_controller.empty()) {
                cfg.tune_controller = tn_controller;
                cfg.tune_grid.clear();  // a flag-selected controller uses its default grid
            }
            if (!tn_predictor.empty()) cfg.tune_predictor = tn_predictor;
            if (tune->count("--seed")) cfg.seed = tn_seed;
            if (!tn_out.empty()) cfg.out_dir = tn_out;
            if (tune->count("--jobs")) cfg.jobs = tn_jobs;
            return tradectl::cmd_tune(cfg, std::cout, std::cerr);
        }
        ho.csv = ho_csv;
        ho.out_csv = ho_out;
        return tradectl::cmd_histopt(ho, std::cout, std::cerr);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
