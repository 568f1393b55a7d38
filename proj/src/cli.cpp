#include "tradectl/cli.hpp"

#include <cctype>
#include <fstream>
#include <ostream>

#include "json.hpp"
#include "tradectl/errors.hpp"
#include "tradectl/reports.hpp"

namespace tradectl {

namespace {

using json = nlohmann::ordered_json;

const std::vector<std::string> kAllControllers = {
    "qp_eplus", "smpc_m100", "smpc_dh",   "ma_cross",
    "ma_sign",  "tr_inside", "tr_outside", "histopt_rt"};

const std::vector<std::string> kAllPredictors = {"perfect", "indifferent", "random",
                                                 "correct_sign", "wrong_sign"};

ControllerSpec default_spec(ControllerId id, const CostModel& costs) {
    ControllerSpec spec;
    spec.id = id;
    spec.smpc.eps = costs.eps_buy;
    switch (id) {
        case ControllerId::QpEplus:
            spec.smpc.m = 1;
            spec.smpc.alpha = 1.0;
            spec.smpc.beta = 1.0;
            spec.smpc.sigma_pert = 0.0;
            spec.smpc.vol_window = 100;
            break;
        case ControllerId::SmpcM100:
            spec.smpc.m = 100;
            spec.smpc.alpha = 10.0;
            spec.smpc.sigma_pert = 0.3;
            break;
        case ControllerId::SmpcDh:
            spec.smpc.m = 100;
            spec.smpc.sigma_pert = 0.3;
            break;
        case ControllerId::MaCross:
            spec.ma_cross = {1, 50};
            break;
        case ControllerId::MaSign:
            spec.ma_sign = {10, 100};
            break;
        case ControllerId::TrInside:
            spec.tr = {261, 100, 0.01};
            break;
        case ControllerId::TrOutside:
            spec.tr = {261, 20, 0.03};
            break;
        case ControllerId::HistOptRt:
            spec.histopt_rt = {1};
            break;
        case ControllerId::BuyAndHold:
            break;
    }
    return spec;
}

ControllerId require_controller(const std::string& name) {
    const auto id = controller_from_string(name);
    if (!id || *id == ControllerId::BuyAndHold)
        throw ConfigError("unknown controller \"" + name + "\"");
    return *id;
}

PredictorKind require_predictor(const std::string& name) {
    const auto kind = predictor_from_string(name);
    if (!kind) throw ConfigError("unknown predictor \"" + name + "\"");
    return *kind;
}

void apply_params(ControllerSpec& spec, const std::string& name, const json& obj) {
    for (const auto& [key, value] : obj.items()) {
        try {
            if (key == "m" && (spec.id == ControllerId::QpEplus ||
                               spec.id == ControllerId::SmpcM100 ||
                               spec.id == ControllerId::SmpcDh)) {
                spec.smpc.m = value.get<int>();
            } else if (key == "alpha" && spec.id == ControllerId::SmpcM100) {
                spec.smpc.alpha = value.get<double>();
            } else if (key == "beta" && spec.id == ControllerId::QpEplus) {
                spec.smpc.beta = value.get<double>();
            } else if (key == "sigma_pert" && (spec.id == ControllerId::QpEplus ||
                                               spec.id == ControllerId::SmpcM100 ||
                                               spec.id == ControllerId::SmpcDh)) {
                spec.smpc.sigma_pert = value.get<double>();
            } else if (key == "r" && (spec.id == ControllerId::QpEplus ||
                                      spec.id == ControllerId::SmpcM100 ||
                                      spec.id == ControllerId::SmpcDh)) {
                spec.smpc.r = value.get<double>();
            } else if (key == "eps" && (spec.id == ControllerId::QpEplus ||
                                        spec.id == ControllerId::SmpcM100 ||
                                        spec.id == ControllerId::SmpcDh)) {
                spec.smpc.eps = value.get<double>();
            } else if (key == "vol_window" && spec.id == ControllerId::QpEplus) {
                spec.smpc.vol_window = value.get<int>();
            } else if (key == "p_short" && spec.id == ControllerId::MaCross) {
                spec.ma_cross.p_short = value.get<int>();
            } else if (key == "p_long" && spec.id == ControllerId::MaCross) {
                spec.ma_cross.p_long = value.get<int>();
            } else if (key == "t_ma" && spec.id == ControllerId::MaSign) {
                spec.ma_sign.t_ma = value.get<int>();
            } else if (key == "p_ma" && spec.id == ControllerId::MaSign) {
                spec.ma_sign.p_ma = value.get<int>();
            } else if (key == "t_win" && (spec.id == ControllerId::TrInside ||
                                          spec.id == ControllerId::TrOutside)) {
                spec.tr.t_win = value.get<int>();
            } else if (key == "p_tr" && (spec.id == ControllerId::TrInside ||
                                         spec.id == ControllerId::TrOutside)) {
                spec.tr.p_tr = value.get<int>();
            } else if (key == "eps_tr" && (spec.id == ControllerId::TrInside ||
                                           spec.id == ControllerId::TrOutside)) {
                spec.tr.eps_tr = value.get<double>();
            } else if (key == "t_ho" && spec.id == ControllerId::HistOptRt) {
                spec.histopt_rt.t_ho = value.get<int>();
            } else {
                throw ConfigError("params." + name + ": unknown parameter \"" + key + "\"");
            }
        } catch (const json::exception&) {
            throw ConfigError("params." + name + "." + key + ": bad value type");
        }
    }
}

json params_json(const ControllerSpec& spec) {
    json obj = json::object();
    switch (spec.id) {
        case ControllerId::QpEplus:
            obj["m"] = spec.smpc.m;
            obj["beta"] = spec.smpc.beta;
            obj["sigma_pert"] = spec.smpc.sigma_pert;
            obj["vol_window"] = spec.smpc.vol_window;
            obj["r"] = spec.smpc.r;
            obj["eps"] = spec.smpc.eps;
            break;
        case ControllerId::SmpcM100:
            obj["m"] = spec.smpc.m;
            obj["alpha"] = spec.smpc.alpha;
            obj["sigma_pert"] = spec.smpc.sigma_pert;
            obj["r"] = spec.smpc.r;
            obj["eps"] = spec.smpc.eps;
            break;
        case ControllerId::SmpcDh:
            obj["m"] = spec.smpc.m;
            obj["sigma_pert"] = spec.smpc.sigma_pert;
            obj["r"] = spec.smpc.r;
            obj["eps"] = spec.smpc.eps;
            break;
        case ControllerId::MaCross:
            obj["p_short"] = spec.ma_cross.p_short;
            obj["p_long"] = spec.ma_cross.p_long;
            break;
        case ControllerId::MaSign:
            obj["t_ma"] = spec.ma_sign.t_ma;
            obj["p_ma"] = spec.ma_sign.p_ma;
            break;
        case ControllerId::TrInside:
        case ControllerId::TrOutside:
            obj["t_win"] = spec.tr.t_win;
            obj["p_tr"] = spec.tr.p_tr;
            obj["eps_tr"] = spec.tr.eps_tr;
            break;
        case ControllerId::HistOptRt:
            obj["t_ho"] = spec.histopt_rt.t_ho;
            break;
        case ControllerId::BuyAndHold:
            break;
    }
    return obj;
}

std::string sanitize(const std::string& name) {
    std::string out;
    for (const char c : name)
        out += (std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_') ? c : '_';
    return out;
}

struct LoadedUniverse {
    std::vector<PriceSeries> series;
    std::vector<std::string> warnings;
};

LoadedUniverse load_universe(const ExperimentConfig& cfg) {
    LoadedUniverse u;
    for (const ManifestEntry& entry : parse_manifest(cfg.manifest)) {
        try {
            u.series.push_back(
                split_at_date(load_price_series(entry.path, entry.symbol), cfg.split_date));
        } catch (const std::exception& e) {
            u.warnings.push_back(entry.symbol + ": " + e.what());
        }
    }
    if (u.series.empty())
        throw ConfigError("no loadable series in manifest " + cfg.manifest.string());
    return u;
}

RunConfig make_run_config(const ExperimentConfig& cfg) {
    RunConfig rc;
    rc.m0 = cfg.m0;
    rc.costs = cfg.costs;
    rc.master_seed = cfg.seed;
    return rc;
}

void write_warnings(const std::filesystem::path& dir, const std::vector<std::string>& warnings,
                    std::ostream& out) {
    if (warnings.empty()) return;
    std::ofstream file(dir / "warnings.txt");
    for (const std::string& w : warnings) {
        file << w << '\n';
        out << "warning: " << w << '\n';
    }
}

}  // namespace

ExperimentConfig default_experiment_config() {
    ExperimentConfig cfg;
    cfg.controllers = kAllControllers;
    cfg.predictors = kAllPredictors;
    for (const std::string& name : kAllControllers)
        cfg.params.emplace(name, default_spec(require_controller(name), cfg.costs));
    return cfg;
}

ExperimentConfig load_experiment_config(const std::filesystem::path& json_path) {
    std::ifstream in(json_path);
    if (!in) throw ConfigError("cannot open config: " + json_path.string());
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::exception& e) {
        throw ParseError(json_path.string() + ": " + e.what());
    }

    ExperimentConfig cfg = default_experiment_config();
    try {
        if (doc.contains("manifest")) cfg.manifest = doc["manifest"].get<std::string>();
        if (doc.contains("split_date")) cfg.split_date = doc["split_date"].get<std::string>();
        if (doc.contains("m0")) cfg.m0 = doc["m0"].get<double>();
        if (doc.contains("eps_buy")) cfg.costs.eps_buy = doc["eps_buy"].get<double>();
        if (doc.contains("eps_sell")) cfg.costs.eps_sell = doc["eps_sell"].get<double>();
        if (doc.contains("seed")) cfg.seed = doc["seed"].get<std::uint64_t>();
        if (doc.contains("out")) cfg.out_dir = doc["out"].get<std::string>();
        if (doc.contains("jobs")) cfg.jobs = doc["jobs"].get<int>();
        if (doc.contains("write_trades")) cfg.write_trades = doc["write_trades"].get<bool>();
        if (doc.contains("write_traces")) cfg.write_traces = doc["write_traces"].get<bool>();
        if (doc.contains("controllers"))
            cfg.controllers = doc["controllers"].get<std::vector<std::string>>();
        if (doc.contains("predictors"))
            cfg.predictors = doc["predictors"].get<std::vector<std::string>>();

        // re-derive parameter defaults against the configured costs, then
        // apply explicit overrides
        cfg.params.clear();
        for (const std::string& name : kAllControllers)
            cfg.params.emplace(name, default_spec(require_controller(name), cfg.costs));
        if (doc.contains("params")) {
            if (!doc["params"].is_object()) throw ConfigError("params must be an object");
            for (const auto& [name, obj] : doc["params"].items()) {
                const auto it = cfg.params.find(name);
                if (it == cfg.params.end())
                    throw ConfigError("params: unknown controller \"" + name + "\"");
                apply_params(it->second, name, obj);
            }
        }

        if (doc.contains("tune")) {
            const json& tune = doc["tune"];
            if (tune.contains("controller"))
                cfg.tune_controller = tune["controller"].get<std::string>();
            if (tune.contains("predictor"))
                cfg.tune_predictor = tune["predictor"].get<std::string>();
            if (tune.contains("grid")) {
                if (!tune["grid"].is_object()) throw ConfigError("tune.grid must be an object");
                cfg.tune_grid.clear();
                for (const auto& [axis, range] : tune["grid"].items()) {
                    GridAxis ga;
                    ga.name = axis;
                    if (range.is_object() && range.contains("from") && range.contains("to")) {
                        const int from = range["from"].get<int>();
                        const int to = range["to"].get<int>();
                        if (to < from)
                            throw ConfigError("tune.grid." + axis + ": to < from");
                        for (int v = from; v <= to; ++v) ga.values.push_back(v);
                    } else if (range.is_object() && range.contains("values")) {
                        ga.values = range["values"].get<std::vector<double>>();
                    } else {
                        throw ConfigError("tune.grid." + axis +
                                          ": expected {\"from\",\"to\"} or {\"values\": [...]}");
                    }
                    cfg.tune_grid.push_back(std::move(ga));
                }
            }
        }
    } catch (const json::exception& e) {
        throw ConfigError(json_path.string() + ": " + e.what());
    }
    return cfg;
}

std::string experiment_config_json(const ExperimentConfig& cfg) {
    json doc;
    doc["manifest"] = cfg.manifest.string();
    doc["split_date"] = cfg.split_date;
    doc["m0"] = cfg.m0;
    doc["eps_buy"] = cfg.costs.eps_buy;
    doc["eps_sell"] = cfg.costs.eps_sell;
    doc["seed"] = cfg.seed;
    doc["out"] = cfg.out_dir.string();
    doc["jobs"] = cfg.jobs;
    doc["write_trades"] = cfg.write_trades;
    doc["write_traces"] = cfg.write_traces;
    doc["controllers"] = cfg.controllers;
    doc["predictors"] = cfg.predictors;
    json params = json::object();
    for (const auto& [name, spec] : cfg.params) params[name] = params_json(spec);
    doc["params"] = params;
    json tune;
    tune["controller"] = cfg.tune_controller;
    tune["predictor"] = cfg.tune_predictor;
    json grid = json::object();
    for (const GridAxis& axis : cfg.tune_grid) grid[axis.name] = {{"values", axis.values}};
    tune["grid"] = grid;
    doc["tune"] = tune;
    return doc.dump(2) + "\n";
}

int cmd_backtest(const ExperimentConfig& cfg, std::ostream& out, std::ostream& err) {
    try {
        LoadedUniverse universe = load_universe(cfg);

        std::vector<ControllerSpec> specs;
        for (const std::string& name : cfg.controllers) {
            require_controller(name);
            specs.push_back(cfg.params.at(name));
        }
        std::vector<PredictorKind> predictors;
        for (const std::string& name : cfg.predictors)
            predictors.push_back(require_predictor(name));

        MatrixResult matrix =
            run_matrix(universe.series, specs, predictors, make_run_config(cfg), cfg.jobs);
        std::vector<std::string> warnings = universe.warnings;
        warnings.insert(warnings.end(), matrix.warnings.begin(), matrix.warnings.end());

        std::filesystem::create_directories(cfg.out_dir);
        {
            std::ofstream echo(cfg.out_dir / "effective_config.json");
            echo << experiment_config_json(cfg);
        }
        write_summary_csv(cfg.out_dir / "summary.csv", matrix.rows);
        const std::string text = render_summary_text(matrix.rows);
        {
            std::ofstream txt(cfg.out_dir / "summary.txt");
            txt << text;
        }
        for (const RunResult& run : matrix.runs) {
            const std::string stem = sanitize(run.symbol) + "__" + sanitize(run.controller) +
                                     "__" + sanitize(run.predictor) + ".csv";
            if (cfg.write_trades) write_trades_csv(cfg.out_dir / "trades" / stem, run);
            if (cfg.write_traces) write_trace_csv(cfg.out_dir / "traces" / stem, run);
        }
        write_warnings(cfg.out_dir, warnings, out);

        out << text;
        out << matrix.runs.size() << " runs over " << universe.series.size()
            << " series; results in " << cfg.out_dir.string() << '\n';
        return 0;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
}

int cmd_tune(const ExperimentConfig& cfg, std::ostream& out, std::ostream& err) {
    try {
        LoadedUniverse universe = load_universe(cfg);

        ParamGrid grid;
        grid.id = require_controller(cfg.tune_controller);
        if (!cfg.tune_grid.empty())
            grid.axes = cfg.tune_grid;
        else if (grid.id == ControllerId::MaCross)
            grid = default_ma_cross_grid();
        else
            throw ConfigError("no built-in grid for " + cfg.tune_controller +
                              "; set tune.grid in the config");

        const OverfitReport report = overfitting_report(
            universe.series, grid, require_predictor(cfg.tune_predictor), make_run_config(cfg),
            cfg.jobs);
        std::vector<std::string> warnings = universe.warnings;
        warnings.insert(warnings.end(), report.warnings.begin(), report.warnings.end());

        std::filesystem::create_directories(cfg.out_dir);
        {
            std::ofstream echo(cfg.out_dir / "effective_config.json");
            echo << experiment_config_json(cfg);
        }
        write_overfit_csv(cfg.out_dir / "overfit.csv", report);
        const std::string text = render_overfit_text(report);
        {
            std::ofstream txt(cfg.out_dir / "overfit.txt");
            txt << text;
        }
        write_warnings(cfg.out_dir, warnings, out);

        out << "tuned " << cfg.tune_controller << " (predictor: " << cfg.tune_predictor << ")\n"
            << text;
        out << "results in " << cfg.out_dir.string() << '\n';
        return 0;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
}

int cmd_histopt(const HistOptArgs& args, std::ostream& out, std::ostream& err) {
    try {
        const std::string symbol = args.symbol.empty() ? args.csv.stem().string() : args.symbol;
        const PriceSeries series = load_price_series(args.csv, symbol);
        const OptimalTrajectory traj = optimal_trajectory(series.closes(), args.m0, args.costs);
        if (!args.out_csv.empty())
            write_trajectory_csv(args.out_csv, series.dates(),
                                 {series.closes().begin(), series.closes().end()}, traj);
        out << render_trajectory_text(symbol, series.dates(),
                                      {series.closes().begin(), series.closes().end()}, traj,
                                      args.m0);
        return 0;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
}

}  // namespace tradectl
