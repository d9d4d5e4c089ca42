// d2dsim: run scenarios, sweeps, and replay manifests.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "d2dsim/experiment.hpp"

namespace {

using namespace d2dsim;

struct CommonOptions {
    std::string config_path;
    std::vector<int> n;
    std::optional<std::uint64_t> seed;
    std::optional<int> reps;
    std::optional<int> threads;
    std::string strategies;
    std::string out = "out";
};

void add_common(CLI::App* app, CommonOptions& o, bool n_list) {
    app->add_option("--config", o.config_path, "Scenario config (JSON); every field optional")->check(CLI::ExistingFile);
    if (n_list)
        app->add_option("--n", o.n, "Device counts, e.g. --n 5 50 100 200")->delimiter(',');
    else
        app->add_option("--n", o.n, "Device count")->expected(1);
    app->add_option("--seed", o.seed, "Base seed; repetition r uses seed + r");
    app->add_option("--reps", o.reps, "Repetitions per point");
    app->add_option("--threads", o.threads, "Worker threads");
    app->add_option("--strategies", o.strategies, "Comma list of dais,sumrate,random,nond2d,fuzzyart,dbscan,mec");
    app->add_option("--out", o.out, "Output directory");
}

ScenarioConfig load_config(const CommonOptions& o) {
    ScenarioConfig cfg;
    if (!o.config_path.empty()) {
        std::ifstream in(o.config_path);
        if (!in) throw std::runtime_error("cannot read " + o.config_path);
        nlohmann::json j;
        try {
            in >> j;
        } catch (const nlohmann::json::parse_error& e) {
            throw ConfigError(o.config_path + ": " + e.what());
        }
        cfg = scenario_from_json(j);
    }
    if (o.seed) cfg.base_seed = *o.seed;
    if (o.reps) cfg.repetitions = *o.reps;
    if (o.threads) cfg.threads = *o.threads;
    if (!o.n.empty()) cfg.n_devices = o.n.front();
    if (!o.strategies.empty()) {
        cfg.strategies.clear();
        std::stringstream ss(o.strategies);
        for (std::string name; std::getline(ss, name, ',');) {
            const auto s = strategy_from_string(name);
            if (!s) throw ConfigError("strategies: unknown strategy '" + name + "'");
            cfg.strategies.push_back(*s);
        }
    }
    cfg.validate();
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Single-cell D2D transmission-mode selection simulator"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(kVersion));

    CommonOptions run_opts;
    auto* run = app.add_subcommand("run", "Run every strategy over one or more device counts");
    add_common(run, run_opts, true);

    CommonOptions sweep_opts;
    std::string variable = "wdr_threshold";
    std::vector<double> values;
    std::optional<double> start, stop, step;
    auto* sweep = app.add_subcommand("sweep", "Sweep one parameter, writing sweep.csv");
    add_common(sweep, sweep_opts, false);
    sweep->add_option("--var", variable, "wdr_threshold | bpl_threshold | tx_power | n_devices");
    sweep->add_option("--values", values, "Explicit values")->delimiter(',');
    sweep->add_option("--start", start);
    sweep->add_option("--stop", stop);
    sweep->add_option("--step", step);

    std::string manifest_path, tables_out = "out";
    auto* tables = app.add_subcommand("tables", "Re-run a manifest and re-emit its CSVs");
    tables->add_option("manifest", manifest_path, "manifest.json from an earlier run")->required()->check(CLI::ExistingFile);
    tables->add_option("--out", tables_out, "Output directory");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run) {
            const ScenarioConfig cfg = load_config(run_opts);
            const std::vector<int> ns = run_opts.n.empty() ? std::vector<int>{cfg.n_devices} : run_opts.n;
            run_and_emit(cfg, ns, run_opts.out);
            std::cout << "wrote tables for " << ns.size() << " device count(s) to " << run_opts.out << '\n';
        } else if (*sweep) {
            const ScenarioConfig cfg = load_config(sweep_opts);
            const auto var = sweep_variable_from_string(variable);
            if (!var) throw ConfigError("--var: unknown sweep variable '" + variable + "'");
            SweepSpec spec;
            if (!values.empty())
                spec = SweepSpec{*var, values};
            else if (start || stop || step) {
                if (!(start && stop && step)) throw ConfigError("--start, --stop and --step go together");
                spec = SweepSpec::range(*var, *start, *stop, *step);
            } else {
                spec = SweepSpec::defaults(*var);
            }
            sweep_and_emit(cfg, spec, sweep_opts.out);
            std::cout << "wrote " << spec.values.size() << "-point sweep to " << sweep_opts.out << '\n';
        } else if (*tables) {
            std::ifstream in(manifest_path);
            nlohmann::json j;
            in >> j;
            replay_manifest(parse_manifest(j), tables_out);
            std::cout << "replayed " << manifest_path << " into " << tables_out << '\n';
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
