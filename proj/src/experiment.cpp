#include "d2dsim/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <functional>
#include <fstream>
#include <set>
#include <thread>
#include <tuple>
#include <variant>

#include "d2dsim/csv.hpp"
#include "d2dsim/rng.hpp"

namespace d2dsim {

using nlohmann::json;

// ---------------------------------------------------------------- names

std::string_view to_string(Strategy s) {
    switch (s) {
        case Strategy::Dais: return "dais";
        case Strategy::SumRate: return "sumrate";
        case Strategy::Random: return "random";
        case Strategy::NonD2D: return "nond2d";
        case Strategy::FuzzyArt: return "fuzzyart";
        case Strategy::Dbscan: return "dbscan";
        case Strategy::Mec: return "mec";
    }
    return "?";
}

std::optional<Strategy> strategy_from_string(std::string_view s) {
    for (Strategy st : kAllStrategies)
        if (to_string(st) == s) return st;
    return std::nullopt;
}

std::string_view to_string(SweepVariable v) {
    switch (v) {
        case SweepVariable::WdrThreshold: return "wdr_threshold";
        case SweepVariable::BplThreshold: return "bpl_threshold";
        case SweepVariable::TxPower: return "tx_power";
        case SweepVariable::NDevices: return "n_devices";
    }
    return "?";
}

std::optional<SweepVariable> sweep_variable_from_string(std::string_view s) {
    for (auto v : {SweepVariable::WdrThreshold, SweepVariable::BplThreshold, SweepVariable::TxPower,
                   SweepVariable::NDevices})
        if (to_string(v) == s) return v;
    return std::nullopt;
}

namespace {
std::size_t strategy_rank(Strategy s) { return static_cast<std::size_t>(s); }
}  // namespace

// ---------------------------------------------------------------- config

void ScenarioConfig::validate() const {
    if (n_devices < 1) throw ConfigError("n_devices must be >= 1");
    if (!(cell_radius > 0.0) || !std::isfinite(cell_radius)) throw ConfigError("cell_radius must be > 0");
    if (repetitions < 1) throw ConfigError("repetitions must be >= 1");
    if (threads < 1) throw ConfigError("threads must be >= 1");
    if (strategies.empty()) throw ConfigError("strategies must name at least one strategy");
    std::set<Strategy> seen;
    for (Strategy s : strategies)
        if (!seen.insert(s).second) throw ConfigError("strategies lists '" + std::string(to_string(s)) + "' twice");
    channel.validate(cell_radius);
    dais.validate();
    sumrate.validate();
    ulc.fuzzyart.validate();
    ulc.dbscan.validate();
    ulc.mec.validate();
    ulc.heuristic.validate(channel);
}

namespace {

using FieldPtr = std::variant<double*, int*, bool*, std::uint64_t*>;
struct Field {
    const char* name;
    FieldPtr ptr;
};

json field_value(const FieldPtr& p) {
    return std::visit([](auto* v) { return json(*v); }, p);
}

json section_to_json(std::initializer_list<Field> fields) {
    json j = json::object();
    for (const auto& f : fields) j[f.name] = field_value(f.ptr);
    return j;
}

void read_section(const json& j, const std::string& section, std::initializer_list<Field> fields) {
    if (!j.is_object()) throw ConfigError(section + ": expected an object");
    for (const auto& [key, value] : j.items()) {
        const auto it = std::find_if(fields.begin(), fields.end(), [&](const Field& f) { return key == f.name; });
        const std::string path = section.empty() ? key : section + "." + key;
        if (it == fields.end()) throw ConfigError(path + ": unknown field");
        std::visit(
            [&](auto* out) {
                using T = std::remove_pointer_t<decltype(out)>;
                if constexpr (std::is_same_v<T, bool>) {
                    if (!value.is_boolean()) throw ConfigError(path + ": expected true or false");
                    *out = value.get<bool>();
                } else if constexpr (std::is_same_v<T, double>) {
                    if (!value.is_number()) throw ConfigError(path + ": expected a number");
                    *out = value.get<double>();
                } else {
                    if (!value.is_number_integer()) throw ConfigError(path + ": expected an integer");
                    if constexpr (std::is_same_v<T, std::uint64_t>) {
                        if (value.is_number_unsigned())
                            *out = value.get<std::uint64_t>();
                        else if (value.get<std::int64_t>() >= 0)
                            *out = static_cast<std::uint64_t>(value.get<std::int64_t>());
                        else
                            throw ConfigError(path + ": expected a non-negative integer");
                    } else {
                        *out = value.get<int>();
                    }
                }
            },
            it->ptr);
    }
}

// One table of field bindings per section so reading and writing agree.
#define D2DSIM_CHANNEL_FIELDS(c)                                                                              \
    {{"freq_cellular", &c.freq_cellular}, {"freq_d2d", &c.freq_d2d},           {"bandwidth", &c.bandwidth}, \
     {"noise_figure", &c.noise_figure},   {"default_tp", &c.default_tp},       {"min_tp", &c.min_tp},       \
     {"tp_step", &c.tp_step},             {"circuit_power", &c.circuit_power}, {"d2d_range", &c.d2d_range}, \
     {"d_min", &c.d_min},                 {"power_control_margin", &c.power_control_margin}}
#define D2DSIM_DAIS_FIELDS(d)                                                                    \
    {{"wdr_threshold", &d.wdr_threshold}, {"bpl_threshold", &d.bpl_threshold}, {"d2d_range", &d.d2d_range}, \
     {"replacement", &d.replacement}}
#define D2DSIM_SUMRATE_FIELDS(s) \
    {{"exhaustive_max_n", &s.exhaustive_max_n}, {"d2d_range", &s.d2d_range}, {"rehome", &s.rehome}}
#define D2DSIM_FUZZY_FIELDS(f)                                                                           \
    {{"vigilance", &f.vigilance}, {"choice", &f.choice},   {"learning", &f.learning},                   \
     {"max_clusters", &f.max_clusters}, {"epochs", &f.epochs}, {"category_diameter", &f.category_diameter}}
#define D2DSIM_DBSCAN_FIELDS(d) {{"eps", &d.eps}, {"min_pts", &d.min_pts}}
#define D2DSIM_MEC_FIELDS(m)                                                                                  \
    {{"k", &m.k}, {"max_iterations", &m.max_iterations}, {"convergence", &m.convergence}, {"neighbors", &m.neighbors}, \
     {"neighbor_radius", &m.neighbor_radius}}
#define D2DSIM_HEURISTIC_FIELDS(h) {{"radius", &h.radius}}

}  // namespace

json to_json(const ScenarioConfig& cfg_in) {
    ScenarioConfig cfg = cfg_in;  // field tables take non-const pointers
    json j;
    j["n_devices"] = cfg.n_devices;
    j["cell_radius"] = cfg.cell_radius;
    j["base_seed"] = cfg.base_seed;
    j["repetitions"] = cfg.repetitions;
    j["threads"] = cfg.threads;
    j["strategies"] = json::array();
    for (Strategy s : cfg.strategies) j["strategies"].push_back(std::string(to_string(s)));
    j["channel"] = section_to_json(D2DSIM_CHANNEL_FIELDS(cfg.channel));
    j["dais"] = section_to_json(D2DSIM_DAIS_FIELDS(cfg.dais));
    j["sumrate"] = section_to_json(D2DSIM_SUMRATE_FIELDS(cfg.sumrate));
    j["fuzzyart"] = section_to_json(D2DSIM_FUZZY_FIELDS(cfg.ulc.fuzzyart));
    j["dbscan"] = section_to_json(D2DSIM_DBSCAN_FIELDS(cfg.ulc.dbscan));
    j["mec"] = section_to_json(D2DSIM_MEC_FIELDS(cfg.ulc.mec));
    j["heuristic"] = section_to_json(D2DSIM_HEURISTIC_FIELDS(cfg.ulc.heuristic));
    return j;
}

ScenarioConfig scenario_from_json(const json& j) {
    if (!j.is_object()) throw ConfigError("config: expected a JSON object");
    ScenarioConfig cfg;
    json top = json::object();
    for (const auto& [key, value] : j.items()) {
        if (key == "strategies") {
            if (!value.is_array()) throw ConfigError("strategies: expected an array of names");
            cfg.strategies.clear();
            for (const auto& s : value) {
                const auto st = s.is_string() ? strategy_from_string(s.get<std::string>()) : std::nullopt;
                if (!st) throw ConfigError("strategies: unknown strategy " + s.dump());
                cfg.strategies.push_back(*st);
            }
        } else if (key == "channel") {
            read_section(value, "channel", D2DSIM_CHANNEL_FIELDS(cfg.channel));
        } else if (key == "dais") {
            read_section(value, "dais", D2DSIM_DAIS_FIELDS(cfg.dais));
        } else if (key == "sumrate") {
            read_section(value, "sumrate", D2DSIM_SUMRATE_FIELDS(cfg.sumrate));
        } else if (key == "fuzzyart") {
            read_section(value, "fuzzyart", D2DSIM_FUZZY_FIELDS(cfg.ulc.fuzzyart));
        } else if (key == "dbscan") {
            read_section(value, "dbscan", D2DSIM_DBSCAN_FIELDS(cfg.ulc.dbscan));
        } else if (key == "mec") {
            read_section(value, "mec", D2DSIM_MEC_FIELDS(cfg.ulc.mec));
        } else if (key == "heuristic") {
            read_section(value, "heuristic", D2DSIM_HEURISTIC_FIELDS(cfg.ulc.heuristic));
        } else {
            top[key] = value;
        }
    }
    read_section(top, "",
                 {{"n_devices", &cfg.n_devices},
                  {"cell_radius", &cfg.cell_radius},
                  {"base_seed", &cfg.base_seed},
                  {"repetitions", &cfg.repetitions},
                  {"threads", &cfg.threads}});
    cfg.validate();
    return cfg;
}

// ---------------------------------------------------------------- runs

NetworkState build_state(Strategy s, const Topology& topo, const ScenarioConfig& cfg) {
    switch (s) {
        case Strategy::Dais: return run_dais(topo, cfg.dais, cfg.channel);
        case Strategy::SumRate: return run_sum_rate(topo, cfg.channel, cfg.sumrate);
        case Strategy::Random: return run_random(topo, cfg.channel, topo.seed);
        case Strategy::NonD2D: return run_non_d2d(topo, cfg.channel);
        case Strategy::FuzzyArt: return run_ulc_strategy(UlcAlgorithm::FuzzyArt, topo, cfg.channel, cfg.ulc);
        case Strategy::Dbscan: return run_ulc_strategy(UlcAlgorithm::Dbscan, topo, cfg.channel, cfg.ulc);
        case Strategy::Mec: return run_ulc_strategy(UlcAlgorithm::Mec, topo, cfg.channel, cfg.ulc);
    }
    throw std::invalid_argument("build_state: unknown strategy");
}

RunRecord run_strategy(Strategy s, const Topology& topo, const ScenarioConfig& cfg, int repetition) {
    const auto t0 = std::chrono::steady_clock::now();
    NetworkState state = build_state(s, topo, cfg);
    const auto t1 = std::chrono::steady_clock::now();
    validate(state);

    RunRecord r;
    r.strategy = s;
    r.n = static_cast<int>(topo.size());
    r.repetition = repetition;
    r.seed = topo.seed;
    r.exec_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
    r.metrics = make_report(state, r.exec_ms);
    return r;
}

namespace {

Stat stat_of(const std::vector<double>& v) {
    Stat s;
    if (v.empty()) return s;
    double sum = 0.0;
    for (double x : v) sum += x;
    s.mean = sum / static_cast<double>(v.size());
    if (v.size() > 1) {
        double ss = 0.0;
        for (double x : v) ss += (x - s.mean) * (x - s.mean);
        s.stdev = std::sqrt(ss / static_cast<double>(v.size() - 1));
    }
    return s;
}

template <class F>
Stat stat_by(const std::vector<const RunRecord*>& runs, F f) {
    std::vector<double> v;
    v.reserve(runs.size());
    for (const auto* r : runs) v.push_back(static_cast<double>(f(*r)));
    return stat_of(v);
}

// Run jobs [0, count) on up to `threads` workers; first exception wins.
template <class F>
void parallel_for(std::size_t count, int threads, F job) {
    const auto workers = static_cast<std::size_t>(std::max(1, threads));
    if (workers == 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) job(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(count);
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < std::min(workers, count); ++w)
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < count; i = next++) {
                try {
                    job(i);
                } catch (...) {
                    errors[i] = std::current_exception();
                }
            }
        });
    for (auto& t : pool) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

}  // namespace

StrategySummary summarize(Strategy s, int n, const std::vector<RunRecord>& runs) {
    std::vector<const RunRecord*> mine;
    for (const auto& r : runs)
        if (r.strategy == s && r.n == n) mine.push_back(&r);
    StrategySummary out;
    out.strategy = s;
    out.n = n;
    out.repetitions = static_cast<int>(mine.size());
    out.total_se = stat_by(mine, [](const RunRecord& r) { return r.metrics.total_se; });
    out.total_pc = stat_by(mine, [](const RunRecord& r) { return r.metrics.total_pc; });
    out.exec_ms = stat_by(mine, [](const RunRecord& r) { return r.exec_ms; });
    out.messages = stat_by(mine, [](const RunRecord& r) { return r.metrics.message_count; });
    out.non_d2d = stat_by(mine, [](const RunRecord& r) { return r.metrics.non_d2d_count; });
    out.clusters = stat_by(mine, [](const RunRecord& r) { return r.metrics.cluster_count; });
    out.cluster_devices = stat_by(mine, [](const RunRecord& r) { return r.metrics.cluster_device_total; });
    out.mean_per_cluster = stat_by(mine, [](const RunRecord& r) { return r.metrics.mean_devices_per_cluster; });
    out.mhr = stat_by(mine, [](const RunRecord& r) { return r.metrics.mhr_count; });
    out.mhr_no_sharing = stat_by(mine, [](const RunRecord& r) { return r.metrics.mhr_no_sharing_count; });
    return out;
}

ScenarioResult run_scenario(const ScenarioConfig& cfg) {
    cfg.validate();
    const auto reps = static_cast<std::size_t>(cfg.repetitions);
    const auto ns = cfg.strategies.size();
    std::vector<Topology> topos;
    topos.reserve(reps);
    for (std::size_t r = 0; r < reps; ++r)
        topos.push_back(generate_topology(cfg.n_devices, cfg.cell_radius, cfg.seed_for(static_cast<int>(r))));

    ScenarioResult res;
    res.n = cfg.n_devices;
    res.runs.resize(reps * ns);
    parallel_for(reps * ns, cfg.threads, [&](std::size_t job) {
        const std::size_t si = job / reps, r = job % reps;
        res.runs[job] = run_strategy(cfg.strategies[si], topos[r], cfg, static_cast<int>(r));
    });
    std::stable_sort(res.runs.begin(), res.runs.end(), [](const RunRecord& a, const RunRecord& b) {
        return strategy_rank(a.strategy) < strategy_rank(b.strategy);
    });
    for (Strategy s : kAllStrategies)
        if (std::find(cfg.strategies.begin(), cfg.strategies.end(), s) != cfg.strategies.end())
            res.summaries.push_back(summarize(s, cfg.n_devices, res.runs));
    return res;
}

// ---------------------------------------------------------------- sweeps

SweepSpec SweepSpec::range(SweepVariable v, double start, double stop, double step) {
    if (step == 0.0 || !std::isfinite(step)) throw ConfigError("sweep: step must be non-zero");
    if ((stop - start) / step < -1e-9) throw ConfigError("sweep: step points away from stop");
    SweepSpec s;
    s.variable = v;
    const auto count = static_cast<long>(std::floor((stop - start) / step + 1e-9)) + 1;
    for (long i = 0; i < count; ++i) s.values.push_back(start + static_cast<double>(i) * step);
    return s;
}

SweepSpec SweepSpec::defaults(SweepVariable v) {
    switch (v) {
        case SweepVariable::WdrThreshold:
        case SweepVariable::BplThreshold: return range(v, 0.0, 100.0, 5.0);
        case SweepVariable::TxPower: return range(v, 160.0, 60.0, -10.0);
        case SweepVariable::NDevices: return SweepSpec{v, {5, 50, 100, 200}};
    }
    throw ConfigError("sweep: unknown variable");
}

ScenarioConfig apply_sweep_value(ScenarioConfig cfg, SweepVariable v, double value) {
    switch (v) {
        case SweepVariable::WdrThreshold: cfg.dais.wdr_threshold = value; break;
        case SweepVariable::BplThreshold: cfg.dais.bpl_threshold = value; break;
        case SweepVariable::TxPower: cfg.channel.default_tp = value; break;
        case SweepVariable::NDevices:
            if (value != std::floor(value)) throw ConfigError("sweep: n_devices values must be integers");
            cfg.n_devices = static_cast<int>(value);
            break;
    }
    return cfg;
}

std::vector<SweepRow> run_sweep(const ScenarioConfig& cfg, const SweepSpec& sweep) {
    if (sweep.values.empty()) throw ConfigError("sweep: no values");
    const bool dais_selected =
        std::find(cfg.strategies.begin(), cfg.strategies.end(), Strategy::Dais) != cfg.strategies.end();
    if ((sweep.variable == SweepVariable::WdrThreshold || sweep.variable == SweepVariable::BplThreshold) &&
        !dais_selected)
        throw ConfigError("sweep: " + std::string(to_string(sweep.variable)) + " only applies to dais, which is not selected");
    std::vector<SweepRow> rows;
    for (double v : sweep.values) {
        const ScenarioConfig point = apply_sweep_value(cfg, sweep.variable, v);
        point.validate();
        for (auto& s : run_scenario(point).summaries) rows.push_back({v, s});
    }
    return rows;
}

void write_sweep_csv(std::ostream& out, SweepVariable v, const std::vector<SweepRow>& rows) {
    out << "variable,value,n,strategy,repetitions,total_se_mean,total_se_std,total_pc_mean,total_pc_std,"
           "messages_mean,non_d2d_mean,cluster_devices_mean,clusters_mean,mhr_mean,mhr_no_sharing_mean\n";
    for (const auto& r : rows) {
        const auto& s = r.summary;
        out << to_string(v) << ',' << csv::number(r.value) << ',' << s.n << ',' << to_string(s.strategy) << ','
            << s.repetitions << ',' << csv::number(s.total_se.mean) << ',' << csv::number(s.total_se.stdev) << ','
            << csv::number(s.total_pc.mean) << ',' << csv::number(s.total_pc.stdev) << ','
            << csv::number(s.messages.mean) << ',' << csv::number(s.non_d2d.mean) << ','
            << csv::number(s.cluster_devices.mean) << ',' << csv::number(s.clusters.mean) << ','
            << csv::number(s.mhr.mean) << ',' << csv::number(s.mhr_no_sharing.mean) << '\n';
    }
}

// ---------------------------------------------------------------- tables

namespace {

std::vector<StrategySummary> sorted(std::vector<StrategySummary> rows) {
    std::stable_sort(rows.begin(), rows.end(), [](const StrategySummary& a, const StrategySummary& b) {
        return std::pair(a.n, strategy_rank(a.strategy)) < std::pair(b.n, strategy_rank(b.strategy));
    });
    return rows;
}

void write_file(const std::filesystem::path& path, const std::function<void(std::ostream&)>& body) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    body(out);
    out.flush();
    if (!out) throw std::runtime_error("write failed for " + path.string());
}

void ensure_dir(const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw std::runtime_error("cannot create directory " + dir.string() + ": " + ec.message());
}

}  // namespace

void write_se_pc_csv(std::ostream& out, const std::vector<StrategySummary>& rows) {
    out << "n,strategy,total_se,total_pc\n";
    for (const auto& s : sorted(rows))
        out << s.n << ',' << to_string(s.strategy) << ',' << csv::number(s.total_se.mean) << ','
            << csv::number(s.total_pc.mean) << '\n';
}

void write_timing_csv(std::ostream& out, const std::vector<StrategySummary>& rows) {
    out << "n,strategy,time_units\n";
    for (const auto& s : sorted(rows)) out << s.n << ',' << to_string(s.strategy) << ',' << s.time_units() << '\n';
}

void write_cluster_quality_csv(std::ostream& out, const std::vector<StrategySummary>& rows) {
    out << "n,strategy,messages,non_d2d,cluster_devices,clusters\n";
    for (const auto& s : sorted(rows))
        out << s.n << ',' << to_string(s.strategy) << ',' << csv::number(s.messages.mean) << ','
            << csv::number(s.non_d2d.mean) << ',' << csv::number(s.cluster_devices.mean) << ','
            << csv::number(s.clusters.mean) << '\n';
}

void write_mhr_csv(std::ostream& out, const std::vector<StrategySummary>& rows) {
    out << "n,strategy,mhr,mhr_no_sharing\n";
    for (const auto& s : sorted(rows))
        out << s.n << ',' << to_string(s.strategy) << ',' << csv::number(s.mhr.mean) << ','
            << csv::number(s.mhr_no_sharing.mean) << '\n';
}

void write_runs_csv(std::ostream& out, const std::vector<RunRecord>& runs) {
    out << "n,strategy,repetition,seed,total_se,total_pc,messages,non_d2d,cluster_devices,clusters,mhr,mhr_no_sharing\n";
    for (const auto& r : runs) {
        const auto& m = r.metrics;
        out << r.n << ',' << to_string(r.strategy) << ',' << r.repetition << ',' << r.seed << ','
            << csv::number(m.total_se) << ',' << csv::number(m.total_pc) << ',' << m.message_count << ','
            << m.non_d2d_count << ',' << m.cluster_device_total << ',' << m.cluster_count << ',' << m.mhr_count << ','
            << m.mhr_no_sharing_count << '\n';
    }
}

void emit_tables(const std::vector<ScenarioResult>& results, const std::filesystem::path& dir) {
    if (results.empty()) throw std::invalid_argument("emit_tables: no results");
    ensure_dir(dir);
    std::vector<StrategySummary> rows;
    std::vector<RunRecord> runs;
    for (const auto& r : results) {
        rows.insert(rows.end(), r.summaries.begin(), r.summaries.end());
        runs.insert(runs.end(), r.runs.begin(), r.runs.end());
    }
    std::stable_sort(runs.begin(), runs.end(), [](const RunRecord& a, const RunRecord& b) {
        return std::tuple(a.n, strategy_rank(a.strategy), a.repetition) <
               std::tuple(b.n, strategy_rank(b.strategy), b.repetition);
    });
    write_file(dir / "se_pc.csv", [&](std::ostream& o) { write_se_pc_csv(o, rows); });
    write_file(dir / "timing.csv", [&](std::ostream& o) { write_timing_csv(o, rows); });
    write_file(dir / "cluster_quality.csv", [&](std::ostream& o) { write_cluster_quality_csv(o, rows); });
    write_file(dir / "mhr.csv", [&](std::ostream& o) { write_mhr_csv(o, rows); });
    write_file(dir / "runs.csv", [&](std::ostream& o) { write_runs_csv(o, runs); });
}

// ---------------------------------------------------------------- manifest

json make_manifest(const ScenarioConfig& cfg, const std::vector<int>& n_values, const std::optional<SweepSpec>& sweep) {
    json j;
    j["tool"] = "d2dsim";
    j["version"] = std::string(kVersion);
    j["rng"] = std::string(Rng::kAlgorithm) + "/v" + std::to_string(Rng::kRngVersion);
    j["command"] = sweep ? "sweep" : "run";
    j["config"] = to_json(cfg);
    j["n_values"] = n_values;
    json seeds = json::array();
    for (int r = 0; r < cfg.repetitions; ++r) seeds.push_back(cfg.seed_for(r));
    j["seeds"] = seeds;
    if (sweep) j["sweep"] = {{"variable", std::string(to_string(sweep->variable))}, {"values", sweep->values}};
    return j;
}

Manifest parse_manifest(const json& j) {
    if (!j.is_object() || !j.contains("config")) throw ConfigError("manifest: missing 'config'");
    const std::string rng = std::string(Rng::kAlgorithm) + "/v" + std::to_string(Rng::kRngVersion);
    if (j.value("rng", std::string()) != rng)
        throw ConfigError("manifest: generated with rng '" + j.value("rng", std::string("?")) + "', this build uses '" +
                          rng + "'");
    Manifest m;
    m.config = scenario_from_json(j.at("config"));
    if (j.contains("sweep")) {
        const auto& s = j.at("sweep");
        const auto var = sweep_variable_from_string(s.value("variable", std::string()));
        if (!var) throw ConfigError("manifest: sweep.variable is not recognised");
        m.sweep = SweepSpec{*var, s.at("values").get<std::vector<double>>()};
    } else {
        if (!j.contains("n_values")) throw ConfigError("manifest: missing 'n_values'");
        m.n_values = j.at("n_values").get<std::vector<int>>();
    }
    return m;
}

void run_and_emit(const ScenarioConfig& cfg, const std::vector<int>& n_values, const std::filesystem::path& dir) {
    if (n_values.empty()) throw ConfigError("n: at least one device count is required");
    std::vector<ScenarioResult> results;
    for (int n : n_values) {
        ScenarioConfig c = cfg;
        c.n_devices = n;
        results.push_back(run_scenario(c));
    }
    emit_tables(results, dir);
    write_file(dir / "manifest.json",
               [&](std::ostream& o) { o << make_manifest(cfg, n_values, std::nullopt).dump(2) << '\n'; });
}

void sweep_and_emit(const ScenarioConfig& cfg, const SweepSpec& sweep, const std::filesystem::path& dir) {
    const auto rows = run_sweep(cfg, sweep);
    ensure_dir(dir);
    write_file(dir / "sweep.csv", [&](std::ostream& o) { write_sweep_csv(o, sweep.variable, rows); });
    write_file(dir / "manifest.json",
               [&](std::ostream& o) { o << make_manifest(cfg, {cfg.n_devices}, sweep).dump(2) << '\n'; });
}

void replay_manifest(const Manifest& m, const std::filesystem::path& dir) {
    if (m.sweep)
        sweep_and_emit(m.config, *m.sweep, dir);
    else
        run_and_emit(m.config, m.n_values, dir);
}

}  // namespace d2dsim
