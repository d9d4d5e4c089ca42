#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "d2dsim/cluster_heads.hpp"
#include "d2dsim/dais.hpp"
#include "d2dsim/global_strategies.hpp"
#include "d2dsim/network.hpp"

namespace d2dsim {

inline constexpr std::string_view kVersion = "0.1.0";

enum class Strategy { Dais, SumRate, Random, NonD2D, FuzzyArt, Dbscan, Mec };

inline constexpr Strategy kAllStrategies[] = {Strategy::Dais,     Strategy::SumRate, Strategy::Random, Strategy::NonD2D,
                                              Strategy::FuzzyArt, Strategy::Dbscan,  Strategy::Mec};

std::string_view to_string(Strategy s);
std::optional<Strategy> strategy_from_string(std::string_view s);

struct ScenarioConfig {
    int n_devices = 100;
    double cell_radius = 1000.0;
    std::uint64_t base_seed = 1;
    int repetitions = 10;
    ChannelConfig channel;
    DaisConfig dais;
    SumRateConfig sumrate;
    UlcConfigs ulc;
    std::vector<Strategy> strategies{std::begin(kAllStrategies), std::end(kAllStrategies)};
    int threads = 1;  // runs are independent; results do not depend on this

    /// Throws ConfigError with the offending field name.
    void validate() const;
    std::uint64_t seed_for(int repetition) const { return base_seed + static_cast<std::uint64_t>(repetition); }
};

nlohmann::json to_json(const ScenarioConfig& cfg);
/// Missing fields keep their defaults; unknown fields are rejected.
ScenarioConfig scenario_from_json(const nlohmann::json& j);

struct RunRecord {
    Strategy strategy = Strategy::NonD2D;
    int n = 0;
    int repetition = 0;
    std::uint64_t seed = 0;
    MetricsReport metrics;
    double exec_ms = 0.0;
};

struct Stat {
    double mean = 0.0;
    double stdev = 0.0;  // sample standard deviation, 0 for one run
};

struct StrategySummary {
    Strategy strategy = Strategy::NonD2D;
    int n = 0;
    int repetitions = 0;
    Stat total_se, total_pc, exec_ms, messages, non_d2d, clusters, cluster_devices, mean_per_cluster, mhr,
        mhr_no_sharing;

    /// floor(mean exec_ms / 100)
    std::int64_t time_units() const { return exec_time_units(exec_ms.mean); }
};

struct ScenarioResult {
    int n = 0;
    std::vector<RunRecord> runs;  // strategy order, then repetition
    std::vector<StrategySummary> summaries;
};

/// Run one strategy on one topology. Only the strategy itself is timed.
RunRecord run_strategy(Strategy s, const Topology& topo, const ScenarioConfig& cfg, int repetition = 0);
/// The state a strategy produces, without timing.
NetworkState build_state(Strategy s, const Topology& topo, const ScenarioConfig& cfg);

/// All selected strategies on repetitions topologies seeded base_seed + rep.
/// Every strategy sees the same topology in a given repetition.
ScenarioResult run_scenario(const ScenarioConfig& cfg);

StrategySummary summarize(Strategy s, int n, const std::vector<RunRecord>& runs);

enum class SweepVariable { WdrThreshold, BplThreshold, TxPower, NDevices };

std::string_view to_string(SweepVariable v);
std::optional<SweepVariable> sweep_variable_from_string(std::string_view s);

struct SweepSpec {
    SweepVariable variable = SweepVariable::WdrThreshold;
    std::vector<double> values;

    /// start, start + step, ... up to stop inclusive (step may be negative).
    static SweepSpec range(SweepVariable v, double start, double stop, double step);
    /// 0..100 step 5 for thresholds, 160 down to 60 step 10 for power,
    /// {5, 50, 100, 200} for device count.
    static SweepSpec defaults(SweepVariable v);
};

struct SweepRow {
    double value = 0.0;
    StrategySummary summary;
};

/// One scenario per value with everything else fixed.
std::vector<SweepRow> run_sweep(const ScenarioConfig& cfg, const SweepSpec& sweep);
ScenarioConfig apply_sweep_value(ScenarioConfig cfg, SweepVariable v, double value);

void write_sweep_csv(std::ostream& out, SweepVariable v, const std::vector<SweepRow>& rows);

/// se_pc.csv, timing.csv, cluster_quality.csv, mhr.csv and runs.csv in dir.
/// Throws std::runtime_error naming the path on I/O failure.
void emit_tables(const std::vector<ScenarioResult>& results, const std::filesystem::path& dir);

// Individual table writers, rows sorted by (n, strategy).
void write_se_pc_csv(std::ostream& out, const std::vector<StrategySummary>& rows);
void write_timing_csv(std::ostream& out, const std::vector<StrategySummary>& rows);
void write_cluster_quality_csv(std::ostream& out, const std::vector<StrategySummary>& rows);
void write_mhr_csv(std::ostream& out, const std::vector<StrategySummary>& rows);
void write_runs_csv(std::ostream& out, const std::vector<RunRecord>& runs);

/// Everything needed to regenerate the outputs of a run or sweep.
nlohmann::json make_manifest(const ScenarioConfig& cfg, const std::vector<int>& n_values,
                             const std::optional<SweepSpec>& sweep);

struct Manifest {
    ScenarioConfig config;
    std::vector<int> n_values;
    std::optional<SweepSpec> sweep;
};

Manifest parse_manifest(const nlohmann::json& j);

/// Re-run whatever the manifest describes and write its CSVs to dir.
void replay_manifest(const Manifest& m, const std::filesystem::path& dir);

/// run: emit_tables over n_values. sweep: sweep.csv at cfg.n_devices. Both
/// also write manifest.json.
void run_and_emit(const ScenarioConfig& cfg, const std::vector<int>& n_values, const std::filesystem::path& dir);
void sweep_and_emit(const ScenarioConfig& cfg, const SweepSpec& sweep, const std::filesystem::path& dir);

}  // namespace d2dsim
