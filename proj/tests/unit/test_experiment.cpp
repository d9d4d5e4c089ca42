#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "d2dsim/csv.hpp"
#include "d2dsim/experiment.hpp"

using namespace d2dsim;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path scratch(const std::string& name) {
    const auto dir = fs::temp_directory_path() / ("d2dsim_unit_" + name);
    fs::remove_all(dir);
    return dir;
}

ScenarioConfig only(std::initializer_list<Strategy> s, int n, int reps) {
    ScenarioConfig c;
    c.strategies = s;
    c.n_devices = n;
    c.repetitions = reps;
    return c;
}

const StrategySummary& find(const std::vector<StrategySummary>& rows, Strategy s) {
    return *std::find_if(rows.begin(), rows.end(), [&](const StrategySummary& r) { return r.strategy == s; });
}

}  // namespace

TEST_SUITE("experiment") {

TEST_CASE("csv numbers") {
    CHECK(csv::number(1.5) == "1.500000");
    CHECK(csv::number(-0.0000001) == "0.000000");
    CHECK(csv::split("a, b,,c") == std::vector<std::string>{"a", "b", "", "c"});
    CHECK(csv::trim("  x \r") == "x");
}

TEST_CASE("non-D2D baseline report") {
    const auto r = run_scenario(only({Strategy::NonD2D}, 5, 1));
    REQUIRE(r.summaries.size() == 1);
    CHECK(r.summaries[0].clusters.mean == 0.0);
    CHECK(r.summaries[0].messages.mean == 0.0);
    CHECK(r.summaries[0].total_pc.mean == doctest::Approx(1150.0));
}

TEST_CASE("sum rate talks more than DAIS") {
    const auto r = run_scenario(only({Strategy::Dais, Strategy::SumRate}, 50, 5));
    CHECK(find(r.summaries, Strategy::SumRate).messages.mean > find(r.summaries, Strategy::Dais).messages.mean);
}

TEST_CASE("paired topologies and thread independence") {
    auto cfg = only({Strategy::Dais, Strategy::Random, Strategy::Mec}, 60, 6);
    const auto a = run_scenario(cfg);
    cfg.threads = 4;
    const auto b = run_scenario(cfg);
    std::ostringstream sa, sb;
    write_runs_csv(sa, a.runs);
    write_runs_csv(sb, b.runs);
    CHECK(sa.str() == sb.str());
    for (const auto& run : a.runs) CHECK(run.seed == cfg.seed_for(run.repetition));
}

TEST_CASE("table shape and replay") {
    ScenarioConfig cfg;
    cfg.repetitions = 2;
    const auto dir = scratch("tables");
    run_and_emit(cfg, {5, 50, 100, 200}, dir);
    const auto se_pc = slurp(dir / "se_pc.csv");
    CHECK(std::count(se_pc.begin(), se_pc.end(), '\n') == 29);
    for (const char* f : {"timing.csv", "cluster_quality.csv", "mhr.csv", "runs.csv", "manifest.json"})
        CHECK(fs::exists(dir / f));

    std::istringstream cq(slurp(dir / "cluster_quality.csv"));
    std::string line;
    std::getline(cq, line);
    while (std::getline(cq, line)) {
        const auto cells = csv::split(line);
        if (cells[1] == "dais") CHECK(cells[3] == "0.000000");
    }

    const auto again = scratch("replay");
    std::ifstream mf(dir / "manifest.json");
    nlohmann::json j;
    mf >> j;
    replay_manifest(parse_manifest(j), again);
    for (const char* f : {"se_pc.csv", "cluster_quality.csv", "mhr.csv", "runs.csv"})
        CHECK(slurp(dir / f) == slurp(again / f));
}

TEST_CASE("manifest integrity") {
    const auto j = make_manifest(ScenarioConfig{}, {5, 50}, std::nullopt);
    CHECK(j.at("rng") == "mt19937_64/v1");
    CHECK(j.at("version") == std::string(kVersion));
    auto bad = j;
    bad["rng"] = "pcg32/v1";
    CHECK_THROWS_AS(parse_manifest(bad), ConfigError);
    const auto m = parse_manifest(j);
    CHECK(m.n_values == std::vector<int>{5, 50});
    CHECK_FALSE(m.sweep.has_value());
}

TEST_CASE("config json") {
    ScenarioConfig c;
    c.n_devices = 77;
    c.dais.wdr_threshold = 35.0;
    c.channel.circuit_power = 50.0;
    c.strategies = {Strategy::Mec, Strategy::Dais};
    const auto back = scenario_from_json(to_json(c));
    CHECK(to_json(back) == to_json(c));
    CHECK(scenario_from_json(nlohmann::json::object()).n_devices == 100);
    CHECK_THROWS_AS(scenario_from_json(nlohmann::json{{"n_device", 5}}), ConfigError);
    CHECK_THROWS_AS(scenario_from_json(nlohmann::json{{"dais", {{"wdr_threshold", "high"}}}}), ConfigError);
    CHECK_THROWS_AS(scenario_from_json(nlohmann::json{{"strategies", {"dais", "greedy"}}}), ConfigError);
    ScenarioConfig dup;
    dup.strategies = {Strategy::Dais, Strategy::Dais};
    CHECK_THROWS_AS(dup.validate(), ConfigError);
}

TEST_CASE("sweep grammar") {
    CHECK(SweepSpec::defaults(SweepVariable::WdrThreshold).values.size() == 21);
    const auto tp = SweepSpec::defaults(SweepVariable::TxPower).values;
    CHECK(tp.size() == 11);
    CHECK(tp.front() == 160.0);
    CHECK(tp.back() == doctest::Approx(60.0));
    CHECK_THROWS_AS(SweepSpec::range(SweepVariable::TxPower, 60, 160, -10), ConfigError);
    CHECK_THROWS_AS(run_sweep(only({Strategy::Random}, 10, 1), SweepSpec::defaults(SweepVariable::BplThreshold)),
                    ConfigError);
    CHECK_THROWS_AS(apply_sweep_value(ScenarioConfig{}, SweepVariable::NDevices, 10.5), ConfigError);
}

TEST_CASE("sweep rows: one per value and strategy") {
    const auto rows = run_sweep(only({Strategy::Dais, Strategy::NonD2D}, 20, 2), SweepSpec{SweepVariable::NDevices, {5, 10, 20}});
    CHECK(rows.size() == 6);
    std::ostringstream out;
    write_sweep_csv(out, SweepVariable::NDevices, rows);
    const std::string text = out.str();
    CHECK(std::count(text.begin(), text.end(), '\n') == 7);
}

TEST_CASE("battery threshold barely moves SE; WDR threshold moves it more") {
    const auto cfg = only({Strategy::Dais}, 100, 10);
    const auto range_of = [&](SweepVariable v) {
        const auto rows = run_sweep(cfg, SweepSpec::defaults(v));
        CHECK(rows.size() == 21);
        double lo = 1e300, hi = -1e300, mean = 0;
        for (const auto& r : rows) {
            lo = std::min(lo, r.summary.total_se.mean);
            hi = std::max(hi, r.summary.total_se.mean);
            mean += r.summary.total_se.mean / static_cast<double>(rows.size());
        }
        return std::pair(hi - lo, mean);
    };
    const auto [bpl, bpl_mean] = range_of(SweepVariable::BplThreshold);
    const auto [wdr, wdr_mean] = range_of(SweepVariable::WdrThreshold);
    CAPTURE(bpl);
    CAPTURE(wdr);
    CHECK(bpl / bpl_mean < 0.05);
    CHECK(wdr > bpl);
}

TEST_CASE("transmit power sweep is monotone") {
    ScenarioConfig cfg;
    cfg.n_devices = 100;
    cfg.repetitions = 3;
    const auto rows = run_sweep(cfg, SweepSpec::defaults(SweepVariable::TxPower));
    CHECK(rows.size() == 11 * std::size(kAllStrategies));
    for (Strategy s : kAllStrategies) {
        std::vector<const SweepRow*> mine;
        for (const auto& r : rows)
            if (r.summary.strategy == s) mine.push_back(&r);
        REQUIRE(mine.size() == 11);
        for (std::size_t i = 1; i < mine.size(); ++i) {
            CAPTURE(to_string(s));
            CAPTURE(mine[i]->value);
            CHECK(mine[i]->summary.total_pc.mean < mine[i - 1]->summary.total_pc.mean);
            CHECK(mine[i]->summary.total_se.mean <= mine[i - 1]->summary.total_se.mean + 1e-9);
        }
    }
}

TEST_CASE("timing units are whole and do not shrink with N on average") {
    auto cfg = only({Strategy::SumRate, Strategy::Dais}, 5, 10);
    std::int64_t prev_sr = 0, prev_da = 0;
    for (int n : {5, 50, 100, 200}) {
        cfg.n_devices = n;
        const auto r = run_scenario(cfg);
        const auto sr = find(r.summaries, Strategy::SumRate).time_units();
        const auto da = find(r.summaries, Strategy::Dais).time_units();
        CHECK(sr >= prev_sr);
        CHECK(da >= prev_da);
        prev_sr = sr;
        prev_da = da;
    }
}

TEST_CASE("strategy names round trip") {
    for (Strategy s : kAllStrategies) CHECK(strategy_from_string(to_string(s)) == s);
    CHECK_FALSE(strategy_from_string("oracle").has_value());
}

}
