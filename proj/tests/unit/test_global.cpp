#include <doctest.h>

#include <sstream>

#include "d2dsim/cluster_heads.hpp"
#include "d2dsim/dais.hpp"
#include "d2dsim/global_strategies.hpp"
#include "reference.hpp"

using namespace d2dsim;
using M = TransmissionMode;

TEST_SUITE("global") {

TEST_CASE("oracle matches an independent enumeration") {
    const ChannelConfig c;
    for (int n = 1; n <= 5; ++n) {
        for (std::uint64_t seed = 1; seed <= 6; ++seed) {
            // a 400 m cell keeps devices within D2D range of each other
            const auto t = generate_topology(n, 400.0, seed);
            const auto o = exhaustive_oracle(t, c);
            const auto r = ref::best_forest(t.positions(), c);
            CHECK(o.total_se == doctest::Approx(r.total_se).epsilon(1e-9));
            std::int64_t forests = 0;
            ref::for_each_forest(t.positions(), c, [&](const ref::Forest&) { ++forests; });
            CHECK(o.forests_evaluated == forests);
            const auto s = oracle_state(t, c, o);
            CHECK_NOTHROW(validate(s));
            CHECK(total_se(s) == doctest::Approx(o.total_se).epsilon(1e-9));
            CHECK(total_pc(s) == doctest::Approx(o.total_pc).epsilon(1e-9));
        }
    }
}

TEST_CASE("single device") {
    const ChannelConfig c;
    const auto t = make_topology(std::vector<Point>{{600, 0}});
    const auto o = exhaustive_oracle(t, c);
    CHECK(o.modes[0] == M::NonD2D);
    CHECK(o.total_se == doctest::Approx(link_se(160.0, 600.0, LinkClass::Cellular, c)));
    const auto g = run_sum_rate(t, c);
    CHECK(g.parent(0) == kBsId);
    CHECK(cluster_quality(g).cluster_count == 0);
}

TEST_CASE("two devices out of range") {
    const auto t = make_topology(std::vector<Point>{{400, 0}, {-400, 0}});
    const auto o = exhaustive_oracle(t, ChannelConfig{});
    CHECK(o.modes == std::vector<M>{M::NonD2D, M::NonD2D});
    CHECK(o.forests_evaluated == 1);
}

TEST_CASE("cell-edge triple: oracle dominates non-D2D") {
    const auto t = make_topology(std::vector<Point>{{950, 0}, {930, 60}, {960, -70}});
    const auto o = exhaustive_oracle(t, ChannelConfig{});
    CHECK(o.total_se >= total_se(run_non_d2d(t, ChannelConfig{})));
}

TEST_CASE("oracle rejects large inputs") {
    CHECK_THROWS_AS(exhaustive_oracle(generate_topology(7, 1000.0, 1), ChannelConfig{}), std::invalid_argument);
    SumRateConfig bad;
    bad.exhaustive_max_n = 9;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
}

TEST_CASE("greedy close to the oracle on small inputs") {
    int good = 0, total = 0;
    for (int n = 2; n <= 6; ++n)
        for (std::uint64_t seed = 1; seed <= 20; ++seed) {
            const auto t = generate_topology(n, 1000.0, seed);
            const double best = exhaustive_oracle(t, ChannelConfig{}).total_se;
            const double g = total_se(run_sum_rate(t, ChannelConfig{}));
            CHECK(g <= best * (1 + 1e-12));
            good += g >= 0.95 * best;
            ++total;
        }
    CHECK(good >= 0.9 * total);
}

TEST_CASE("greedy agrees with a full-recompute greedy") {
    for (std::uint64_t seed = 1; seed <= 6; ++seed) {
        const auto t = generate_topology(40, 700.0, seed);
        const auto fast = run_sum_rate(t, ChannelConfig{});
        std::vector<int> parents;
        for (const auto& d : fast.devices()) parents.push_back(d.parent);
        CHECK(parents == ref::slow_sum_rate(t, ChannelConfig{}));
    }
}

TEST_CASE("sum rate messages") {
    const auto s = run_sum_rate(generate_topology(100, 1000.0, 1), ChannelConfig{});
    CHECK(s.message_count() == 100 * 99 / 2);
}

TEST_CASE("sum rate beats random from ten devices up") {
    for (int n : {10, 50}) {
        int wins = 0;
        for (std::uint64_t seed = 1; seed <= 20; ++seed) {
            const auto t = generate_topology(n, 1000.0, seed);
            wins += total_se(run_sum_rate(t, ChannelConfig{})) >= total_se(run_random(t, ChannelConfig{}, seed));
        }
        CHECK(wins >= 18);
    }
}

TEST_CASE("sum rate keeps multi-hop relays rare at 50 devices") {
    double sum_mhr = 0, dais_mhr = 0;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const auto t = generate_topology(50, 1000.0, seed);
        sum_mhr += cluster_quality(run_sum_rate(t, ChannelConfig{})).mhr_count;
        dais_mhr += cluster_quality(run_dais(t, DaisConfig{}, ChannelConfig{})).mhr_count;
    }
    CHECK(sum_mhr < dais_mhr);
}

TEST_CASE("random: isolated devices all go to the BS") {
    std::vector<Point> pts;
    for (int i = 0; i < 6; ++i) pts.push_back({800.0 * std::cos(i * 1.047), 800.0 * std::sin(i * 1.047)});
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const auto s = run_random(make_topology(pts), ChannelConfig{}, seed);
        for (const auto& d : s.devices()) CHECK(d.parent == kBsId);
        CHECK(cluster_quality(s).cluster_count == 0);
        CHECK(s.message_count() == 0);
    }
}

TEST_CASE("random: deterministic and feasible") {
    const auto t = generate_topology(150, 1000.0, 8);
    const auto a = run_random(t, ChannelConfig{}, 8);
    const auto b = run_random(t, ChannelConfig{}, 8);
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(a.devices()[i].parent == b.devices()[i].parent);
    CHECK_NOTHROW(validate(a));
}

TEST_CASE("random has the lowest mean SE at 200 devices") {
    const ChannelConfig c;
    double rnd = 0, non = 0, sr = 0, da = 0, fz = 0, db = 0, me = 0;
    for (std::uint64_t seed = 1; seed <= 30; ++seed) {
        const auto t = generate_topology(200, 1000.0, seed);
        rnd += total_se(run_random(t, c, seed));
        non += total_se(run_non_d2d(t, c));
        sr += total_se(run_sum_rate(t, c));
        da += total_se(run_dais(t, DaisConfig{}, c));
        fz += total_se(run_ulc_strategy(UlcAlgorithm::FuzzyArt, t, c));
        db += total_se(run_ulc_strategy(UlcAlgorithm::Dbscan, t, c));
        me += total_se(run_ulc_strategy(UlcAlgorithm::Mec, t, c));
    }
    for (double other : {non, sr, da, fz, db, me}) CHECK(rnd < other);
}

TEST_CASE("non-D2D baseline shape") {
    const ChannelConfig c;
    for (int n : {5, 50}) {
        const auto s = run_non_d2d(generate_topology(n, 1000.0, 2), c);
        const auto q = cluster_quality(s);
        CHECK(q.non_d2d_count == n);
        CHECK(q.cluster_count == 0);
        CHECK(total_pc(s) == doctest::Approx(n * device_pc(M::NonD2D, c.default_tp, c)));
        CHECK(s.message_count() == 0);
    }
}

TEST_CASE("non-D2D draws the most power") {
    const ChannelConfig c;
    for (int n : {5, 50, 100, 200})
        for (std::uint64_t seed = 1; seed <= 10; ++seed) {
            const auto t = generate_topology(n, 1000.0, seed);
            const double non = total_pc(run_non_d2d(t, c));
            CAPTURE(n);
            CAPTURE(seed);
            CHECK(total_pc(run_random(t, c, seed)) < non);
            CHECK(total_pc(run_sum_rate(t, c)) < non);
            CHECK(total_pc(run_dais(t, DaisConfig{}, c)) < non);
            CHECK(total_pc(run_ulc_strategy(UlcAlgorithm::FuzzyArt, t, c)) < non);
            CHECK(total_pc(run_ulc_strategy(UlcAlgorithm::Dbscan, t, c)) < non);
            CHECK(total_pc(run_ulc_strategy(UlcAlgorithm::Mec, t, c)) < non);
        }
}

TEST_CASE("oracle csv") {
    std::ostringstream out;
    write_oracle_csv(out, exhaustive_oracle(generate_topology(3, 300.0, 1), ChannelConfig{}));
    CHECK(out.str().rfind("device_id,mode,parent\n", 0) == 0);
    CHECK(out.str().find("total_se,total_pc\n") != std::string::npos);
}

}
