#include <doctest.h>

#include <sstream>

#include "d2dsim/global_strategies.hpp"
#include "d2dsim/network.hpp"
#include "reference.hpp"

using namespace d2dsim;
using M = TransmissionMode;

namespace {

// Devices on the positive x axis at the given distances from the BS.
NetworkState line(std::initializer_list<double> xs) {
    std::vector<Point> pts;
    for (double x : xs) pts.push_back({x, 0.0});
    return NetworkState(make_topology(pts), ChannelConfig{}, std::vector<double>(pts.size(), 100.0), "test");
}

}  // namespace

TEST_SUITE("network") {

TEST_CASE("path lengths by mode") {
    auto s = line({100, 250, 400, 900});
    s.attach(0, M::D2DRelay, kBsId);
    s.attach(1, M::D2DMultiHopRelay, 0);
    s.attach(2, M::D2DClient, 1);
    s.attach(3, M::NonD2D, kBsId);
    CHECK(s.path_to_bs(3).size() == 1);
    CHECK(s.path_to_bs(1).size() == 2);
    CHECK(s.path_to_bs(2).size() == 3);
    CHECK(s.path_to_bs(3)[0].cls == LinkClass::Cellular);
    CHECK(s.path_to_bs(2)[0].cls == LinkClass::D2D);
    CHECK_NOTHROW(validate(s));
}

TEST_CASE("wdr is the minimum link rate") {
    auto s = line({100, 250, 400});
    s.attach(0, M::D2DRelay, kBsId);
    s.attach(1, M::D2DMultiHopRelay, 0);
    s.attach(2, M::D2DClient, 1);
    const auto path = s.path_to_bs(2);
    double m = path[0].rate;
    for (const auto& l : path) m = std::min(m, l.rate);
    CHECK(s.wdr(2) == doctest::Approx(m).epsilon(1e-15));
    CHECK(s.wdr_se(2) * s.channel().bandwidth == doctest::Approx(s.wdr(2)).epsilon(1e-12));
    CHECK(s.wdr(0) == doctest::Approx(s.link_rate(0)));
    for (DeviceId i = 0; i < 3; ++i) CHECK(s.wdr(i) <= s.link_rate(i) * (1 + 1e-15));
}

TEST_CASE("a faster appended link leaves wdr alone") {
    // device 1 sits 5 m from device 0: its link beats 0's cellular link
    auto s = line({600, 605});
    s.attach(0, M::D2DRelay, kBsId);
    s.attach(1, M::D2DClient, 0);
    REQUIRE(s.link_rate(1) > s.wdr(0));
    CHECK(s.wdr(1) == s.wdr(0));
}

TEST_CASE("empty network totals") {
    Topology t;
    NetworkState s(t, ChannelConfig{}, std::vector<double>{}, "empty");
    CHECK(total_se(s) == 0.0);
    CHECK(total_pc(s) == 0.0);
}

TEST_CASE("two identical non-D2D devices double the totals") {
    auto one = line({300});
    one.attach(0, M::NonD2D, kBsId);
    auto two = line({300, 300});
    two.attach(0, M::NonD2D, kBsId);
    two.attach(1, M::NonD2D, kBsId);
    CHECK(total_se(two) == doctest::Approx(2 * total_se(one)).epsilon(1e-15));
    CHECK(total_pc(two) == doctest::Approx(2 * total_pc(one)).epsilon(1e-15));
}

TEST_CASE("five non-D2D devices at the defaults draw 1150 mW") {
    const auto s = run_non_d2d(generate_topology(5, 1000.0, 4), ChannelConfig{});
    CHECK(total_pc(s) == doctest::Approx(1150.0));
}

TEST_CASE("cluster quality shapes") {
    auto s = line({100, 150, 120, 130, 800});
    for (DeviceId i = 0; i < 5; ++i) s.attach(i, M::NonD2D, kBsId);
    auto q = cluster_quality(s);
    CHECK(q.cluster_count == 0);
    CHECK(q.non_d2d_count == 5);
    CHECK(q.cluster_device_total == 0);

    s.attach(0, M::D2DRelay, kBsId);
    for (DeviceId i = 1; i <= 3; ++i) s.attach(i, M::D2DClient, 0);
    q = cluster_quality(s);
    CHECK(q.cluster_count == 1);
    CHECK(q.cluster_device_total == 3);
    CHECK(q.mean_devices_per_cluster == doctest::Approx(3.0));
    CHECK(q == cluster_quality_recount(s));
}

TEST_CASE("childless MHR counts as not sharing") {
    auto s = line({100, 250});
    s.attach(0, M::D2DRelay, kBsId);
    s.attach(1, M::D2DMultiHopRelay, 0);
    const auto q = cluster_quality(s);
    CHECK(q.mhr_count == 1);
    CHECK(q.mhr_no_sharing_count == 1);
    CHECK(q == cluster_quality_recount(s));
}

TEST_CASE("attach rejects structural errors") {
    auto s = line({100, 250, 700});
    CHECK_THROWS_AS(s.attach(0, M::D2DClient, kBsId), StructureError);
    CHECK_THROWS_AS(s.attach(0, M::NonD2D, 1), StructureError);
    CHECK_THROWS_AS(s.attach(1, M::D2DClient, 0), StructureError);  // parent unassigned
    s.attach(0, M::D2DRelay, kBsId);
    CHECK_THROWS_AS(s.attach(2, M::D2DClient, 0), StructureError);  // 600 m
    s.attach(1, M::D2DMultiHopRelay, 0);
    CHECK_THROWS_AS(s.attach(0, M::D2DMultiHopRelay, 1), StructureError);  // cycle
    CHECK_THROWS_AS(s.detach(0), StructureError);
    CHECK_THROWS_AS(s.attach(0, M::Unassigned, kBsId), StructureError);
    CHECK_THROWS_AS(validate(s), StructureError);  // device 2 unassigned
    s.attach(2, M::NonD2D, kBsId);
    CHECK_NOTHROW(validate(s));
}

TEST_CASE("power follows the mode") {
    auto s = line({100, 150});
    s.attach(0, M::NonD2D, kBsId);
    CHECK(s.device(0).tp == s.channel().default_tp);
    s.set_mode(0, M::D2DRelay);
    CHECK(s.device(0).tp < s.channel().default_tp);
    attach_as_client(s, 1, 0);
    CHECK(s.mode(0) == M::D2DRelay);
    CHECK(s.mode(1) == M::D2DClient);
    CHECK(s.device(1).tp == doctest::Approx(ref::trimmed_power(160.0, 50.0, 2.4e9, s.channel())).epsilon(1e-12));
    CHECK(s.device(1).link_se == doctest::Approx(ref::se(s.device(1).tp, 50.0, 2.4e9, s.channel())).epsilon(1e-12));
}

TEST_CASE("client promotion to MHR") {
    auto s = line({100, 250, 400});
    s.attach(0, M::D2DRelay, kBsId);
    attach_as_client(s, 1, 0);
    attach_as_client(s, 2, 1);
    CHECK(s.mode(1) == M::D2DMultiHopRelay);
    CHECK(s.children(1) == std::vector<DeviceId>{2});
    CHECK(s.children(0) == std::vector<DeviceId>{1});
}

TEST_CASE("incremental counters agree with recount on strategy outputs") {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const auto t = generate_topology(80, 1000.0, seed);
        for (const auto& s : {run_random(t, ChannelConfig{}, seed), run_sum_rate(t, ChannelConfig{})}) {
            CHECK_NOTHROW(validate(s));
            CHECK(cluster_quality(s) == cluster_quality_recount(s));
            CHECK(total_se(s) == doctest::Approx(ref::path_bottleneck_total(s)).epsilon(1e-12));
            for (const auto& d : s.devices()) {
                CHECK(s.wdr(d.id) <= s.link_rate(d.id) * (1 + 1e-15));
                CHECK(s.path_to_bs(d.id).size() <= s.size());
                if (d.parent != kBsId) CHECK(s.distance(d.id, d.parent) <= 200.0);
            }
        }
    }
}

TEST_CASE("sum_link_se ignores bottlenecks") {
    auto s = line({100, 250});
    s.attach(0, M::D2DRelay, kBsId);
    s.attach(1, M::D2DClient, 0);
    CHECK(sum_link_se(s) == doctest::Approx(s.device(0).link_se + s.device(1).link_se));
    CHECK(total_se(s) <= sum_link_se(s));
}

TEST_CASE("time units and report") {
    CHECK(exec_time_units(0.0) == 0);
    CHECK(exec_time_units(99.9) == 0);
    CHECK(exec_time_units(100.0) == 1);
    CHECK(exec_time_units(250.0) == 2);
    auto s = line({300});
    s.attach(0, M::NonD2D, kBsId);
    s.add_messages(3);
    const auto r = make_report(s, 120.0);
    CHECK(r.exec_time_units == 1);
    CHECK(r.message_count == 3);
    CHECK(r.non_d2d_count == 1);
}

TEST_CASE("state csv") {
    auto s = line({100, 150});
    s.attach(0, M::D2DRelay, kBsId);
    s.attach(1, M::D2DClient, 0);
    std::ostringstream out;
    write_state_csv(out, s);
    CHECK(out.str().rfind("device_id,x_m,y_m,mode,parent,tp_mw,battery_pct\n", 0) == 0);
    CHECK(out.str().find(",-1,") != std::string::npos);
}

}
