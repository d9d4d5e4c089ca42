#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "d2dsim/experiment.hpp"

namespace py = pybind11;
using namespace d2dsim;

namespace {

using XY = std::pair<double, double>;

std::vector<Point> to_points(const std::vector<XY>& xy) {
    std::vector<Point> out;
    out.reserve(xy.size());
    for (const auto& [x, y] : xy) out.push_back({x, y});
    return out;
}

std::vector<XY> from_points(const std::vector<Point>& pts) {
    std::vector<XY> out;
    out.reserve(pts.size());
    for (const auto& p : pts) out.emplace_back(p.x, p.y);
    return out;
}

Strategy strategy_arg(const std::string& s) {
    const auto v = strategy_from_string(s);
    if (!v) throw py::value_error("unknown strategy '" + s + "'");
    return *v;
}

py::dict quality_dict(const ClusterQuality& q) {
    py::dict d;
    d["non_d2d"] = q.non_d2d_count;
    d["clusters"] = q.cluster_count;
    d["cluster_devices"] = q.cluster_device_total;
    d["mean_devices_per_cluster"] = q.mean_devices_per_cluster;
    d["mhr"] = q.mhr_count;
    d["mhr_no_sharing"] = q.mhr_no_sharing_count;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Single-cell D2D transmission-mode selection simulator";
    m.attr("__version__") = std::string(kVersion);

    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<StructureError>(m, "StructureError", PyExc_RuntimeError);

    py::class_<Topology>(m, "Topology")
        .def_readonly("cell_radius", &Topology::cell_radius)
        .def_readonly("seed", &Topology::seed)
        .def("__len__", &Topology::size)
        .def_property_readonly("positions", [](const Topology& t) { return from_points(t.positions()); })
        .def("to_csv", [](const Topology& t) {
            std::ostringstream out;
            write_topology_csv(out, t);
            return out.str();
        });

    m.def("generate_topology", &generate_topology, py::arg("n"), py::arg("cell_radius") = 1000.0, py::arg("seed") = 1);
    m.def(
        "make_topology",
        [](const std::vector<XY>& xy, double r, std::uint64_t seed) { return make_topology(to_points(xy), r, seed); },
        py::arg("positions"), py::arg("cell_radius") = 1000.0, py::arg("seed") = 0);

    m.def("fspl_db", &fspl_db, py::arg("d"), py::arg("f"), py::arg("d_min") = 1.0);
    m.def(
        "link_se",
        [](double tp, double d, bool d2d) {
            return link_se(tp, d, d2d ? LinkClass::D2D : LinkClass::Cellular, ChannelConfig{});
        },
        py::arg("tp_mw"), py::arg("d"), py::arg("d2d") = false, "SE in bit/s/Hz at the default channel settings");

    py::class_<NetworkState>(m, "NetworkState")
        .def_property_readonly("strategy", &NetworkState::strategy_name)
        .def("__len__", &NetworkState::size)
        .def_property_readonly("modes",
                               [](const NetworkState& s) {
                                   std::vector<std::string> v;
                                   for (const auto& d : s.devices()) v.emplace_back(to_string(d.mode));
                                   return v;
                               })
        .def_property_readonly("parents",
                               [](const NetworkState& s) {
                                   std::vector<int> v;
                                   for (const auto& d : s.devices()) v.push_back(d.parent);
                                   return v;
                               })
        .def_property_readonly("tx_power",
                               [](const NetworkState& s) {
                                   std::vector<double> v;
                                   for (const auto& d : s.devices()) v.push_back(d.tp);
                                   return v;
                               })
        .def("wdr", &NetworkState::wdr, py::arg("device"))
        .def_property_readonly("total_se", [](const NetworkState& s) { return total_se(s); })
        .def_property_readonly("total_pc", [](const NetworkState& s) { return total_pc(s); })
        .def_property_readonly("messages", &NetworkState::message_count)
        .def_property_readonly("quality", [](const NetworkState& s) { return quality_dict(cluster_quality(s)); })
        .def("validate", [](const NetworkState& s) { validate(s); })
        .def("to_csv", [](const NetworkState& s) {
            std::ostringstream out;
            write_state_csv(out, s);
            return out.str();
        });

    // config_json: a ScenarioConfig as JSON text; "" for defaults
    m.def(
        "build_state",
        [](const std::string& strategy, const Topology& t, const std::string& config_json) {
            const ScenarioConfig cfg = config_json.empty() ? ScenarioConfig{} : scenario_from_json(nlohmann::json::parse(config_json));
            return build_state(strategy_arg(strategy), t, cfg);
        },
        py::arg("strategy"), py::arg("topology"), py::arg("config_json") = "");

    m.def(
        "default_config_json", [] { return to_json(ScenarioConfig{}).dump(); });

    m.def(
        "run_tables",
        [](const std::string& config_json, const std::vector<int>& n_values, const std::string& out_dir) {
            const ScenarioConfig cfg = config_json.empty() ? ScenarioConfig{} : scenario_from_json(nlohmann::json::parse(config_json));
            py::gil_scoped_release release;
            run_and_emit(cfg, n_values, out_dir);
        },
        py::arg("config_json"), py::arg("n_values"), py::arg("out_dir"));

    m.def(
        "dbscan",
        [](const std::vector<XY>& xy, double eps, int min_pts) {
            DbscanConfig c{eps, min_pts};
            c.validate();
            return dbscan(to_points(xy), c).labels;
        },
        py::arg("points"), py::arg("eps") = 200.0, py::arg("min_pts") = 2);
    m.def(
        "kmeans", [](const std::vector<XY>& xy, int k, std::uint64_t seed) { return kmeans(to_points(xy), k, seed).assignment.labels; },
        py::arg("points"), py::arg("k"), py::arg("seed") = 1);
    m.def(
        "fuzzy_art",
        [](const std::vector<XY>& xy, double vigilance) {
            FuzzyArtConfig c;
            c.vigilance = vigilance;
            return fuzzy_art(to_points(xy), c).assignment.labels;
        },
        py::arg("points"), py::arg("vigilance") = -1.0, "vigilance < 0 derives it from a 400 m category diameter");
    m.def(
        "mec",
        [](const std::vector<XY>& xy, int k, std::uint64_t seed) {
            MecConfig c;
            c.k = k;
            return mec(to_points(xy), c, seed).assignment.labels;
        },
        py::arg("points"), py::arg("k") = 100, py::arg("seed") = 1);
}
