#include "d2dsim/geometry.hpp"

#include <cmath>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>

#include "d2dsim/csv.hpp"
#include "d2dsim/rng.hpp"

namespace d2dsim {

double distance(const Point& a, const Point& b) { return std::hypot(a.x - b.x, a.y - b.y); }

std::vector<Point> Topology::positions() const {
    std::vector<Point> out;
    out.reserve(devices.size());
    for (const auto& d : devices) out.push_back(d.position);
    return out;
}

Topology generate_topology(int n, double cell_radius, std::uint64_t seed) {
    if (n < 1) throw TopologyError("generate_topology: n must be >= 1, got " + std::to_string(n));
    if (!(cell_radius > 0.0) || !std::isfinite(cell_radius))
        throw TopologyError("generate_topology: cell_radius must be positive");

    Topology topo;
    topo.cell_radius = cell_radius;
    topo.seed = seed;
    topo.devices.reserve(static_cast<std::size_t>(n));

    Rng rng(seed);
    for (int i = 0; i < n; ++i) {
        const double r = cell_radius * std::sqrt(rng.uniform01());
        const double theta = 2.0 * std::numbers::pi * rng.uniform01();
        Point p{r * std::cos(theta), r * std::sin(theta)};
        // cos/sin rounding can push a point a few ulps past the rim
        const double d = distance_to_bs(p);
        if (d > cell_radius) {
            p.x *= cell_radius / d;
            p.y *= cell_radius / d;
        }
        topo.devices.push_back({i, p});
    }
    return topo;
}

Topology make_topology(std::span<const Point> positions, double cell_radius, std::uint64_t seed) {
    if (positions.empty()) throw TopologyError("make_topology: empty position list");
    Topology topo;
    topo.cell_radius = cell_radius;
    topo.seed = seed;
    int id = 0;
    for (const auto& p : positions) {
        if (!std::isfinite(p.x) || !std::isfinite(p.y))
            throw TopologyError("make_topology: non-finite coordinate for device " + std::to_string(id));
        topo.devices.push_back({id++, p});
    }
    return topo;
}

std::vector<double> initial_batteries(int n, std::uint64_t seed) {
    Rng rng = Rng::derive(seed, kBatteryStream);
    std::vector<double> out(static_cast<std::size_t>(std::max(n, 0)));
    for (auto& b : out) b = rng.uniform(20.0, 100.0);
    return out;
}

void write_topology_csv(std::ostream& out, const Topology& topo) {
    out << "device_id,x_m,y_m\n";
    for (const auto& d : topo.devices)
        out << d.id << ',' << csv::number(d.position.x, 9) << ',' << csv::number(d.position.y, 9) << '\n';
}

Topology read_topology_csv(std::istream& in, double cell_radius, std::uint64_t seed) {
    std::string line;
    if (!std::getline(in, line) || csv::trim(line) != "device_id,x_m,y_m")
        throw TopologyError("topology csv: missing header 'device_id,x_m,y_m'");
    std::vector<Point> pts;
    int expected = 0;
    while (std::getline(in, line)) {
        if (csv::trim(line).empty()) continue;
        const auto cells = csv::split(line);
        if (cells.size() != 3) throw TopologyError("topology csv: expected 3 columns: " + line);
        if (std::stoi(cells[0]) != expected)
            throw TopologyError("topology csv: ids must be contiguous from 0");
        pts.push_back({std::stod(cells[1]), std::stod(cells[2])});
        ++expected;
    }
    return make_topology(pts, cell_radius, seed);
}

}  // namespace d2dsim
