#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace d2dsim {

/// Planar position in meters, base station at the origin.
struct Point {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const Point&, const Point&) = default;
};

double distance(const Point& a, const Point& b);

inline double distance_to_bs(const Point& p) { return distance(p, Point{}); }

using DeviceId = int;

struct PlacedDevice {
    DeviceId id = 0;
    Point position;
};

/// Immutable single-cell scenario. Device ids are 0..n-1 in generation order.
struct Topology {
    double cell_radius = 1000.0;
    Point bs_position{};
    std::vector<PlacedDevice> devices;
    std::uint64_t seed = 0;

    std::size_t size() const { return devices.size(); }
    const Point& position(DeviceId id) const { return devices.at(static_cast<std::size_t>(id)).position; }
    std::vector<Point> positions() const;
};

class TopologyError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// n devices i.i.d. uniform on the disk of the given radius (a Poisson point
/// process conditioned on its count). Sampling uses r = R*sqrt(u), theta =
/// 2*pi*v from one seeded stream, so the first k devices of an n-device
/// topology equal a k-device topology with the same seed.
Topology generate_topology(int n, double cell_radius, std::uint64_t seed);

/// Build from explicit positions (tests, replay). Ids follow input order.
Topology make_topology(std::span<const Point> positions, double cell_radius = 1000.0,
                       std::uint64_t seed = 0);

/// Initial battery levels, uniform in [20, 100] percent, from a stream derived
/// from the topology seed. Prefix-stable in n like the positions.
std::vector<double> initial_batteries(int n, std::uint64_t seed);

// CSV audit format: device_id,x_m,y_m
void write_topology_csv(std::ostream& out, const Topology& topo);
Topology read_topology_csv(std::istream& in, double cell_radius = 1000.0, std::uint64_t seed = 0);

}  // namespace d2dsim
