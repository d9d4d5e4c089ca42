#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "d2dsim/geometry.hpp"
#include "d2dsim/mode.hpp"
#include "d2dsim/radio.hpp"

namespace d2dsim {

inline constexpr DeviceId kBsId = -1;
inline constexpr DeviceId kNoParent = -2;

struct Device {
    DeviceId id = 0;
    Point position;
    TransmissionMode mode = TransmissionMode::Unassigned;
    DeviceId parent = kNoParent;
    double tp = 0.0;       // mW, set from the mode and link when attached
    double battery = 100.0;
    double link_se = 0.0;  // SE of the uplink to the parent at tp
};

struct Link {
    DeviceId from = 0;
    DeviceId to = kBsId;
    LinkClass cls = LinkClass::Cellular;
    double distance = 0.0;
    double tp = 0.0;
    double se = 0.0;
    double rate = 0.0;
};

/// A strategy bug: cycles, dangling parents, out-of-range D2D links, or a
/// mode that disagrees with its parent kind.
class StructureError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// Per-device modes and attachment forest for one topology.
///
/// Transmit power is never set directly: attach() and set_mode() derive it
/// from the mode and link through transmit_power(). Child lists and mode
/// counts are maintained incrementally.
class NetworkState {
public:
    NetworkState(Topology topo, ChannelConfig chan, std::vector<double> batteries, std::string strategy_name);
    /// Batteries drawn with initial_batteries(n, topo.seed).
    NetworkState(Topology topo, ChannelConfig chan, std::string strategy_name);

    std::size_t size() const { return devices_.size(); }
    const Topology& topology() const { return topo_; }
    const ChannelConfig& channel() const { return chan_; }
    const std::vector<Device>& devices() const { return devices_; }
    const Device& device(DeviceId id) const { return devices_.at(index(id)); }
    TransmissionMode mode(DeviceId id) const { return device(id).mode; }
    DeviceId parent(DeviceId id) const { return device(id).parent; }
    bool is_assigned(DeviceId id) const { return mode(id) != TransmissionMode::Unassigned; }

    /// Children in ascending id order.
    const std::vector<DeviceId>& children(DeviceId id) const { return children_.at(index(id)); }

    double distance(DeviceId a, DeviceId b) const;
    double distance_to_bs(DeviceId a) const;
    bool in_d2d_range(DeviceId a, DeviceId b) const { return distance(a, b) <= chan_.d2d_range; }

    /// Set mode and parent. The parent must match the mode (BS for NonD2D and
    /// D2DRelay, an assigned device for the others), lie within d2d_range, and
    /// not be a descendant of id.
    void attach(DeviceId id, TransmissionMode mode, DeviceId parent);
    /// Change mode keeping the parent. Parent kind must still match.
    void set_mode(DeviceId id, TransmissionMode mode);
    /// Back to Unassigned. Fails if the device still has children.
    void detach(DeviceId id);

    /// Uplink SE id would have if attached to parent in mode (state unchanged).
    double prospective_link_se(DeviceId id, TransmissionMode mode, DeviceId parent) const;

    Link link(DeviceId id) const;
    double link_rate(DeviceId id) const { return device(id).link_se * chan_.bandwidth; }
    /// Links from id up to the BS. Throws StructureError on cycles or gaps.
    std::vector<Link> path_to_bs(DeviceId id) const;
    /// Minimum link rate (bit/s) along the path to the BS.
    double wdr(DeviceId id) const;
    /// wdr(id) / bandwidth, without building the path.
    double wdr_se(DeviceId id) const;

    std::int64_t message_count() const { return messages_; }
    void add_messages(std::int64_t n);

    const std::string& strategy_name() const { return strategy_name_; }
    int mode_count(TransmissionMode m) const { return mode_counts_[static_cast<std::size_t>(m)]; }

private:
    std::size_t index(DeviceId id) const;
    void set_parent_link(DeviceId id, DeviceId parent);
    void refresh_power(Device& d);

    Topology topo_;
    ChannelConfig chan_;
    std::vector<Device> devices_;
    std::vector<std::vector<DeviceId>> children_;
    std::array<int, 5> mode_counts_{};
    std::int64_t messages_ = 0;
    std::string strategy_name_;
};

/// Attach id as a D2DClient of parent and promote parent from D2DClient to
/// D2DMultiHopRelay if needed.
void attach_as_client(NetworkState& state, DeviceId id, DeviceId parent);

// Aggregates. These assume every device is assigned.

/// Sum over devices of the end-to-end SE each device delivers: its access link
/// SE capped by the path bottleneck, i.e. wdr / bandwidth.
double total_se(const NetworkState& state);
/// Plain sum of per-link SE, ignoring bottlenecks.
double sum_link_se(const NetworkState& state);
double total_pc(const NetworkState& state);

struct ClusterQuality {
    int non_d2d_count = 0;
    int cluster_count = 0;         // relay-role devices with at least one child
    int cluster_device_total = 0;  // devices attached to another device
    double mean_devices_per_cluster = 0.0;
    int mhr_count = 0;
    int mhr_no_sharing_count = 0;  // MHRs with no children

    friend bool operator==(const ClusterQuality&, const ClusterQuality&) = default;
};

/// From the maintained mode counts and child lists.
ClusterQuality cluster_quality(const NetworkState& state);
/// From parent pointers alone. Must agree with cluster_quality().
ClusterQuality cluster_quality_recount(const NetworkState& state);

struct MetricsReport {
    double total_se = 0.0;
    double total_pc = 0.0;
    std::int64_t exec_time_units = 0;  // 1 unit = 100 ms, floored
    std::int64_t message_count = 0;
    int non_d2d_count = 0;
    int cluster_count = 0;
    int cluster_device_total = 0;
    double mean_devices_per_cluster = 0.0;
    int mhr_count = 0;
    int mhr_no_sharing_count = 0;
};

std::int64_t exec_time_units(double elapsed_ms);
MetricsReport make_report(const NetworkState& state, double elapsed_ms);

/// Checks every invariant: all assigned, modes match parent kinds, forest
/// rooted at the BS, D2D links within range, child lists consistent.
void validate(const NetworkState& state);

// device_id,x_m,y_m,mode,parent,tp_mw,battery_pct (parent -1 = BS)
void write_state_csv(std::ostream& out, const NetworkState& state);

}  // namespace d2dsim
