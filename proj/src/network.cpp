#include "d2dsim/network.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "d2dsim/csv.hpp"

namespace d2dsim {

namespace {
std::string dev(DeviceId id) { return "device " + std::to_string(id); }
}  // namespace

NetworkState::NetworkState(Topology topo, ChannelConfig chan, std::vector<double> batteries,
                           std::string strategy_name)
    : topo_(std::move(topo)), chan_(chan), strategy_name_(std::move(strategy_name)) {
    if (batteries.size() != topo_.size())
        throw std::invalid_argument("NetworkState: battery list size does not match device count");
    devices_.resize(topo_.size());
    children_.resize(topo_.size());
    for (std::size_t i = 0; i < devices_.size(); ++i) {
        devices_[i].id = topo_.devices[i].id;
        devices_[i].position = topo_.devices[i].position;
        if (!(batteries[i] >= 0.0 && batteries[i] <= 100.0))
            throw std::invalid_argument("NetworkState: battery of " + dev(static_cast<DeviceId>(i)) +
                                        " outside [0, 100]");
        devices_[i].battery = batteries[i];
    }
    mode_counts_[static_cast<std::size_t>(TransmissionMode::Unassigned)] = static_cast<int>(devices_.size());
}

NetworkState::NetworkState(Topology topo, ChannelConfig chan, std::string strategy_name)
    : NetworkState(topo, chan, initial_batteries(static_cast<int>(topo.size()), topo.seed),
                   std::move(strategy_name)) {}

std::size_t NetworkState::index(DeviceId id) const {
    if (id < 0 || static_cast<std::size_t>(id) >= devices_.size())
        throw std::out_of_range("no such device: " + std::to_string(id));
    return static_cast<std::size_t>(id);
}

double NetworkState::distance(DeviceId a, DeviceId b) const {
    return d2dsim::distance(device(a).position, device(b).position);
}

double NetworkState::distance_to_bs(DeviceId a) const {
    return d2dsim::distance(device(a).position, topo_.bs_position);
}

void NetworkState::refresh_power(Device& d) {
    const bool cellular = d.parent == kBsId;
    const LinkClass cls = cellular ? LinkClass::Cellular : LinkClass::D2D;
    const double dist = cellular ? distance_to_bs(d.id) : distance(d.id, d.parent);
    d.tp = transmit_power(d.mode, dist, cls, chan_);
    d.link_se = d2dsim::link_se(d.tp, dist, cls, chan_);
}

void NetworkState::set_parent_link(DeviceId id, DeviceId parent) {
    Device& d = devices_[index(id)];
    if (d.parent >= 0) {
        auto& siblings = children_[index(d.parent)];
        siblings.erase(std::find(siblings.begin(), siblings.end(), id));
    }
    d.parent = parent;
    if (parent >= 0) {
        auto& kids = children_[index(parent)];
        kids.insert(std::lower_bound(kids.begin(), kids.end(), id), id);
    }
}

void NetworkState::attach(DeviceId id, TransmissionMode mode, DeviceId parent) {
    index(id);
    if (mode == TransmissionMode::Unassigned) throw StructureError("attach: " + dev(id) + " given no mode");
    if (attaches_to_bs(mode)) {
        if (parent != kBsId)
            throw StructureError("attach: " + dev(id) + " in mode " + std::string(to_string(mode)) +
                                 " must have the BS as parent");
    } else {
        if (parent < 0 || parent == id)
            throw StructureError("attach: " + dev(id) + " in mode " + std::string(to_string(mode)) +
                                 " needs a device parent");
        if (!is_assigned(parent)) throw StructureError("attach: parent " + dev(parent) + " is unassigned");
        if (!in_d2d_range(id, parent))
            throw StructureError("attach: link " + dev(id) + " -> " + dev(parent) + " exceeds d2d_range");
        std::size_t steps = 0;
        for (DeviceId k = parent; k >= 0; k = device(k).parent) {
            if (k == id) throw StructureError("attach: " + dev(id) + " under " + dev(parent) + " forms a cycle");
            if (++steps > devices_.size()) throw StructureError("attach: existing cycle above " + dev(parent));
        }
    }
    Device& d = devices_[index(id)];
    --mode_counts_[static_cast<std::size_t>(d.mode)];
    ++mode_counts_[static_cast<std::size_t>(mode)];
    set_parent_link(id, parent);
    d.mode = mode;
    refresh_power(d);
}

void NetworkState::set_mode(DeviceId id, TransmissionMode mode) {
    const Device& d = device(id);
    if (d.mode == TransmissionMode::Unassigned) throw StructureError("set_mode: " + dev(id) + " is unassigned");
    if (mode == TransmissionMode::Unassigned || attaches_to_bs(mode) != attaches_to_bs(d.mode))
        throw StructureError("set_mode: " + std::string(to_string(mode)) + " does not match the parent of " + dev(id));
    attach(id, mode, d.parent);
}

void NetworkState::detach(DeviceId id) {
    if (!children(id).empty()) throw StructureError("detach: " + dev(id) + " still has children");
    Device& d = devices_[index(id)];
    --mode_counts_[static_cast<std::size_t>(d.mode)];
    ++mode_counts_[static_cast<std::size_t>(TransmissionMode::Unassigned)];
    set_parent_link(id, kNoParent);
    d.mode = TransmissionMode::Unassigned;
    d.tp = 0.0;
    d.link_se = 0.0;
}

double NetworkState::prospective_link_se(DeviceId id, TransmissionMode mode, DeviceId parent) const {
    const bool cellular = parent == kBsId;
    const LinkClass cls = cellular ? LinkClass::Cellular : LinkClass::D2D;
    const double dist = cellular ? distance_to_bs(id) : distance(id, parent);
    return d2dsim::link_se(transmit_power(mode, dist, cls, chan_), dist, cls, chan_);
}

Link NetworkState::link(DeviceId id) const {
    const Device& d = device(id);
    if (d.mode == TransmissionMode::Unassigned) throw StructureError("link: " + dev(id) + " is unassigned");
    Link l;
    l.from = id;
    l.to = d.parent;
    l.cls = d.parent == kBsId ? LinkClass::Cellular : LinkClass::D2D;
    l.distance = d.parent == kBsId ? distance_to_bs(id) : distance(id, d.parent);
    l.tp = d.tp;
    l.se = d.link_se;
    l.rate = d.link_se * chan_.bandwidth;
    return l;
}

std::vector<Link> NetworkState::path_to_bs(DeviceId id) const {
    std::vector<Link> path;
    for (DeviceId k = id; k != kBsId; k = device(k).parent) {
        if (path.size() >= devices_.size()) throw StructureError("path_to_bs: cycle through " + dev(id));
        path.push_back(link(k));
    }
    return path;
}

double NetworkState::wdr_se(DeviceId id) const {
    double m = std::numeric_limits<double>::infinity();
    std::size_t steps = 0;
    for (DeviceId k = id; k != kBsId;) {
        const Device& d = device(k);
        if (d.mode == TransmissionMode::Unassigned) throw StructureError("wdr: " + dev(k) + " on the path is unassigned");
        if (++steps > devices_.size()) throw StructureError("wdr: cycle through " + dev(id));
        m = std::min(m, d.link_se);
        k = d.parent;
    }
    return m;
}

double NetworkState::wdr(DeviceId id) const { return wdr_se(id) * chan_.bandwidth; }

void NetworkState::add_messages(std::int64_t n) {
    if (n < 0) throw std::invalid_argument("add_messages: negative count");
    messages_ += n;
}

void attach_as_client(NetworkState& state, DeviceId id, DeviceId parent) {
    state.attach(id, TransmissionMode::D2DClient, parent);
    if (state.mode(parent) == TransmissionMode::D2DClient) state.set_mode(parent, TransmissionMode::D2DMultiHopRelay);
}

double total_se(const NetworkState& state) {
    double s = 0.0;
    for (const auto& d : state.devices()) s += state.wdr_se(d.id);
    return s;
}

double sum_link_se(const NetworkState& state) {
    double s = 0.0;
    for (const auto& d : state.devices()) s += state.link(d.id).se;
    return s;
}

double total_pc(const NetworkState& state) {
    double s = 0.0;
    for (const auto& d : state.devices()) s += device_pc(d.mode, d.tp, state.channel());
    return s;
}

namespace {
void finish(ClusterQuality& q) {
    q.mean_devices_per_cluster =
        q.cluster_count > 0 ? static_cast<double>(q.cluster_device_total) / q.cluster_count : 0.0;
}
}  // namespace

ClusterQuality cluster_quality(const NetworkState& state) {
    ClusterQuality q;
    q.non_d2d_count = state.mode_count(TransmissionMode::NonD2D);
    q.mhr_count = state.mode_count(TransmissionMode::D2DMultiHopRelay);
    q.cluster_device_total = state.mode_count(TransmissionMode::D2DClient) + q.mhr_count;
    for (const auto& d : state.devices()) {
        const bool has_children = !state.children(d.id).empty();
        if (is_relay_role(d.mode) && has_children) ++q.cluster_count;
        if (d.mode == TransmissionMode::D2DMultiHopRelay && !has_children) ++q.mhr_no_sharing_count;
    }
    finish(q);
    return q;
}

ClusterQuality cluster_quality_recount(const NetworkState& state) {
    const auto n = state.size();
    std::vector<int> kids(n, 0);
    for (const auto& d : state.devices())
        if (d.parent >= 0) ++kids[static_cast<std::size_t>(d.parent)];
    ClusterQuality q;
    for (const auto& d : state.devices()) {
        const int k = kids[static_cast<std::size_t>(d.id)];
        switch (d.mode) {
            case TransmissionMode::NonD2D: ++q.non_d2d_count; break;
            case TransmissionMode::D2DClient: ++q.cluster_device_total; break;
            case TransmissionMode::D2DRelay: q.cluster_count += k > 0; break;
            case TransmissionMode::D2DMultiHopRelay:
                ++q.cluster_device_total;
                ++q.mhr_count;
                q.cluster_count += k > 0;
                q.mhr_no_sharing_count += k == 0;
                break;
            case TransmissionMode::Unassigned: break;
        }
    }
    finish(q);
    return q;
}

std::int64_t exec_time_units(double elapsed_ms) {
    if (!(elapsed_ms >= 0.0)) return 0;
    return static_cast<std::int64_t>(std::floor(elapsed_ms / 100.0));
}

MetricsReport make_report(const NetworkState& state, double elapsed_ms) {
    MetricsReport r;
    r.total_se = total_se(state);
    r.total_pc = total_pc(state);
    r.exec_time_units = exec_time_units(elapsed_ms);
    r.message_count = state.message_count();
    const ClusterQuality q = cluster_quality(state);
    r.non_d2d_count = q.non_d2d_count;
    r.cluster_count = q.cluster_count;
    r.cluster_device_total = q.cluster_device_total;
    r.mean_devices_per_cluster = q.mean_devices_per_cluster;
    r.mhr_count = q.mhr_count;
    r.mhr_no_sharing_count = q.mhr_no_sharing_count;
    return r;
}

void validate(const NetworkState& state) {
    const auto n = state.size();
    std::vector<std::vector<DeviceId>> expected(n);
    for (const auto& d : state.devices()) {
        if (d.mode == TransmissionMode::Unassigned) throw StructureError("validate: " + dev(d.id) + " has no mode");
        if (attaches_to_bs(d.mode)) {
            if (d.parent != kBsId) throw StructureError("validate: " + dev(d.id) + " must attach to the BS");
        } else {
            if (d.parent < 0 || static_cast<std::size_t>(d.parent) >= n)
                throw StructureError("validate: " + dev(d.id) + " has no device parent");
            if (!state.in_d2d_range(d.id, d.parent))
                throw StructureError("validate: link " + dev(d.id) + " -> " + dev(d.parent) + " exceeds d2d_range");
            expected[static_cast<std::size_t>(d.parent)].push_back(d.id);
        }
        if (d.mode == TransmissionMode::D2DClient && !state.children(d.id).empty())
            throw StructureError("validate: client " + dev(d.id) + " has children");
        std::size_t steps = 0;
        for (DeviceId k = d.id; k != kBsId; k = state.parent(k))
            if (++steps > n) throw StructureError("validate: cycle through " + dev(d.id));
    }
    for (std::size_t i = 0; i < n; ++i)
        if (expected[i] != state.children(static_cast<DeviceId>(i)))
            throw StructureError("validate: child list of " + dev(static_cast<DeviceId>(i)) + " is stale");
    if (!(cluster_quality(state) == cluster_quality_recount(state)))
        throw StructureError("validate: incremental counters disagree with recount");
}

void write_state_csv(std::ostream& out, const NetworkState& state) {
    out << "device_id,x_m,y_m,mode,parent,tp_mw,battery_pct\n";
    for (const auto& d : state.devices())
        out << d.id << ',' << csv::number(d.position.x) << ',' << csv::number(d.position.y) << ','
            << to_string(d.mode) << ',' << d.parent << ',' << csv::number(d.tp) << ','
            << csv::number(d.battery) << '\n';
}

}  // namespace d2dsim
