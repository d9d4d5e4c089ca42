#include "d2dsim/dais.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "d2dsim/csv.hpp"

namespace d2dsim {

void DaisConfig::validate() const {
    if (!(wdr_threshold >= 0.0 && wdr_threshold <= 100.0))
        throw ConfigError("dais.wdr_threshold must be in [0, 100]");
    if (!(bpl_threshold >= 0.0 && bpl_threshold <= 100.0))
        throw ConfigError("dais.bpl_threshold must be in [0, 100]");
    if (!(d2d_range > 0.0) || !std::isfinite(d2d_range)) throw ConfigError("dais.d2d_range must be positive");
}

std::string_view to_string(DaisMessageKind k) {
    switch (k) {
        case DaisMessageKind::Discovery: return "discovery";
        case DaisMessageKind::Advertisement: return "advertisement";
        case DaisMessageKind::JoinRequest: return "join-request";
        case DaisMessageKind::JoinAccept: return "join-accept";
        case DaisMessageKind::ReplaceNotify: return "replace-notify";
    }
    return "?";
}

std::string_view to_string(DaisEventKind k) {
    switch (k) {
        case DaisEventKind::Join: return "join";
        case DaisEventKind::Direct: return "direct";
        case DaisEventKind::Replace: return "replace";
        case DaisEventKind::ReplaceRejected: return "replace-rejected";
    }
    return "?";
}

void write_dais_trace(std::ostream& out, const DaisLog& log) {
    for (const auto& e : log.events)
        out << to_string(e.kind) << " device=" << e.device << " mode=" << to_string(e.mode)
            << " parent=" << e.parent << " incumbent=" << e.incumbent
            << " wdr_before=" << csv::number(e.wdr_before, 1) << " wdr_after=" << csv::number(e.wdr_after, 1)
            << '\n';
}

namespace {

void send(NetworkState& state, DaisLog* log, DaisMessageKind kind, DeviceId from, DeviceId to) {
    state.add_messages(1);
    if (log) log->messages.push_back({kind, from, to});
}

void record(DaisLog* log, const DaisEvent& e) {
    if (log) log->events.push_back(e);
}

// Smallest WDR (in SE units) among the devices below root.
double min_client_wdr_se(const NetworkState& state, DeviceId root) {
    double m = std::numeric_limits<double>::infinity();
    std::vector<DeviceId> stack(state.children(root).begin(), state.children(root).end());
    while (!stack.empty()) {
        const DeviceId k = stack.back();
        stack.pop_back();
        m = std::min(m, state.wdr_se(k));
        for (DeviceId c : state.children(k)) stack.push_back(c);
    }
    return m;
}

struct Saved {
    DeviceId id;
    TransmissionMode mode;
    DeviceId parent;
};

// new_id is currently a client of j. Try swapping: new_id takes j's place
// and j hangs below it.
void try_replacement(NetworkState& state, DeviceId new_id, DeviceId j, const DaisConfig& cfg, DaisLog* log) {
    const TransmissionMode jm = state.mode(j);
    const DeviceId jp = state.parent(j);
    if (jp != kBsId && state.distance(new_id, jp) > cfg.d2d_range) return;

    const double upstream = jp == kBsId ? std::numeric_limits<double>::infinity() : state.wdr_se(jp);
    const double prospective = std::min(state.prospective_link_se(new_id, jm, jp), upstream);
    if (!(prospective > state.wdr_se(j))) return;

    const double before = min_client_wdr_se(state, j);
    std::vector<Saved> saved{{new_id, state.mode(new_id), j}, {j, jm, jp}};
    const std::vector<DeviceId> others = [&] {
        std::vector<DeviceId> v;
        for (DeviceId k : state.children(j))
            if (k != new_id) v.push_back(k);
        return v;
    }();

    state.attach(new_id, jm, jp);
    state.attach(j, TransmissionMode::D2DMultiHopRelay, new_id);
    std::vector<Saved> moved;
    for (DeviceId k : others) {
        if (!state.in_d2d_range(k, new_id) || state.distance(k, new_id) > cfg.d2d_range) continue;
        const double old_wdr = state.wdr_se(k);
        const TransmissionMode km = state.mode(k);
        state.attach(k, km, new_id);
        if (state.wdr_se(k) < old_wdr)
            state.attach(k, km, j);
        else
            moved.push_back({k, km, j});
    }
    if (state.children(j).empty()) state.set_mode(j, TransmissionMode::D2DClient);

    const double after = min_client_wdr_se(state, new_id);
    DaisEvent e{DaisEventKind::Replace, new_id, jm, jp, j, before * state.channel().bandwidth,
                after * state.channel().bandwidth};
    if (after < before) {
        for (auto it = moved.rbegin(); it != moved.rend(); ++it) state.attach(it->id, it->mode, it->parent);
        state.attach(j, saved[1].mode, saved[1].parent);
        state.attach(new_id, saved[0].mode, saved[0].parent);
        e.kind = DaisEventKind::ReplaceRejected;
        record(log, e);
        return;
    }
    send(state, log, DaisMessageKind::ReplaceNotify, new_id, j);
    for (const auto& m : moved) send(state, log, DaisMessageKind::ReplaceNotify, new_id, m.id);
    record(log, e);
}

}  // namespace

void dais_join(NetworkState& state, DeviceId new_id, const DaisConfig& cfg, DaisLog* log) {
    if (state.is_assigned(new_id))
        throw std::logic_error("dais_join: device " + std::to_string(new_id) + " is already assigned");
    const double range = std::min(cfg.d2d_range, state.channel().d2d_range);

    send(state, log, DaisMessageKind::Discovery, new_id, kBroadcast);

    const double direct_se = state.prospective_link_se(new_id, TransmissionMode::D2DRelay, kBsId);
    const double bar = cfg.wdr_threshold / 100.0 * direct_se;
    DeviceId best = kNoParent;
    double best_wdr = -1.0;
    for (std::size_t idx = 0; idx < state.size(); ++idx) {
        const auto j = static_cast<DeviceId>(idx);
        if (j == new_id || !is_d2d_mode(state.mode(j))) continue;
        if (state.distance(new_id, j) > range) continue;
        if (state.device(j).battery < cfg.bpl_threshold) continue;
        const double wj = state.wdr_se(j);
        if (wj < bar) continue;
        const double w = std::min(state.prospective_link_se(new_id, TransmissionMode::D2DClient, j), wj);
        if (w > best_wdr) {
            best_wdr = w;
            best = j;
        }
    }

    const double bw = state.channel().bandwidth;
    if (best == kNoParent) {
        state.attach(new_id, TransmissionMode::D2DRelay, kBsId);
        record(log, {DaisEventKind::Direct, new_id, TransmissionMode::D2DRelay, kBsId, kNoParent, direct_se * bw,
                     state.wdr(new_id)});
        return;
    }

    send(state, log, DaisMessageKind::Advertisement, best, new_id);
    const bool was_relay = is_relay_role(state.mode(best));
    attach_as_client(state, new_id, best);
    record(log, {DaisEventKind::Join, new_id, TransmissionMode::D2DClient, best, kNoParent, direct_se * bw,
                 state.wdr(new_id)});

    if (cfg.replacement && was_relay && state.device(new_id).battery >= cfg.bpl_threshold)
        try_replacement(state, new_id, best, cfg, log);
}

void run_dais(NetworkState& state, const DaisConfig& cfg, DaisLog* log) {
    cfg.validate();
    for (std::size_t i = 0; i < state.size(); ++i)
        if (!state.is_assigned(static_cast<DeviceId>(i))) dais_join(state, static_cast<DeviceId>(i), cfg, log);
}

NetworkState run_dais(const Topology& topo, const DaisConfig& cfg, const ChannelConfig& chan, DaisLog* log) {
    NetworkState state(topo, chan, "dais");
    run_dais(state, cfg, log);
    return state;
}

}  // namespace d2dsim
