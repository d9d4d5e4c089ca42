#include "d2dsim/cluster_heads.hpp"

#include <cmath>

#include "d2dsim/rng.hpp"

namespace d2dsim {

void HeuristicConfig::validate(const ChannelConfig& chan) const {
    if (!(radius > 0.0) || !std::isfinite(radius)) throw ConfigError("heuristic.radius must be > 0");
    if (radius > chan.d2d_range) throw ConfigError("heuristic.radius must be <= channel.d2d_range");
}

double direct_rate(const Topology& topo, DeviceId id, const ChannelConfig& chan) {
    return link_se(chan.default_tp, distance_to_bs(topo.position(id)), LinkClass::Cellular, chan) * chan.bandwidth;
}

NetworkState select_cluster_heads(const ClusterAssignment& assignment, const Topology& topo,
                                  const ChannelConfig& chan, const HeuristicConfig& cfg, std::string strategy_name) {
    cfg.validate(chan);
    if (assignment.labels.size() != topo.size())
        throw std::invalid_argument("select_cluster_heads: assignment covers " + std::to_string(assignment.labels.size()) +
                                    " devices, topology has " + std::to_string(topo.size()));
    assignment.validate();

    const auto n = static_cast<DeviceId>(topo.size());
    const auto k = static_cast<std::size_t>(assignment.cluster_count);
    std::vector<DeviceId> head(k, kNoParent);
    std::vector<double> head_rate(k, -1.0);
    for (DeviceId i = 0; i < n; ++i) {
        const int c = assignment.labels[static_cast<std::size_t>(i)];
        if (c == kNoise) continue;
        const double r = direct_rate(topo, i, chan);
        if (r > head_rate[static_cast<std::size_t>(c)]) {
            head_rate[static_cast<std::size_t>(c)] = r;
            head[static_cast<std::size_t>(c)] = i;
        }
    }

    NetworkState s(topo, chan, std::move(strategy_name));
    for (DeviceId h : head) s.attach(h, TransmissionMode::D2DRelay, kBsId);
    for (DeviceId i = 0; i < n; ++i) {
        if (s.is_assigned(i)) continue;
        const int c = assignment.labels[static_cast<std::size_t>(i)];
        const DeviceId h = c == kNoise ? kNoParent : head[static_cast<std::size_t>(c)];
        if (h != kNoParent && s.distance(i, h) <= cfg.radius)
            s.attach(i, TransmissionMode::D2DClient, h);
        else
            s.attach(i, TransmissionMode::NonD2D, kBsId);
    }
    return s;
}

std::string_view to_string(UlcAlgorithm a) {
    switch (a) {
        case UlcAlgorithm::FuzzyArt: return "fuzzyart";
        case UlcAlgorithm::Dbscan: return "dbscan";
        case UlcAlgorithm::Mec: return "mec";
    }
    return "?";
}

std::optional<UlcAlgorithm> ulc_from_string(std::string_view s) {
    for (auto a : {UlcAlgorithm::FuzzyArt, UlcAlgorithm::Dbscan, UlcAlgorithm::Mec})
        if (to_string(a) == s) return a;
    return std::nullopt;
}

ClusterAssignment cluster(UlcAlgorithm algorithm, const Topology& topo, const UlcConfigs& cfg) {
    const auto pts = topo.positions();
    switch (algorithm) {
        case UlcAlgorithm::FuzzyArt: return fuzzy_art(pts, cfg.fuzzyart).assignment;
        case UlcAlgorithm::Dbscan: return dbscan(pts, cfg.dbscan);
        case UlcAlgorithm::Mec: return mec(pts, cfg.mec, Rng::splitmix64(topo.seed ^ kClusteringStream)).assignment;
    }
    throw std::invalid_argument("cluster: unknown algorithm");
}

NetworkState run_ulc_strategy(UlcAlgorithm algorithm, const Topology& topo, const ChannelConfig& chan,
                              const UlcConfigs& cfg) {
    NetworkState s = select_cluster_heads(cluster(algorithm, topo, cfg), topo, chan, cfg.heuristic,
                                          std::string(to_string(algorithm)));
    s.add_messages(2 * static_cast<std::int64_t>(topo.size()));
    return s;
}

}  // namespace d2dsim
