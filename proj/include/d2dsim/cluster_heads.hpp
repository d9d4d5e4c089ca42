#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "d2dsim/clustering.hpp"
#include "d2dsim/network.hpp"

namespace d2dsim {

struct HeuristicConfig {
    double radius = 200.0;  // meters from the head

    void validate(const ChannelConfig& chan) const;
};

/// Full-power direct-to-BS rate used to rank cluster members.
double direct_rate(const Topology& topo, DeviceId id, const ChannelConfig& chan);

/// Per cluster: the member with the highest direct rate (lowest id on ties)
/// becomes a D2DRelay, members within radius of it become its D2DClients, and
/// everyone else, noise included, stays NonD2D. Heads without clients remain
/// D2DRelay. No messages are counted here.
NetworkState select_cluster_heads(const ClusterAssignment& assignment, const Topology& topo,
                                  const ChannelConfig& chan, const HeuristicConfig& cfg = {},
                                  std::string strategy_name = "heads");

enum class UlcAlgorithm { FuzzyArt, Dbscan, Mec };

std::string_view to_string(UlcAlgorithm a);
std::optional<UlcAlgorithm> ulc_from_string(std::string_view s);

struct UlcConfigs {
    FuzzyArtConfig fuzzyart;
    DbscanConfig dbscan;
    MecConfig mec;
    HeuristicConfig heuristic;
};

ClusterAssignment cluster(UlcAlgorithm algorithm, const Topology& topo, const UlcConfigs& cfg);

/// Clustering composed with select_cluster_heads. Counts one report and one
/// assignment message per device (centralized control through the BS).
NetworkState run_ulc_strategy(UlcAlgorithm algorithm, const Topology& topo, const ChannelConfig& chan,
                              const UlcConfigs& cfg = {});

}  // namespace d2dsim
