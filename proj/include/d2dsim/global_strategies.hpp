#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "d2dsim/network.hpp"

namespace d2dsim {

struct SumRateConfig {
    int exhaustive_max_n = 6;
    double d2d_range = 200.0;
    /// After each arrival, move childless devices under the newcomer when that
    /// raises their WDR.
    bool rehome = true;

    void validate() const;
};

/// Greedy with full network knowledge. Each arrival picks the attachment
/// (BS as D2DRelay, or client of any in-range device) that maximizes total_se,
/// ties going to the BS and then the lowest id. Every existing device reports
/// its state once per arrival.
NetworkState run_sum_rate(const Topology& topo, const ChannelConfig& chan, const SumRateConfig& cfg = {});

struct OracleResult {
    double total_se = 0.0;
    double total_pc = 0.0;
    std::vector<DeviceId> parents;  // kBsId for BS
    std::vector<TransmissionMode> modes;
    std::int64_t forests_evaluated = 0;
};

/// Best feasible forest by total_se over every parent assignment within
/// range. Modes follow from the forest: BS leaves are NonD2D, BS parents
/// D2DRelay, device leaves D2DClient, device parents D2DMultiHopRelay. Ties go
/// to lower total_pc, then the lexicographically smallest parent vector.
OracleResult exhaustive_oracle(const Topology& topo, const ChannelConfig& chan, const SumRateConfig& cfg = {});

NetworkState oracle_state(const Topology& topo, const ChannelConfig& chan, const OracleResult& result);

// device_id,mode,parent then a final total_se,total_pc line.
void write_oracle_csv(std::ostream& out, const OracleResult& result);

/// Each arrival picks uniformly among the BS (as D2DRelay) and every assigned
/// device in range (as its client). No messages.
NetworkState run_random(const Topology& topo, const ChannelConfig& chan, std::uint64_t seed);

/// Everyone straight to the BS at default_tp. No messages.
NetworkState run_non_d2d(const Topology& topo, const ChannelConfig& chan);

}  // namespace d2dsim
