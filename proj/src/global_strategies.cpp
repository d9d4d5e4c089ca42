#include "d2dsim/global_strategies.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "d2dsim/csv.hpp"
#include "d2dsim/rng.hpp"

namespace d2dsim {

void SumRateConfig::validate() const {
    if (exhaustive_max_n < 1 || exhaustive_max_n > 8)
        throw ConfigError("sumrate.exhaustive_max_n must be in [1, 8]");
    if (!(d2d_range > 0.0) || !std::isfinite(d2d_range)) throw ConfigError("sumrate.d2d_range must be positive");
}

namespace {

bool better(double a, double b) { return a > b + 1e-12 * std::max(1.0, std::abs(b)); }

// Next parent vector in lexicographic order; false after the last one.
bool advance(std::vector<std::size_t>& pick, const std::vector<std::vector<DeviceId>>& options) {
    for (std::size_t pos = pick.size(); pos-- > 0;) {
        if (++pick[pos] < options[pos].size()) return true;
        pick[pos] = 0;
    }
    return false;
}

double client_wdr_se(const NetworkState& s, DeviceId id, DeviceId parent) {
    return std::min(s.prospective_link_se(id, TransmissionMode::D2DClient, parent), s.wdr_se(parent));
}

}  // namespace

NetworkState run_sum_rate(const Topology& topo, const ChannelConfig& chan, const SumRateConfig& cfg) {
    cfg.validate();
    NetworkState s(topo, chan, "sumrate");
    const double range = std::min(cfg.d2d_range, chan.d2d_range);
    const auto n = static_cast<DeviceId>(s.size());

    for (DeviceId i = 0; i < n; ++i) {
        s.add_messages(i);

        // Adding a leaf leaves every other device's links unchanged (a client
        // promoted to MHR keeps its power), so the change in total_se is the
        // newcomer's own WDR.
        DeviceId best = kBsId;
        double best_se = s.prospective_link_se(i, TransmissionMode::D2DRelay, kBsId);
        for (DeviceId j = 0; j < i; ++j) {
            if (s.distance(i, j) > range) continue;
            const double w = client_wdr_se(s, i, j);
            if (better(w, best_se)) {
                best_se = w;
                best = j;
            }
        }
        if (best == kBsId)
            s.attach(i, TransmissionMode::D2DRelay, kBsId);
        else
            attach_as_client(s, i, best);

        if (!cfg.rehome) continue;
        // Moving a childless device only changes its own WDR.
        for (DeviceId k = 0; k < i; ++k) {
            if (!s.children(k).empty() || s.parent(k) == i || s.distance(i, k) > range) continue;
            if (better(client_wdr_se(s, k, i), s.wdr_se(k))) attach_as_client(s, k, i);
        }
    }
    return s;
}

OracleResult exhaustive_oracle(const Topology& topo, const ChannelConfig& chan, const SumRateConfig& cfg) {
    cfg.validate();
    const auto n = static_cast<int>(topo.size());
    if (n > cfg.exhaustive_max_n)
        throw std::invalid_argument("exhaustive_oracle: n = " + std::to_string(n) + " exceeds exhaustive_max_n = " +
                                    std::to_string(cfg.exhaustive_max_n));
    const double range = std::min(cfg.d2d_range, chan.d2d_range);
    const auto un = static_cast<std::size_t>(n);

    // Per-link SE and PC for each role a link can take.
    std::vector<double> se_nond2d(un), pc_nond2d(un), se_relay(un), pc_relay(un);
    std::vector<std::vector<double>> se_d2d(un, std::vector<double>(un, 0.0)), pc_d2d = se_d2d;
    std::vector<std::vector<DeviceId>> options(un);
    for (int i = 0; i < n; ++i) {
        const double dbs = distance_to_bs(topo.position(i));
        const double tr = transmit_power(TransmissionMode::D2DRelay, dbs, LinkClass::Cellular, chan);
        se_nond2d[i] = link_se(chan.default_tp, dbs, LinkClass::Cellular, chan);
        pc_nond2d[i] = device_pc(TransmissionMode::NonD2D, chan.default_tp, chan);
        se_relay[i] = link_se(tr, dbs, LinkClass::Cellular, chan);
        pc_relay[i] = device_pc(TransmissionMode::D2DRelay, tr, chan);
        options[i].push_back(kBsId);
        for (int j = 0; j < n; ++j) {
            if (j == i) continue;
            const double d = distance(topo.position(i), topo.position(j));
            if (d > range) continue;
            const double tc = transmit_power(TransmissionMode::D2DClient, d, LinkClass::D2D, chan);
            se_d2d[i][j] = link_se(tc, d, LinkClass::D2D, chan);
            pc_d2d[i][j] = device_pc(TransmissionMode::D2DClient, tc, chan);
            options[i].push_back(j);
        }
    }

    OracleResult best;
    best.total_se = -1.0;
    std::vector<std::size_t> pick(un, 0);
    std::vector<DeviceId> par(un);
    std::vector<char> has_child(un);
    std::vector<double> lse(un);
    while (true) {
        for (std::size_t i = 0; i < un; ++i) par[i] = options[i][pick[i]];
        bool acyclic = true;
        for (int i = 0; i < n && acyclic; ++i) {
            int steps = 0;
            for (DeviceId k = i; k != kBsId; k = par[static_cast<std::size_t>(k)])
                if (++steps > n) {
                    acyclic = false;
                    break;
                }
        }
        if (acyclic) {
            ++best.forests_evaluated;
            std::fill(has_child.begin(), has_child.end(), 0);
            for (std::size_t i = 0; i < un; ++i)
                if (par[i] != kBsId) has_child[static_cast<std::size_t>(par[i])] = 1;
            double pc = 0.0;
            for (std::size_t i = 0; i < un; ++i) {
                if (par[i] == kBsId) {
                    lse[i] = has_child[i] ? se_relay[i] : se_nond2d[i];
                    pc += has_child[i] ? pc_relay[i] : pc_nond2d[i];
                } else {
                    lse[i] = se_d2d[i][static_cast<std::size_t>(par[i])];
                    pc += pc_d2d[i][static_cast<std::size_t>(par[i])];
                }
            }
            double se = 0.0;
            for (int i = 0; i < n; ++i) {
                double m = std::numeric_limits<double>::infinity();
                for (DeviceId k = i; k != kBsId; k = par[static_cast<std::size_t>(k)])
                    m = std::min(m, lse[static_cast<std::size_t>(k)]);
                se += m;
            }
            const bool take = best.total_se < 0.0 || better(se, best.total_se) ||
                              (!better(best.total_se, se) && pc < best.total_pc - 1e-9);
            if (take) {
                best.total_se = se;
                best.total_pc = pc;
                best.parents = par;
            }
        }
        if (!advance(pick, options)) break;
    }

    best.modes.assign(un, TransmissionMode::Unassigned);
    std::fill(has_child.begin(), has_child.end(), 0);
    for (std::size_t i = 0; i < un; ++i)
        if (best.parents[i] != kBsId) has_child[static_cast<std::size_t>(best.parents[i])] = 1;
    for (std::size_t i = 0; i < un; ++i) {
        if (best.parents[i] == kBsId)
            best.modes[i] = has_child[i] ? TransmissionMode::D2DRelay : TransmissionMode::NonD2D;
        else
            best.modes[i] = has_child[i] ? TransmissionMode::D2DMultiHopRelay : TransmissionMode::D2DClient;
    }
    return best;
}

NetworkState oracle_state(const Topology& topo, const ChannelConfig& chan, const OracleResult& result) {
    NetworkState s(topo, chan, "oracle");
    const auto n = result.parents.size();
    std::vector<char> done(n, 0);
    for (std::size_t placed = 0; placed < n;) {
        const std::size_t before = placed;
        for (std::size_t i = 0; i < n; ++i) {
            const DeviceId p = result.parents[i];
            if (done[i] || (p != kBsId && !done[static_cast<std::size_t>(p)])) continue;
            // Parents are placed first; a device-parent gets its final mode
            // (MHR) before any child is attached, which attach() allows.
            s.attach(static_cast<DeviceId>(i), result.modes[i], p);
            done[i] = 1;
            ++placed;
        }
        if (placed == before) throw StructureError("oracle_state: parent vector has a cycle");
    }
    return s;
}

void write_oracle_csv(std::ostream& out, const OracleResult& result) {
    out << "device_id,mode,parent\n";
    for (std::size_t i = 0; i < result.parents.size(); ++i)
        out << i << ',' << to_string(result.modes[i]) << ',' << result.parents[i] << '\n';
    out << "total_se,total_pc\n" << csv::number(result.total_se) << ',' << csv::number(result.total_pc) << '\n';
}

NetworkState run_random(const Topology& topo, const ChannelConfig& chan, std::uint64_t seed) {
    NetworkState s(topo, chan, "random");
    Rng rng = Rng::derive(seed, kRandomStrategyStream);
    const auto n = static_cast<DeviceId>(s.size());
    std::vector<DeviceId> opts;
    for (DeviceId i = 0; i < n; ++i) {
        opts.assign(1, kBsId);
        for (DeviceId j = 0; j < i; ++j)
            if (s.in_d2d_range(i, j)) opts.push_back(j);
        const DeviceId p = opts[rng.below(opts.size())];
        if (p == kBsId)
            s.attach(i, TransmissionMode::D2DRelay, kBsId);
        else
            attach_as_client(s, i, p);
    }
    return s;
}

NetworkState run_non_d2d(const Topology& topo, const ChannelConfig& chan) {
    NetworkState s(topo, chan, "nond2d");
    for (std::size_t i = 0; i < s.size(); ++i) s.attach(static_cast<DeviceId>(i), TransmissionMode::NonD2D, kBsId);
    return s;
}

}  // namespace d2dsim
