#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "d2dsim/network.hpp"

namespace d2dsim {

struct DaisConfig {
    double wdr_threshold = 20.0;  // percent of the joiner's direct-to-BS rate
    double bpl_threshold = 50.0;  // percent battery
    double d2d_range = 200.0;     // discovery radius, meters
    bool replacement = true;

    void validate() const;
};

enum class DaisMessageKind { Discovery, Advertisement, JoinRequest, JoinAccept, ReplaceNotify };

std::string_view to_string(DaisMessageKind k);

inline constexpr DeviceId kBroadcast = -3;

struct DaisMessage {
    DaisMessageKind kind = DaisMessageKind::Discovery;
    DeviceId from = 0;
    DeviceId to = kBroadcast;
};

enum class DaisEventKind { Join, Direct, Replace, ReplaceRejected };

std::string_view to_string(DaisEventKind k);

struct DaisEvent {
    DaisEventKind kind = DaisEventKind::Join;
    DeviceId device = 0;
    TransmissionMode mode = TransmissionMode::Unassigned;
    DeviceId parent = kNoParent;
    DeviceId incumbent = kNoParent;  // replace events only
    double wdr_before = 0.0;         // bit/s; joiner's direct rate, or cluster min client WDR
    double wdr_after = 0.0;
};

/// Optional record of every message and decision. message_count on the state
/// always equals messages.size() when a log is attached from the start.
struct DaisLog {
    std::vector<DaisMessage> messages;
    std::vector<DaisEvent> events;
};

/// One structured line per event: kind device mode parent incumbent wdr_before wdr_after.
void write_dais_trace(std::ostream& out, const DaisLog& log);

/// Admit one arriving device. Every device always ends up with a mode.
///
/// The joiner broadcasts a discovery; D2D-mode devices in range whose battery
/// meets bpl_threshold and whose WDR meets the quality bar hold off, and only
/// the best one answers with an advertisement that also serves as the offer.
/// The joiner attaches under it as a client, or to the BS as a D2DRelay if no
/// device qualifies. If the chosen parent was a relay and the joiner would get
/// a better WDR in its place, the two swap roles and the incumbent's clients
/// re-home where that does not hurt them (replace-notify per moved device).
void dais_join(NetworkState& state, DeviceId new_id, const DaisConfig& cfg, DaisLog* log = nullptr);

/// Admit every unassigned device of state in id order.
void run_dais(NetworkState& state, const DaisConfig& cfg, DaisLog* log = nullptr);
NetworkState run_dais(const Topology& topo, const DaisConfig& cfg, const ChannelConfig& chan,
                      DaisLog* log = nullptr);

}  // namespace d2dsim
