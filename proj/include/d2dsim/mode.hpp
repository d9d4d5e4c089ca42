#pragma once

#include <optional>
#include <string_view>

namespace d2dsim {

enum class TransmissionMode {
    Unassigned,
    NonD2D,            // direct to BS at the fixed cellular power
    D2DClient,         // attached to another device, serves nobody
    D2DRelay,          // attached to BS, may serve clients
    D2DMultiHopRelay,  // attached to a device, may serve clients
};

std::string_view to_string(TransmissionMode m);
std::optional<TransmissionMode> mode_from_string(std::string_view s);

inline bool is_d2d_mode(TransmissionMode m) {
    return m == TransmissionMode::D2DClient || m == TransmissionMode::D2DRelay ||
           m == TransmissionMode::D2DMultiHopRelay;
}

inline bool is_relay_role(TransmissionMode m) {
    return m == TransmissionMode::D2DRelay || m == TransmissionMode::D2DMultiHopRelay;
}

// Modes whose parent is the BS.
inline bool attaches_to_bs(TransmissionMode m) {
    return m == TransmissionMode::NonD2D || m == TransmissionMode::D2DRelay;
}

}  // namespace d2dsim
