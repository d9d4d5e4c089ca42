#include "d2dsim/mode.hpp"

#include <array>
#include <utility>

namespace d2dsim {

namespace {
constexpr std::array<std::pair<TransmissionMode, std::string_view>, 5> kNames{{
    {TransmissionMode::Unassigned, "Unassigned"},
    {TransmissionMode::NonD2D, "NonD2D"},
    {TransmissionMode::D2DClient, "D2DClient"},
    {TransmissionMode::D2DRelay, "D2DRelay"},
    {TransmissionMode::D2DMultiHopRelay, "D2DMultiHopRelay"},
}};
}

std::string_view to_string(TransmissionMode m) {
    for (const auto& [mode, name] : kNames)
        if (mode == m) return name;
    return "?";
}

std::optional<TransmissionMode> mode_from_string(std::string_view s) {
    for (const auto& [mode, name] : kNames)
        if (name == s) return mode;
    return std::nullopt;
}

}  // namespace d2dsim
