#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>

#include "d2dsim/mode.hpp"

namespace d2dsim {

enum class LinkClass { Cellular, D2D };

/// Physical-layer parameters. Powers in mW, frequencies and bandwidth in Hz.
/// Frequencies, bandwidth, noise figure and circuit power are calibration
/// choices; the free-space model does not pin them down.
struct ChannelConfig {
    double freq_cellular = 2.0e9;
    double freq_d2d = 2.4e9;
    double bandwidth = 20.0e6;
    double noise_figure = 7.0;  // dB
    double default_tp = 160.0;
    double min_tp = 60.0;
    double tp_step = 10.0;
    double circuit_power = 70.0;
    double d2d_range = 200.0;  // meters
    double d_min = 1.0;        // near-field clamp for path loss, meters

    /// D2D-mode transmitters trim power until their link SE is (1 - margin)
    /// of the full-power SE. 0 disables power control.
    double power_control_margin = 0.01;

    /// Throws ConfigError naming the offending field.
    void validate(double cell_radius = 1000.0) const;
};

class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct LinkBudget {
    double tx_power = 0.0;  // mW
    double distance = 0.0;  // m
    double path_loss = 0.0; // dB
    double snr = 0.0;       // linear
    double se = 0.0;        // bit/s/Hz
    double rate = 0.0;      // bit/s
};

inline double mw_to_dbm(double mw) { return 10.0 * std::log10(mw); }
inline double dbm_to_mw(double dbm) { return std::pow(10.0, dbm / 10.0); }

/// Free-space path loss, d in meters and f in Hz. Distances below d_min are
/// clamped and counted (see near_field_clamp_count).
double fspl_db(double d, double f, double d_min = 1.0);

/// Process-wide number of path-loss evaluations that hit the d_min clamp.
std::uint64_t near_field_clamp_count();
void reset_near_field_clamp_count();

double noise_floor_dbm(const ChannelConfig& cfg);
double link_frequency(LinkClass cls, const ChannelConfig& cfg);

double link_snr(double tp, double d, LinkClass cls, const ChannelConfig& cfg);
double link_se(double tp, double d, LinkClass cls, const ChannelConfig& cfg);
LinkBudget link_budget(double tp, double d, LinkClass cls, const ChannelConfig& cfg);

/// Power a D2D-mode transmitter uses on a link of length d when its cap is
/// tp_max: the smallest power whose SE reaches (1 - margin) of the full-power SE.
double controlled_power(double tp_max, double d, LinkClass cls, const ChannelConfig& cfg);

/// Transmit power for a device in `mode` on a link of length d, given the
/// configured default_tp. NonD2D always uses default_tp.
double transmit_power(TransmissionMode mode, double d, LinkClass cls, const ChannelConfig& cfg);

/// tp + circuit power. NonD2D devices use the constant default_tp regardless of tp.
double device_pc(TransmissionMode mode, double tp, const ChannelConfig& cfg);

}  // namespace d2dsim
