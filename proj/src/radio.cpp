#include "d2dsim/radio.hpp"

#include <atomic>
#include <string>

namespace d2dsim {

namespace {
std::atomic<std::uint64_t> g_near_field_clamps{0};

void require_positive(double v, const char* field) {
    if (!(v > 0.0) || !std::isfinite(v))
        throw ConfigError(std::string("channel.") + field + " must be a positive number, got " +
                          std::to_string(v));
}
}  // namespace

void ChannelConfig::validate(double cell_radius) const {
    require_positive(freq_cellular, "freq_cellular");
    require_positive(freq_d2d, "freq_d2d");
    require_positive(bandwidth, "bandwidth");
    require_positive(noise_figure, "noise_figure");
    require_positive(default_tp, "default_tp");
    require_positive(min_tp, "min_tp");
    require_positive(tp_step, "tp_step");
    require_positive(circuit_power, "circuit_power");
    require_positive(d2d_range, "d2d_range");
    require_positive(d_min, "d_min");
    if (min_tp > default_tp) throw ConfigError("channel.min_tp must be <= channel.default_tp");
    if (d2d_range > cell_radius) throw ConfigError("channel.d2d_range must be <= cell_radius");
    if (!(power_control_margin >= 0.0 && power_control_margin < 1.0))
        throw ConfigError("channel.power_control_margin must be in [0, 1)");
}

double fspl_db(double d, double f, double d_min) {
    if (d < d_min) {
        g_near_field_clamps.fetch_add(1, std::memory_order_relaxed);
        d = d_min;
    }
    return 20.0 * std::log10(d) + 20.0 * std::log10(f) - 147.55;
}

std::uint64_t near_field_clamp_count() { return g_near_field_clamps.load(std::memory_order_relaxed); }
void reset_near_field_clamp_count() { g_near_field_clamps.store(0, std::memory_order_relaxed); }

double noise_floor_dbm(const ChannelConfig& cfg) {
    return -174.0 + 10.0 * std::log10(cfg.bandwidth) + cfg.noise_figure;
}

double link_frequency(LinkClass cls, const ChannelConfig& cfg) {
    return cls == LinkClass::Cellular ? cfg.freq_cellular : cfg.freq_d2d;
}

double link_snr(double tp, double d, LinkClass cls, const ChannelConfig& cfg) {
    const double snr_db = mw_to_dbm(tp) - fspl_db(d, link_frequency(cls, cfg), cfg.d_min) - noise_floor_dbm(cfg);
    return dbm_to_mw(snr_db);
}

double link_se(double tp, double d, LinkClass cls, const ChannelConfig& cfg) {
    return std::log2(1.0 + link_snr(tp, d, cls, cfg));
}

LinkBudget link_budget(double tp, double d, LinkClass cls, const ChannelConfig& cfg) {
    LinkBudget b;
    b.tx_power = tp;
    b.distance = d;
    b.path_loss = fspl_db(d, link_frequency(cls, cfg), cfg.d_min);
    b.snr = dbm_to_mw(mw_to_dbm(tp) - b.path_loss - noise_floor_dbm(cfg));
    b.se = std::log2(1.0 + b.snr);
    b.rate = b.se * cfg.bandwidth;
    return b;
}

double controlled_power(double tp_max, double d, LinkClass cls, const ChannelConfig& cfg) {
    if (cfg.power_control_margin <= 0.0) return tp_max;
    const double snr_full = link_snr(tp_max, d, cls, cfg);
    const double se_target = (1.0 - cfg.power_control_margin) * std::log2(1.0 + snr_full);
    const double snr_target = std::exp2(se_target) - 1.0;
    // SNR is linear in power, so scale directly
    return tp_max * (snr_target / snr_full);
}

double transmit_power(TransmissionMode mode, double d, LinkClass cls, const ChannelConfig& cfg) {
    switch (mode) {
        case TransmissionMode::NonD2D: return cfg.default_tp;
        case TransmissionMode::D2DClient:
        case TransmissionMode::D2DRelay:
        case TransmissionMode::D2DMultiHopRelay: return controlled_power(cfg.default_tp, d, cls, cfg);
        case TransmissionMode::Unassigned: break;
    }
    throw std::logic_error("transmit_power: device has no assigned mode");
}

double device_pc(TransmissionMode mode, double tp, const ChannelConfig& cfg) {
    switch (mode) {
        case TransmissionMode::NonD2D: return cfg.default_tp + cfg.circuit_power;
        case TransmissionMode::D2DClient:
        case TransmissionMode::D2DRelay:
        case TransmissionMode::D2DMultiHopRelay: return tp + cfg.circuit_power;
        case TransmissionMode::Unassigned: break;
    }
    throw std::logic_error("device_pc: device has no assigned mode");
}

}  // namespace d2dsim
