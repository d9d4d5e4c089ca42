#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace d2dsim {

/// Reproducible random stream.
///
/// Backed by std::mt19937_64, whose output sequence is fixed by the C++
/// standard. The distribution helpers below are hand-rolled because the
/// standard library distributions are implementation-defined and would break
/// bit-exact reruns across toolchains. Any change to this class must bump
/// kRngVersion.
class Rng {
public:
    static constexpr std::string_view kAlgorithm = "mt19937_64";
    static constexpr int kRngVersion = 1;

    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Independent stream for a named purpose, derived from a base seed.
    static Rng derive(std::uint64_t seed, std::uint64_t stream_tag) {
        return Rng(splitmix64(seed ^ splitmix64(stream_tag)));
    }

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform in [0, 1) with 53 bits of mantissa.
    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    /// Uniform integer in [0, n). Rejection sampling keeps it unbiased.
    std::uint64_t below(std::uint64_t n) {
        if (n <= 1) return 0;
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t x = engine_();
        while (x >= limit) x = engine_();
        return x % n;
    }

    static constexpr std::uint64_t splitmix64(std::uint64_t x) {
        x += 0x9E3779B97F4A7C15ULL;
        x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
        x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
        return x ^ (x >> 31);
    }

private:
    std::mt19937_64 engine_;
};

// Stream tags. Positions use the raw seed; everything else derives from it.
inline constexpr std::uint64_t kBatteryStream = 0xBA77E41ULL;
inline constexpr std::uint64_t kRandomStrategyStream = 0x5A4D0DULL;
inline constexpr std::uint64_t kClusteringStream = 0xC1A55ULL;

}  // namespace d2dsim
