#pragma once

#include <cstdint>
#include <random>

namespace dscim {

/// splitmix64 step; used to derive stream seeds from a master seed.
inline std::uint64_t splitmix64(std::uint64_t& s) {
    s += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = s;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Deterministic per-trial generator. Seeded by (master, stream) so trials
/// can be evaluated in any order or on any thread with identical results.
/// Distributions are implemented here rather than with std::*_distribution,
/// whose outputs are not pinned by the standard.
class TrialRng {
  public:
    TrialRng(std::uint64_t master, std::uint64_t stream) {
        std::uint64_t s = master ^ (0x517cc1b727220a95ULL * (stream + 1));
        eng_.seed(splitmix64(s));
    }

    std::uint64_t u64() { return eng_(); }

    /// uniform on [0, 1)
    double unit() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    /// uniform on [-128, 127]
    std::int8_t uniform_i8() { return static_cast<std::int8_t>(static_cast<std::uint8_t>(eng_() & 0xff)); }

    /// uniform on [0, 255]
    std::uint8_t uniform_u8() { return static_cast<std::uint8_t>(eng_() & 0xff); }

    bool bernoulli(double p) { return unit() < p; }

    /// round(N(0, sigma)) clamped to [-clip, clip]; Box-Muller, one draw
    /// per call (the second variate is discarded to keep the stream layout
    /// independent of call parity).
    std::int8_t gaussian_i8(double sigma, int clip);

  private:
    std::mt19937_64 eng_;
};

}  // namespace dscim
