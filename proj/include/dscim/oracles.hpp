#pragma once

#include <cstdint>
#include <span>

#include "dscim/macro.hpp"

namespace dscim {

/// Closed-form OR-saturation point at fan-in n and per-input probability p.
struct SaturationPoint {
    int fan_in = 1;
    double p = 0.0;
    double expected_or = 0.0;   // 1 - (1-p)^n
    double ideal_sum = 0.0;     // n * p
    double rel_error = 0.0;     // 1 - expected_or/ideal_sum, 0 at p == 0
};

/// Exact INT8 dot product ground truth.
long long exact_psum(const SignedColumn& col);

/// Exact count of sampling points covered on the full 65536-point grid:
/// sum over rows of a_s * w_s (region disjointness makes the union count
/// additive). Oracle for the exhaustive-sampler count.
long long enumerate_expected_count(const SignedColumn& col, const MacroConfig& cfg);

struct NaiveOrCount {
    long long or_count = 0;   // observed OR-accumulated 1s
    double ideal = 0.0;       // cycles * sum(p_i)
};

/// Prior-art style Monte Carlo: one independent generator per row, product
/// bits OR-accumulated. Exhibits 1s saturation by construction. Uses a
/// dedicated seeded generator, not the LFSR catalog, so PRNG quality is not
/// conflated with saturation.
NaiveOrCount naive_scim_count(std::span<const double> products_p, long long cycles, std::uint64_t seed);

/// rel_error = 1 - (1 - (1-p)^n) / (n p), by limit 0 at p = 0.
SaturationPoint or_saturation_rel_error(int fan_in, double p);

struct BipolarResult {
    long long estimate = 0;    // scaled difference of the two paths
    long long pos_count = 0;   // OR count of the positive-weight path
    long long neg_count = 0;
};

/// Behavioral approximation of the prior-art bipolar OR-MAC: activations
/// coerced unsigned (sign-bit flip), weights split by sign into two OR
/// paths with magnitude comparators, independent per-row maximal LFSRs,
/// each path rescaled with the k=0 formula. No remapping, so dense inputs
/// saturate.
BipolarResult bipolar_mac_simulate(const SignedColumn& col, const MacroConfig& cfg);

}  // namespace dscim
