#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "dscim/common.hpp"
#include "dscim/lfsr.hpp"
#include "dscim/sng.hpp"

namespace dscim {

enum class SamplerKind { prng, exhaustive };
enum class AccumulatorKind { direct, latch4 };
enum class Compensation { none, midpoint };

/// Macro geometry and operating point. group_size G must be 4^k
/// (1 exact mode, 4, 16 for DS-CIM1, 64 for DS-CIM2) and divide rows.
/// The exhaustive sampler enumerates all 65536 (RA,RW) pairs, RA in the
/// outer loop, and overrides bitstream_len.
struct MacroConfig {
    int rows = 128;
    int columns = 32;
    int group_size = 16;
    int bitstream_len = 256;
    LfsrSpec prng_a = default_prng_a();
    LfsrSpec prng_w = default_prng_w();
    SamplerKind sampler = SamplerKind::prng;
    AccumulatorKind accumulator = AccumulatorKind::direct;
    Compensation compensation = Compensation::none;
    AxisMode axis_mode = AxisMode::xor_mask;
    int cmr = 64;
    /// Evaluate every row and count OR inputs per cycle instead of taking
    /// the structural shortcut; any group with more than one active row is
    /// recorded in ColumnResult::exclusion_violations.
    bool validate_exclusion = false;

    int shift() const;             // k = log4(group_size)
    long long effective_length() const;
    void validate() const;         // throws ConfigError
};

/// One column of signed operands, rows entries each.
struct SignedColumn {
    std::vector<std::int8_t> x;
    std::vector<std::int8_t> w;
};

/// Per-column simulation output (signed decomposition):
/// psum_est = term_b_est - term_c - term_d, count == sum(per_cycle).
struct ColumnResult {
    long long count = 0;
    std::vector<int> per_cycle;
    long long term_b_est = 0;
    long long term_c = 0;
    long long term_d = 0;
    long long psum_est = 0;
    long long accumulator_activations = 0;
    long long exclusion_violations = 0;
};

/// signed -> unsigned sign-bit flip: x + 128
std::uint8_t to_unsigned(std::int8_t x);

/// 2^7 * sum(x[i])
long long term_c(std::span<const std::int8_t> x);

/// 2^7 * sum(x[i] + 128); constant per weight column (LUT in hardware)
long long term_d(std::span<const std::int8_t> w);

/// Scale the OR-count back to the unsigned partial-sum estimate:
/// round(count * 65536 * 4^k / n), round-half-up, exact integer arithmetic.
/// With Compensation::midpoint the expected truncation gap is added back:
/// E[sum x'w' - 4^k sum a_s w_s] over uniform residuals equals
/// 2^k (2^k - 1)/2 * (sum a_s + sum w_s) + rows * ((2^k - 1)/2)^2,
/// which needs the per-column operand sums.
long long rescale(long long count, long long n, int k, Compensation comp, long long sum_a_s = 0,
                  long long sum_w_s = 0, int rows = 0);

struct AccumResult {
    long long sum = 0;
    long long activations = 0;
};

/// Adder fires every cycle: activations = n.
AccumResult accumulate_direct(std::span<const int> per_cycle);

/// Latch-cached: four per-cycle values buffered, one adder activation per
/// full quad, one flush for a partial tail. Sum identical to direct;
/// activations = ceil(n/4).
AccumResult accumulate_latch4(std::span<const int> per_cycle);

/// Cycle-level simulation of one column: shared PRNG pair (or exhaustive
/// grid), per-group OR of row product bits, accumulation, rescale and
/// signed recombination.
ColumnResult simulate_column(const MacroConfig& cfg, const SignedColumn& col);

/// Row-major signed matrices: activations is vectors x rows, weights is
/// rows x n_columns (n_columns <= cfg.columns).
using SignedMatrix = std::vector<std::vector<std::int8_t>>;

/// Full-macro run: one ColumnResult per (activation vector, weight column).
/// All vectors share the single PRNGA stream and all columns the single
/// PRNGW stream, exactly like the hardware's shared SNG arrays. At most
/// cfg.cmr vectors per call.
std::vector<std::vector<ColumnResult>> simulate_macro(const MacroConfig& cfg, const SignedMatrix& activations,
                                                      const SignedMatrix& weights);

}  // namespace dscim
