#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "dscim/common.hpp"

namespace dscim {

enum class LfsrStyle { fibonacci, galois };

/// 8-bit LFSR configuration. Both styles shift left:
///   fibonacci: feedback bit = parity(state & taps), shifted into bit 0
///   galois:    state <<= 1, then state ^= taps if the shifted-out bit was 1
///
/// With zero_insert the all-zero state is spliced into the cycle between
/// 0x80 and step(0x80) -- the point where the register would naturally go
/// blank after its lone high bit shifts out -- extending a maximal period
/// from 255 to 256 so that every 256-sample window is a permutation of
/// 0..255. Stepping stays a pure function of (spec, state).
struct LfsrSpec {
    LfsrStyle style = LfsrStyle::galois;
    std::uint8_t taps = 0x1d;
    std::uint8_t seed = 0x01;
    bool zero_insert = true;
};

bool operator==(const LfsrSpec& a, const LfsrSpec& b);

/// Throws ConfigError if the spec is unusable (seed 0 without zero_insert:
/// all-zero is an absorbing state of the raw LFSR).
void validate(const LfsrSpec& spec);

/// One raw register transition, no zero insertion.
std::uint8_t lfsr_raw_step(LfsrStyle style, std::uint8_t taps, std::uint8_t state);

/// One transition honoring spec.zero_insert.
std::uint8_t lfsr_step(const LfsrSpec& spec, std::uint8_t state);

/// Generator state. Sample t is the register value *before* the t-th step,
/// so the seed is the first sample. Plain value type: two equal states
/// produce identical futures, copies are independent.
struct PrngState {
    LfsrSpec spec;
    std::uint8_t state = 0;

    explicit PrngState(const LfsrSpec& s) : spec(s), state(s.seed) { validate(s); }

    /// Returns the current sample and advances.
    std::uint8_t next() {
        const std::uint8_t out = state;
        state = lfsr_step(spec, state);
        return out;
    }
};

/// Functional step: returns (advanced state, sample).
std::pair<PrngState, std::uint8_t> prng_next(PrngState st);

/// First n samples from the seed. n >= 1.
std::vector<std::uint8_t> prng_sequence(const LfsrSpec& spec, std::size_t n);

/// Cycle length of the state sequence started at spec.seed (the terminal
/// cycle length if the seed sits on a tail, which can happen for
/// non-maximal taps). 256 iff maximal taps with zero_insert, 255 without.
int period_check(const LfsrSpec& spec);

/// One (style, taps) entry of the maximal-polynomial catalog.
struct CatalogEntry {
    LfsrStyle style;
    std::uint8_t taps;
};

/// The 32 maximal-length entries: the 16 primitive degree-8 polynomials in
/// Galois form followed by the same 16 in Fibonacci form. Every entry has
/// period 255 raw and 256 with zero insertion (checked by the test suite).
std::span<const CatalogEntry> maximal_catalog();

/// Default generator pair: catalog[0] with seeds 0x01 (PRNGA) / 0x11 (PRNGW).
LfsrSpec default_prng_a();
LfsrSpec default_prng_w();

}  // namespace dscim
