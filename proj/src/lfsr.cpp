#include "dscim/lfsr.hpp"

#include <array>
#include <bit>

namespace dscim {

bool operator==(const LfsrSpec& a, const LfsrSpec& b) {
    return a.style == b.style && a.taps == b.taps && a.seed == b.seed && a.zero_insert == b.zero_insert;
}

void validate(const LfsrSpec& spec) {
    if (spec.seed == 0 && !spec.zero_insert) {
        throw ConfigError("lfsr seed 0 is absorbing without zero insertion");
    }
}

std::uint8_t lfsr_raw_step(LfsrStyle style, std::uint8_t taps, std::uint8_t state) {
    if (style == LfsrStyle::fibonacci) {
        const std::uint8_t fb = static_cast<std::uint8_t>(std::popcount(static_cast<unsigned>(state & taps)) & 1);
        return static_cast<std::uint8_t>((state << 1) | fb);
    }
    const bool carry = (state & 0x80) != 0;
    std::uint8_t next = static_cast<std::uint8_t>(state << 1);
    if (carry) next ^= taps;
    return next;
}

std::uint8_t lfsr_step(const LfsrSpec& spec, std::uint8_t state) {
    if (spec.zero_insert) {
        if (state == 0x80) return 0;
        if (state == 0) return lfsr_raw_step(spec.style, spec.taps, 0x80);
    }
    return lfsr_raw_step(spec.style, spec.taps, state);
}

std::pair<PrngState, std::uint8_t> prng_next(PrngState st) {
    const std::uint8_t out = st.next();
    return {st, out};
}

std::vector<std::uint8_t> prng_sequence(const LfsrSpec& spec, std::size_t n) {
    if (n < 1) throw ConfigError("prng_sequence needs n >= 1");
    validate(spec);
    std::vector<std::uint8_t> out(n);
    std::uint8_t s = spec.seed;
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = s;
        s = lfsr_step(spec, s);
    }
    return out;
}

int period_check(const LfsrSpec& spec) {
    // 256 states total, so 256 steps always land inside the terminal cycle.
    std::uint8_t s = spec.seed;
    for (int i = 0; i < 256; ++i) s = lfsr_step(spec, s);
    const std::uint8_t anchor = s;
    int period = 0;
    do {
        s = lfsr_step(spec, s);
        ++period;
    } while (s != anchor && period <= 256);
    return period;
}

namespace {

// The 16 primitive degree-8 polynomials over GF(2), as left-shift masks.
// Galois masks are the low-coefficient bits (e.g. 0x1d = x^8+x^4+x^3+x^2+1);
// Fibonacci masks are the tap sets of the equivalent recurrence. Each entry
// is brute-force verified maximal by the unit tests.
constexpr std::array<CatalogEntry, 32> kCatalog = {{
    {LfsrStyle::galois, 0x1d},    {LfsrStyle::galois, 0x2b},    {LfsrStyle::galois, 0x2d},
    {LfsrStyle::galois, 0x4d},    {LfsrStyle::galois, 0x5f},    {LfsrStyle::galois, 0x63},
    {LfsrStyle::galois, 0x65},    {LfsrStyle::galois, 0x69},    {LfsrStyle::galois, 0x71},
    {LfsrStyle::galois, 0x87},    {LfsrStyle::galois, 0x8d},    {LfsrStyle::galois, 0xa9},
    {LfsrStyle::galois, 0xc3},    {LfsrStyle::galois, 0xcf},    {LfsrStyle::galois, 0xe7},
    {LfsrStyle::galois, 0xf5},    {LfsrStyle::fibonacci, 0x8e}, {LfsrStyle::fibonacci, 0x95},
    {LfsrStyle::fibonacci, 0x96}, {LfsrStyle::fibonacci, 0xa6}, {LfsrStyle::fibonacci, 0xaf},
    {LfsrStyle::fibonacci, 0xb1}, {LfsrStyle::fibonacci, 0xb2}, {LfsrStyle::fibonacci, 0xb4},
    {LfsrStyle::fibonacci, 0xb8}, {LfsrStyle::fibonacci, 0xc3}, {LfsrStyle::fibonacci, 0xc6},
    {LfsrStyle::fibonacci, 0xd4}, {LfsrStyle::fibonacci, 0xe1}, {LfsrStyle::fibonacci, 0xe7},
    {LfsrStyle::fibonacci, 0xf3}, {LfsrStyle::fibonacci, 0xfa},
}};

}  // namespace

std::span<const CatalogEntry> maximal_catalog() { return kCatalog; }

LfsrSpec default_prng_a() { return LfsrSpec{kCatalog[0].style, kCatalog[0].taps, 0x01, true}; }

LfsrSpec default_prng_w() { return LfsrSpec{kCatalog[0].style, kCatalog[0].taps, 0x11, true}; }

}  // namespace dscim
