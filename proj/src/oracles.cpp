#include "dscim/oracles.hpp"

#include <cmath>

#include "dscim/rng.hpp"

namespace dscim {

long long exact_psum(const SignedColumn& col) {
    if (col.x.size() != col.w.size()) throw ConfigError("exact_psum: operand length mismatch");
    long long sum = 0;
    for (std::size_t i = 0; i < col.x.size(); ++i) {
        sum += static_cast<long long>(col.x[i]) * static_cast<long long>(col.w[i]);
    }
    return sum;
}

long long enumerate_expected_count(const SignedColumn& col, const MacroConfig& cfg) {
    cfg.validate();
    if (static_cast<int>(col.x.size()) != cfg.rows || static_cast<int>(col.w.size()) != cfg.rows) {
        throw ConfigError("enumerate_expected_count: column length does not match rows");
    }
    const int k = cfg.shift();
    long long total = 0;
    for (int i = 0; i < cfg.rows; ++i) {
        const long long a = to_unsigned(col.x[i]) >> k;
        const long long w = to_unsigned(col.w[i]) >> k;
        total += a * w;  // disjoint rectangles, union count is additive
    }
    return total;
}

NaiveOrCount naive_scim_count(std::span<const double> products_p, long long cycles, std::uint64_t seed) {
    for (double p : products_p) {
        if (p < 0.0 || p > 1.0) throw ConfigError("naive_scim_count: probability outside [0,1]");
    }
    NaiveOrCount out;
    // one independent generator per row, like the prior-art wiring
    std::vector<TrialRng> row_rng;
    row_rng.reserve(products_p.size());
    for (std::size_t i = 0; i < products_p.size(); ++i) row_rng.emplace_back(seed, i);
    for (long long t = 0; t < cycles; ++t) {
        bool any = false;
        for (std::size_t i = 0; i < products_p.size(); ++i) {
            any |= row_rng[i].bernoulli(products_p[i]);
        }
        out.or_count += any ? 1 : 0;
    }
    double psum = 0.0;
    for (double p : products_p) psum += p;
    out.ideal = static_cast<double>(cycles) * psum;
    return out;
}

SaturationPoint or_saturation_rel_error(int fan_in, double p) {
    if (fan_in < 1) throw ConfigError("or_saturation_rel_error: fan-in must be >= 1");
    if (p < 0.0 || p > 1.0) throw ConfigError("or_saturation_rel_error: probability outside [0,1]");
    SaturationPoint pt;
    pt.fan_in = fan_in;
    pt.p = p;
    if (fan_in == 1) {  // OR of one input is the input, exactly
        pt.expected_or = p;
        pt.ideal_sum = p;
        pt.rel_error = 0.0;
        return pt;
    }
    pt.expected_or = 1.0 - std::pow(1.0 - p, fan_in);
    pt.ideal_sum = static_cast<double>(fan_in) * p;
    pt.rel_error = p == 0.0 ? 0.0 : 1.0 - pt.expected_or / pt.ideal_sum;
    return pt;
}

BipolarResult bipolar_mac_simulate(const SignedColumn& col, const MacroConfig& cfg) {
    cfg.validate();
    if (static_cast<int>(col.x.size()) != cfg.rows || static_cast<int>(col.w.size()) != cfg.rows) {
        throw ConfigError("bipolar_mac_simulate: column length does not match rows");
    }
    const long long n = cfg.effective_length();
    const auto catalog = maximal_catalog();

    // Independent per-row generator pairs: catalog entries cycled by row,
    // seeds derived from the configured PRNGA seed. The per-row PRNG
    // wiring of the prior-art circuit is not pinned anywhere, so this is
    // a behavioral approximation.
    std::vector<std::vector<std::uint8_t>> ra(static_cast<std::size_t>(cfg.rows));
    std::vector<std::vector<std::uint8_t>> rw(static_cast<std::size_t>(cfg.rows));
    std::uint64_t derive = 0x9e3779b97f4a7c15ULL ^ cfg.prng_a.seed;
    for (int i = 0; i < cfg.rows; ++i) {
        const CatalogEntry ea = catalog[static_cast<std::size_t>(2 * i) % catalog.size()];
        const CatalogEntry ew = catalog[static_cast<std::size_t>(2 * i + 1) % catalog.size()];
        const std::uint8_t sa = static_cast<std::uint8_t>((splitmix64(derive) % 255) + 1);
        const std::uint8_t sw = static_cast<std::uint8_t>((splitmix64(derive) % 255) + 1);
        ra[static_cast<std::size_t>(i)] = prng_sequence(LfsrSpec{ea.style, ea.taps, sa, true}, static_cast<std::size_t>(n));
        rw[static_cast<std::size_t>(i)] = prng_sequence(LfsrSpec{ew.style, ew.taps, sw, true}, static_cast<std::size_t>(n));
    }

    BipolarResult out;
    for (long long t = 0; t < n; ++t) {
        bool pos = false;
        bool neg = false;
        for (int i = 0; i < cfg.rows; ++i) {
            const int w = col.w[static_cast<std::size_t>(i)];
            if (w == 0) continue;
            const std::uint8_t a_u = to_unsigned(col.x[static_cast<std::size_t>(i)]);
            const std::uint8_t mag = static_cast<std::uint8_t>(w > 0 ? w : -w);
            const bool bit = ra[static_cast<std::size_t>(i)][static_cast<std::size_t>(t)] < a_u &&
                             rw[static_cast<std::size_t>(i)][static_cast<std::size_t>(t)] < mag;
            if (w > 0) pos |= bit; else neg |= bit;
        }
        out.pos_count += pos ? 1 : 0;
        out.neg_count += neg ? 1 : 0;
    }
    out.estimate = rescale(out.pos_count, n, 0, Compensation::none) - rescale(out.neg_count, n, 0, Compensation::none);
    return out;
}

}  // namespace dscim
