#include "dscim/macro.hpp"

#include <cassert>

#include "dscim/parallel.hpp"

namespace dscim {

int MacroConfig::shift() const {
    switch (group_size) {
        case 1: return 0;
        case 4: return 1;
        case 16: return 2;
        case 64: return 3;
        default: throw ConfigError("group_size must be one of {1,4,16,64}");
    }
}

long long MacroConfig::effective_length() const {
    return sampler == SamplerKind::exhaustive ? 65536LL : static_cast<long long>(bitstream_len);
}

void MacroConfig::validate() const {
    if (rows < 1) throw ConfigError("rows must be >= 1");
    if (columns < 1) throw ConfigError("columns must be >= 1");
    const int k = shift();  // also validates group_size
    if (rows % group_size != 0) throw ConfigError("rows must be a multiple of group_size");
    if (sampler == SamplerKind::prng && bitstream_len < 1) throw ConfigError("bitstream_len must be >= 1");
    if (cmr < 1 || cmr > 64) throw ConfigError("cmr must be in [1, 64]");
    if (axis_mode == AxisMode::reflect && k > 1) {
        throw ConfigError("reflect comparator form is defined for k <= 1 only");
    }
    dscim::validate(prng_a);
    dscim::validate(prng_w);
}

std::uint8_t to_unsigned(std::int8_t x) {
    return static_cast<std::uint8_t>(static_cast<int>(x) + 128);
}

long long term_c(std::span<const std::int8_t> x) {
    long long sum = 0;
    for (std::int8_t v : x) sum += v;
    return 128 * sum;
}

long long term_d(std::span<const std::int8_t> w) {
    long long sum = 0;
    for (std::int8_t v : w) sum += static_cast<int>(v) + 128;
    return 128 * sum;
}

long long rescale(long long count, long long n, int k, Compensation comp, long long sum_a_s, long long sum_w_s,
                  int rows) {
    if (n < 1) throw ConfigError("rescale: n must be >= 1");
    const long long factor = 65536LL << (2 * k);
    long long est = (count * factor + n / 2) / n;  // round half up
    if (comp == Compensation::midpoint && k > 0) {
        // expected truncation gap for uniform residuals; rows % 4 == 0
        // whenever k >= 1, so the integer division is exact
        const long long half = (1LL << k) * ((1LL << k) - 1) / 2;
        est += half * (sum_a_s + sum_w_s);
        est += static_cast<long long>(rows) * ((1LL << k) - 1) * ((1LL << k) - 1) / 4;
    }
    return est;
}

AccumResult accumulate_direct(std::span<const int> per_cycle) {
    AccumResult r;
    for (int v : per_cycle) r.sum += v;
    r.activations = static_cast<long long>(per_cycle.size());
    return r;
}

AccumResult accumulate_latch4(std::span<const int> per_cycle) {
    AccumResult r;
    long long latched = 0;
    int filled = 0;
    for (int v : per_cycle) {
        latched += v;
        if (++filled == 4) {
            r.sum += latched;
            ++r.activations;
            latched = 0;
            filled = 0;
        }
    }
    if (filled > 0) {  // flush the partial quad
        r.sum += latched;
        ++r.activations;
    }
    return r;
}

namespace {

struct ColumnPlan {
    int k = 0;
    int n_groups = 0;
    int group_size = 0;
    AxisMode mode = AxisMode::xor_mask;
    std::vector<std::uint8_t> a_s;  // per row
    std::vector<std::uint8_t> w_s;
    long long sum_a_s = 0;
    long long sum_w_s = 0;
};

ColumnPlan make_plan(const MacroConfig& cfg, const SignedColumn& col) {
    if (static_cast<int>(col.x.size()) != cfg.rows || static_cast<int>(col.w.size()) != cfg.rows) {
        throw ConfigError("simulate_column: column length does not match rows");
    }
    ColumnPlan p;
    p.k = cfg.shift();
    p.group_size = cfg.group_size;
    p.n_groups = cfg.rows / cfg.group_size;
    p.mode = cfg.axis_mode;
    p.a_s.resize(cfg.rows);
    p.w_s.resize(cfg.rows);
    for (int i = 0; i < cfg.rows; ++i) {
        p.a_s[i] = static_cast<std::uint8_t>(to_unsigned(col.x[i]) >> p.k);
        p.w_s[i] = static_cast<std::uint8_t>(to_unsigned(col.w[i]) >> p.k);
        p.sum_a_s += p.a_s[i];
        p.sum_w_s += p.w_s[i];
    }
    return p;
}

// One cycle via the structural shortcut: the remapping is a bijection
// from (RA high bits, RW high bits) to the single row of each group whose
// rectangle the point can hit.
inline int cycle_sum_fast(const ColumnPlan& p, std::uint8_t ra, std::uint8_t rw) {
    const int shift = 8 - p.k;
    const int j_star = ((rw >> shift) << p.k) | (ra >> shift);
    int sum = 0;
    if (p.mode == AxisMode::xor_mask) {
        const std::uint8_t la = static_cast<std::uint8_t>(ra & ((1u << shift) - 1));
        const std::uint8_t lw = static_cast<std::uint8_t>(rw & ((1u << shift) - 1));
        for (int g = 0; g < p.n_groups; ++g) {
            const int row = g * p.group_size + j_star;
            sum += (la < p.a_s[row] && lw < p.w_s[row]) ? 1 : 0;
        }
    } else {
        // reflect, k <= 1: region 1 counts down from the top of the axis
        const int r_a = ra >> shift;
        const int r_w = rw >> shift;
        const std::uint8_t la = r_a == 0 ? ra : static_cast<std::uint8_t>(255 - ra);
        const std::uint8_t lw = r_w == 0 ? rw : static_cast<std::uint8_t>(255 - rw);
        for (int g = 0; g < p.n_groups; ++g) {
            const int row = g * p.group_size + j_star;
            sum += (la < p.a_s[row] && lw < p.w_s[row]) ? 1 : 0;
        }
    }
    return sum;
}

// One cycle evaluating every row; counts groups whose OR input sum
// exceeds 1 (a mutual-exclusion violation for k >= 1).
inline int cycle_sum_checked(const ColumnPlan& p, std::uint8_t ra, std::uint8_t rw, long long& violations) {
    int col_sum = 0;
    for (int g = 0; g < p.n_groups; ++g) {
        int group_sum = 0;
        for (int j = 0; j < p.group_size; ++j) {
            const int row = g * p.group_size + j;
            const ShiftedOperand a{0, p.a_s[row], p.k};
            const ShiftedOperand w{0, p.w_s[row], p.k};
            const RegionAssignment assign = region_of_row(j, p.k);
            group_sum += row_product_bit(a, w, assign, ra, rw, p.mode) ? 1 : 0;
        }
        if (group_sum > 1) ++violations;
        assert(p.k == 0 || group_sum <= 1);
        col_sum += group_sum > 0 ? 1 : 0;
    }
    return col_sum;
}

}  // namespace

ColumnResult simulate_column(const MacroConfig& cfg, const SignedColumn& col) {
    cfg.validate();
    const ColumnPlan plan = make_plan(cfg, col);
    const long long n = cfg.effective_length();

    ColumnResult res;
    res.per_cycle.resize(static_cast<std::size_t>(n));

    if (cfg.sampler == SamplerKind::exhaustive) {
        // RA outer, RW inner; fixed so per_cycle traces are reproducible
        long long t = 0;
        for (int ra = 0; ra < 256; ++ra) {
            for (int rw = 0; rw < 256; ++rw, ++t) {
                res.per_cycle[static_cast<std::size_t>(t)] =
                    cfg.validate_exclusion
                        ? cycle_sum_checked(plan, static_cast<std::uint8_t>(ra), static_cast<std::uint8_t>(rw),
                                            res.exclusion_violations)
                        : cycle_sum_fast(plan, static_cast<std::uint8_t>(ra), static_cast<std::uint8_t>(rw));
            }
        }
    } else {
        const std::vector<std::uint8_t> ra = prng_sequence(cfg.prng_a, static_cast<std::size_t>(n));
        const std::vector<std::uint8_t> rw = prng_sequence(cfg.prng_w, static_cast<std::size_t>(n));
        for (long long t = 0; t < n; ++t) {
            res.per_cycle[static_cast<std::size_t>(t)] =
                cfg.validate_exclusion
                    ? cycle_sum_checked(plan, ra[static_cast<std::size_t>(t)], rw[static_cast<std::size_t>(t)],
                                        res.exclusion_violations)
                    : cycle_sum_fast(plan, ra[static_cast<std::size_t>(t)], rw[static_cast<std::size_t>(t)]);
        }
    }

    const AccumResult acc = cfg.accumulator == AccumulatorKind::latch4 ? accumulate_latch4(res.per_cycle)
                                                                       : accumulate_direct(res.per_cycle);
    res.count = acc.sum;
    res.accumulator_activations = acc.activations;
    res.term_b_est = rescale(res.count, n, plan.k, cfg.compensation, plan.sum_a_s, plan.sum_w_s, cfg.rows);
    res.term_c = term_c(col.x);
    res.term_d = term_d(col.w);
    res.psum_est = res.term_b_est - res.term_c - res.term_d;
    return res;
}

std::vector<std::vector<ColumnResult>> simulate_macro(const MacroConfig& cfg, const SignedMatrix& activations,
                                                      const SignedMatrix& weights) {
    cfg.validate();
    const int n_vectors = static_cast<int>(activations.size());
    if (n_vectors < 1) throw ConfigError("simulate_macro: no activation vectors");
    if (n_vectors > cfg.cmr) throw ConfigError("simulate_macro: more activation vectors than cmr slots");
    for (const auto& v : activations) {
        if (static_cast<int>(v.size()) != cfg.rows) throw ConfigError("simulate_macro: activation vector length != rows");
    }
    if (static_cast<int>(weights.size()) != cfg.rows) throw ConfigError("simulate_macro: weight matrix must have `rows` rows");
    const int n_cols = static_cast<int>(weights.front().size());
    if (n_cols < 1 || n_cols > cfg.columns) throw ConfigError("simulate_macro: weight column count outside [1, columns]");
    for (const auto& r : weights) {
        if (static_cast<int>(r.size()) != n_cols) throw ConfigError("simulate_macro: ragged weight matrix");
    }

    std::vector<std::vector<ColumnResult>> out(static_cast<std::size_t>(n_vectors));
    for (auto& row : out) row.resize(static_cast<std::size_t>(n_cols));
    // each (vector, column) slot is independent; order cannot matter
    parallel_for(static_cast<long long>(n_vectors) * n_cols, [&](long long idx) {
        const int v = static_cast<int>(idx / n_cols);
        const int c = static_cast<int>(idx % n_cols);
        SignedColumn col;
        col.x = activations[static_cast<std::size_t>(v)];
        col.w.resize(static_cast<std::size_t>(cfg.rows));
        for (int i = 0; i < cfg.rows; ++i) {
            col.w[static_cast<std::size_t>(i)] = weights[static_cast<std::size_t>(i)][static_cast<std::size_t>(c)];
        }
        out[static_cast<std::size_t>(v)][static_cast<std::size_t>(c)] = simulate_column(cfg, col);
    });
    return out;
}

}  // namespace dscim
