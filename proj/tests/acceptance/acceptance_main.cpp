// Acceptance suite for the DS-CIM simulator. Runs every criterion at its
// pinned tolerance and prints one PASS/FAIL line per criterion; exits
// nonzero if any fail.
//
// Criterion 4 (reference RMSE bands) uses, per mode, the single best
// generator pair found by the seed search over the default stride-16 grid
// (calibration mix objective across lengths 64/128/256), then evaluates
// fresh uniform trials at each length. DS-CIM1 runs the hardware-default
// truncating pipeline; DS-CIM2 enables midpoint compensation (its k=3
// truncation bias otherwise dominates the band).

#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <random>
#include <vector>

#include "dscim/analysis.hpp"
#include "dscim/io.hpp"
#include "dscim/oracles.hpp"
#include "dscim/parallel.hpp"
#include "dscim/perf.hpp"
#include "dscim/rng.hpp"

using namespace dscim;

namespace {

constexpr std::uint64_t kMasterSeed = 20250601;
constexpr std::uint64_t kEvalSeed = kMasterSeed + 777;  // fresh data, never used in calibration

int g_failures = 0;

void report(int index, const char* name, bool pass, const std::string& detail = "") {
    std::printf("[%d/9] %-34s %s%s%s\n", index, name, pass ? "PASS" : "FAIL", detail.empty() ? "" : "  -- ",
                detail.c_str());
    if (!pass) ++g_failures;
}

SignedColumn random_column(std::mt19937_64& rng, int rows) {
    SignedColumn col;
    col.x.resize(static_cast<std::size_t>(rows));
    col.w.resize(static_cast<std::size_t>(rows));
    for (auto& v : col.x) v = static_cast<std::int8_t>(rng() & 0xff);
    for (auto& v : col.w) v = static_cast<std::int8_t>(rng() & 0xff);
    return col;
}

// ---- criterion 1: mutual exclusion over the full grid --------------------

void criterion_mutual_exclusion() {
    const int groups_per_k = 100;
    long long bad = 0;
    for (int k = 1; k <= 3; ++k) {
        const int group = 1 << (2 * k);
        std::vector<std::vector<ShiftedOperand>> a(groups_per_k), w(groups_per_k);
        std::mt19937_64 rng(0xABC0 + static_cast<unsigned>(k));
        for (int g = 0; g < groups_per_k; ++g) {
            for (int j = 0; j < group; ++j) {
                a[static_cast<std::size_t>(g)].push_back(shift_value(static_cast<unsigned>(rng() % 256), k));
                w[static_cast<std::size_t>(g)].push_back(shift_value(static_cast<unsigned>(rng() % 256), k));
            }
        }
        std::vector<long long> violations(groups_per_k, 0);
        parallel_for(groups_per_k, [&](long long g) {
            std::vector<RegionAssignment> assign;
            for (int j = 0; j < group; ++j) assign.push_back(region_of_row(j, k));
            for (int ra = 0; ra < 256; ++ra) {
                for (int rw = 0; rw < 256; ++rw) {
                    int sum = 0;
                    for (int j = 0; j < group; ++j) {
                        sum += row_product_bit(a[static_cast<std::size_t>(g)][static_cast<std::size_t>(j)],
                                               w[static_cast<std::size_t>(g)][static_cast<std::size_t>(j)],
                                               assign[static_cast<std::size_t>(j)], static_cast<std::uint8_t>(ra),
                                               static_cast<std::uint8_t>(rw));
                    }
                    const int or_bit = sum > 0 ? 1 : 0;
                    if (sum > 1 || or_bit != sum) ++violations[static_cast<std::size_t>(g)];
                }
            }
        });
        for (long long v : violations) bad += v;
    }
    char detail[128];
    std::snprintf(detail, sizeof detail, "k in {1,2,3}, 100 groups each, 65536 points: %lld violations", bad);
    report(1, "mutual exclusion (exhaustive)", bad == 0, detail);
}

// ---- criterion 2: exact mode reproduces the integer dot product ----------

void criterion_exact_mode() {
    bool identity_ok = true;
    for (int x = -128; x <= 127 && identity_ok; ++x) {
        for (int w = -128; w <= 127; ++w) {
            const long long lhs = static_cast<long long>(x) * w;
            const long long rhs = static_cast<long long>(x + 128) * (w + 128) - 128LL * x - 128LL * (w + 128);
            if (lhs != rhs) {
                identity_ok = false;
                break;
            }
        }
    }

    MacroConfig cfg;
    cfg.group_size = 1;
    cfg.sampler = SamplerKind::exhaustive;
    const int trials = 1000;
    std::mt19937_64 rng(0xE5AC7);
    std::vector<SignedColumn> columns;
    columns.reserve(trials);
    for (int t = 0; t < trials; ++t) columns.push_back(random_column(rng, cfg.rows));
    std::vector<long long> abs_err(trials, 0);
    parallel_for(trials, [&](long long t) {
        const ColumnResult r = simulate_column(cfg, columns[static_cast<std::size_t>(t)]);
        abs_err[static_cast<std::size_t>(t)] = std::llabs(r.psum_est - exact_psum(columns[static_cast<std::size_t>(t)]));
    });
    long long worst = 0;
    for (long long e : abs_err) worst = std::max(worst, e);

    char detail[128];
    std::snprintf(detail, sizeof detail, "signed-decomposition identity over 65536 pairs: %s; 1000 columns max |error| = %lld",
                  identity_ok ? "ok" : "BROKEN", worst);
    report(2, "exact-mode equivalence (G=1)", identity_ok && worst == 0, detail);
}

// ---- criterion 3: exhaustive sampler count equals the enumeration --------

void criterion_enumeration_equality() {
    long long mismatches = 0;
    for (int group : {16, 64}) {
        MacroConfig cfg;
        cfg.group_size = group;
        cfg.sampler = SamplerKind::exhaustive;
        const int trials = 1000;
        std::mt19937_64 rng(0x0C0DE + static_cast<unsigned>(group));
        std::vector<SignedColumn> columns;
        columns.reserve(trials);
        for (int t = 0; t < trials; ++t) columns.push_back(random_column(rng, cfg.rows));
        std::vector<int> bad(trials, 0);
        parallel_for(trials, [&](long long t) {
            const auto& col = columns[static_cast<std::size_t>(t)];
            bad[static_cast<std::size_t>(t)] = simulate_column(cfg, col).count != enumerate_expected_count(col, cfg);
        });
        for (int b : bad) mismatches += b;
    }
    char detail[96];
    std::snprintf(detail, sizeof detail, "G in {16,64}, 1000 columns each: %lld mismatches", mismatches);
    report(3, "enumeration-oracle equality", mismatches == 0, detail);
}

// ---- criterion 4: reference RMSE bands with optimized seeds ---------------

struct Band {
    int length;
    double lo, hi;
};

void criterion_table1_bands() {
    const std::vector<int> lengths = {64, 128, 256};
    bool all_ok = true;
    std::string detail;

    struct ModeSpec {
        const char* name;
        int group_size;
        AccumulatorKind accumulator;
        Compensation compensation;
        std::vector<Band> bands;
    };
    const std::vector<ModeSpec> modes = {
        {"DS-CIM1", 16, AccumulatorKind::direct, Compensation::none,
         {{256, 0.003, 0.012}, {128, 0.010, 0.030}, {64, 0.018, 0.055}}},
        {"DS-CIM2", 64, AccumulatorKind::latch4, Compensation::midpoint,
         {{64, 0.025, 0.055}, {256, 0.004, 0.014}}},
    };

    const auto space = default_search_space(16);
    for (const ModeSpec& mode : modes) {
        MacroConfig base;
        base.group_size = mode.group_size;
        base.accumulator = mode.accumulator;
        base.compensation = mode.compensation;
        const SeedSearchResult search =
            seed_search(base, space, lengths, static_cast<long long>(space.size()), 128, kMasterSeed);

        std::printf("      %s optimized pair: %s taps 0x%02x seeds a=0x%02x w=0x%02x (objective %.5f)\n", mode.name,
                    search.best_a.style == LfsrStyle::galois ? "galois" : "fibonacci", search.best_a.taps,
                    search.best_a.seed, search.best_w.seed, search.objective);

        DistSpec uniform;
        std::vector<double> rmse_by_length;
        for (int n : lengths) {
            MacroConfig cfg = base;
            cfg.prng_a = search.best_a;
            cfg.prng_w = search.best_w;
            cfg.bitstream_len = n;
            const ErrorStats stats = rmse_eval(cfg, uniform, 2000, kEvalSeed);
            rmse_by_length.push_back(stats.rmse_norm);
            std::printf("      %s N=%-3d rmse_norm = %.4f%%\n", mode.name, n, 100.0 * stats.rmse_norm);
        }
        for (const Band& band : mode.bands) {
            const std::size_t idx = static_cast<std::size_t>(
                std::find(lengths.begin(), lengths.end(), band.length) - lengths.begin());
            const double v = rmse_by_length[idx];
            const bool ok = v >= band.lo && v <= band.hi;
            if (!ok) {
                all_ok = false;
                char buf[96];
                std::snprintf(buf, sizeof buf, "%s N=%d %.4f%% outside [%.2f%%, %.2f%%]; ", mode.name, band.length,
                              100.0 * v, 100.0 * band.lo, 100.0 * band.hi);
                detail += buf;
            }
        }
        const bool monotone = rmse_by_length[0] > rmse_by_length[1] && rmse_by_length[1] > rmse_by_length[2];
        if (!monotone) {
            all_ok = false;
            detail += std::string(mode.name) + " not strictly decreasing in N; ";
        }
    }
    report(4, "reference RMSE bands", all_ok, detail.empty() ? "all bands and monotonicity hold" : detail);
}

// ---- criterion 5: sparsity resilience vs the naive baseline --------------

void criterion_sparsity() {
    const std::vector<double> grid = {0.0, 0.25, 0.5, 0.75, 0.875, 1.0};
    bool ok = true;
    std::string detail;

    for (int group : {16, 64}) {
        MacroConfig cfg;
        cfg.group_size = group;
        if (group == 64) cfg.accumulator = AccumulatorKind::latch4;
        const auto sweep = sparsity_sweep(cfg, grid, 600, kMasterSeed);
        double lo = 1e9, hi = 0.0;
        for (const auto& [p, stats] : sweep) {
            lo = std::min(lo, stats.rmse_norm);
            hi = std::max(hi, stats.rmse_norm);
        }
        const double ratio = hi / lo;
        char buf[96];
        std::snprintf(buf, sizeof buf, "%s max/min = %.3f; ", group == 16 ? "DS-CIM1" : "DS-CIM2", ratio);
        detail += buf;
        if (!(ratio < 2.0)) ok = false;
    }

    // naive independent-PRNG OR16 baseline: >10x degradation dense vs 87.5%
    const ErrorStats dense = naive_or_rmse(16, 128, 0.0, 256, 400, kMasterSeed);
    const ErrorStats sparse = naive_or_rmse(16, 128, 0.875, 256, 400, kMasterSeed);
    const double degradation = dense.rmse_norm / sparse.rmse_norm;
    char buf[64];
    std::snprintf(buf, sizeof buf, "naive OR16 degradation = %.1fx; ", degradation);
    detail += buf;
    if (!(degradation > 10.0)) ok = false;

    // closed form matched by Monte Carlo within 4 SE at every grid point
    const long long mc_cycles = 200000;
    std::uint64_t derive = kMasterSeed ^ 0x5a7;
    int mc_bad = 0;
    for (double p : {0.01, 0.05, 0.125, 0.25, 0.5, 0.75, 1.0}) {
        const SaturationPoint pt = or_saturation_rel_error(16, p);
        const std::vector<double> probs(16, p);
        const auto mc = naive_scim_count(probs, mc_cycles, splitmix64(derive));
        const double rate = static_cast<double>(mc.or_count) / static_cast<double>(mc_cycles);
        const double se = std::sqrt(pt.expected_or * (1.0 - pt.expected_or) / static_cast<double>(mc_cycles));
        if (std::abs(rate - pt.expected_or) > 4.0 * se + 1e-12) ++mc_bad;
    }
    if (mc_bad > 0) {
        ok = false;
        detail += std::to_string(mc_bad) + " MC points off the closed form; ";
    } else {
        detail += "MC within 4 SE at all points";
    }
    report(5, "sparsity resilience & saturation", ok, detail);
}

// ---- criterion 6: saturation closed form ----------------------------------

void criterion_saturation_closed_form() {
    const bool exact = or_saturation_rel_error(4, 0.5).rel_error == 0.53125;
    bool n1_ok = true;
    for (double p = 0.0; p <= 1.0; p += 0.015625) {
        if (or_saturation_rel_error(1, p).rel_error != 0.0) n1_ok = false;
    }
    report(6, "saturation closed form", exact && n1_ok,
           exact ? "rel_error(4, 0.5) == 0.53125 exactly; n=1 is zero everywhere" : "closed form wrong");
}

// ---- criterion 7: latch-cached accumulator --------------------------------

void criterion_accumulator() {
    std::mt19937_64 rng(0xACC);
    long long mismatches = 0;
    for (int t = 0; t < 100000; ++t) {
        const int n = 1 + static_cast<int>(rng() % 300);
        std::vector<int> trace(static_cast<std::size_t>(n));
        for (auto& v : trace) v = static_cast<int>(rng() % 9);
        const AccumResult direct = accumulate_direct(trace);
        const AccumResult latch = accumulate_latch4(trace);
        if (direct.sum != latch.sum || latch.activations != (n + 3) / 4) ++mismatches;
    }
    const std::vector<int> n256(256, 1);
    const bool act_ok = accumulate_latch4(n256).activations == 64;
    char detail[96];
    std::snprintf(detail, sizeof detail, "1e5 random traces: %lld mismatches; N=256 activations = %lld", mismatches,
                  accumulate_latch4(n256).activations);
    report(7, "latch4 accumulator", mismatches == 0 && act_ok, detail);
}

// ---- criterion 8: performance model ---------------------------------------

void criterion_perf_model() {
    WorkloadSpec work;
    work.output_count = 4096;
    work.weight_columns = 32;
    MacroConfig cmr64;
    cmr64.cmr = 64;
    MacroConfig cmr1;
    cmr1.cmr = 1;
    const PerfReport fast = latency_model(work, cmr64);
    const PerfReport slow = latency_model(work, cmr1);
    const bool ratio_ok = fast.cycles * 64 == slow.cycles;
    const bool density_ok = fast.relative_compute_density && *fast.relative_compute_density == 32.0;
    MacroConfig short_stream = cmr64;
    short_stream.bitstream_len = 64;
    const bool n_scaling_ok = latency_model(work, short_stream).cycles * 4 == fast.cycles;
    char detail[128];
    std::snprintf(detail, sizeof detail, "cycle ratio 1/64: %s; density(64) = %.0f; N 64 vs 256 ratio 4: %s",
                  ratio_ok ? "ok" : "BAD", fast.relative_compute_density.value_or(-1.0),
                  n_scaling_ok ? "ok" : "BAD");
    report(8, "performance model", ratio_ok && density_ok && n_scaling_ok, detail);
}

// ---- criterion 9: determinism across thread counts ------------------------

void criterion_determinism() {
    MacroConfig cfg;
    cfg.group_size = 16;
    DistSpec uniform;

    set_thread_count(1);
    const ErrorStats a = rmse_eval(cfg, uniform, 400, kMasterSeed);
    const SeedSearchResult sa =
        seed_search(cfg, default_search_space(64), std::vector<int>{64}, 1L << 20, 24, kMasterSeed);
    set_thread_count(8);
    const ErrorStats b = rmse_eval(cfg, uniform, 400, kMasterSeed);
    const SeedSearchResult sb =
        seed_search(cfg, default_search_space(64), std::vector<int>{64}, 1L << 20, 24, kMasterSeed);
    set_thread_count(0);

    bool ok = a.raw_errors == b.raw_errors && a.rmse_norm == b.rmse_norm;
    ok = ok && sa.best_a == sb.best_a && sa.best_w == sb.best_w && sa.objective == sb.objective;

    // serialized views must be byte-identical too
    std::string blob_a, blob_b;
    for (double e : a.raw_errors) blob_a += format_double(e) + "\n";
    for (double e : b.raw_errors) blob_b += format_double(e) + "\n";
    ok = ok && blob_a == blob_b;
    report(9, "determinism across thread counts", ok,
           ok ? "rmse_eval and seed_search byte-identical at 1 and 8 threads" : "outputs differ");
}

}  // namespace

int main() {
    std::printf("DS-CIM acceptance suite (master seed %" PRIu64 ", %d threads)\n", kMasterSeed, thread_count());
    criterion_mutual_exclusion();
    criterion_exact_mode();
    criterion_enumeration_equality();
    criterion_table1_bands();
    criterion_sparsity();
    criterion_saturation_closed_form();
    criterion_accumulator();
    criterion_perf_model();
    criterion_determinism();
    if (g_failures == 0) {
        std::printf("RESULT: all 9 criteria PASS\n");
    } else {
        std::printf("RESULT: %d criterion(s) FAILED\n", g_failures);
    }
    return g_failures == 0 ? 0 : 1;
}
