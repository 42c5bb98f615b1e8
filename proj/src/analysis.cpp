#include "dscim/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "dscim/io.hpp"
#include "dscim/parallel.hpp"
#include "dscim/rng.hpp"

namespace dscim {

double full_scale(const MacroConfig& cfg) { return static_cast<double>(cfg.rows) * 255.0 * 255.0; }

namespace {

ErrorStats stats_from_errors(std::vector<double> errors) {
    ErrorStats s;
    s.trials = static_cast<long long>(errors.size());
    double sum = 0.0;
    double sum_sq = 0.0;
    double max_abs = 0.0;
    for (double e : errors) {
        sum += e;
        sum_sq += e * e;
        max_abs = std::max(max_abs, std::abs(e));
    }
    if (s.trials > 0) {
        s.rmse_norm = std::sqrt(sum_sq / static_cast<double>(s.trials));
        s.mean_bias_norm = sum / static_cast<double>(s.trials);
        s.max_abs_norm = max_abs;
    }
    s.raw_errors = std::move(errors);
    return s;
}

SignedColumn draw_one(const DistSpec& dist, int rows, std::uint64_t master_seed, long long trial) {
    TrialRng rng(master_seed, static_cast<std::uint64_t>(trial));
    SignedColumn col;
    col.x.resize(static_cast<std::size_t>(rows));
    col.w.resize(static_cast<std::size_t>(rows));
    switch (dist.kind) {
        case DistKind::uniform_signed:
            for (auto& v : col.x) v = rng.uniform_i8();
            for (auto& v : col.w) v = rng.uniform_i8();
            break;
        case DistKind::gaussian:
            for (auto& v : col.x) v = rng.gaussian_i8(dist.sigma, dist.clip);
            for (auto& v : col.w) v = rng.gaussian_i8(dist.sigma, dist.clip);
            break;
        case DistKind::sparse:
            for (auto& v : col.x) v = rng.uniform_i8();
            for (auto& v : col.w) v = rng.uniform_i8();
            for (auto& v : col.x) {
                if (rng.bernoulli(dist.p_zero)) v = 0;
            }
            break;
        case DistKind::file_trace:
            throw ConfigError("draw_one: file_trace handled by draw_columns");
    }
    return col;
}

}  // namespace

std::vector<SignedColumn> draw_columns(const DistSpec& dist, int rows, long long trials, std::uint64_t master_seed) {
    if (trials < 1) throw ConfigError("draw_columns: trials must be >= 1");
    std::vector<SignedColumn> out(static_cast<std::size_t>(trials));
    if (dist.kind == DistKind::file_trace) {
        const SignedMatrix rows_data = read_signed_csv(dist.path, 2 * rows);
        if (rows_data.empty()) throw InputError("empty trace file: " + dist.path);
        for (long long t = 0; t < trials; ++t) {
            const auto& line = rows_data[static_cast<std::size_t>(t) % rows_data.size()];
            SignedColumn col;
            col.x.assign(line.begin(), line.begin() + rows);
            col.w.assign(line.begin() + rows, line.end());
            out[static_cast<std::size_t>(t)] = std::move(col);
        }
        return out;
    }
    for (long long t = 0; t < trials; ++t) {
        out[static_cast<std::size_t>(t)] = draw_one(dist, rows, master_seed, t);
    }
    return out;
}

ErrorStats rmse_over_columns(const MacroConfig& cfg, std::span<const SignedColumn> columns) {
    const double scale = full_scale(cfg);
    std::vector<double> errors(columns.size());
    parallel_for(static_cast<long long>(columns.size()), [&](long long i) {
        const ColumnResult r = simulate_column(cfg, columns[static_cast<std::size_t>(i)]);
        const long long exact = exact_psum(columns[static_cast<std::size_t>(i)]);
        errors[static_cast<std::size_t>(i)] = static_cast<double>(r.psum_est - exact) / scale;
    });
    return stats_from_errors(std::move(errors));
}

ErrorStats rmse_eval(const MacroConfig& cfg, const DistSpec& dist, long long trials, std::uint64_t master_seed) {
    cfg.validate();
    const std::vector<SignedColumn> columns = draw_columns(dist, cfg.rows, trials, master_seed);
    return rmse_over_columns(cfg, columns);
}

std::vector<std::pair<double, ErrorStats>> sparsity_sweep(const MacroConfig& cfg, std::span<const double> grid,
                                                          long long trials, std::uint64_t master_seed) {
    std::vector<std::pair<double, ErrorStats>> out;
    out.reserve(grid.size());
    for (double p_zero : grid) {
        if (p_zero < 0.0 || p_zero > 1.0) throw ConfigError("sparsity_sweep: p_zero outside [0,1]");
        DistSpec dist;
        dist.kind = DistKind::sparse;
        dist.p_zero = p_zero;
        out.emplace_back(p_zero, rmse_eval(cfg, dist, trials, master_seed));
    }
    return out;
}

std::vector<std::pair<int, ErrorStats>> length_sweep(const MacroConfig& cfg, std::span<const int> lengths,
                                                     const DistSpec& dist, long long trials,
                                                     std::uint64_t master_seed) {
    std::vector<std::pair<int, ErrorStats>> out;
    out.reserve(lengths.size());
    for (int n : lengths) {
        MacroConfig c = cfg;
        if (n == 65536) {
            c.sampler = SamplerKind::exhaustive;
        } else {
            c.sampler = SamplerKind::prng;
            c.bitstream_len = n;
        }
        out.emplace_back(n, rmse_eval(c, dist, trials, master_seed));
    }
    return out;
}

ErrorStats naive_or_rmse(int fan_in, int rows, double p_zero, int cycles, long long trials,
                         std::uint64_t master_seed) {
    if (fan_in < 1 || rows < fan_in || rows % fan_in != 0) {
        throw ConfigError("naive_or_rmse: rows must be a positive multiple of fan_in");
    }
    const int n_groups = rows / fan_in;
    const double scale = static_cast<double>(rows) * 255.0 * 255.0;
    std::vector<double> errors(static_cast<std::size_t>(trials));
    parallel_for(trials, [&](long long t) {
        TrialRng rng(master_seed, static_cast<std::uint64_t>(t));
        std::vector<double> p(static_cast<std::size_t>(rows));
        long long ideal_int = 0;
        for (int i = 0; i < rows; ++i) {
            const unsigned a = rng.uniform_u8();
            const unsigned w = rng.uniform_u8();
            const bool zero = rng.bernoulli(p_zero);
            const long long prod = zero ? 0 : static_cast<long long>(a) * w;
            ideal_int += prod;
            p[static_cast<std::size_t>(i)] = static_cast<double>(prod) / 65536.0;
        }
        long long or_count = 0;
        for (int g = 0; g < n_groups; ++g) {
            const std::span<const double> group(p.data() + g * fan_in, static_cast<std::size_t>(fan_in));
            or_count += naive_scim_count(group, cycles, master_seed ^ (static_cast<std::uint64_t>(t) * 131 + g)).or_count;
        }
        const long long est = rescale(or_count, cycles, 0, Compensation::none);
        errors[static_cast<std::size_t>(t)] = static_cast<double>(est - ideal_int) / scale;
    });
    return stats_from_errors(std::move(errors));
}

std::vector<SeedSearchConfig> default_search_space(int seed_stride) {
    if (seed_stride < 1) throw ConfigError("default_search_space: stride must be >= 1");
    std::vector<SeedSearchConfig> space;
    for (const CatalogEntry& entry : maximal_catalog()) {
        for (int sa = 1; sa <= 255; sa += seed_stride) {
            for (int sw = 1; sw <= 255; sw += seed_stride) {
                SeedSearchConfig c;
                c.prng_a = LfsrSpec{entry.style, entry.taps, static_cast<std::uint8_t>(sa), true};
                c.prng_w = LfsrSpec{entry.style, entry.taps, static_cast<std::uint8_t>(sw), true};
                space.push_back(c);
            }
        }
    }
    return space;
}

namespace {

// Pre-shifted operands of one calibration column.
struct PlannedColumn {
    std::vector<std::uint8_t> a_s;
    std::vector<std::uint8_t> w_s;
    long long sum_a_s = 0;
    long long sum_w_s = 0;
    long long term_c = 0;
    long long term_d = 0;
    long long exact = 0;
};

PlannedColumn plan_column(const SignedColumn& col, int k) {
    PlannedColumn p;
    p.a_s.resize(col.x.size());
    p.w_s.resize(col.w.size());
    for (std::size_t i = 0; i < col.x.size(); ++i) {
        p.a_s[i] = static_cast<std::uint8_t>(to_unsigned(col.x[i]) >> k);
        p.w_s[i] = static_cast<std::uint8_t>(to_unsigned(col.w[i]) >> k);
        p.sum_a_s += p.a_s[i];
        p.sum_w_s += p.w_s[i];
    }
    p.term_c = term_c(col.x);
    p.term_d = term_d(col.w);
    p.exact = exact_psum(col);
    return p;
}

double aggregate_mix(std::span<const double> rmse_per_dist) {
    double acc = 0.0;
    for (double r : rmse_per_dist) acc += r * r;
    return std::sqrt(acc / static_cast<double>(rmse_per_dist.size()));
}

double aggregate_lengths(std::span<const int> lengths, std::span<const double> per_length_objective) {
    // sqrt(N/256) weighting keeps every length comparable under the
    // 1/sqrt(N) sampling-error law
    double acc = 0.0;
    for (std::size_t i = 0; i < lengths.size(); ++i) {
        acc += per_length_objective[i] * std::sqrt(static_cast<double>(lengths[i]) / 256.0);
    }
    return acc / static_cast<double>(lengths.size());
}

// Per-length mix objectives of one candidate, all lengths in one pass over
// each column (counts at shorter lengths are prefixes of the longest run).
std::vector<double> eval_candidate(const MacroConfig& base, const SeedSearchConfig& cand,
                                   std::span<const std::vector<PlannedColumn>> mix,
                                   std::span<const int> lengths_sorted) {
    const int k = base.shift();
    const int group_size = base.group_size;
    const int n_groups = base.rows / group_size;
    const int shift = 8 - k;
    const std::uint8_t low_mask = static_cast<std::uint8_t>((1u << shift) - 1);
    const long long max_len = lengths_sorted.back();
    const double scale = full_scale(base);

    const std::vector<std::uint8_t> ra = prng_sequence(cand.prng_a, static_cast<std::size_t>(max_len));
    const std::vector<std::uint8_t> rw = prng_sequence(cand.prng_w, static_cast<std::size_t>(max_len));
    // hoist the per-cycle row selection shared by every column
    std::vector<int> j_star(static_cast<std::size_t>(max_len));
    std::vector<std::uint8_t> la(static_cast<std::size_t>(max_len));
    std::vector<std::uint8_t> lw(static_cast<std::size_t>(max_len));
    for (long long t = 0; t < max_len; ++t) {
        const std::uint8_t a = ra[static_cast<std::size_t>(t)];
        const std::uint8_t w = rw[static_cast<std::size_t>(t)];
        j_star[static_cast<std::size_t>(t)] = ((w >> shift) << k) | (a >> shift);
        la[static_cast<std::size_t>(t)] = static_cast<std::uint8_t>(a & low_mask);
        lw[static_cast<std::size_t>(t)] = static_cast<std::uint8_t>(w & low_mask);
    }

    std::vector<std::vector<double>> sum_sq(lengths_sorted.size(), std::vector<double>(mix.size(), 0.0));
    for (std::size_t d = 0; d < mix.size(); ++d) {
        for (const PlannedColumn& col : mix[d]) {
            long long count = 0;
            std::size_t li = 0;
            for (long long t = 0; t < max_len; ++t) {
                const int j = j_star[static_cast<std::size_t>(t)];
                const std::uint8_t a_low = la[static_cast<std::size_t>(t)];
                const std::uint8_t w_low = lw[static_cast<std::size_t>(t)];
                int cycle_sum = 0;
                for (int g = 0; g < n_groups; ++g) {
                    const int row = g * group_size + j;
                    cycle_sum += (a_low < col.a_s[static_cast<std::size_t>(row)] &&
                                  w_low < col.w_s[static_cast<std::size_t>(row)])
                                     ? 1
                                     : 0;
                }
                count += cycle_sum;
                if (t + 1 == lengths_sorted[li]) {
                    const long long term_b = rescale(count, lengths_sorted[li], k, base.compensation, col.sum_a_s,
                                                     col.sum_w_s, base.rows);
                    const double err = static_cast<double>(term_b - col.term_c - col.term_d - col.exact) / scale;
                    sum_sq[li][d] += err * err;
                    if (++li == lengths_sorted.size()) break;
                }
            }
        }
    }
    std::vector<double> objectives(lengths_sorted.size());
    for (std::size_t li = 0; li < lengths_sorted.size(); ++li) {
        std::vector<double> per_dist(mix.size());
        for (std::size_t d = 0; d < mix.size(); ++d) {
            per_dist[d] = std::sqrt(sum_sq[li][d] / static_cast<double>(mix[d].size()));
        }
        objectives[li] = aggregate_mix(per_dist);
    }
    return objectives;
}

}  // namespace

SeedSearchResult seed_search(const MacroConfig& base, std::span<const SeedSearchConfig> space,
                             std::span<const int> lengths, long long budget, long long cal_trials,
                             std::uint64_t master_seed) {
    base.validate();
    if (space.empty()) throw ConfigError("seed_search: empty search space");
    if (budget < 1) throw ConfigError("seed_search: budget must be >= 1");
    if (cal_trials < 1) throw ConfigError("seed_search: cal_trials must be >= 1");
    if (lengths.empty()) throw ConfigError("seed_search: no lengths given");
    if (base.axis_mode != AxisMode::xor_mask) throw ConfigError("seed_search: xor_mask candidates only");

    std::vector<int> lengths_sorted(lengths.begin(), lengths.end());
    std::sort(lengths_sorted.begin(), lengths_sorted.end());
    lengths_sorted.erase(std::unique(lengths_sorted.begin(), lengths_sorted.end()), lengths_sorted.end());
    for (int n : lengths_sorted) {
        if (n < 1) throw ConfigError("seed_search: lengths must be >= 1");
    }

    // calibration mix per the shipped defaults: uniform, gaussian(32, +/-127),
    // sparse(0.875); common columns across all candidates
    std::uint64_t derive = master_seed;
    std::vector<DistSpec> mix_spec(3);
    mix_spec[0].kind = DistKind::uniform_signed;
    mix_spec[1].kind = DistKind::gaussian;
    mix_spec[2].kind = DistKind::sparse;
    mix_spec[2].p_zero = 0.875;
    std::vector<std::uint64_t> mix_seeds(mix_spec.size());
    for (std::size_t d = 0; d < mix_spec.size(); ++d) mix_seeds[d] = splitmix64(derive);
    std::vector<std::vector<PlannedColumn>> mix(mix_spec.size());
    const int k = base.shift();
    for (std::size_t d = 0; d < mix_spec.size(); ++d) {
        const auto columns = draw_columns(mix_spec[d], base.rows, cal_trials, mix_seeds[d]);
        mix[d].reserve(columns.size());
        for (const SignedColumn& c : columns) mix[d].push_back(plan_column(c, k));
    }

    const long long evaluated = std::min<long long>(budget, static_cast<long long>(space.size()));
    std::vector<std::vector<double>> objectives(static_cast<std::size_t>(evaluated));
    parallel_for(evaluated, [&](long long i) {
        objectives[static_cast<std::size_t>(i)] =
            eval_candidate(base, space[static_cast<std::size_t>(i)], mix, lengths_sorted);
    });

    SeedSearchResult res;
    res.evaluated = evaluated;
    double best_score = 0.0;
    std::vector<double> best_per_length(lengths_sorted.size(), 0.0);
    for (long long i = 0; i < evaluated; ++i) {
        const auto& obj = objectives[static_cast<std::size_t>(i)];
        const double score = aggregate_lengths(lengths_sorted, obj);
        // strict < keeps the earliest candidate on ties: canonical
        // (polynomial index, seed_a, seed_w) ascending order
        if (i == 0 || score < best_score) {
            best_score = score;
            res.best_a = space[static_cast<std::size_t>(i)].prng_a;
            res.best_w = space[static_cast<std::size_t>(i)].prng_w;
        }
        for (std::size_t li = 0; li < lengths_sorted.size(); ++li) {
            if (i == 0 || obj[li] < best_per_length[li]) {
                best_per_length[li] = obj[li];
                res.per_length[lengths_sorted[li]] = space[static_cast<std::size_t>(i)];
            }
        }
    }
    for (std::size_t li = 0; li < lengths_sorted.size(); ++li) {
        res.per_length_objective[lengths_sorted[li]] = best_per_length[li];
    }

    // recompute the winner through the simulate_column route; the two paths
    // must agree exactly (guards the specialized evaluator)
    MacroConfig check = base;
    check.prng_a = res.best_a;
    check.prng_w = res.best_w;
    std::vector<double> recomputed(lengths_sorted.size());
    for (std::size_t li = 0; li < lengths_sorted.size(); ++li) {
        std::vector<double> per_dist(mix.size());
        for (std::size_t d = 0; d < mix.size(); ++d) {
            MacroConfig c = check;
            c.sampler = SamplerKind::prng;
            c.bitstream_len = lengths_sorted[li];
            const auto columns = draw_columns(mix_spec[d], base.rows, cal_trials, mix_seeds[d]);
            per_dist[d] = rmse_over_columns(c, columns).rmse_norm;
        }
        recomputed[li] = aggregate_mix(per_dist);
    }
    const double recomputed_score = aggregate_lengths(lengths_sorted, recomputed);
    if (std::abs(recomputed_score - best_score) > 1e-12) {
        throw InvariantError("seed_search: objective recomputation mismatch");
    }
    res.objective = recomputed_score;
    return res;
}

void export_error_model(const ErrorStats& stats, const MacroConfig& cfg, const DistSpec& dist,
                        const std::string& path) {
    if (stats.trials < 1 || stats.raw_errors.empty()) throw ConfigError("export_error_model: empty stats");
    std::ofstream out(path);
    if (!out) throw InputError("export_error_model: cannot open " + path);
    for (double e : stats.raw_errors) out << format_double(e) << "\n";
    out.close();
    if (!out) throw InputError("export_error_model: write failed for " + path);

    nlohmann::json sidecar;
    sidecar["config"] = macro_config_to_json(cfg);
    sidecar["config_hash"] = config_hash(cfg);
    sidecar["distribution"] = dist_to_json(dist);
    sidecar["trials"] = stats.trials;
    sidecar["rmse_norm"] = stats.rmse_norm;
    sidecar["mean_bias_norm"] = stats.mean_bias_norm;
    sidecar["max_abs_norm"] = stats.max_abs_norm;
    std::ofstream side(path + ".json");
    if (!side) throw InputError("export_error_model: cannot open " + path + ".json");
    side << sidecar.dump(2) << "\n";
}

}  // namespace dscim
