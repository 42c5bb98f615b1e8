// dscim -- command-line front end for the DS-CIM behavioral simulator.
//
// Subcommands: simulate, sweep, seedsearch, saturation-curve, perf,
// errormodel. All outputs are deterministic for a fixed master seed (no
// timestamps); every output file embeds the fully-resolved configuration.
//
// Exit codes: 0 success, 2 input validation, 3 config validation,
// 4 internal invariant violation.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "dscim/analysis.hpp"
#include "dscim/io.hpp"
#include "dscim/oracles.hpp"
#include "dscim/perf.hpp"
#include "dscim/rng.hpp"

using nlohmann::json;

namespace {

struct CommonOpts {
    std::string config_path;
    std::string mode = "";
    std::string out;
    std::string format = "";
    std::uint64_t seed = 0;
    bool seed_set = false;
    long long trials = 0;
};

dscim::RunConfig resolve_config(const CommonOpts& opts) {
    dscim::RunConfig rc;
    if (!opts.config_path.empty()) {
        rc = dscim::load_run_config(opts.config_path);
    } else {
        rc.mode = opts.mode.empty() ? "custom" : opts.mode;
        rc.macro = dscim::mode_preset(rc.mode);
    }
    if (!opts.mode.empty() && !opts.config_path.empty() && opts.mode != rc.mode) {
        // --mode beats the file's mode; macro fields from the file are kept
        dscim::MacroConfig preset = dscim::mode_preset(opts.mode);
        preset.prng_a = rc.macro.prng_a;
        preset.prng_w = rc.macro.prng_w;
        preset.bitstream_len = rc.macro.bitstream_len;
        rc.macro = preset;
        rc.mode = opts.mode;
        rc.warnings.push_back("mode overridden on the command line: " + opts.mode);
    }
    if (opts.seed_set) rc.master_seed = opts.seed;
    if (!opts.format.empty()) {
        if (opts.format != "csv" && opts.format != "json") throw dscim::ConfigError("format must be csv or json");
        rc.format = opts.format;
    }
    rc.macro.validate();
    for (const std::string& w : rc.warnings) std::cerr << "warning: " << w << "\n";
    return rc;
}

json resolved_json(const dscim::RunConfig& rc) {
    json j;
    j["mode"] = rc.mode;
    j["macro"] = dscim::macro_config_to_json(rc.macro);
    j["master_seed"] = rc.master_seed;
    j["config_hash"] = dscim::config_hash(rc.macro);
    return j;
}

void write_file(const std::string& path, const std::string& contents) {
    std::ofstream out(path);
    if (!out) throw dscim::InputError("cannot open output file: " + path);
    out << contents;
    if (!out.good()) throw dscim::InputError("write failed: " + path);
}

dscim::DistSpec dist_from_flags(const std::string& name, double sigma, double p_zero, const std::string& trace) {
    dscim::DistSpec d;
    if (name == "uniform_signed") {
        d.kind = dscim::DistKind::uniform_signed;
    } else if (name == "gaussian") {
        d.kind = dscim::DistKind::gaussian;
        d.sigma = sigma;
    } else if (name == "sparse") {
        d.kind = dscim::DistKind::sparse;
        d.p_zero = p_zero;
    } else if (name == "file_trace") {
        d.kind = dscim::DistKind::file_trace;
        if (trace.empty()) throw dscim::ConfigError("file_trace distribution needs --trace");
        d.path = trace;
    } else {
        throw dscim::ConfigError("unknown distribution: " + name);
    }
    return d;
}

int cmd_simulate(const CommonOpts& opts, const std::string& activations_path, const std::string& weights_path,
                 bool check) {
    dscim::RunConfig rc = resolve_config(opts);
    if (check) rc.macro.validate_exclusion = true;

    const dscim::SignedMatrix activations = dscim::read_signed_csv(activations_path, rc.macro.rows);
    const dscim::SignedMatrix weights = dscim::read_signed_csv(weights_path);
    if (static_cast<int>(weights.size()) != rc.macro.rows) {
        throw dscim::InputError(weights_path + ": expected " + std::to_string(rc.macro.rows) + " weight rows, found " +
                                std::to_string(weights.size()));
    }
    if (static_cast<int>(weights.front().size()) > rc.macro.columns) {
        throw dscim::InputError(weights_path + ": " + std::to_string(weights.front().size()) +
                                " weight columns exceed the macro's " + std::to_string(rc.macro.columns));
    }

    // batch activation vectors through the cmr-wide macro
    const double scale = dscim::full_scale(rc.macro);
    struct Row {
        long long vector, column;
        dscim::ColumnResult res;
        long long exact;
    };
    std::vector<Row> rows;
    long long violations = 0;
    for (std::size_t base = 0; base < activations.size(); base += static_cast<std::size_t>(rc.macro.cmr)) {
        const std::size_t end = std::min(activations.size(), base + static_cast<std::size_t>(rc.macro.cmr));
        const dscim::SignedMatrix batch(activations.begin() + static_cast<std::ptrdiff_t>(base),
                                        activations.begin() + static_cast<std::ptrdiff_t>(end));
        const auto results = dscim::simulate_macro(rc.macro, batch, weights);
        for (std::size_t v = 0; v < results.size(); ++v) {
            for (std::size_t c = 0; c < results[v].size(); ++c) {
                dscim::SignedColumn col;
                col.x = batch[v];
                col.w.resize(static_cast<std::size_t>(rc.macro.rows));
                for (int i = 0; i < rc.macro.rows; ++i) col.w[static_cast<std::size_t>(i)] = weights[static_cast<std::size_t>(i)][c];
                violations += results[v][c].exclusion_violations;
                rows.push_back(Row{static_cast<long long>(base + v), static_cast<long long>(c), results[v][c],
                                   dscim::exact_psum(col)});
            }
        }
    }
    if (violations > 0) {
        throw dscim::InvariantError("mutual exclusion violated in " + std::to_string(violations) + " group-cycles");
    }

    if (rc.format == "json") {
        json out;
        out["config"] = resolved_json(rc);
        out["results"] = json::array();
        for (const Row& r : rows) {
            out["results"].push_back({{"vector", r.vector},
                                      {"column", r.column},
                                      {"psum_est", r.res.psum_est},
                                      {"psum_exact", r.exact},
                                      {"error_norm", static_cast<double>(r.res.psum_est - r.exact) / scale},
                                      {"count", r.res.count},
                                      {"accumulator_activations", r.res.accumulator_activations}});
        }
        write_file(opts.out, out.dump(2) + "\n");
    } else {
        std::ostringstream out;
        out << "# config = " << resolved_json(rc).dump() << "\n";
        out << "vector,column,psum_est,psum_exact,error_norm,count,accumulator_activations\n";
        for (const Row& r : rows) {
            out << r.vector << ',' << r.column << ',' << r.res.psum_est << ',' << r.exact << ','
                << dscim::format_double(static_cast<double>(r.res.psum_est - r.exact) / scale) << ',' << r.res.count
                << ',' << r.res.accumulator_activations << "\n";
        }
        write_file(opts.out, out.str());
    }
    return 0;
}

int cmd_sweep(const CommonOpts& opts, const std::string& kind, std::vector<int> lengths, std::vector<double> grid,
              const dscim::DistSpec& dist) {
    dscim::RunConfig rc = resolve_config(opts);
    const long long trials = opts.trials > 0 ? opts.trials : 2000;

    std::ostringstream out;
    out << "# config = " << resolved_json(rc).dump() << "\n";
    if (kind == "length") {
        if (lengths.empty()) lengths = {64, 128, 256};
        const auto sweep = dscim::length_sweep(rc.macro, lengths, dist, trials, rc.master_seed);
        out << "bitstream_len,rmse_norm,mean_bias_norm,max_abs_norm,trials\n";
        for (const auto& [n, stats] : sweep) {
            out << n << ',' << dscim::format_double(stats.rmse_norm) << ','
                << dscim::format_double(stats.mean_bias_norm) << ',' << dscim::format_double(stats.max_abs_norm) << ','
                << stats.trials << "\n";
        }
    } else if (kind == "sparsity") {
        if (grid.empty()) grid = {0.0, 0.25, 0.5, 0.75, 0.875, 1.0};
        const auto sweep = dscim::sparsity_sweep(rc.macro, grid, trials, rc.master_seed);
        out << "p_zero,rmse_norm,mean_bias_norm,max_abs_norm,trials\n";
        for (const auto& [p, stats] : sweep) {
            out << dscim::format_double(p) << ',' << dscim::format_double(stats.rmse_norm) << ','
                << dscim::format_double(stats.mean_bias_norm) << ',' << dscim::format_double(stats.max_abs_norm) << ','
                << stats.trials << "\n";
        }
    } else {
        throw dscim::ConfigError("sweep kind must be length or sparsity");
    }
    write_file(opts.out, out.str());
    return 0;
}

int cmd_seedsearch(const CommonOpts& opts, long long budget, int stride, std::vector<int> lengths,
                   long long cal_trials) {
    dscim::RunConfig rc = resolve_config(opts);
    if (lengths.empty()) lengths = {64, 128, 256};
    const auto space = dscim::default_search_space(stride);
    if (budget <= 0) budget = static_cast<long long>(space.size());
    const auto result = dscim::seed_search(rc.macro, space, lengths, budget, cal_trials, rc.master_seed);

    json out;
    out["config"] = resolved_json(rc);
    out["search"] = {{"stride", stride},
                     {"budget", budget},
                     {"evaluated", result.evaluated},
                     {"cal_trials", cal_trials},
                     {"lengths", lengths}};
    out["best"] = {{"prng_a", dscim::lfsr_to_json(result.best_a)},
                   {"prng_w", dscim::lfsr_to_json(result.best_w)},
                   {"objective", result.objective}};
    out["per_length"] = json::object();
    for (const auto& [n, cfg] : result.per_length) {
        out["per_length"][std::to_string(n)] = {{"prng_a", dscim::lfsr_to_json(cfg.prng_a)},
                                                {"prng_w", dscim::lfsr_to_json(cfg.prng_w)},
                                                {"objective", result.per_length_objective.at(n)}};
    }
    write_file(opts.out, out.dump(2) + "\n");
    return 0;
}

int cmd_saturation_curve(const CommonOpts& opts, std::vector<int> fan_ins, std::vector<double> p_grid,
                         long long cycles) {
    dscim::RunConfig rc = resolve_config(opts);
    if (fan_ins.empty()) fan_ins = {4, 16, 64};
    if (p_grid.empty()) p_grid = {0.001, 0.01, 0.05, 0.1, 0.25, 0.5, 0.75, 1.0};
    const long long trials = opts.trials > 0 ? opts.trials : 64;

    std::ostringstream out;
    out << "# config = " << resolved_json(rc).dump() << "\n";
    out << "fan_in,p,expected_or,ideal_sum,rel_error_analytic,or_rate_mc,rel_error_mc\n";
    std::uint64_t derive = rc.master_seed;
    for (int n : fan_ins) {
        for (double p : p_grid) {
            const dscim::SaturationPoint pt = dscim::or_saturation_rel_error(n, p);
            const std::vector<double> probs(static_cast<std::size_t>(n), p);
            const auto mc = dscim::naive_scim_count(probs, cycles * trials, dscim::splitmix64(derive));
            const double or_rate = static_cast<double>(mc.or_count) / static_cast<double>(cycles * trials);
            const double rel_mc = p == 0.0 ? 0.0 : 1.0 - or_rate / (static_cast<double>(n) * p);
            out << n << ',' << dscim::format_double(p) << ',' << dscim::format_double(pt.expected_or) << ','
                << dscim::format_double(pt.ideal_sum) << ',' << dscim::format_double(pt.rel_error) << ','
                << dscim::format_double(or_rate) << ',' << dscim::format_double(rel_mc) << "\n";
        }
    }
    write_file(opts.out, out.str());
    return 0;
}

int cmd_perf(const CommonOpts& opts, const std::string& workload_path, long long outputs, int weight_columns) {
    dscim::RunConfig rc = resolve_config(opts);
    dscim::WorkloadSpec work;
    if (!workload_path.empty()) {
        std::ifstream in(workload_path);
        if (!in) throw dscim::InputError("cannot open workload file: " + workload_path);
        json j;
        try {
            in >> j;
        } catch (const json::exception& e) {
            throw dscim::InputError("workload parse error: " + std::string(e.what()));
        }
        if (j.contains("output_count")) work.output_count = j.at("output_count").get<long long>();
        if (j.contains("vector_len")) work.vector_len = j.at("vector_len").get<int>();
        if (j.contains("weight_columns")) work.weight_columns = j.at("weight_columns").get<int>();
    }
    if (outputs > 0) work.output_count = outputs;
    if (weight_columns > 0) work.weight_columns = weight_columns;

    const dscim::PerfReport report = dscim::latency_model(work, rc.macro);
    json out;
    out["config"] = resolved_json(rc);
    out["workload"] = {{"output_count", work.output_count},
                       {"vector_len", work.vector_len},
                       {"weight_columns", work.weight_columns}};
    out["report"] = {{"cycles", report.cycles},
                     {"utilization", report.utilization},
                     {"accumulator_activations_per_output", report.accumulator_activations},
                     {"throughput_gain", report.throughput_gain}};
    if (report.relative_compute_density) {
        out["report"]["relative_compute_density"] = *report.relative_compute_density;
    } else {
        out["report"]["relative_compute_density"] = nullptr;
    }
    write_file(opts.out, out.dump(2) + "\n");
    return 0;
}

int cmd_errormodel(const CommonOpts& opts, const dscim::DistSpec& dist) {
    dscim::RunConfig rc = resolve_config(opts);
    const long long trials = opts.trials > 0 ? opts.trials : 2000;
    const dscim::ErrorStats stats = dscim::rmse_eval(rc.macro, dist, trials, rc.master_seed);
    dscim::export_error_model(stats, rc.macro, dist, opts.out);
    std::cerr << "rmse_norm = " << stats.rmse_norm << " over " << trials << " trials\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"DS-CIM stochastic computing-in-memory behavioral simulator"};
    app.require_subcommand(1);

    CommonOpts opts;
    std::string activations_path;
    std::string weights_path;
    bool check = false;
    std::string sweep_kind = "length";
    std::vector<int> lengths;
    std::vector<double> grid;
    std::string dist_name = "uniform_signed";
    double sigma = 32.0;
    double p_zero = 0.875;
    std::string trace_path;
    long long budget = 0;
    int stride = 16;
    long long cal_trials = 128;
    std::vector<int> fan_ins;
    std::vector<double> p_grid;
    long long cycles = 256;
    std::string workload_path;
    long long outputs = 0;
    int weight_columns = 0;

    const auto add_common = [&](CLI::App* sub, bool needs_out) {
        sub->add_option("--config", opts.config_path, "run-config JSON file");
        sub->add_option("--mode", opts.mode, "dscim1 | dscim2 | custom");
        auto* o = sub->add_option("--out", opts.out, "output file");
        if (needs_out) o->required();
        sub->add_option("--format", opts.format, "csv | json");
        sub->add_option("--seed", opts.seed, "master seed (overrides config)")->each([&](const std::string&) {
            opts.seed_set = true;
        });
        sub->add_option("--trials", opts.trials, "trial count");
    };

    CLI::App* sim = app.add_subcommand("simulate", "simulate a macro run over CSV operands");
    add_common(sim, true);
    sim->add_option("--activations", activations_path, "CSV, one 128-wide vector per line")->required();
    sim->add_option("--weights", weights_path, "CSV, 128 lines x columns")->required();
    sim->add_flag("--check", check, "evaluate all rows and fail on any mutual-exclusion violation");

    CLI::App* sweep = app.add_subcommand("sweep", "length or sparsity sweep of the normalized RMSE");
    add_common(sweep, true);
    sweep->add_option("--kind", sweep_kind, "length | sparsity")->required();
    sweep->add_option("--lengths", lengths, "bitstream lengths for kind=length")->delimiter(',');
    sweep->add_option("--grid", grid, "p_zero grid for kind=sparsity")->delimiter(',');
    sweep->add_option("--dist", dist_name, "uniform_signed | gaussian | sparse | file_trace");
    sweep->add_option("--sigma", sigma, "gaussian sigma");
    sweep->add_option("--p-zero", p_zero, "sparse zero probability");
    sweep->add_option("--trace", trace_path, "trace CSV for file_trace");

    CLI::App* search = app.add_subcommand("seedsearch", "search the PRNG/seed space for minimum RMSE");
    add_common(search, true);
    search->add_option("--budget", budget, "max configurations evaluated (0 = whole grid)");
    search->add_option("--stride", stride, "seed grid stride (1 = full search)");
    search->add_option("--lengths", lengths, "bitstream lengths")->delimiter(',');
    search->add_option("--cal-trials", cal_trials, "calibration trials per distribution");

    CLI::App* sat = app.add_subcommand("saturation-curve", "analytic and Monte-Carlo OR saturation curves");
    add_common(sat, true);
    sat->add_option("--fan-in", fan_ins, "OR fan-ins")->delimiter(',');
    sat->add_option("--p-grid", p_grid, "product probabilities")->delimiter(',');
    sat->add_option("--cycles", cycles, "cycles per trial");

    CLI::App* perf = app.add_subcommand("perf", "throughput/latency/activation model");
    add_common(perf, true);
    perf->add_option("--workload", workload_path, "workload JSON file");
    perf->add_option("--outputs", outputs, "output vector count");
    perf->add_option("--weight-columns", weight_columns, "weight column count");

    CLI::App* errm = app.add_subcommand("errormodel", "export the empirical error distribution");
    add_common(errm, true);
    errm->add_option("--dist", dist_name, "uniform_signed | gaussian | sparse | file_trace");
    errm->add_option("--sigma", sigma, "gaussian sigma");
    errm->add_option("--p-zero", p_zero, "sparse zero probability");
    errm->add_option("--trace", trace_path, "trace CSV for file_trace");

    CLI11_PARSE(app, argc, argv);

    try {
        if (sim->parsed()) return cmd_simulate(opts, activations_path, weights_path, check);
        if (sweep->parsed()) {
            return cmd_sweep(opts, sweep_kind, lengths, grid, dist_from_flags(dist_name, sigma, p_zero, trace_path));
        }
        if (search->parsed()) return cmd_seedsearch(opts, budget, stride, lengths, cal_trials);
        if (sat->parsed()) return cmd_saturation_curve(opts, fan_ins, p_grid, cycles);
        if (perf->parsed()) return cmd_perf(opts, workload_path, outputs, weight_columns);
        if (errm->parsed()) return cmd_errormodel(opts, dist_from_flags(dist_name, sigma, p_zero, trace_path));
    } catch (const dscim::InputError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const dscim::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 3;
    } catch (const dscim::InvariantError& e) {
        std::cerr << "invariant violation (bug): " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 4;
    }
    return 0;
}
