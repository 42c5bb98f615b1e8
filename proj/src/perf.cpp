#include "dscim/perf.hpp"

namespace dscim {

std::optional<double> area_factor(int cmr) {
    if (cmr == 1) return 1.0;
    if (cmr == 64) return 2.0;
    return std::nullopt;  // only the two published points, no interpolation
}

PerfReport latency_model(const WorkloadSpec& work, const MacroConfig& cfg) {
    cfg.validate();
    if (work.output_count < 1 || work.vector_len < 1 || work.weight_columns < 1) {
        throw ConfigError("latency_model: workload fields must be positive");
    }
    const long long n = cfg.effective_length();
    const long long batches = (work.output_count + cfg.cmr - 1) / cfg.cmr;
    const long long tiles = (work.weight_columns + cfg.columns - 1) / cfg.columns;

    PerfReport r;
    r.cycles = tiles * batches * n;
    r.utilization = static_cast<double>(work.output_count) / static_cast<double>(batches * cfg.cmr);
    r.accumulator_activations =
        cfg.accumulator == AccumulatorKind::latch4 ? (n + 3) / 4 : n;
    r.throughput_gain = cfg.cmr;
    if (const auto af = area_factor(cfg.cmr)) {
        r.relative_compute_density = static_cast<double>(cfg.cmr) / *af;
    }
    return r;
}

double activation_ratio(long long n, AccumulatorKind kind) {
    if (n < 1) throw ConfigError("activation_ratio: n must be >= 1");
    if (kind == AccumulatorKind::direct) return 1.0;
    return static_cast<double>((n + 3) / 4) / static_cast<double>(n);
}

}  // namespace dscim
