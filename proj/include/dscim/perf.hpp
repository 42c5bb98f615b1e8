#pragma once

#include <optional>

#include "dscim/macro.hpp"

namespace dscim {

/// Workload abstraction: P activation vectors (e.g. output pixels) against
/// weight_columns columns of vector_len-deep weights.
struct WorkloadSpec {
    long long output_count = 1;
    int vector_len = 128;
    int weight_columns = 32;
};

struct PerfReport {
    long long cycles = 0;
    double utilization = 0.0;                       // busy OR-MAC slots
    long long accumulator_activations = 0;           // per output
    long long throughput_gain = 1;                   // raw view: == cmr
    std::optional<double> relative_compute_density;  // cmr / area_factor, if tabulated
};

/// Post-layout area ratio vs the CMR=1 design. Only the two published
/// points exist; no interpolation.
std::optional<double> area_factor(int cmr);

/// cycles = tiles * ceil(P / cmr) * N with tiles = ceil(columns / macro
/// columns). Exposes both the raw 64x throughput view and the
/// area-normalized 32x compute-density view.
PerfReport latency_model(const WorkloadSpec& work, const MacroConfig& cfg);

/// Fraction of cycles the accumulator adder fires: 1 for direct,
/// ceil(n/4)/n for latch4.
double activation_ratio(long long n, AccumulatorKind kind);

}  // namespace dscim
