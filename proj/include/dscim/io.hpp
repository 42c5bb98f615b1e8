#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "dscim/analysis.hpp"
#include "dscim/macro.hpp"
#include "dscim/perf.hpp"

namespace dscim {

/// Parsed run configuration: mode preset plus explicit overrides.
struct RunConfig {
    std::string mode = "custom";  // dscim1 | dscim2 | custom
    MacroConfig macro;
    std::uint64_t master_seed = 1;
    std::string format = "csv";  // csv | json
    std::vector<std::string> warnings;  // preset fields overridden by the user
};

/// Mode presets: dscim1 -> G=16, dscim2 -> G=64 + latch4 accumulator.
MacroConfig mode_preset(const std::string& mode);

RunConfig run_config_from_json(const nlohmann::json& j);
RunConfig load_run_config(const std::string& path);

nlohmann::json macro_config_to_json(const MacroConfig& cfg);
MacroConfig macro_config_from_json(const nlohmann::json& j);
nlohmann::json dist_to_json(const DistSpec& dist);
nlohmann::json lfsr_to_json(const LfsrSpec& spec);
LfsrSpec lfsr_from_json(const nlohmann::json& j);

/// FNV-1a over the canonical config JSON, hex string.
std::string config_hash(const MacroConfig& cfg);

/// CSV of signed bytes, one row per line. Throws InputError with line and
/// column positions for malformed cells, values outside [-128, 127], or
/// ragged rows. expected_cols < 0 accepts the first row's width.
SignedMatrix read_signed_csv(const std::string& path, int expected_cols = -1);

/// Deterministic number formatting (shortest round-trip for doubles).
std::string format_double(double v);

}  // namespace dscim
