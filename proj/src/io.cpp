#include "dscim/io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace dscim {

namespace {

std::string style_name(LfsrStyle s) { return s == LfsrStyle::galois ? "galois" : "fibonacci"; }

LfsrStyle style_from(const std::string& s) {
    if (s == "galois") return LfsrStyle::galois;
    if (s == "fibonacci") return LfsrStyle::fibonacci;
    throw ConfigError("unknown lfsr style: " + s);
}

std::string hex_byte(std::uint8_t v) {
    char buf[3];
    std::snprintf(buf, sizeof buf, "%02x", v);
    return std::string(buf);
}

std::uint8_t byte_from_hex(const std::string& s) {
    unsigned v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v, 16);
    if (ec != std::errc{} || ptr != s.data() + s.size() || v > 255) {
        throw ConfigError("bad hex byte: " + s);
    }
    return static_cast<std::uint8_t>(v);
}

template <class Enum>
Enum enum_from(const nlohmann::json& j, const char* key, std::initializer_list<std::pair<const char*, Enum>> table,
               Enum fallback) {
    if (!j.contains(key)) return fallback;
    const std::string s = j.at(key).get<std::string>();
    for (const auto& [name, value] : table) {
        if (s == name) return value;
    }
    throw ConfigError(std::string("unknown value for ") + key + ": " + s);
}

}  // namespace

nlohmann::json lfsr_to_json(const LfsrSpec& spec) {
    return nlohmann::json{{"style", style_name(spec.style)},
                          {"taps_hex", hex_byte(spec.taps)},
                          {"seed_hex", hex_byte(spec.seed)},
                          {"zero_insert", spec.zero_insert}};
}

LfsrSpec lfsr_from_json(const nlohmann::json& j) {
    LfsrSpec spec;
    if (j.contains("style")) spec.style = style_from(j.at("style").get<std::string>());
    if (j.contains("taps_hex")) spec.taps = byte_from_hex(j.at("taps_hex").get<std::string>());
    if (j.contains("seed_hex")) spec.seed = byte_from_hex(j.at("seed_hex").get<std::string>());
    if (j.contains("zero_insert")) spec.zero_insert = j.at("zero_insert").get<bool>();
    return spec;
}

nlohmann::json macro_config_to_json(const MacroConfig& cfg) {
    nlohmann::json j;
    j["rows"] = cfg.rows;
    j["columns"] = cfg.columns;
    j["group_size"] = cfg.group_size;
    j["bitstream_len"] = cfg.bitstream_len;
    j["prng_a"] = lfsr_to_json(cfg.prng_a);
    j["prng_w"] = lfsr_to_json(cfg.prng_w);
    j["sampler"] = cfg.sampler == SamplerKind::exhaustive ? "exhaustive" : "prng";
    j["accumulator"] = cfg.accumulator == AccumulatorKind::latch4 ? "latch4" : "direct";
    j["compensation"] = cfg.compensation == Compensation::midpoint ? "midpoint" : "none";
    j["axis_mode"] = cfg.axis_mode == AxisMode::reflect ? "reflect" : "xor_mask";
    j["cmr"] = cfg.cmr;
    return j;
}

MacroConfig macro_config_from_json(const nlohmann::json& j) {
    MacroConfig cfg;
    if (j.contains("rows")) cfg.rows = j.at("rows").get<int>();
    if (j.contains("columns")) cfg.columns = j.at("columns").get<int>();
    if (j.contains("group_size")) cfg.group_size = j.at("group_size").get<int>();
    if (j.contains("bitstream_len")) cfg.bitstream_len = j.at("bitstream_len").get<int>();
    if (j.contains("prng_a")) cfg.prng_a = lfsr_from_json(j.at("prng_a"));
    if (j.contains("prng_w")) cfg.prng_w = lfsr_from_json(j.at("prng_w"));
    cfg.sampler = enum_from(j, "sampler",
                            {{"prng", SamplerKind::prng}, {"exhaustive", SamplerKind::exhaustive}}, cfg.sampler);
    cfg.accumulator = enum_from(
        j, "accumulator", {{"direct", AccumulatorKind::direct}, {"latch4", AccumulatorKind::latch4}}, cfg.accumulator);
    cfg.compensation = enum_from(
        j, "compensation", {{"none", Compensation::none}, {"midpoint", Compensation::midpoint}}, cfg.compensation);
    cfg.axis_mode =
        enum_from(j, "axis_mode", {{"xor_mask", AxisMode::xor_mask}, {"reflect", AxisMode::reflect}}, cfg.axis_mode);
    if (j.contains("cmr")) cfg.cmr = j.at("cmr").get<int>();
    return cfg;
}

nlohmann::json dist_to_json(const DistSpec& dist) {
    nlohmann::json j;
    switch (dist.kind) {
        case DistKind::uniform_signed: j["kind"] = "uniform_signed"; break;
        case DistKind::gaussian:
            j["kind"] = "gaussian";
            j["sigma"] = dist.sigma;
            j["clip"] = dist.clip;
            break;
        case DistKind::sparse:
            j["kind"] = "sparse";
            j["p_zero"] = dist.p_zero;
            break;
        case DistKind::file_trace:
            j["kind"] = "file_trace";
            j["path"] = dist.path;
            break;
    }
    return j;
}

MacroConfig mode_preset(const std::string& mode) {
    MacroConfig cfg;  // defaults match dscim1 except where noted
    if (mode == "dscim1") {
        cfg.group_size = 16;
    } else if (mode == "dscim2") {
        cfg.group_size = 64;
        cfg.accumulator = AccumulatorKind::latch4;
    } else if (mode == "custom") {
        // caller-provided fields only
    } else {
        throw ConfigError("unknown mode: " + mode + " (expected dscim1, dscim2 or custom)");
    }
    return cfg;
}

RunConfig run_config_from_json(const nlohmann::json& j) {
    RunConfig rc;
    if (j.contains("mode")) rc.mode = j.at("mode").get<std::string>();
    rc.macro = mode_preset(rc.mode);
    if (j.contains("macro")) {
        const nlohmann::json& m = j.at("macro");
        if (rc.mode == "dscim1" || rc.mode == "dscim2") {
            // preset fields may be overridden, but that is worth a warning
            if (m.contains("group_size") && m.at("group_size").get<int>() != rc.macro.group_size) {
                rc.warnings.push_back("override: group_size differs from " + rc.mode + " preset");
            }
            if (m.contains("accumulator") && rc.mode == "dscim2" && m.at("accumulator").get<std::string>() != "latch4") {
                rc.warnings.push_back("override: accumulator differs from dscim2 preset");
            }
        }
        MacroConfig overridden = rc.macro;
        // apply overrides on top of the preset
        nlohmann::json merged = macro_config_to_json(overridden);
        merged.update(m);
        rc.macro = macro_config_from_json(merged);
    }
    if (j.contains("master_seed")) rc.master_seed = j.at("master_seed").get<std::uint64_t>();
    if (j.contains("format")) {
        rc.format = j.at("format").get<std::string>();
        if (rc.format != "csv" && rc.format != "json") throw ConfigError("format must be csv or json");
    }
    rc.macro.validate();
    return rc;
}

RunConfig load_run_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open config file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("config parse error in " + path + ": " + e.what());
    }
    return run_config_from_json(j);
}

std::string config_hash(const MacroConfig& cfg) {
    const std::string canon = macro_config_to_json(cfg).dump();
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : canon) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return std::string(buf);
}

SignedMatrix read_signed_csv(const std::string& path, int expected_cols) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open csv file: " + path);
    SignedMatrix out;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        std::vector<std::int8_t> row;
        std::stringstream ss(line);
        std::string cell;
        int col_no = 0;
        while (std::getline(ss, cell, ',')) {
            ++col_no;
            const std::size_t a = cell.find_first_not_of(" \t");
            const std::size_t b = cell.find_last_not_of(" \t");
            const std::string trimmed = a == std::string::npos ? std::string() : cell.substr(a, b - a + 1);
            int v = 0;
            const auto [ptr, ec] = std::from_chars(trimmed.data(), trimmed.data() + trimmed.size(), v);
            if (ec != std::errc{} || ptr != trimmed.data() + trimmed.size()) {
                throw InputError(path + ":" + std::to_string(line_no) + ": column " + std::to_string(col_no) +
                                 ": not an integer: '" + cell + "'");
            }
            if (v < -128 || v > 127) {
                throw InputError(path + ":" + std::to_string(line_no) + ": column " + std::to_string(col_no) +
                                 ": value " + std::to_string(v) + " outside [-128, 127]");
            }
            row.push_back(static_cast<std::int8_t>(v));
        }
        if (expected_cols < 0 && out.empty()) expected_cols = static_cast<int>(row.size());
        if (expected_cols >= 0 && static_cast<int>(row.size()) != expected_cols) {
            throw InputError(path + ":" + std::to_string(line_no) + ": expected " + std::to_string(expected_cols) +
                             " values, found " + std::to_string(row.size()));
        }
        out.push_back(std::move(row));
    }
    if (out.empty()) throw InputError(path + ": no data rows");
    return out;
}

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    // trim to the shortest representation that round-trips
    for (int prec = 1; prec < 17; ++prec) {
        char shorter[64];
        std::snprintf(shorter, sizeof shorter, "%.*g", prec, v);
        double back = 0.0;
        std::sscanf(shorter, "%lf", &back);
        if (back == v) return std::string(shorter);
    }
    return std::string(buf);
}

}  // namespace dscim
