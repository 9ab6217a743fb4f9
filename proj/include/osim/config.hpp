#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "osim/engine.hpp"

namespace osim {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct LoadedConfig {
    RunConfig config;
    std::vector<std::uint64_t> seeds; // run.seeds, or {run.seed}
    std::string out_dir = "out";
    bool events = false;
    int parallel = 1;
    std::vector<std::string> warnings;
};

// Parses and validates a config document. The schema is strict: unknown keys
// are rejected with their full path; missing keys fall back to the documented
// defaults. Throws ConfigError with a line-anchored message for parse errors
// and a key-anchored message for validation errors.
LoadedConfig parse_config_json(const std::string& text);

LoadedConfig load_config_file(const std::string& path);

// Applies `key=value` overrides to a config document and returns the patched
// text. Only policy keys (substitution.* and merchants.comm_quality) are
// allowed; anything else throws ConfigError.
std::string apply_variant(const std::string& text, const std::vector<std::string>& overrides);

// Serializes the summary as a single structured-text (JSON) record.
std::string summary_json(const RunSummary& s);

} // namespace osim
