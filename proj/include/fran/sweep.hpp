#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "fran/fronthaul.hpp"
#include "fran/model.hpp"

namespace fran {

// Bad key, bad value, or bad domain; maps to exit code 2.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Unreadable input or unwritable output; maps to exit code 3.
struct IoError : std::runtime_error {
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

struct SweepSpec {
    SystemConfig base;
    std::string axis;            // one of mu, M, L, P_dB, C
    std::vector<double> values;  // run order, not sorted
    std::vector<Strategy> strategies = {Strategy::Unicast, Strategy::Multicast,
                                        Strategy::Coded};
    int n_trials = 200;
    uint64_t master_seed = 1729;
    std::string output_path = "sweep.csv";
    std::vector<std::string> notes;  // assumptions echoed into the manifest

    void validate() const;  // throws ConfigError
};

// Flat `key = value` file, '#' comments, comma-separated lists; overrides
// are applied on top in order. Errors name the offending key.
SweepSpec parse_config(const std::string& path,
                       const std::vector<std::pair<std::string, std::string>>& overrides = {});

// One key = value applied to an existing spec; same keys as the file.
void apply_override(SweepSpec& spec, const std::string& key, const std::string& value);

// Built-in sweeps matching the preset files under presets/. fig4 expands to
// one sweep per fronthaul capacity.
std::vector<SweepSpec> preset_sweeps(const std::string& name);

// Base config with the axis parameter replaced; validates the result.
SystemConfig config_at(const SystemConfig& base, const std::string& axis, double value);

// Human-readable key = value block; used by the CLI banner and the manifest.
std::string describe(const SweepSpec& spec);

const char* csv_header();

struct RunStats {
    long total_trials = 0;    // trials executed, summed over points and sweeps
    long stalled_trials = 0;  // trials whose solver raised the stall flag
};

// Runs every sweep and writes one CSV (single header) plus a manifest
// sidecar at output_path + ".manifest". All specs must agree on the path.
RunStats run_sweeps(const std::vector<SweepSpec>& specs);

RunStats run_sweep(const SweepSpec& spec);

}  // namespace fran
