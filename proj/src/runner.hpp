#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "config.hpp"

namespace polyion::runner {

using nlohmann::json;

inline constexpr const char* version = "0.1.0";

struct RunConfig {
    std::string species_path;
    std::string setup_path;
    std::string experiment;
    std::uint64_t seed = 0;
    std::string out_dir = ".";
    std::vector<std::pair<std::string, std::string>> overrides;
    int n_threads = 1;
};

// exit codes: 0 success, 2 schema violation, 3 numeric failure
enum : int { exit_ok = 0, exit_schema = 2, exit_numeric = 3 };

int run(const RunConfig& cfg, std::string* error = nullptr);

// all diagnostics, not just the first; empty means valid
std::vector<std::string> validate(const RunConfig& cfg);

bool known_experiment(const std::string& name);

// levels + transitions partitioned at split_freq; lossless JSON document
json export_grotrian(const molspec::LevelTable& table, const molspec::TransitionCatalog& catalog,
                     double split_freq);

// stable hash of the fully-resolved parameter document
std::uint64_t params_hash(const json& params, std::uint64_t seed);

// shortest-roundtrip double formatting used in all CSV output
std::string format_double(double x);

}  // namespace polyion::runner
