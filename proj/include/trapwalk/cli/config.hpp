#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

namespace trapwalk::cli {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct ConfigKey {
    std::string name;
    std::string help;
};

// Every key accepted in config files and as a --flag (dots become dashes).
const std::vector<ConfigKey>& config_keys();
const std::vector<std::string>& subcommands();

struct ExperimentConfig {
    std::string command;

    double beta = 3.0;
    std::string tail = "log_power";  // log_power | iterated_log
    double gamma = 1.0;
    std::string family = "geometric";  // geometric | zipf
    double alpha = 1.5;
    double n = 0.0;
    double a = 1.0;
    double b = 2.0;
    double T = 1.0;
    std::vector<double> grid;
    std::vector<double> report{0.5, 1.0, 2.0};
    double kappa = 0.5;
    double gamma_prime = 0.5;

    std::size_t reps = 1000;
    std::uint64_t seed = 1;
    unsigned workers = 0;
    std::uint64_t step_budget = 1'000'000'000ULL;

    std::size_t height_cap = 100000;
    std::size_t size_cap = 10'000'000;
    bool fold_alpha = false;

    std::string check = "aging";  // tree-oracle: aging | deep-time
    std::uint32_t entrance_depth = 1;
    double critical_height = 4.0;
    double window_lo = 9.0;
    double window_hi = 10.0;

    std::string first;
    std::string second;
    std::size_t resolution = 1000;
    double horizon = 0.0;

    double slack = 0.05;
    double tolerance = 0.05;
    double level = 0.01;

    std::string out;
    std::string manifest;

    std::set<std::string> explicit_keys;

    // Parses and stores one value; errors name the key.
    void set(const std::string& key, const std::string& value);
    // Fills per-command defaults for keys never set.
    void apply_defaults();
    void validate() const;
    nlohmann::ordered_json to_json() const;
};

// Flat `key = value` lines; '#' starts a comment.
std::map<std::string, std::string> read_config_file(const std::string& path);

}  // namespace trapwalk::cli
