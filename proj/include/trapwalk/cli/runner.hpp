#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "trapwalk/cli/config.hpp"
#include "trapwalk/limits/cadlag_step.hpp"

namespace trapwalk::cli {

struct TestResult {
    std::string name;
    double statistic = 0.0;
    double bound = 0.0;
    bool pass = false;
    nlohmann::ordered_json detail = nlohmann::ordered_json::object();
};

struct Outcome {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
    std::vector<TestResult> tests;
    bool passed() const;
};

// Threads used for `requested` (0 = hardware), capped by TRAPWALK_WORKERS.
unsigned effective_workers(unsigned requested);

// Shortest text that reads back to the same double.
std::string format_number(double x);

// Step function from `time,value` rows; the first row gives the value at time 0.
CadlagStep read_step_csv(const std::string& path, double horizon);
double latest_time(const std::string& path);

// Runs the subcommand without touching the file system (except paths-distance inputs).
Outcome execute(const ExperimentConfig& config);

// Writes CSV and manifest; returns 0 when every test passes, 1 otherwise.
// Outputs are removed if the run throws.
int run_experiment(const ExperimentConfig& config, std::ostream& log);

// Command-line entry: parses, validates and runs. Config errors exit with 2.
int main_entry(int argc, char** argv);

}  // namespace trapwalk::cli
