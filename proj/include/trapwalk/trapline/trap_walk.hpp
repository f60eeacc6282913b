#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "trapwalk/limits/cadlag_step.hpp"
#include "trapwalk/random.hpp"
#include "trapwalk/svt/tail_function.hpp"

namespace trapwalk {

// iid traps τ_x on the integers, each a pure function of (seed, x), so the
// window can grow in either direction without disturbing existing sites.
class TrapEnvironment {
public:
    TrapEnvironment(TailFunction tail, std::uint64_t seed);

    double log_tau(long x)
    {
        if (x >= 0 && static_cast<std::size_t>(x) < right_.size())
            return right_[static_cast<std::size_t>(x)];
        if (x < 0 && static_cast<std::size_t>(-x - 1) < left_.size())
            return left_[static_cast<std::size_t>(-x - 1)];
        return extend_to(x);
    }
    LogMagnitude tau(long x) { return LogMagnitude::from_log(log_tau(x)); }
    // Value of τ_x without touching the cache.
    LogMagnitude site_value(long x) const;

    long left() const { return -static_cast<long>(left_.size()); }
    long right() const { return static_cast<long>(right_.size()) - 1; }
    const TailFunction& tail() const { return tail_; }
    std::uint64_t seed() const { return seed_; }

private:
    double extend_to(long x);

    TailFunction tail_;
    std::uint64_t seed_;
    std::vector<double> right_;  // sites 0, 1, 2, ...
    std::vector<double> left_;   // sites -1, -2, ...
};

TrapEnvironment generate_environment(const TailFunction& tail, long left, long right, std::uint64_t seed);

class StepBudgetExceeded : public std::runtime_error {
public:
    explicit StepBudgetExceeded(std::uint64_t budget);
};

constexpr std::uint64_t kDefaultStepBudget = 1'000'000'000ULL;

struct WalkOptions {
    std::uint64_t step_budget = kDefaultStepBudget;
    bool keep_trajectory = false;
    std::vector<long> tracked_sites;
    // Clock contributions from steps at sites with τ <= threshold are also summed separately.
    std::optional<LogMagnitude> shallow_threshold;
};

struct SiteOccupation {
    long site = 0;
    std::uint64_t visits = 0;
    LogMagnitude time = LogMagnitude::zero();
};

struct WalkRecord {
    double beta = 0.0;
    long level = 0;
    long final_site = 0;
    std::uint64_t steps = 0;
    // hitting[k] = Δ_k, clock value at the first visit to k; hitting[0] = 0.
    std::vector<LogMagnitude> hitting;
    // min over i < j of Y_j - max_{l<=i} Y_l; nonpositive.
    long backtrack = 0;
    LogMagnitude clock = LogMagnitude::zero();
    std::optional<LogMagnitude> shallow_threshold;
    LogMagnitude shallow_clock = LogMagnitude::zero();
    std::vector<SiteOccupation> occupation;
    std::vector<long> trajectory_sites;      // Y_0 .. Y_{steps-1}
    std::vector<double> trajectory_log_exp;  // ln e_i
};

// Embedded walk (right with probability β/(β+1)) with clock S = Σ τ_{Y_i} e_i,
// run until the first visit to `level`.
WalkRecord run_to_level(TrapEnvironment& env, double beta, long level, Rng& rng, const WalkOptions& options = {});

// t ↦ (1/n) L(Δ_{⌊nt⌋}) on the grid.
CadlagStep rescaled_hitting_path(const WalkRecord& record, const TailFunction& tail, long n, const std::vector<double>& grid);

// X at each clock value (non-decreasing): the site occupied at that time.
std::vector<long> position_at_timescale(TrapEnvironment& env, double beta, const std::vector<LogMagnitude>& times, Rng& rng,
                                        std::uint64_t step_budget = kDefaultStepBudget);

// min{x >= 0 : τ_x >= F̄^-1(1/u)}
long localization_site(TrapEnvironment& env, double u);

bool aging_indicator(TrapEnvironment& env, double beta, double n, double a, double b, Rng& rng,
                     std::uint64_t step_budget = kDefaultStepBudget);

struct EnvironmentEvents {
    bool separated = false;     // deep traps in [1, nT] more than n^κ apart
    bool clear_left = false;    // no deep trap in [-(ln n)^{1+γ'}, 0]
    bool small_backtrack = false;
    bool shallow_time_small = false;
    bool all() const { return separated && clear_left && small_backtrack && shallow_time_small; }
};

// `record` must stop at level nT and carry the shallow clock for threshold g(n).
EnvironmentEvents diagnostics(TrapEnvironment& env, const WalkRecord& record, double n, double T, double kappa, double gamma_prime);

WalkOptions diagnostics_options(const TailFunction& tail, double n);

// Position after k embedded steps from 0, one uniform per step.
long embedded_position(double beta, std::uint64_t steps, Rng& rng);

// τ Σ_{i<=G} e_i with G geometric on {1, 2, ...} with success (β-1)/(β+1):
// the law of the total time spent at a fixed nonnegative site.
LogMagnitude sample_occupation_time(LogMagnitude tau, double beta, Rng& rng);

}  // namespace trapwalk
