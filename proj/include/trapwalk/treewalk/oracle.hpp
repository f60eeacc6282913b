#pragma once

#include <cstdint>
#include <vector>

#include "trapwalk/kestentree/kesten_tree.hpp"
#include "trapwalk/treewalk/exact_walk.hpp"

namespace trapwalk {

struct DeepTimeOptions {
    std::size_t backbone = 0;
    // leaf depth of the entrance vertex x_ij
    std::uint32_t entrance_depth = 1;
    double critical_height = 4.0;
    std::uint64_t step_budget = kDefaultStepBudget;
};

struct DeepTimeSample {
    // t_i: steps spent below the entrances of the big leaves at ρ_i before reaching z_i
    std::uint64_t time = 0;
    std::size_t big = 0;
    std::size_t visited = 0;
    std::uint64_t steps = 0;
};

// Exact walk from ρ_0 on a fresh Kesten tree, stopped at z_i = ρ_{i+1+depth}.
DeepTimeSample sample_deep_time(std::shared_ptr<const SurvivalTable> table, double beta, const DeepTimeOptions& options,
                                std::uint64_t seed);

// Whether the walk's backbone projection is the same after ⌊e^{an}⌋ and ⌊e^{bn}⌋ steps.
bool exact_tree_aging(std::shared_ptr<const SurvivalTable> table, double beta, double n, double a, double b,
                      std::uint64_t seed, std::uint64_t step_budget = kDefaultStepBudget);

// Hitting steps of ρ_1..ρ_levels from ρ_0 on a fresh Kesten tree.
std::vector<std::uint64_t> exact_level_hitting(std::shared_ptr<const SurvivalTable> table, double beta, std::size_t levels,
                                               std::uint64_t seed, std::uint64_t step_budget = kDefaultStepBudget);

}  // namespace trapwalk
