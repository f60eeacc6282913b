#pragma once

#include <cstdint>
#include <vector>

#include "trapwalk/kestentree/explicit_tree.hpp"
#include "trapwalk/trapline/trap_walk.hpp"

namespace trapwalk {

constexpr std::uint64_t kNeverVisited = ~0ULL;

struct TreeWalkOptions {
    std::uint64_t step_budget = kDefaultStepBudget;
    // First visit times and visit counts are reported for these.
    std::vector<ExplicitTree::Vertex> marked;
    // Increasing step indices at which the position is recorded.
    std::vector<std::uint64_t> snapshots;
    // Time spent in each tagged region before stopping.
    bool region_time = false;
};

struct TreeWalkResult {
    ExplicitTree::Vertex stop_vertex = ExplicitTree::kNone;
    std::uint64_t steps = 0;
    std::vector<std::uint64_t> first_visit;
    std::vector<std::uint64_t> visits;
    std::vector<ExplicitTree::Vertex> snapshot_positions;
    std::vector<std::uint64_t> region_time;
    std::vector<std::uint64_t> region_entry;
};

// Biased walk with conductance β^k on edges between generations k and k+1:
// from a non-root vertex with k children the parent is chosen with
// probability 1/(1+kβ), each child with β/(1+kβ); the root picks a child
// uniformly. Runs until a stop vertex is visited, or the last snapshot when
// there are none. Exceeding the budget throws StepBudgetExceeded.
TreeWalkResult exact_walk(ExplicitTree& tree, ExplicitTree::Vertex start, const std::vector<ExplicitTree::Vertex>& stop,
                          double beta, Rng& rng, const TreeWalkOptions& options = {});

}  // namespace trapwalk
