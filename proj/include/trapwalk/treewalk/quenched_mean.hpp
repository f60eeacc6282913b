#pragma once

#include <optional>
#include <vector>

#include "trapwalk/kestentree/explicit_tree.hpp"
#include "trapwalk/kestentree/spinal_skeleton.hpp"
#include "trapwalk/svt/log_magnitude.hpp"

namespace trapwalk {

// Σ over the subtree of `top` of β^(depth - depth(top)); requires it realized.
LogMagnitude subtree_weight(const ExplicitTree& tree, ExplicitTree::Vertex top, double beta);

// W_i: subtree weights summed over the children of ρ_i other than `skip`.
// With edge conductances β^k the conductance sum of 𝒯_i is β^i W_i.
LogMagnitude vertex_weight(const ExplicitTree& tree, ExplicitTree::Vertex rho, ExplicitTree::Vertex skip, double beta);

// E σ_i = 1 + β^-(i-1)/(1+β) Σ c(x,y), the sum over ordered neighbour pairs of
// 𝒯_i: 1 + 2βW/(1+β) for i >= 1 and 1 + 2W at the root.
LogMagnitude sigma_from_weight(LogMagnitude weight, bool root, double beta);
LogMagnitude quenched_mean_sigma(const ExplicitTree& tree, ExplicitTree::Vertex rho, ExplicitTree::Vertex skip, bool root,
                                 double beta);

struct QuenchedMean {
    LogMagnitude lower = LogMagnitude::zero();
    LogMagnitude upper = LogMagnitude::zero();
    // E_ρ Δ_n; absent when some weight is only a lower bound.
    std::optional<LogMagnitude> exact;
    bool capped = false;
};

// From W_0..W_{n-1}: bounds Σ E σ_i and (β+1)/(β-1) Σ E σ_i, and
// E_ρ Δ_n = Σ_i (1 + 2A_i + 2B_i), A_i = W_i + A_{i-1}/β, B_i = (1 + B_{i-1})/β, B_0 = 0,
// the expected crossing time of each backbone edge.
QuenchedMean quenched_mean_delta(const std::vector<LogMagnitude>& weights, double beta,
                                 const std::vector<bool>& lower_only = {});
// Same for a realized tree whose backbone ρ_0..ρ_n is given.
QuenchedMean quenched_mean_delta(const ExplicitTree& tree, const std::vector<ExplicitTree::Vertex>& backbone, double beta);

// Weights W_i for i < n from leaf heights, with count-level leaf profiles.
// Capped leaves contribute Σ_{g<=h} β^g and flag the vertex.
struct SpineWeights {
    std::vector<LogMagnitude> weights;
    std::vector<bool> lower_only;
    // Vertices whose small leaves were summarized by a subsample.
    std::size_t estimated = 0;
};
SpineWeights spine_weights(const SpinalSkeleton& spine, std::size_t n, double beta, Rng& rng);

struct QuenchedStat {
    double value = 0.0;  // (α-1) ln₊ E Δ_n / (n α ln β)
    QuenchedMean mean;
    std::size_t estimated = 0;
};
QuenchedStat quenched_mean_rescaled_stat(std::shared_ptr<const SurvivalTable> table, double beta, std::size_t n, Rng& rng);

}  // namespace trapwalk
