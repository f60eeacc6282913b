#pragma once

#include <cstdint>
#include <vector>

#include "trapwalk/kestentree/spinal_skeleton.hpp"
#include "trapwalk/limits/cadlag_step.hpp"

namespace trapwalk {

// Deeply visited big leaves: #V uniform on {0..b}, then a uniform subset,
// giving P(V = A) = 1/((1+b) C(b, #A)). Returned sorted.
std::vector<std::uint32_t> sample_visited_set(std::uint32_t b, Rng& rng);
double visited_set_probability(std::uint32_t b, std::uint32_t subset_size);

// q_x^(α-1) L(q_x), the tail of the largest deeply visited leaf height; x >= h_n.
double visited_height_tail(const SurvivalTable& table, std::size_t x, double critical_height);
// P(max_{j<Z~} h(𝒯_ij) >= x) = 1 - f'(1 - q_x)
double full_height_tail(const SurvivalTable& table, std::size_t x);

// Spine plus the largest deeply visited leaf height per backbone vertex
// (-1 when V_i is empty), extended on demand.
class VisitedSpine {
public:
    VisitedSpine(std::shared_ptr<const SurvivalTable> table, double critical_height, std::uint64_t seed);

    long max_visited(std::size_t i);
    SpinalSkeleton& spine() { return spine_; }
    std::size_t length() const { return best_.size(); }

private:
    SpinalSkeleton spine_;
    Rng rng_;
    std::vector<long> best_;
};

enum class Engine { exact, surrogate };

struct TreeHittingRecord {
    Engine engine = Engine::surrogate;
    double beta = 0.0;
    long n = 0;
    // ln Δ_k for k = 0..K
    std::vector<double> log_hitting;
    // t ↦ (α-1) ln₊ Δ_{⌊nt⌋} / (n ln β) on the grid
    CadlagStep path;
};

// ln Δ_k = ln β · max_{i<k} max_{j∈V_i} h(𝒯_ij), 0 without a visited big leaf.
TreeHittingRecord surrogate_hitting_path(std::shared_ptr<const SurvivalTable> table, double beta, long n,
                                         const std::vector<double>& grid, std::uint64_t seed);

struct LocalizationOptions {
    // Divide the threshold by α-1 as well, matching the rescaled hitting statistic.
    bool fold_alpha = false;
};

// l(u) = min{i : max_{j∈V_i} h(𝒯_ij) >= u / ln β}
std::size_t tree_localization_index(VisitedSpine& spine, double u, double beta, const LocalizationOptions& options = {});

bool tree_aging_indicator(std::shared_ptr<const SurvivalTable> table, double beta, double n, double a, double b,
                          std::uint64_t seed, const LocalizationOptions& options = {});

}  // namespace trapwalk
