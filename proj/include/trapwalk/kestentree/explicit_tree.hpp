#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <vector>

#include "trapwalk/kestentree/offspring_law.hpp"
#include "trapwalk/svt/log_magnitude.hpp"

namespace trapwalk {

class TreeSizeExceeded : public std::runtime_error {
public:
    explicit TreeSizeExceeded(std::size_t cap);
};

constexpr std::size_t kDefaultTreeSizeCap = 10'000'000;

// Rooted ordered tree whose children are stored contiguously. Vertices may be
// left unexpanded; an expander callback then creates their children on first
// access, which lets huge conditioned trees exist only where a walk goes.
class ExplicitTree {
public:
    using Vertex = std::uint32_t;
    static constexpr Vertex kNone = 0xffffffffu;
    using Expander = std::function<void(ExplicitTree&, Vertex)>;

    explicit ExplicitTree(std::size_t size_cap = kDefaultTreeSizeCap);

    // parents[0] must be -1; vertices are relabelled in breadth-first order and
    // the returned tree's vertex k corresponds to order[k] when `order` is given.
    static ExplicitTree from_parents(const std::vector<long>& parents, std::vector<long>* order = nullptr);

    std::size_t size() const { return parent_.size(); }
    Vertex root() const { return 0; }
    Vertex parent(Vertex v) const { return parent_[v]; }
    int depth(Vertex v) const { return depth_[v]; }
    std::int32_t region(Vertex v) const { return region_[v]; }
    void set_region(Vertex v, std::int32_t r) { region_[v] = r; }
    bool expanded(Vertex v) const { return expanded_[v] != 0; }

    std::uint32_t child_count(Vertex v)
    {
        if (!expanded_[v])
            expand(v);
        return count_[v];
    }
    Vertex child(Vertex v, std::uint32_t k)
    {
        if (!expanded_[v])
            expand(v);
        return first_[v] + k;
    }
    // Read-only access for fully realized trees.
    std::uint32_t known_child_count(Vertex v) const { return count_[v]; }
    Vertex known_child(Vertex v, std::uint32_t k) const { return first_[v] + k; }

    // Creates `count` children of v (inheriting its region) and returns the first.
    Vertex add_children(Vertex v, std::uint32_t count);
    void set_expander(Expander e) { expander_ = std::move(e); }
    void expand(Vertex v);
    // Expands everything reachable; throws TreeSizeExceeded past the cap.
    void expand_all();

    // Max depth over realized vertices.
    int height() const;
    std::vector<long> parents() const;
    // Vertex counts per depth; requires a fully expanded tree.
    std::vector<double> generation_sizes() const;
    void write_parent_csv(std::ostream& out) const;

private:
    std::size_t cap_;
    std::vector<Vertex> parent_;
    std::vector<Vertex> first_;
    std::vector<std::uint32_t> count_;
    std::vector<std::int32_t> depth_;
    std::vector<std::int32_t> region_;
    std::vector<std::uint8_t> expanded_;
    Expander expander_;
};

// Vertex types for height-conditioned growth.
enum class GrowthKind : std::uint8_t { free, exact, below };

// (ξ, ζ) for a vertex of exact height m >= 1: ζ children, the ξ-th of which
// has height m-1, those before it height < m-1 and those after it height < m.
struct GkPair {
    std::uint64_t xi = 1;
    std::uint64_t zeta = 1;
};
GkPair sample_gk_pair(const SurvivalTable& table, std::size_t m, Rng& rng);
// c_{m-1} p_k (1-q_{m-1})^{j-1} (1-q_m)^{k-j}
double gk_pmf(const SurvivalTable& table, std::size_t m, std::uint64_t j, std::uint64_t k);

// Grows children by type. Holds the per-vertex type arrays for one tree.
class GrowthRules {
public:
    explicit GrowthRules(std::shared_ptr<const SurvivalTable> table) : table_(std::move(table)) {}

    void assign(ExplicitTree::Vertex v, GrowthKind kind, std::uint32_t param);
    GrowthKind kind(ExplicitTree::Vertex v) const { return kind_[v]; }
    std::uint32_t param(ExplicitTree::Vertex v) const { return param_[v]; }
    // Children of a typed vertex; returns the distinguished child for exact kinds.
    ExplicitTree::Vertex grow(ExplicitTree& tree, ExplicitTree::Vertex v, Rng& rng);
    const SurvivalTable& table() const { return *table_; }

private:
    void ensure(std::size_t n);

    std::shared_ptr<const SurvivalTable> table_;
    std::vector<GrowthKind> kind_;
    std::vector<std::uint32_t> param_;
};

struct RealizedLeaf {
    ExplicitTree tree;
    bool overflow = false;
};

// Galton-Watson leaf, either unconditioned or of exact height.
RealizedLeaf realize_leaf(std::shared_ptr<const SurvivalTable> table, std::optional<std::size_t> height, Rng& rng,
                          std::size_t size_cap = kDefaultTreeSizeCap);

// Generation sizes Z_0..Z_h of a leaf of exact height h, grown at the level of
// counts: strictly-lower and weakly-lower sibling groups each evolve as sums of
// tilted offspring numbers.
std::vector<double> leaf_generation_sizes(const SurvivalTable& table, std::size_t height, Rng& rng);

// Σ_g β^g Z_g
LogMagnitude weighted_generation_sum(const std::vector<double>& sizes, double beta);

}  // namespace trapwalk
