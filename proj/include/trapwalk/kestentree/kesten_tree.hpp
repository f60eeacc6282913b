#pragma once

#include <cstdint>
#include <optional>

#include "trapwalk/kestentree/explicit_tree.hpp"
#include "trapwalk/kestentree/spinal_skeleton.hpp"

namespace trapwalk {

// Big leaves at backbone vertex `backbone` get their subtree below the
// entrance vertex x_ij (the deepest-path vertex at leaf depth `depth`) tagged
// with region j.
struct EntranceRule {
    std::size_t backbone = 0;
    std::uint32_t depth = 0;
};

// Kesten's tree realized on demand: backbone vertices draw their buds from the
// spine, leaves grow with their exact heights as the walk enters them.
class KestenTree {
public:
    using Vertex = ExplicitTree::Vertex;

    KestenTree(std::shared_ptr<const SurvivalTable> table, double critical_height, std::uint64_t seed,
               std::optional<EntranceRule> rule = std::nullopt, std::size_t size_cap = kDefaultTreeSizeCap);
    KestenTree(const KestenTree&) = delete;
    KestenTree& operator=(const KestenTree&) = delete;

    ExplicitTree& tree() { return tree_; }
    SpinalSkeleton& spine() { return spine_; }
    Vertex backbone(std::size_t i);
    bool on_backbone(Vertex v) const { return v < level_.size() && level_[v] >= 0; }
    // Backbone index of the closest backbone ancestor.
    std::size_t projection(Vertex v) const { return proj_[v]; }

private:
    void grow(ExplicitTree& t, Vertex v);
    void ensure(std::size_t n);

    SpinalSkeleton spine_;
    Rng spine_rng_;
    Rng leaf_rng_;
    std::optional<EntranceRule> rule_;
    ExplicitTree tree_;
    GrowthRules rules_;
    std::vector<long> level_;
    std::vector<std::uint32_t> proj_;
    std::vector<std::int32_t> pending_region_;
    std::vector<std::int32_t> pending_depth_;
};

}  // namespace trapwalk
