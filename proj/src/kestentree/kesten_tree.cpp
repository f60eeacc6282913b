#include "trapwalk/kestentree/kesten_tree.hpp"

namespace trapwalk {

KestenTree::KestenTree(std::shared_ptr<const SurvivalTable> table, double critical_height, std::uint64_t seed,
                       std::optional<EntranceRule> rule, std::size_t size_cap)
    : spine_(table, critical_height, ~0ULL),
      spine_rng_(derive_seed(seed, 0, StreamTag::spine)),
      leaf_rng_(derive_seed(seed, 0, StreamTag::leaf)),
      rule_(rule),
      tree_(size_cap),
      rules_(table)
{
    ensure(1);
    level_[0] = 0;
    tree_.set_expander([this](ExplicitTree& t, Vertex v) { grow(t, v); });
}

void KestenTree::ensure(std::size_t n)
{
    if (level_.size() < n) {
        level_.resize(n, -1);
        proj_.resize(n, 0);
        pending_region_.resize(n, -1);
        pending_depth_.resize(n, -1);
    }
}

KestenTree::Vertex KestenTree::backbone(std::size_t i)
{
    Vertex v = tree_.root();
    for (std::size_t k = 0; k < i; ++k)
        v = tree_.child(v, tree_.child_count(v) - 1);
    return v;
}

void KestenTree::grow(ExplicitTree& t, Vertex v)
{
    if (level_[v] >= 0) {
        auto i = static_cast<std::size_t>(level_[v]);
        spine_.extend(i + 1, spine_rng_);
        auto heights = spine_.heights(i);
        const auto buds = static_cast<std::uint32_t>(heights.size());
        Vertex first = t.add_children(v, buds + 1);
        ensure(t.size());
        const bool marking = rule_ && rule_->backbone == i;
        for (std::uint32_t j = 0; j < buds; ++j) {
            Vertex b = first + j;
            rules_.assign(b, GrowthKind::exact, heights[j]);
            proj_[b] = static_cast<std::uint32_t>(i);
            if (marking && heights[j] >= spine_.big_from() && heights[j] >= rule_->depth) {
                if (rule_->depth == 0)
                    t.set_region(b, static_cast<std::int32_t>(j));
                else {
                    pending_region_[b] = static_cast<std::int32_t>(j);
                    pending_depth_[b] = static_cast<std::int32_t>(rule_->depth);
                }
            }
        }
        Vertex next = first + buds;
        level_[next] = static_cast<long>(i + 1);
        proj_[next] = static_cast<std::uint32_t>(i + 1);
        return;
    }
    Vertex d = rules_.grow(t, v, leaf_rng_);
    ensure(t.size());
    const std::uint32_t k = t.known_child_count(v);
    for (std::uint32_t c = 0; c < k; ++c)
        proj_[t.known_child(v, c)] = proj_[v];
    if (pending_region_[v] >= 0 && d != ExplicitTree::kNone) {
        if (pending_depth_[v] == 1)
            t.set_region(d, pending_region_[v]);
        else {
            pending_region_[d] = pending_region_[v];
            pending_depth_[d] = pending_depth_[v] - 1;
        }
    }
}

}  // namespace trapwalk
