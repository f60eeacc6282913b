#include "trapwalk/treewalk/oracle.hpp"

#include <cmath>
#include <stdexcept>

namespace trapwalk {

DeepTimeSample sample_deep_time(std::shared_ptr<const SurvivalTable> table, double beta, const DeepTimeOptions& options,
                                std::uint64_t seed)
{
    EntranceRule rule{options.backbone, options.entrance_depth};
    KestenTree kt(std::move(table), options.critical_height, seed, rule);
    auto z = kt.backbone(options.backbone + 1 + options.entrance_depth);
    Rng rng(derive_seed(seed, 0, StreamTag::walk));
    TreeWalkOptions wo;
    wo.step_budget = options.step_budget;
    wo.region_time = true;
    TreeWalkResult r = exact_walk(kt.tree(), kt.tree().root(), {z}, beta, rng, wo);
    DeepTimeSample s;
    s.steps = r.steps;
    for (std::uint32_t h : kt.spine().heights(options.backbone))
        s.big += h >= kt.spine().big_from() && h >= options.entrance_depth ? 1 : 0;
    for (std::size_t j = 0; j < r.region_time.size(); ++j) {
        s.time += r.region_time[j];
        s.visited += r.region_entry[j] != kNeverVisited ? 1 : 0;
    }
    return s;
}

bool exact_tree_aging(std::shared_ptr<const SurvivalTable> table, double beta, double n, double a, double b,
                      std::uint64_t seed, std::uint64_t step_budget)
{
    if (!(a > 0.0 && a <= b))
        throw std::invalid_argument("aging needs 0 < a <= b");
    auto first = static_cast<std::uint64_t>(std::floor(std::exp(a * n)));
    auto second = static_cast<std::uint64_t>(std::floor(std::exp(b * n)));
    if (second > step_budget)
        throw StepBudgetExceeded(step_budget);
    KestenTree kt(std::move(table), critical_height(std::max(n, 2.0)), seed);
    Rng rng(derive_seed(seed, 0, StreamTag::walk));
    TreeWalkOptions wo;
    wo.step_budget = step_budget;
    wo.snapshots = {first};
    if (second > first)
        wo.snapshots.push_back(second);
    TreeWalkResult r = exact_walk(kt.tree(), kt.tree().root(), {}, beta, rng, wo);
    return kt.projection(r.snapshot_positions.front()) == kt.projection(r.snapshot_positions.back());
}

std::vector<std::uint64_t> exact_level_hitting(std::shared_ptr<const SurvivalTable> table, double beta, std::size_t levels,
                                               std::uint64_t seed, std::uint64_t step_budget)
{
    KestenTree kt(std::move(table), 1.0, seed);
    TreeWalkOptions wo;
    wo.step_budget = step_budget;
    for (std::size_t k = 1; k <= levels; ++k)
        wo.marked.push_back(kt.backbone(k));
    Rng rng(derive_seed(seed, 0, StreamTag::walk));
    TreeWalkResult r = exact_walk(kt.tree(), kt.tree().root(), {wo.marked.back()}, beta, rng, wo);
    for (std::size_t k = 1; k < r.first_visit.size(); ++k)
        if (r.first_visit[k - 1] > r.first_visit[k])
            throw std::logic_error("level reached before the level below it");
    return r.first_visit;
}

}  // namespace trapwalk
