#include "trapwalk/treewalk/exact_walk.hpp"

#include <algorithm>
#include <stdexcept>

namespace trapwalk {

TreeWalkResult exact_walk(ExplicitTree& tree, ExplicitTree::Vertex start, const std::vector<ExplicitTree::Vertex>& stop,
                          double beta, Rng& rng, const TreeWalkOptions& options)
{
    using Vertex = ExplicitTree::Vertex;
    if (!(beta > 1.0))
        throw std::invalid_argument("bias beta must exceed 1");
    if (stop.empty() && options.snapshots.empty())
        throw std::invalid_argument("walk needs stop vertices or snapshot times");
    if (!std::is_sorted(options.snapshots.begin(), options.snapshots.end()))
        throw std::invalid_argument("snapshot steps must be increasing");

    const std::size_t known = tree.size();
    std::vector<std::uint8_t> is_stop(known, 0);
    for (Vertex v : stop)
        is_stop.at(v) = 1;
    std::vector<std::int32_t> mark(known, -1);
    for (std::size_t k = 0; k < options.marked.size(); ++k)
        mark.at(options.marked[k]) = static_cast<std::int32_t>(k);

    TreeWalkResult r;
    r.first_visit.assign(options.marked.size(), kNeverVisited);
    r.visits.assign(options.marked.size(), 0);
    std::size_t next_snapshot = 0;

    auto grow_regions = [&r](std::int32_t id) {
        if (static_cast<std::size_t>(id) >= r.region_time.size()) {
            r.region_time.resize(static_cast<std::size_t>(id) + 1, 0);
            r.region_entry.resize(static_cast<std::size_t>(id) + 1, kNeverVisited);
        }
    };

    Vertex v = start;
    for (std::uint64_t m = 0;; ++m) {
        while (next_snapshot < options.snapshots.size() && options.snapshots[next_snapshot] == m) {
            r.snapshot_positions.push_back(v);
            ++next_snapshot;
        }
        if (v < known) {
            if (mark[v] >= 0) {
                auto k = static_cast<std::size_t>(mark[v]);
                if (r.first_visit[k] == kNeverVisited)
                    r.first_visit[k] = m;
                ++r.visits[k];
            }
            if (is_stop[v]) {
                r.stop_vertex = v;
                r.steps = m;
                break;
            }
        }
        if (stop.empty() && next_snapshot == options.snapshots.size()) {
            r.stop_vertex = v;
            r.steps = m;
            break;
        }
        if (m >= options.step_budget)
            throw StepBudgetExceeded(options.step_budget);
        if (options.region_time) {
            std::int32_t id = tree.region(v);
            if (id >= 0) {
                grow_regions(id);
                if (r.region_entry[static_cast<std::size_t>(id)] == kNeverVisited)
                    r.region_entry[static_cast<std::size_t>(id)] = m;
                ++r.region_time[static_cast<std::size_t>(id)];
            }
        }

        const std::uint32_t k = tree.child_count(v);
        const Vertex up = tree.parent(v);
        if (up == ExplicitTree::kNone) {
            if (k == 0)
                throw std::runtime_error("walk started on an isolated root");
            auto c = static_cast<std::uint32_t>(uniform01(rng) * k);
            v = tree.child(v, std::min(c, k - 1));
            continue;
        }
        double x = uniform01(rng) * (1.0 + beta * k);
        if (x < 1.0) {
            v = up;
        } else {
            auto c = static_cast<std::uint32_t>((x - 1.0) / beta);
            v = tree.child(v, std::min(c, k - 1));
        }
    }
    return r;
}

}  // namespace trapwalk
