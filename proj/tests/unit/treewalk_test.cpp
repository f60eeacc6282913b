#include "doctest.h"

#include <cmath>

#include "oracles.hpp"
#include "trapwalk/limits/statistics.hpp"
#include "trapwalk/treewalk/exact_walk.hpp"
#include "trapwalk/treewalk/oracle.hpp"
#include "trapwalk/treewalk/quenched_mean.hpp"
#include "trapwalk/treewalk/surrogate.hpp"

using namespace trapwalk;
using Vertex = ExplicitTree::Vertex;

namespace {

// Backbone 0..n plus `extra` vertices hung uniformly off vertices other than ρ_n.
struct RandomTree {
    std::vector<long> parents;
    std::size_t n = 0;
};

RandomTree random_tree(std::size_t n, std::size_t extra, Rng& rng)
{
    RandomTree rt;
    rt.n = n;
    rt.parents.push_back(-1);
    for (std::size_t i = 1; i <= n; ++i)
        rt.parents.push_back(static_cast<long>(i - 1));
    for (std::size_t k = 0; k < extra; ++k) {
        long p;
        do
            p = static_cast<long>(uniform01(rng) * static_cast<double>(rt.parents.size()));
        while (p == static_cast<long>(n));
        rt.parents.push_back(p);
    }
    return rt;
}

// Relabelled tree and the new labels of ρ_0..ρ_n.
std::pair<ExplicitTree, std::vector<Vertex>> relabel(const RandomTree& rt)
{
    std::vector<long> order;
    ExplicitTree t = ExplicitTree::from_parents(rt.parents, &order);
    std::vector<Vertex> label(order.size());
    for (std::size_t k = 0; k < order.size(); ++k)
        label[static_cast<std::size_t>(order[k])] = static_cast<Vertex>(k);
    std::vector<Vertex> backbone;
    for (std::size_t i = 0; i <= rt.n; ++i)
        backbone.push_back(label[i]);
    return {std::move(t), backbone};
}

}  // namespace

TEST_CASE("bare backbone crossing time")
{
    std::vector<LogMagnitude> w(3, LogMagnitude::zero());
    QuenchedMean qm = quenched_mean_delta(w, 3.0);
    REQUIRE(qm.exact);
    CHECK(qm.exact->value() == doctest::Approx(41.0 / 9.0).epsilon(1e-12));
    CHECK(oracle::dense_hitting_time({-1, 0, 1, 2}, 3, 3.0) == doctest::Approx(41.0 / 9.0).epsilon(1e-12));

    ExplicitTree path = ExplicitTree::from_parents({-1, 0, 1, 2});
    Rng rng(1);
    double total = 0.0, sq = 0.0;
    const int reps = 40000;
    for (int i = 0; i < reps; ++i) {
        auto r = exact_walk(path, 0, {3}, 3.0, rng);
        REQUIRE(r.stop_vertex == 3);
        total += static_cast<double>(r.steps);
        sq += static_cast<double>(r.steps) * static_cast<double>(r.steps);
    }
    double m = total / reps;
    double se = std::sqrt((sq / reps - m * m) / reps);
    CHECK(std::abs(m - 41.0 / 9.0) < 4.0 * se);
}

TEST_CASE("excursion time into a hanging subtree")
{
    CHECK(sigma_from_weight(LogMagnitude::zero(), false, 2.0).value() == doctest::Approx(1.0));
    CHECK(sigma_from_weight(LogMagnitude::one(), false, 2.0).value() == doctest::Approx(7.0 / 3.0));
    CHECK(sigma_from_weight(LogMagnitude::one(), true, 2.0).value() == doctest::Approx(3.0));

    // ρ_0 - ρ_1 - ρ_2 with one bud at ρ_1; BFS labels put ρ_2 at 2 and the bud at 3.
    // One sojourn: steps at ρ_1 or its bud before leaving along the backbone.
    ExplicitTree t = ExplicitTree::from_parents({-1, 0, 1, 1});
    CHECK(quenched_mean_sigma(t, 1, 2, false, 2.0).value() == doctest::Approx(7.0 / 3.0));
    Rng rng(2);
    double total = 0.0, sq = 0.0;
    const int reps = 40000;
    TreeWalkOptions o;
    o.marked = {1, 3};
    for (int i = 0; i < reps; ++i) {
        auto r = exact_walk(t, 1, {0, 2}, 2.0, rng, o);
        double s = static_cast<double>(r.visits[0] + r.visits[1]);
        total += s;
        sq += s * s;
    }
    double m = total / reps;
    double se = std::sqrt((sq / reps - m * m) / reps);
    CHECK(std::abs(m - 7.0 / 3.0) < 4.0 * se);
}

TEST_CASE("quenched mean matches dense solve on random trees")
{
    Rng rng(3);
    for (int k = 0; k < 10; ++k) {
        std::size_t n = 2 + static_cast<std::size_t>(uniform01(rng) * 8);
        std::size_t extra = static_cast<std::size_t>(uniform01(rng) * (48 - n));
        RandomTree rt = random_tree(n, extra, rng);
        for (double beta : {1.5, 3.0}) {
            auto [tree, backbone] = relabel(rt);
            QuenchedMean qm = quenched_mean_delta(tree, backbone, beta);
            REQUIRE(qm.exact);
            double dense = oracle::dense_hitting_time(rt.parents, static_cast<long>(n), beta);
            CHECK(qm.exact->value() == doctest::Approx(dense).epsilon(1e-9));
            CHECK(qm.lower <= *qm.exact);
            CHECK(*qm.exact <= qm.upper);
        }
    }
}

TEST_CASE("exact walk agrees with the dense solve")
{
    Rng rng(4);
    RandomTree rt = random_tree(4, 12, rng);
    auto [tree, backbone] = relabel(rt);
    const double beta = 2.0;
    double dense = oracle::dense_hitting_time(rt.parents, 4, beta);
    double total = 0.0, sq = 0.0;
    const int reps = 20000;
    for (int i = 0; i < reps; ++i) {
        auto r = exact_walk(tree, backbone[0], {backbone[4]}, beta, rng);
        total += static_cast<double>(r.steps);
        sq += static_cast<double>(r.steps) * static_cast<double>(r.steps);
    }
    double m = total / reps;
    double se = std::sqrt((sq / reps - m * m) / reps);
    CHECK(std::abs(m - dense) < 4.0 * se);
}

TEST_CASE("quenched sandwich for random weights")
{
    Rng rng(5);
    for (int k = 0; k < 100; ++k) {
        std::vector<LogMagnitude> w;
        for (int i = 0; i < 30; ++i)
            w.push_back(uniform01(rng) < 0.3 ? LogMagnitude::zero() : LogMagnitude::from_log(20.0 * uniform01(rng)));
        double beta = 1.1 + 3.0 * uniform01(rng);
        QuenchedMean qm = quenched_mean_delta(w, beta);
        REQUIRE(qm.exact);
        CHECK(qm.lower.log_value() <= qm.exact->log_value() + 1e-12);
        CHECK(qm.exact->log_value() <= qm.upper.log_value() + 1e-12);
    }
}

TEST_CASE("visited set law")
{
    for (std::uint32_t b : {1u, 2u, 3u}) {
        double total = 0.0;
        for (std::uint32_t mask = 0; mask < (1u << b); ++mask)
            total += visited_set_probability(b, static_cast<std::uint32_t>(__builtin_popcount(mask)));
        CHECK(total == doctest::Approx(1.0).epsilon(1e-12));

        std::vector<double> obs(1u << b, 0.0), probs;
        for (std::uint32_t mask = 0; mask < (1u << b); ++mask)
            probs.push_back(visited_set_probability(b, static_cast<std::uint32_t>(__builtin_popcount(mask))));
        Rng rng(6 + b);
        for (int i = 0; i < 40000; ++i) {
            std::uint32_t mask = 0;
            auto v = sample_visited_set(b, rng);
            for (std::size_t k = 0; k < v.size(); ++k) {
                REQUIRE(v[k] < b);
                if (k)
                    REQUIRE(v[k - 1] < v[k]);
                mask |= 1u << v[k];
            }
            obs[mask] += 1.0;
        }
        CHECK(chi_square_test(obs, probs).passes());
    }
    CHECK(sample_visited_set(0, *std::make_unique<Rng>(1)).empty());
}

TEST_CASE("height tails of visited and all leaves")
{
    auto law = make_geometric_law();
    auto t = survival_table(law, 100000);
    for (std::size_t x = 5; x < 200; x += 13)
        CHECK(visited_height_tail(*t, x, 5.0) == doctest::Approx(1.0 / (x + 2.0)).epsilon(1e-12));
    CHECK_THROWS(visited_height_tail(*t, 3, 5.0));

    const std::size_t len = 100000;
    VisitedSpine vs(t, 5.0, 7);
    std::vector<std::size_t> xs{5, 8, 12};
    std::vector<std::size_t> hits(xs.size(), 0), full(xs.size(), 0);
    for (std::size_t i = 0; i < len; ++i) {
        long m = vs.max_visited(i);
        long top = -1;
        for (auto h : vs.spine().heights(i))
            top = std::max<long>(top, h);
        for (std::size_t k = 0; k < xs.size(); ++k) {
            hits[k] += m >= static_cast<long>(xs[k]) ? 1 : 0;
            full[k] += top >= static_cast<long>(xs[k]) ? 1 : 0;
        }
    }
    for (std::size_t k = 0; k < xs.size(); ++k) {
        double p = visited_height_tail(*t, xs[k], 5.0);
        CHECK(std::abs(static_cast<double>(hits[k]) / len - p) < 4.0 * binomial_se(p, len));
        double f = full_height_tail(*t, xs[k]);
        double q = 1.0 / (xs[k] + 1.0);
        CHECK(f == doctest::Approx(1.0 - 1.0 / ((1.0 + q) * (1.0 + q))).epsilon(1e-12));
        CHECK(std::abs(static_cast<double>(full[k]) / len - f) < 4.0 * binomial_se(f, len));
    }
}

TEST_CASE("surrogate hitting path and localization")
{
    auto t = survival_table(make_stable_law(1.5), 100000);
    std::vector<double> grid{0.25, 0.5, 1.0, 2.0};
    auto rec = surrogate_hitting_path(t, 3.0, 200, grid, 9);
    CHECK(rec.path.non_decreasing());
    for (std::size_t k = 1; k < rec.log_hitting.size(); ++k)
        CHECK(rec.log_hitting[k - 1] <= rec.log_hitting[k]);
    CHECK_THROWS(surrogate_hitting_path(t, 3.0, 5, grid, 9));
    auto again = surrogate_hitting_path(t, 3.0, 200, grid, 9);
    CHECK(again.log_hitting == rec.log_hitting);

    VisitedSpine vs(t, critical_height(200.0), 10);
    std::size_t prev = 0;
    for (double u = 0.0; u < 200.0; u += 7.0) {
        std::size_t l = tree_localization_index(vs, u, 3.0);
        CHECK(l >= prev);
        prev = l;
    }
    CHECK(tree_aging_indicator(t, 3.0, 100.0, 1.5, 1.5, 11));
}

TEST_CASE("exact oracle level hitting is ordered")
{
    // a short table caps leaf heights, keeping trap depths moderate
    auto t = survival_table(make_geometric_law(), 30);
    auto h = exact_level_hitting(t, 1.2, 6, 12, 100000000);
    REQUIRE(h.size() == 6);
    for (std::size_t k = 1; k < h.size(); ++k)
        CHECK(h[k - 1] < h[k]);
    DeepTimeOptions o;
    o.critical_height = 3.0;
    auto s = sample_deep_time(t, 1.2, o, 13);
    CHECK(s.visited <= s.big);
    CHECK(s.time <= s.steps);
}
