#include "doctest.h"

#include <cmath>

#include "trapwalk/limits/kasahara.hpp"
#include "trapwalk/limits/skorohod.hpp"
#include "trapwalk/limits/statistics.hpp"

using namespace trapwalk;

namespace {

CadlagStep random_step(Rng& rng, double horizon)
{
    std::size_t k = static_cast<std::size_t>(uniform01(rng) * 5);
    std::vector<double> t, v;
    double last = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        last += (horizon - last) * (0.1 + 0.5 * uniform01(rng));
        t.push_back(last);
        v.push_back(std::floor(uniform01(rng) * 4.0));
    }
    return CadlagStep(std::floor(uniform01(rng) * 4.0), t, v, horizon);
}

}  // namespace

TEST_CASE("J1 examples")
{
    CadlagStep f(0.0, {0.5}, {1.0}, 1.0);
    CHECK(j1_distance(f, f) == 0.0);
    CadlagStep g(0.0, {0.6}, {1.0}, 1.0);
    CHECK(j1_distance(f, g) == doctest::Approx(0.1).epsilon(1e-12));
    CHECK(j1_distance(f, CadlagStep::constant(0.0, 1.0)) == doctest::Approx(1.0));
    // two small jumps cannot merge into one under J1
    CadlagStep two(0.0, {0.5, 0.5001}, {0.5, 1.0}, 1.0);
    CHECK(j1_distance(two, f) == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(m1_distance(two, f, 2000) < 0.01);
    CHECK_THROWS(j1_distance(f, CadlagStep(0.0, {0.5}, {1.0}, 2.0)));
}

TEST_CASE("metric properties")
{
    Rng rng(1);
    for (int k = 0; k < 200; ++k) {
        CadlagStep f = random_step(rng, 1.0), g = random_step(rng, 1.0), h = random_step(rng, 1.0);
        double fg = j1_distance(f, g);
        CHECK(fg >= 0.0);
        CHECK(fg == doctest::Approx(j1_distance(g, f)).epsilon(1e-12));
        CHECK(fg <= j1_distance(f, h) + j1_distance(h, g) + 1e-12);
        CHECK(j1_distance(f, f) == 0.0);
        double m = m1_distance(f, g, 256);
        CHECK(m <= fg + m1_discretization(f, g, 256) + 1e-12);
        CHECK(m1_distance(f, g, 512) <= m + 1e-12);
    }
}

TEST_CASE("step construction")
{
    CadlagStep s = step_from_grid(0.0, {1.0, 2.0, 3.0}, {1.0, 1.0, 4.0}, 3.0);
    CHECK(s(0.5) == 0.0);
    CHECK(s(1.0) == 1.0);
    CHECK(s(2.5) == 1.0);
    CHECK(s(3.0) == 4.0);
    CHECK(s.non_decreasing());
    CHECK(!CadlagStep(2.0, {1.0}, {1.0}, 2.0).non_decreasing());
}

TEST_CASE("goodness-of-fit helpers")
{
    Rng rng(2);
    std::vector<double> u;
    for (int i = 0; i < 5000; ++i)
        u.push_back(uniform01(rng));
    CHECK(ks_test(u, [](double x) { return std::clamp(x, 0.0, 1.0); }).passes());
    // skewed samples must be rejected at moderate size
    std::vector<double> sq;
    for (double x : u)
        sq.push_back(x * x);
    CHECK(!ks_test(sq, [](double x) { return std::clamp(x, 0.0, 1.0); }).passes());
    std::vector<double> small(u.begin(), u.begin() + 10);
    CHECK_THROWS(ks_test(small, [](double x) { return std::clamp(x, 0.0, 1.0); }));
    CHECK(dkw_bound(1000, 0.01) == doctest::Approx(std::sqrt(std::log(2.0 / 0.01) / 2000.0)));

    // a fair die, then a loaded one
    std::vector<double> p(6, 1.0 / 6.0), fair(6, 0.0), loaded(6, 0.0);
    for (int i = 0; i < 6000; ++i) {
        fair[static_cast<std::size_t>(uniform01(rng) * 6)] += 1.0;
        double x = uniform01(rng);
        loaded[static_cast<std::size_t>(x * x * 6)] += 1.0;
    }
    CHECK(chi_square_test(fair, p).passes());
    CHECK(!chi_square_test(loaded, p).passes());
    CHECK(median({3.0, 1.0, 2.0}) == 2.0);
}

TEST_CASE("tail comparison condition")
{
    const double eps = 0.1;
    TailFunction ref = TailFunction::log_power(1.0);
    TriangularArraySpec same = iid_array(ref);
    EpcondReport r = check_epcond(same, 1e4, 100);
    CHECK(!r.degenerate);
    CHECK(r.deviation == doctest::Approx(0.0));

    TriangularArraySpec off = same;
    off.row = [ref, eps](double) { return TailFunction::scaled(ref, 1.0 + eps / 2.0); };
    EpcondReport s = check_epcond(off, 1e4, 100);
    CHECK(s.passes(eps));
    CHECK(!s.passes(eps / 4.0));
    CHECK_THROWS(check_epcond(same, 1e4, 5));

    TriangularArraySpec bad = same;
    bad.h2 = [](double n) { return n; };
    CHECK(check_epcond(bad, 1e4, 100).degenerate);
}

TEST_CASE("rescaled sums are monotone")
{
    Rng rng(3);
    TriangularArraySpec spec = iid_array(TailFunction::log_power(1.0));
    std::vector<double> grid{0.1, 0.5, 1.0, 1.5};
    for (int k = 0; k < 20; ++k)
        CHECK(rescaled_sum_path(spec, 1000, grid, rng).non_decreasing());
}
