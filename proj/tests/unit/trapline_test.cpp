#include "doctest.h"

#include <cmath>

#include "oracles.hpp"
#include "trapwalk/limits/statistics.hpp"
#include "trapwalk/trapline/trap_walk.hpp"

using namespace trapwalk;

TEST_CASE("environment is a pure function of seed and site")
{
    TailFunction f = TailFunction::log_power(1.0);
    TrapEnvironment a = generate_environment(f, 50, 100, 9);
    TrapEnvironment b = generate_environment(f, 50, 100, 9);
    for (long x = -50; x <= 100; ++x)
        CHECK(a.log_tau(x) == b.log_tau(x));
    TrapEnvironment c(f, 9);
    CHECK(c.log_tau(-30) == a.log_tau(-30));
    CHECK(c.site_value(77) == a.tau(77));
    TrapEnvironment z = generate_environment(f, 0, 10, 9);
    CHECK(z.left() == 0);
}

TEST_CASE("deep-site frequency")
{
    TailFunction f = TailFunction::log_power(1.0);
    const double n = 1e4;
    LogMagnitude g = critical_depth(f, n);
    TrapEnvironment env = generate_environment(f, 0, 1000000, 17);
    std::size_t deep = 0;
    for (long x = 0; x < 1000000; ++x)
        deep += env.tau(x) > g ? 1 : 0;
    double p = std::log(n) / n;
    CHECK(std::abs(deep / 1e6 - p) < 3.0 * binomial_se(p, 1000000));
}

TEST_CASE("unit traps: mean hitting time")
{
    TailFunction one = TailFunction::table({0.0, 1.0}, {1.0, 0.0});
    const double beta = 3.0;
    const long n = 100;
    double total = 0.0;
    const int reps = 10000;
    for (int i = 0; i < reps; ++i) {
        TrapEnvironment env(one, 1);
        Rng rng(derive_seed(3, i, StreamTag::walk));
        WalkRecord r = run_to_level(env, beta, n, rng);
        total += r.clock.value();
        for (std::size_t k = 1; k < r.hitting.size(); ++k)
            REQUIRE(r.hitting[k - 1] <= r.hitting[k]);
    }
    CHECK(std::abs(total / reps - n * (beta + 1) / (beta - 1)) < 3.0);
}

TEST_CASE("visits to a site are geometric")
{
    TailFunction f = TailFunction::log_power(1.0);
    const double beta = 3.0;
    std::vector<double> counts(12, 0.0);
    const int reps = 10000;
    for (int i = 0; i < reps; ++i) {
        TrapEnvironment env(f, derive_seed(5, i, StreamTag::environment));
        Rng rng(derive_seed(5, i, StreamTag::walk));
        WalkOptions o;
        o.tracked_sites = {5};
        WalkRecord r = run_to_level(env, beta, 60, rng, o);
        std::uint64_t v = r.occupation.at(0).visits;
        REQUIRE(v >= 1);
        counts[std::min<std::uint64_t>(v, 12) - 1] += 1.0;
    }
    // success probability (β-1)/(β+1) = 1/2
    std::vector<double> probs;
    for (int k = 1; k < 12; ++k)
        probs.push_back(std::ldexp(1.0, -k));
    probs.push_back(std::ldexp(1.0, -11));
    CHECK(chi_square_test(counts, probs).passes());
}

TEST_CASE("stored trajectory re-sums to the clock")
{
    TailFunction f = TailFunction::log_power(1.0);
    TrapEnvironment env(f, 77);
    Rng rng(78);
    WalkOptions o;
    o.keep_trajectory = true;
    WalkRecord r = run_to_level(env, 2.0, 300, rng, o);
    LogMagnitude s = LogMagnitude::zero();
    for (std::size_t i = 0; i < r.trajectory_sites.size(); ++i)
        s += env.tau(r.trajectory_sites[i]) * LogMagnitude::from_log(r.trajectory_log_exp[i]);
    CHECK(std::abs(s.log_value() - r.clock.log_value()) < 1e-9);
    CHECK(r.trajectory_sites.size() == r.steps);
}

TEST_CASE("embedded walk speed and monotone coupling")
{
    Rng rng(12);
    const std::uint64_t k = 1000000;
    double y = static_cast<double>(embedded_position(3.0, k, rng));
    double sd = std::sqrt(1.0 - 0.25) / std::sqrt(static_cast<double>(k));
    CHECK(std::abs(y / k - 0.5) < 3.0 * sd);
    for (std::uint64_t steps : {1ULL, 10ULL, 137ULL, 5000ULL}) {
        Rng a(steps), b(steps);
        CHECK(embedded_position(1.5, steps, a) <= embedded_position(2.5, steps, b));
    }
}

TEST_CASE("occupation time law")
{
    TailFunction f = TailFunction::log_power(1.0);
    const double beta = 3.0;
    TrapEnvironment env(f, 404);
    const long site = 3;
    LogMagnitude tau = env.tau(site);
    std::vector<double> direct, compound;
    Rng rng(405);
    for (int i = 0; i < 10000; ++i) {
        WalkOptions o;
        o.tracked_sites = {site};
        WalkRecord r = run_to_level(env, beta, 40, rng, o);
        direct.push_back(r.occupation[0].time.log_value());
        compound.push_back(sample_occupation_time(tau, beta, rng).log_value());
    }
    CHECK(ks_two_sample(direct, compound).passes());
}

TEST_CASE("rescaled path")
{
    TailFunction f = TailFunction::log_power(1.0);
    TrapEnvironment env(f, 2);
    Rng rng(3);
    WalkRecord r = run_to_level(env, 3.0, 2000, rng);
    std::vector<double> coarse{0.25, 0.5, 1.0, 2.0}, fine;
    for (int k = 1; k <= 16; ++k)
        fine.push_back(0.125 * k);
    CadlagStep pc = rescaled_hitting_path(r, f, 1000, coarse);
    CadlagStep pf = rescaled_hitting_path(r, f, 1000, fine);
    CHECK(pc.non_decreasing());
    CHECK(pf.non_decreasing());
    for (double t : coarse)
        CHECK(pc(t) == pf(t));
    CHECK_THROWS(rescaled_hitting_path(r, f, 1000, {3.0}));
}

TEST_CASE("positions, localization and aging")
{
    TailFunction f = TailFunction::log_power(1.0);
    TrapEnvironment env(f, 21);
    Rng rng(22);
    auto pos = position_at_timescale(env, 3.0, {LogMagnitude::zero(), LogMagnitude::from_log(30.0), LogMagnitude::from_log(30.0)}, rng);
    CHECK(pos[0] == 0);
    CHECK(pos[1] == pos[2]);
    long prev = 0;
    for (double u = 10.0; u < 1e6; u *= 3.0) {
        long l = localization_site(env, u);
        CHECK(l >= prev);
        prev = l;
    }
    Rng r2(23);
    CHECK(aging_indicator(env, 3.0, 100.0, 1.5, 1.5, r2));
}

TEST_CASE("diagnostics")
{
    TailFunction f = TailFunction::log_power(1.0);
    const double n = 1e4, T = 0.05;
    for (int i = 0; i < 20; ++i) {
        TrapEnvironment env(f, derive_seed(6, i, StreamTag::environment));
        Rng rng(derive_seed(6, i, StreamTag::walk));
        WalkRecord r = run_to_level(env, 3.0, static_cast<long>(n * T), rng, diagnostics_options(f, n));
        EnvironmentEvents ev = diagnostics(env, r, n, T, 0.5, 0.5);
        // direct scan of the left window
        LogMagnitude g = critical_depth(f, n);
        auto w = static_cast<long>(std::floor(std::pow(std::log(n), 1.5)));
        bool clear = true;
        for (long x = -w; x <= 0; ++x)
            clear = clear && !(env.tau(x) > g);
        CHECK(ev.clear_left == clear);
    }
    TrapEnvironment small(f, 1);
    Rng rng(1);
    WalkRecord r = run_to_level(small, 3.0, 10, rng, diagnostics_options(f, 10.0));
    (void)diagnostics(small, r, 10.0, 1.0, 0.5, 0.5);
}

TEST_CASE("separation of deep traps matches the exact close-pair probability")
{
    TailFunction f = TailFunction::log_power(1.0);
    const double n = 1e4, T = 0.2, kappa = 0.5;
    const auto top = static_cast<long>(std::floor(n * T));
    const double p = std::log(n) / n;
    const double bad = oracle::close_pair_probability(p, static_cast<std::size_t>(top), static_cast<std::size_t>(std::pow(n, kappa)));
    const std::size_t reps = 4000;
    std::size_t hits = 0;
    for (std::size_t i = 0; i < reps; ++i) {
        TrapEnvironment env(f, derive_seed(8, i, StreamTag::environment));
        WalkRecord r;
        r.level = top;
        r.shallow_threshold = critical_depth(f, n);
        hits += diagnostics(env, r, n, T, kappa, 0.5).separated ? 0 : 1;
    }
    CHECK(std::abs(static_cast<double>(hits) / reps - bad) < 4.0 * binomial_se(bad, reps));
}
