#include "doctest.h"

#include <bitset>
#include <cstdlib>
#include <set>
#include <sstream>

#include "trapwalk/cli/config.hpp"
#include "trapwalk/cli/runner.hpp"
#include "trapwalk/random.hpp"

using namespace trapwalk;
using namespace trapwalk::cli;

TEST_CASE("seed derivation")
{
    std::set<std::uint64_t> seen;
    for (std::uint64_t m = 0; m < 10; ++m)
        for (std::uint64_t i = 0; i < 1000; ++i)
            for (std::uint64_t t = 1; t <= 7; ++t)
                seen.insert(derive_seed(m, i, t));
    CHECK(seen.size() == 70000);

    // flipping one input bit flips about half the output bits
    double total = 0.0;
    int cases = 0;
    for (std::uint64_t i = 0; i < 100; ++i)
        for (int bit = 0; bit < 64; ++bit) {
            std::uint64_t a = derive_seed(42, i, StreamTag::walk);
            std::uint64_t b = derive_seed(42, i ^ (1ULL << bit), StreamTag::walk);
            total += static_cast<double>(std::bitset<64>(a ^ b).count());
            ++cases;
        }
    CHECK(std::abs(total / cases - 32.0) < 6.0);
}

TEST_CASE("config validation")
{
    ExperimentConfig c;
    c.command = "trap-hitting";
    c.set("beta", "1");
    c.apply_defaults();
    try {
        c.validate();
        FAIL("beta = 1 accepted");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("beta") != std::string::npos);
    }
    ExperimentConfig d;
    d.command = "trap-hitting";
    CHECK_THROWS_AS(d.set("beta", "abc"), ConfigError);
    CHECK_THROWS_AS(d.set("nonsense", "1"), ConfigError);
    d.apply_defaults();
    CHECK(d.n == 1e4);
    CHECK_NOTHROW(d.validate());
    CHECK(d.to_json()["beta"] == 3.0);
}

TEST_CASE("results do not depend on worker count")
{
    ExperimentConfig c;
    c.command = "tree-aging";
    c.set("reps", "200");
    c.set("seed", "5");
    c.set("n", "60");
    c.apply_defaults();
    c.validate();
    c.workers = 1;
    Outcome one = execute(c);
    c.workers = 4;
    Outcome four = execute(c);
    Outcome again = execute(c);
    CHECK(one.rows == four.rows);
    CHECK(four.rows == again.rows);
    REQUIRE(!one.tests.empty());
    CHECK(one.tests[0].statistic == four.tests[0].statistic);
}

TEST_CASE("number formatting round-trips")
{
    for (double x : {0.1, 1.0 / 3.0, 1e-300, 12345.678, 2.0})
        CHECK(std::strtod(format_number(x).c_str(), nullptr) == x);
}
