#include <catch_amalgamated.hpp>

#include <cmath>
#include <limits>

#include "cogmac/specfun.hpp"
#include "oracles.hpp"

using Catch::Matchers::WithinAbs;
using namespace cogmac;

TEST_CASE("q_function at the median and under reflection", "[specfun]")
{
    CHECK(q_function(0.0).value() == 0.5);
    for (double x = -8.0; x <= 8.0; x += 0.37) {
        CHECK_THAT(q_function(x) + q_function(-x), WithinAbs(1.0, 1e-12));
    }
}

TEST_CASE("q_function matches quadrature of the normal density", "[specfun]")
{
    CHECK_THAT(q_function(1.0).value(), WithinAbs(oracle::q_quadrature(1.0), 1e-12));
    CHECK_THAT(q_function(1.0).value(), WithinAbs(0.158655253931, 1e-12));
    for (double x : {-3.0, -0.5, 0.25, 2.0, 4.5}) {
        CHECK_THAT(q_function(x).value(), WithinAbs(oracle::q_quadrature(x), 1e-12));
    }
}

TEST_CASE("q_function is decreasing", "[specfun]")
{
    // Strict while the steps are resolvable next to 1; non-increasing beyond.
    double prev = q_function(-5.0);
    for (int i = 1; i < 10000; ++i) {
        const double x = -5.0 + 13.0 * i / 9999.0;
        const double v = q_function(x);
        REQUIRE(v < prev);
        prev = v;
    }
    prev = 1.0;
    for (double x = -40.0; x <= 40.0; x += 0.01) {
        const double v = q_function(x);
        REQUIRE(v <= prev);
        prev = v;
    }
}

TEST_CASE("q_function rejects non-finite input", "[specfun]")
{
    CHECK_THROWS_AS(q_function(std::numeric_limits<double>::quiet_NaN()), domain_error);
    CHECK_THROWS_AS(q_function(std::numeric_limits<double>::infinity()), domain_error);
    CHECK_THROWS_AS(q_function(-std::numeric_limits<double>::infinity()), domain_error);
}

TEST_CASE("q_inverse examples", "[specfun]")
{
    CHECK(q_inverse(0.5) == 0.0);
    CHECK_THAT(q_inverse(0.158655253931), WithinAbs(1.0, 1e-9));
    const double root = oracle::bisect_decreasing([](double x) { return q_function(x); }, 0.9,
                                                  -10.0, 10.0);
    CHECK_THAT(q_inverse(0.9), WithinAbs(root, 1e-12));
    CHECK_THAT(q_inverse(0.9), WithinAbs(-1.2815515655446004, 1e-12));
}

TEST_CASE("q_inverse round trip on a log grid", "[specfun]")
{
    for (int i = 0; i <= 400; ++i) {
        const double e = -8.0 + 8.0 * i / 400.0;
        for (double p : {std::pow(10.0, e), 1.0 - std::pow(10.0, e)}) {
            if (p <= 1e-8 || p >= 1.0 - 1e-8) {
                continue;
            }
            REQUIRE_THAT(q_function(q_inverse(p)).value(), WithinAbs(p, 1e-10));
        }
    }
}

TEST_CASE("q_inverse rejects arguments outside (0,1)", "[specfun]")
{
    for (double p : {0.0, 1.0, -0.1, 1.5, std::numeric_limits<double>::quiet_NaN()}) {
        CHECK_THROWS_AS(q_inverse(p), domain_error);
    }
}

TEST_CASE("Probability checks its range", "[specfun]")
{
    CHECK(Probability(0.25).value() == 0.25);
    CHECK(Probability(0.25).complement().value() == 0.75);
    CHECK_THROWS_AS(Probability(-1e-12), domain_error);
    CHECK_THROWS_AS(Probability(1.0 + 1e-12), domain_error);
    CHECK_THROWS_AS(Probability(std::numeric_limits<double>::quiet_NaN()), domain_error);
}
