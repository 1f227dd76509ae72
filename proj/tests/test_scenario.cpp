#include <catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include <json.hpp>

#include "cogmac/scenario.hpp"

using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;
using namespace cogmac;

namespace {

double to_db(double linear) { return 10.0 * std::log10(linear); }

/// Kolmogorov-Smirnov distance between a sample and Uniform[lo, hi].
double ks_uniform(std::vector<double> xs, double lo, double hi)
{
    std::sort(xs.begin(), xs.end());
    const auto n = static_cast<double>(xs.size());
    double d = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double f = (xs[i] - lo) / (hi - lo);
        d = std::max({d, std::abs(static_cast<double>(i + 1) / n - f),
                      std::abs(f - static_cast<double>(i) / n)});
    }
    return d;
}

} // namespace

TEST_CASE("homogeneous scenario uses range midpoints", "[scenario]")
{
    ScenarioSpec spec;
    spec.n_links = 4;
    const auto cfg = generate(spec);
    REQUIRE(cfg.links.size() == 4);
    for (const auto& link : cfg.links) {
        const auto& s = link.channel(0);
        CHECK_THAT(to_db(s.snr), WithinAbs(-17.5, 1e-12));
        CHECK_THAT(s.target_pd, WithinAbs(0.8, 1e-15));
        CHECK_THAT(s.prob_h0, WithinAbs(0.75, 1e-15));
    }
    CHECK(cfg.homogeneous());
}

TEST_CASE("heterogeneous scenario is reproducible and in range", "[scenario]")
{
    ScenarioSpec spec;
    spec.n_links = 8;
    spec.m_channels = 3;
    spec.homogeneous = false;
    spec.seed = 99;
    const auto a = generate(spec);
    const auto b = generate(spec);
    CHECK(a.links == b.links);
    CHECK(a.num_channels == 3);
    CHECK_FALSE(a.homogeneous());
    for (const auto& link : a.links) {
        REQUIRE(link.channels.size() == 3);
        for (const auto& s : link.channels) {
            CHECK(spec.snr_db_range.contains(to_db(s.snr) + 1e-12));
            CHECK(spec.target_pd_range.contains(s.target_pd));
            CHECK(spec.prob_h0_range.contains(s.prob_h0));
        }
    }
    spec.seed = 100;
    CHECK_FALSE(generate(spec).links == a.links);
}

TEST_CASE("scenario draws are uniform", "[scenario]")
{
    ScenarioSpec spec;
    spec.n_links = 10000;
    spec.homogeneous = false;
    spec.seed = 3;
    const auto cfg = generate(spec);
    std::vector<double> snr, pd, h0;
    for (const auto& link : cfg.links) {
        snr.push_back(to_db(link.channel(0).snr));
        pd.push_back(link.channel(0).target_pd);
        h0.push_back(link.channel(0).prob_h0);
    }
    CHECK(ks_uniform(snr, -20.0, -15.0) < 0.02);
    CHECK(ks_uniform(pd, 0.7, 0.9) < 0.02);
    CHECK(ks_uniform(h0, 0.7, 0.8) < 0.02);
}

TEST_CASE("scenario golden file", "[scenario]")
{
    std::ifstream in(COGMAC_TEST_DATA "/scenario_golden.json");
    REQUIRE(in);
    const auto golden = nlohmann::json::parse(in);
    ScenarioSpec spec;
    spec.n_links = golden.at("n_links").get<std::int64_t>();
    spec.m_channels = golden.at("m_channels").get<std::int64_t>();
    spec.seed = golden.at("seed").get<std::uint64_t>();
    spec.homogeneous = false;
    const auto cfg = generate(spec);
    const auto& links = golden.at("links");
    REQUIRE(links.size() == cfg.links.size());
    for (std::size_t i = 0; i < links.size(); ++i) {
        for (std::size_t j = 0; j < links[i].size(); ++j) {
            const auto& s = cfg.links[i].channels.at(j);
            // pow() may differ in the last bit between C libraries.
            CHECK_THAT(s.snr, WithinRel(links[i][j].at("snr_linear").get<double>(), 1e-14));
            CHECK(s.target_pd == links[i][j].at("target_pd").get<double>());
            CHECK(s.prob_h0 == links[i][j].at("prob_h0").get<double>());
        }
    }
}

TEST_CASE("scenario draws follow the documented stream", "[scenario]")
{
    // mt19937_64 seeded through splitmix64; 53-bit uniforms; SNR, Pd, P(H0) in turn.
    ScenarioSpec spec;
    spec.n_links = 1;
    spec.homogeneous = false;
    spec.seed = 12345;
    std::uint64_t z = spec.seed + 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    std::mt19937_64 engine(z ^ (z >> 31));
    auto u = [&] { return static_cast<double>(engine() >> 11) / 9007199254740992.0; };
    const double snr_db = -20.0 + 5.0 * u();
    const double pd = 0.7 + (0.9 - 0.7) * u();
    const double h0 = 0.7 + (0.8 - 0.7) * u();
    const auto cfg = generate(spec);
    const auto& s = cfg.links.front().channel(0);
    CHECK_THAT(s.snr, WithinRel(std::pow(10.0, snr_db / 10.0), 1e-15));
    CHECK(s.target_pd == pd);
    CHECK(s.prob_h0 == h0);
}

TEST_CASE("scenario spec validation", "[scenario]")
{
    ScenarioSpec spec;
    spec.snr_db_range = {-10.0, -20.0};
    CHECK_THROWS_AS(generate(spec), domain_error);
    spec = {};
    spec.target_pd_range = {0.5, 1.0};
    CHECK_THROWS_AS(generate(spec), domain_error);
    spec = {};
    spec.n_links = 0;
    CHECK_THROWS_AS(generate(spec), domain_error);
    spec = {};
    spec.prob_h0_range = {0.6, 0.6};
    CHECK_NOTHROW(generate(spec));
}
