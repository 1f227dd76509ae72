#include <catch_amalgamated.hpp>

#include <cmath>

#include "cogmac/contention.hpp"
#include "oracles.hpp"

using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;
using namespace cogmac;

TEST_CASE("fixed point with a single contender", "[contention]")
{
    const auto fp = solve_fixed_point({32, 3}, 1);
    CHECK(fp.p == 0.0);
    CHECK(fp.phi == 2.0 / 33.0);
    const auto w1 = solve_fixed_point({1, 3}, 1);
    CHECK(w1.phi == 1.0);
    CHECK(w1.p == 0.0);
}

TEST_CASE("bisection agrees with damped iteration of the textbook form", "[contention]")
{
    for (auto [w, m, n0] : {std::tuple{32, 3, 10}, {16, 5, 20}, {182, 4, 10}, {1024, 0, 30},
                            {8, 2, 5}}) {
        const auto fp = solve_fixed_point({w, m}, n0);
        const auto [phi, p] = oracle::damped_fixed_point(w, m, n0);
        CHECK_THAT(fp.phi, WithinAbs(phi, 1e-10));
        CHECK_THAT(fp.p, WithinAbs(p, 1e-10));
        CHECK(fp.residual < 1e-12);
    }
}

TEST_CASE("fixed point residual against both equations", "[contention]")
{
    for (std::int64_t n0 = 2; n0 <= 30; n0 += 7) {
        const auto fp = solve_fixed_point({32, 3}, n0);
        CHECK(std::abs(fp.p - (1.0 - std::pow(1.0 - fp.phi, n0 - 1))) < 1e-12);
        CHECK(std::abs(fp.phi - bianchi_phi(fp.p, 32, 3)) < 1e-12);
    }
}

TEST_CASE("phi form has no singularity at p = 1/2", "[contention]")
{
    CHECK_THAT(bianchi_phi(0.5, 32, 3), WithinRel(2.0 / (33.0 + 32.0 * 0.5 * 3.0), 1e-15));
    CHECK_THAT(bianchi_phi(0.3, 32, 3), WithinRel(oracle::phi_textbook(0.3, 32, 3), 1e-13));
    CHECK(std::isfinite(bianchi_phi(0.5, 1024, 5)));
}

TEST_CASE("phi decreases in W", "[contention]")
{
    for (double p : {0.0, 0.1, 0.5, 0.9}) {
        for (std::int64_t w = 1; w < 1024; w = w * 2 + 1) {
            CHECK(bianchi_phi(p, w + 1, 3) < bianchi_phi(p, w, 3));
        }
    }
}

TEST_CASE("fixed point input validation", "[contention]")
{
    CHECK_THROWS_AS(solve_fixed_point({32, 3}, 0), domain_error);
    CHECK_THROWS_AS(solve_fixed_point({0, 3}, 2), domain_error);
    CHECK_THROWS_AS(solve_fixed_point({32, -1}, 2), domain_error);
}

TEST_CASE("slot durations", "[contention]")
{
    MacTiming bare{};
    bare.sigma_s = bare.sifs_s = bare.difs_s = bare.prop_delay_s = 0.0;
    bare.phy_header_bits = bare.mac_header_bits = bare.ack_bits = bare.rts_bits = bare.cts_bits = 0;
    bare.payload_bits = 1e6;
    bare.bitrate_bps = 1e6;
    const auto d = slot_durations(bare, AccessMode::basic);
    CHECK(d.t_success_s == 1.0);
    CHECK(d.t_collision_s == 1.0);

    MacTiming t = bianchi_r3_defaults();
    const auto basic = slot_durations(t, AccessMode::basic);
    // H = 400 us, PS = 8184 us, ACK = 240 us.
    CHECK_THAT(basic.t_success_s, WithinAbs(400e-6 + 8184e-6 + 28e-6 + 2e-6 + 240e-6 + 128e-6, 1e-15));
    CHECK_THAT(basic.t_collision_s, WithinAbs(400e-6 + 8184e-6 + 128e-6 + 1e-6, 1e-15));
    const auto rts = slot_durations(t, AccessMode::rts_cts);
    CHECK_THAT(rts.t_success_s,
               WithinAbs(400e-6 + 8184e-6 + 3 * 28e-6 + 2e-6 + 288e-6 + 240e-6 + 240e-6 + 128e-6, 1e-15));
    CHECK_THAT(rts.t_collision_s, WithinAbs(400e-6 + 128e-6 + 288e-6 + 1e-6, 1e-15));

    t.rts_bits = t.cts_bits = 0;
    t.sifs_s = 0.0;
    CHECK_THAT(slot_durations(t, AccessMode::rts_cts).t_success_s,
               WithinAbs(slot_durations(t, AccessMode::basic).t_success_s, 1e-15));
}

TEST_CASE("timing validation", "[contention]")
{
    MacTiming t;
    t.bitrate_bps = 0.0;
    CHECK_THROWS_AS(t.validate(), domain_error);
    t = MacTiming{};
    t.payload_bits = 0.0;
    CHECK_THROWS_AS(t.validate(), domain_error);
    t = MacTiming{};
    t.sifs_s = -1e-6;
    CHECK_THROWS_AS(t.validate(), domain_error);
    CHECK_NOTHROW(MacTiming{}.validate());
}

TEST_CASE("transmission probabilities", "[contention]")
{
    CHECK(transmission_probabilities(0.3, 1).p_success == 1.0);
    const auto two = transmission_probabilities(0.5, 2);
    CHECK_THAT(two.p_tx, WithinAbs(0.75, 1e-15));
    // Outcomes of two fair coins: exactly one transmits in 2 of the 3 non-empty outcomes.
    CHECK_THAT(two.p_success, WithinAbs(2.0 / 3.0, 1e-15));
    CHECK(transmission_probabilities(1.0 - 1e-9, 2).p_success < 1e-8);
    const auto none = transmission_probabilities(0.0, 5);
    CHECK(none.p_tx == 0.0);
    CHECK(none.p_success == 0.0);
    CHECK_THROWS_AS(transmission_probabilities(1.5, 2), domain_error);
    CHECK_THROWS_AS(transmission_probabilities(0.5, 0), domain_error);
}

TEST_CASE("mean slot duration", "[contention]")
{
    const SlotDurations d{1e-3, 0.9e-3};
    CHECK(mean_slot_duration(0.0, 0.5, 20e-6, d) == 20e-6);
    CHECK(mean_slot_duration(1.0, 1.0, 20e-6, d) == 1e-3);
    CHECK_THAT(mean_slot_duration(0.75, 2.0 / 3.0, 20e-6, d), WithinAbs(7.3e-4, 1e-15));
    CHECK_THROWS_AS(mean_slot_duration(1.2, 0.5, MacTiming{}, AccessMode::basic), domain_error);
}

TEST_CASE("conditional throughput", "[contention]")
{
    const MacTiming t = bianchi_r3_defaults();
    const double ts = slot_durations(t, AccessMode::basic).t_success_s;
    // Less than one mean slot left after sensing.
    const auto st = contention_state({32, 3}, 4, t, AccessMode::basic);
    CHECK(conditional_throughput(0.1 - 0.5 * st.mean_slot_s, 0.1, {32, 3}, 4, t, AccessMode::basic) == 0.0);
    // One contender with W = 1 transmits in every slot.
    const double v = conditional_throughput(1e-3, 0.1, {1, 3}, 1, t, AccessMode::basic);
    CHECK_THAT(v, WithinAbs(std::floor((0.1 - 1e-3) / ts) * t.payload_s() / 0.1, 1e-15));

    CHECK_THROWS_AS(conditional_throughput(0.1, 0.1, {32, 3}, 4, t, AccessMode::basic), domain_error);
    CHECK_THROWS_AS(conditional_throughput(0.0, 0.1, {32, 3}, 4, t, AccessMode::basic), domain_error);
}

TEST_CASE("floored throughput is bounded by the fluid one", "[contention]")
{
    const MacTiming t = bianchi_r3_defaults();
    for (std::int64_t n0 : {1, 3, 15}) {
        const auto s = contention_state({64, 4}, n0, t, AccessMode::rts_cts);
        const double one_slot = s.tx.p_success * s.tx.p_tx * t.payload_s() / 0.1;
        for (double tau = 1e-5; tau < 0.1; tau += 7.3e-3) {
            const double fl = conditional_throughput(s, tau, 0.1, t.payload_s(), SlotCount::floored);
            const double fx = conditional_throughput(s, tau, 0.1, t.payload_s(), SlotCount::fluid);
            CHECK(fl >= 0.0);
            CHECK(fl <= fx);
            CHECK(fx - fl <= one_slot + 1e-15);
            // Payload airtime cannot exceed the data phase.
            CHECK(fl <= (0.1 - tau) / 0.1);
        }
    }
}
