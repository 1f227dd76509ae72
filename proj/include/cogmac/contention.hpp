#pragma once

// Bianchi saturation model of the contention phase and the conditional
// normalized throughput of one cycle.

#include <cmath>
#include <cstdint>
#include <string>

#include "cogmac/error.hpp"
#include "cogmac/specfun.hpp"

namespace cogmac {

enum class AccessMode { basic, rts_cts };

inline const char* to_string(AccessMode mode)
{
    return mode == AccessMode::basic ? "basic" : "rts_cts";
}

/// Slot and frame timing. Frame sizes are in bits (control frames include
/// their PHY header), durations in seconds.
struct MacTiming {
    double sigma_s = 20e-6;
    double sifs_s = 28e-6;
    double difs_s = 128e-6;
    double prop_delay_s = 1e-6;
    double phy_header_bits = 128;
    double mac_header_bits = 272;
    double payload_bits = 8184;
    double ack_bits = 112 + 128;
    double rts_bits = 160 + 128;
    double cts_bits = 112 + 128;
    double bitrate_bps = 1e6;

    double seconds(double bits) const { return bits / bitrate_bps; }
    double header_s() const { return seconds(phy_header_bits + mac_header_bits); }
    double payload_s() const { return seconds(payload_bits); }

    void validate() const
    {
        for (double d : {sigma_s, sifs_s, difs_s, prop_delay_s, phy_header_bits, mac_header_bits,
                         ack_bits, rts_bits, cts_bits}) {
            if (!(d >= 0.0) || !std::isfinite(d)) {
                throw domain_error("timing: durations and frame sizes must be finite and >= 0");
            }
        }
        if (!(bitrate_bps > 0.0)) {
            throw domain_error("timing: bitrate must be positive");
        }
        if (!(payload_bits > 0.0)) {
            throw domain_error("timing: payload must be positive");
        }
    }

    friend bool operator==(const MacTiming&, const MacTiming&) = default;
};

/// 802.11 DSSS constants at 1 Mbps with the 20 us mini-slot
/// used by the cognitive MAC experiments. Profile key "bianchi-r3-defaults".
inline MacTiming bianchi_r3_defaults() { return MacTiming{}; }

struct BackoffParams {
    std::int64_t w_min = 32;
    std::int64_t max_stage = 3;

    void validate() const
    {
        if (w_min < 1) {
            throw domain_error("backoff: minimum contention window must be >= 1");
        }
        if (max_stage < 0 || max_stage > 30) {
            throw domain_error("backoff: maximum backoff stage must lie in [0,30]");
        }
    }

    friend bool operator==(const BackoffParams&, const BackoffParams&) = default;
};

struct FixedPoint {
    double phi = 0.0; ///< transmission probability in a generic slot
    double p = 0.0;   ///< conditional collision probability
    int iterations = 0;
    double residual = 0.0;
};

/// phi as a function of the collision probability p.
///
/// Uses (1 - (2p)^m) / (1 - 2p) = sum_{i<m} (2p)^i, which removes the
/// removable singularity at p = 1/2 from the textbook form.
inline double bianchi_phi(double p, std::int64_t w, std::int64_t m)
{
    double geometric = 0.0;
    double term = 1.0;
    for (std::int64_t i = 0; i < m; ++i) {
        geometric += term;
        term *= 2.0 * p;
    }
    const auto wd = static_cast<double>(w);
    return 2.0 / ((wd + 1.0) + wd * p * geometric);
}

inline double collision_probability(double phi, std::int64_t n0)
{
    return -std::expm1(static_cast<double>(n0 - 1) * std::log1p(-phi));
}

/// Solves the coupled phi(p), p(phi) system for n0 contenders by bisection
/// on p in [0,1]. The residual p - p(phi(p)) is increasing in p, so the
/// bracket always converges.
inline FixedPoint solve_fixed_point(const BackoffParams& backoff, std::int64_t n0,
                                    double tolerance = 1e-12)
{
    backoff.validate();
    if (n0 < 1) {
        throw domain_error("solve_fixed_point: need at least one contender");
    }
    if (n0 == 1) {
        return {bianchi_phi(0.0, backoff.w_min, backoff.max_stage), 0.0, 0, 0.0};
    }

    auto residual = [&](double p) {
        return p - collision_probability(bianchi_phi(p, backoff.w_min, backoff.max_stage), n0);
    };

    constexpr int max_iterations = 200;
    double lo = 0.0;
    double hi = 1.0;
    int it = 0;
    while (it < max_iterations && hi - lo > 0.0) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) {
            break;
        }
        (residual(mid) < 0.0 ? lo : hi) = mid;
        ++it;
    }
    const double r_lo = std::abs(residual(lo));
    const double r_hi = std::abs(residual(hi));
    const double p = r_lo <= r_hi ? lo : hi;
    const double phi = bianchi_phi(p, backoff.w_min, backoff.max_stage);
    const double res = std::abs(p - collision_probability(phi, n0));
    if (res > tolerance) {
        throw solver_error("solve_fixed_point: no convergence for n0=" + std::to_string(n0), res);
    }
    return {phi, p, it, res};
}

struct SlotDurations {
    double t_success_s = 0.0;
    double t_collision_s = 0.0;
};

inline SlotDurations slot_durations(const MacTiming& t, AccessMode mode)
{
    const double h = t.header_s();
    const double ps = t.payload_s();
    const double ack = t.seconds(t.ack_bits);
    if (mode == AccessMode::basic) {
        return {h + ps + t.sifs_s + 2.0 * t.prop_delay_s + ack + t.difs_s,
                h + ps + t.difs_s + t.prop_delay_s};
    }
    const double rts = t.seconds(t.rts_bits);
    const double cts = t.seconds(t.cts_bits);
    return {h + ps + 3.0 * t.sifs_s + 2.0 * t.prop_delay_s + rts + cts + ack + t.difs_s,
            h + t.difs_s + rts + t.prop_delay_s};
}

struct TransmissionProbabilities {
    double p_tx = 0.0;      ///< at least one contender transmits
    double p_success = 0.0; ///< exactly one transmits, given at least one does
};

/// With phi = 0 nobody transmits; p_success is then defined as 0.
inline TransmissionProbabilities transmission_probabilities(double phi, std::int64_t n0)
{
    if (!(phi >= 0.0 && phi <= 1.0)) {
        throw domain_error("transmission_probabilities: phi must lie in [0,1]");
    }
    if (n0 < 1) {
        throw domain_error("transmission_probabilities: need at least one contender");
    }
    if (phi == 0.0) {
        return {0.0, 0.0};
    }
    const auto n = static_cast<double>(n0);
    const double p_tx = -std::expm1(n * std::log1p(-phi));
    if (n0 == 1) {
        return {p_tx, 1.0};
    }
    const double p_success = n * phi * std::exp((n - 1.0) * std::log1p(-phi)) / p_tx;
    return {p_tx, p_success};
}

inline double mean_slot_duration(double p_tx, double p_success, double sigma_s,
                                 const SlotDurations& d)
{
    return (1.0 - p_tx) * sigma_s + p_tx * p_success * d.t_success_s +
           p_tx * (1.0 - p_success) * d.t_collision_s;
}

inline double mean_slot_duration(double p_tx, double p_success, const MacTiming& timing,
                                 AccessMode mode)
{
    if (!(p_tx >= 0.0 && p_tx <= 1.0 && p_success >= 0.0 && p_success <= 1.0)) {
        throw domain_error("mean_slot_duration: probabilities must lie in [0,1]");
    }
    return mean_slot_duration(p_tx, p_success, timing.sigma_s, slot_durations(timing, mode));
}

/// How the number of generic slots left in a cycle is counted.
enum class SlotCount {
    floored, ///< floor((T - tau) / mean slot), the reported value
    fluid    ///< (T - tau) / mean slot, the smooth variant used for the search
};

/// Everything about the contention phase that depends on (W, m, n0) but not
/// on the sensing time; computed once and reused across tau.
struct ContentionState {
    std::int64_t n0 = 0;
    FixedPoint fixed_point;
    TransmissionProbabilities tx;
    double mean_slot_s = 0.0;
};

inline ContentionState contention_state(const BackoffParams& backoff, std::int64_t n0,
                                        const MacTiming& timing, AccessMode mode)
{
    ContentionState s;
    s.n0 = n0;
    s.fixed_point = solve_fixed_point(backoff, n0);
    s.tx = transmission_probabilities(s.fixed_point.phi, n0);
    s.mean_slot_s = mean_slot_duration(s.tx.p_tx, s.tx.p_success, timing, mode);
    return s;
}

inline double conditional_throughput(const ContentionState& s, double tau, double cycle_s,
                                     double payload_s, SlotCount count = SlotCount::floored)
{
    double slots = (cycle_s - tau) / s.mean_slot_s;
    if (count == SlotCount::floored) {
        slots = std::floor(slots);
    }
    return slots * s.tx.p_success * s.tx.p_tx * payload_s / cycle_s;
}

/// Normalized throughput of one cycle given n0 contenders: the expected
/// payload airtime of the data phase divided by the cycle length.
inline double conditional_throughput(double tau, double cycle_s, const BackoffParams& backoff,
                                     std::int64_t n0, const MacTiming& timing, AccessMode mode,
                                     SlotCount count = SlotCount::floored)
{
    if (!(tau > 0.0) || !(tau < cycle_s)) {
        throw domain_error("conditional_throughput: need 0 < tau < T");
    }
    timing.validate();
    return conditional_throughput(contention_state(backoff, n0, timing, mode), tau, cycle_s,
                                  timing.payload_s(), count);
}

} // namespace cogmac
