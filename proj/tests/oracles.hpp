#pragma once

// Reference computations used as test oracles. Written from the textbook
// formulas and deliberately independent of the library implementation.

#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <vector>

#include "cogmac/cogmac.hpp"

namespace oracle {

/// Q(x) by composite Simpson quadrature of the normal density over [x, x + 40].
inline double q_quadrature(double x, int intervals = 400000)
{
    const double a = x;
    const double b = x + 40.0;
    const double h = (b - a) / intervals;
    auto f = [](double t) { return std::exp(-0.5 * t * t); };
    double s = f(a) + f(b);
    for (int i = 1; i < intervals; ++i) {
        s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
    }
    return s * h / 3.0 / std::sqrt(2.0 * std::numbers::pi);
}

/// Root of a decreasing function on [lo, hi] by plain bisection.
inline double bisect_decreasing(const std::function<double(double)>& f, double target, double lo,
                                double hi)
{
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (f(mid) > target ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

/// Bianchi's phi in its textbook form (singular at p = 1/2).
inline double phi_textbook(double p, double w, int m)
{
    const double num = 2.0 * (1.0 - 2.0 * p);
    const double den = (1.0 - 2.0 * p) * (w + 1.0) + w * p * (1.0 - std::pow(2.0 * p, m));
    return num / den;
}

/// Damped fixed-point iteration on phi, using the textbook phi form.
inline std::pair<double, double> damped_fixed_point(double w, int m, int n0)
{
    double phi = 2.0 / (w + 1.0);
    for (int it = 0; it < 200000; ++it) {
        const double p = 1.0 - std::pow(1.0 - phi, n0 - 1);
        double target = std::abs(1.0 - 2.0 * p) < 1e-9 ? 2.0 / (w + 1.0 + w * p * m)
                                                       : phi_textbook(p, w, m);
        const double next = 0.5 * phi + 0.5 * target;
        if (std::abs(next - phi) < 1e-16) {
            phi = next;
            break;
        }
        phi = next;
    }
    return {phi, 1.0 - std::pow(1.0 - phi, n0 - 1)};
}

/// Distribution of the number of successes by enumerating all 2^N outcomes.
inline std::vector<double> subset_enumeration(const std::vector<double>& q)
{
    const std::size_t n = q.size();
    std::vector<double> dist(n + 1, 0.0);
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
        double pr = 1.0;
        int k = 0;
        for (std::size_t i = 0; i < n; ++i) {
            if (mask >> i & 1U) {
                pr *= q[i];
                ++k;
            } else {
                pr *= 1.0 - q[i];
            }
        }
        dist[static_cast<std::size_t>(k)] += pr;
    }
    return dist;
}

inline double binomial_coefficient(int n, int k)
{
    double c = 1.0;
    for (int i = 1; i <= k; ++i) {
        c = c * (n - k + i) / i;
    }
    return c;
}

/// Single-channel NT from the literal sum over n0 with homogeneous binomial weights.
inline double homogeneous_single_nt(const cogmac::NetworkConfig& cfg, double tau, std::int64_t w,
                                    bool floored = true)
{
    const auto& s = cfg.links.front().channel(0);
    const double alpha = std::sqrt(2.0 * s.snr + 1.0) * cogmac::q_inverse(s.target_pd);
    const double pf = 0.5 * std::erfc((alpha + std::sqrt(tau * s.sampling_freq_hz) * s.snr) /
                                      std::numbers::sqrt2);
    const double p_idle = (1.0 - pf) * s.prob_h0 + (1.0 - s.target_pd) * (1.0 - s.prob_h0);
    const int n = static_cast<int>(cfg.links.size());
    const auto d = cogmac::slot_durations(cfg.timing, cfg.mode);
    const double ps = cfg.timing.payload_bits / cfg.timing.bitrate_bps;
    double nt = 0.0;
    for (int n0 = 1; n0 <= n; ++n0) {
        const auto fp = damped_fixed_point(static_cast<double>(w),
                                           static_cast<int>(cfg.backoff.max_stage), n0);
        const double phi = fp.first;
        const double pt = 1.0 - std::pow(1.0 - phi, n0);
        const double psucc = n0 == 1 ? 1.0 : n0 * phi * std::pow(1.0 - phi, n0 - 1) / pt;
        const double tsd = (1.0 - pt) * cfg.timing.sigma_s + pt * psucc * d.t_success_s +
                           pt * (1.0 - psucc) * d.t_collision_s;
        double slots = (cfg.cycle_s - tau) / tsd;
        if (floored) {
            slots = std::floor(slots);
        }
        nt += slots * psucc * pt * ps / cfg.cycle_s * binomial_coefficient(n, n0) *
              std::pow(p_idle, n0) * std::pow(1.0 - p_idle, n - n0);
    }
    return nt;
}

} // namespace oracle
