#pragma once

// Energy-detection sensing performance and per-link participation.

#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "cogmac/error.hpp"
#include "cogmac/specfun.hpp"

namespace cogmac {

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

/// Sensing parameters of one link on one channel.
///
/// SNR is stored linear; use from_db() at configuration boundaries.
/// noise_power only matters when an explicit threshold is supplied, since
/// the detector formulas depend on epsilon / noise_power alone.
struct SensingParams {
    double snr = 0.0;
    double sampling_freq_hz = 6e6;
    double target_pd = 0.9;
    double prob_h0 = 0.5;
    double noise_power = 1.0;

    static SensingParams from_db(double snr_db, double sampling_freq_hz, double target_pd,
                                 double prob_h0, double noise_power = 1.0)
    {
        SensingParams params{db_to_linear(snr_db), sampling_freq_hz, target_pd, prob_h0,
                             noise_power};
        params.validate();
        return params;
    }

    double prob_h1() const { return 1.0 - prob_h0; }

    void validate() const
    {
        if (!(snr > 0.0) || !std::isfinite(snr)) {
            throw domain_error("sensing: snr must be positive and finite");
        }
        if (!(sampling_freq_hz > 0.0)) {
            throw domain_error("sensing: sampling_freq_hz must be positive");
        }
        if (!(target_pd > 0.0 && target_pd < 1.0)) {
            throw domain_error("sensing: target_pd must lie in (0,1)");
        }
        if (!(prob_h0 >= 0.0 && prob_h0 <= 1.0)) {
            throw domain_error("sensing: prob_h0 must lie in [0,1]");
        }
        if (!(noise_power > 0.0)) {
            throw domain_error("sensing: noise_power must be positive");
        }
    }

    friend bool operator==(const SensingParams&, const SensingParams&) = default;
};

/// Sensing parameters of one secondary link across its channels.
///
/// A single entry means every channel shares it (the homogeneous-channel
/// assumption of the analysis); the simulator also accepts one entry per
/// channel.
struct LinkSensing {
    std::vector<SensingParams> channels;

    LinkSensing() = default;
    explicit LinkSensing(SensingParams params) : channels{params} {}
    explicit LinkSensing(std::vector<SensingParams> per_channel) : channels(std::move(per_channel))
    {
    }

    const SensingParams& channel(std::size_t j) const
    {
        if (channels.empty()) {
            throw domain_error("link sensing has no parameters");
        }
        return channels.size() == 1 ? channels.front() : channels.at(j);
    }

    bool uniform_across_channels() const
    {
        for (const auto& c : channels) {
            if (!(c == channels.front())) {
                return false;
            }
        }
        return true;
    }

    friend bool operator==(const LinkSensing&, const LinkSensing&) = default;
};

namespace detail {

inline void require_positive_tau(double tau, const char* op)
{
    if (!(tau > 0.0) || !std::isfinite(tau)) {
        throw domain_error(std::string(op) + ": sensing time must be positive");
    }
}

inline void require_positive_threshold(double epsilon, const char* op)
{
    if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
        throw domain_error(std::string(op) + ": threshold must be positive");
    }
}

} // namespace detail

/// P_d(eps, tau) = Q((eps/N0 - gamma - 1) * sqrt(tau fs / (2 gamma + 1))).
inline Probability detection_probability(const SensingParams& s, double epsilon, double tau)
{
    detail::require_positive_tau(tau, "detection_probability");
    detail::require_positive_threshold(epsilon, "detection_probability");
    const double arg = (epsilon / s.noise_power - s.snr - 1.0) *
                       std::sqrt(tau * s.sampling_freq_hz / (2.0 * s.snr + 1.0));
    return q_function(arg);
}

/// P_f(eps, tau) = Q((eps/N0 - 1) * sqrt(tau fs)).
inline Probability false_alarm_probability(const SensingParams& s, double epsilon, double tau)
{
    detail::require_positive_tau(tau, "false_alarm_probability");
    detail::require_positive_threshold(epsilon, "false_alarm_probability");
    return q_function((epsilon / s.noise_power - 1.0) * std::sqrt(tau * s.sampling_freq_hz));
}

/// Threshold eps0 with P_d(eps0, tau) equal to the target detection probability.
inline double solve_threshold(const SensingParams& s, double tau)
{
    detail::require_positive_tau(tau, "solve_threshold");
    return s.noise_power * (s.snr + 1.0 + q_inverse(s.target_pd) *
                                              std::sqrt((2.0 * s.snr + 1.0) /
                                                        (tau * s.sampling_freq_hz)));
}

/// alpha = sqrt(2 gamma + 1) * Q^{-1}(target P_d).
inline double sensing_alpha(const SensingParams& s)
{
    return std::sqrt(2.0 * s.snr + 1.0) * q_inverse(s.target_pd);
}

/// False alarm once the threshold is pinned to meet the detection target:
/// P_f = Q(alpha + sqrt(tau fs) * gamma). Independent of any threshold.
inline Probability false_alarm_at_target_pd(const SensingParams& s, double tau)
{
    detail::require_positive_tau(tau, "false_alarm_at_target_pd");
    return q_function(sensing_alpha(s) + std::sqrt(tau * s.sampling_freq_hz) * s.snr);
}

struct Participation {
    Probability p_idle;
    Probability p_busy;
};

/// Probability that a link senses the channel idle (and so contends) or busy.
///
/// Mis-detection uses the target detection probability: thresholds are
/// pinned so that P_d equals its target.
inline Participation participation_probabilities(const SensingParams& s, double tau)
{
    const double pf = false_alarm_at_target_pd(s, tau);
    const double p_busy = pf * s.prob_h0 + s.target_pd * s.prob_h1();
    return {Probability::from_unchecked(1.0 - p_busy), Probability::from_unchecked(p_busy)};
}

inline Participation participation_probabilities(const LinkSensing& link, double tau,
                                                 std::size_t channel = 0)
{
    return participation_probabilities(link.channel(channel), tau);
}

} // namespace cogmac
