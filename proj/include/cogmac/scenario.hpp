#pragma once

// Randomized experiment scenarios and homogeneous midpoint profiles.

#include <cstdint>
#include <utility>
#include <vector>

#include "cogmac/error.hpp"
#include "cogmac/rng.hpp"
#include "cogmac/sensing.hpp"
#include "cogmac/throughput.hpp"

namespace cogmac {

struct Range {
    double low = 0.0;
    double high = 0.0;

    double midpoint() const { return 0.5 * (low + high); }
    bool contains(double x) const { return x >= low && x <= high; }

    friend bool operator==(const Range&, const Range&) = default;
};

struct ScenarioSpec {
    std::int64_t n_links = 10;
    std::int64_t m_channels = 1;
    std::int64_t max_stage = 3;
    Range snr_db_range{-20.0, -15.0};
    Range target_pd_range{0.7, 0.9};
    Range prob_h0_range{0.7, 0.8};
    double sampling_freq_hz = 6e6;
    std::uint64_t seed = 1;
    bool homogeneous = true;

    void validate() const
    {
        if (n_links < 1 || m_channels < 1) {
            throw domain_error("scenario: need at least one link and one channel");
        }
        if (max_stage < 0) {
            throw domain_error("scenario: max_stage must be >= 0");
        }
        for (const auto& r : {snr_db_range, target_pd_range, prob_h0_range}) {
            if (!(r.low <= r.high)) {
                throw domain_error("scenario: range low must not exceed high");
            }
        }
        if (!(target_pd_range.low > 0.0 && target_pd_range.high < 1.0)) {
            throw domain_error("scenario: target_pd range must lie inside (0,1)");
        }
        if (!(prob_h0_range.low >= 0.0 && prob_h0_range.high <= 1.0)) {
            throw domain_error("scenario: prob_h0 range must lie inside [0,1]");
        }
        if (!(sampling_freq_hz > 0.0)) {
            throw domain_error("scenario: sampling frequency must be positive");
        }
    }

    friend bool operator==(const ScenarioSpec&, const ScenarioSpec&) = default;
};

/// Fills links, channel count and max backoff stage of `base` from the spec.
/// Heterogeneous draws are made link by link, channel by channel, in the
/// order SNR (uniform in dB), target P_d, P(H0).
inline NetworkConfig generate(const ScenarioSpec& spec, NetworkConfig base = {})
{
    spec.validate();
    base.num_channels = spec.m_channels;
    base.backoff.max_stage = spec.max_stage;
    base.links.clear();
    base.links.reserve(static_cast<std::size_t>(spec.n_links));

    if (spec.homogeneous) {
        const auto s = SensingParams::from_db(spec.snr_db_range.midpoint(), spec.sampling_freq_hz,
                                              spec.target_pd_range.midpoint(),
                                              spec.prob_h0_range.midpoint());
        base.links.assign(static_cast<std::size_t>(spec.n_links), LinkSensing(s));
        return base;
    }

    Rng rng(spec.seed);
    for (std::int64_t i = 0; i < spec.n_links; ++i) {
        std::vector<SensingParams> per_channel;
        for (std::int64_t j = 0; j < spec.m_channels; ++j) {
            const double snr_db = rng.uniform(spec.snr_db_range.low, spec.snr_db_range.high);
            const double pd = rng.uniform(spec.target_pd_range.low, spec.target_pd_range.high);
            const double h0 = rng.uniform(spec.prob_h0_range.low, spec.prob_h0_range.high);
            per_channel.push_back(SensingParams::from_db(snr_db, spec.sampling_freq_hz, pd, h0));
        }
        base.links.emplace_back(std::move(per_channel));
    }
    return base;
}

} // namespace cogmac
