#pragma once

#include <cstdint>

#include "cogmac/cogmac.hpp"

namespace support {

/// Homogeneous midpoint sensing: SNR -17.5 dB, target Pd 0.8, P(H0) 0.75.
inline cogmac::SensingParams midpoint_sensing()
{
    return cogmac::SensingParams::from_db(-17.5, 6e6, 0.8, 0.75);
}

inline cogmac::NetworkConfig homogeneous(std::int64_t n, std::int64_t m_channels,
                                         std::int64_t max_stage,
                                         cogmac::AccessMode mode = cogmac::AccessMode::basic,
                                         cogmac::SensingParams s = midpoint_sensing())
{
    cogmac::NetworkConfig c;
    c.links.assign(static_cast<std::size_t>(n), cogmac::LinkSensing(s));
    c.num_channels = m_channels;
    c.backoff.max_stage = max_stage;
    c.timing = cogmac::bianchi_r3_defaults();
    c.mode = mode;
    return c;
}

/// Heterogeneous per-link draws from the default scenario ranges.
inline cogmac::NetworkConfig heterogeneous(std::int64_t n, std::int64_t max_stage,
                                           std::uint64_t seed)
{
    cogmac::ScenarioSpec spec;
    spec.n_links = n;
    spec.max_stage = max_stage;
    spec.homogeneous = false;
    spec.seed = seed;
    return cogmac::generate(spec);
}

} // namespace support
