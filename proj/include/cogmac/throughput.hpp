#pragma once

// Per-cycle normalized throughput of the single- and multi-channel protocols.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "cogmac/contention.hpp"
#include "cogmac/error.hpp"
#include "cogmac/sensing.hpp"

namespace cogmac {

enum class Protocol { single, multi };

inline const char* to_string(Protocol p) { return p == Protocol::single ? "single" : "multi"; }

/// Factor applied per channel in the multi-channel throughput.
enum class ChannelFactor {
    /// E[l | l >= 1] / M: mean sensed-idle channels of the winning link, which
    /// has at least one by construction. Reduces to 1 for M = 1.
    winner_conditioned,
    /// E[l] / M = P_idle: the unconditional per-link mean.
    unconditional
};

struct NetworkConfig {
    std::vector<LinkSensing> links;
    std::int64_t num_channels = 1;
    double cycle_s = 0.1;
    BackoffParams backoff;
    std::int64_t w_max = 1024;
    MacTiming timing;
    AccessMode mode = AccessMode::basic;
    ChannelFactor channel_factor = ChannelFactor::winner_conditioned;

    std::size_t num_links() const { return links.size(); }

    void validate() const
    {
        if (links.empty()) {
            throw domain_error("network: need at least one link");
        }
        if (num_channels < 1) {
            throw domain_error("network: need at least one channel");
        }
        if (!(cycle_s > 0.0) || !std::isfinite(cycle_s)) {
            throw domain_error("network: cycle length must be positive");
        }
        backoff.validate();
        if (w_max < backoff.w_min) {
            throw domain_error("network: w_max must be >= the minimum contention window");
        }
        timing.validate();
        for (const auto& link : links) {
            if (link.channels.empty()) {
                throw domain_error("network: link without sensing parameters");
            }
            if (link.channels.size() != 1 &&
                link.channels.size() != static_cast<std::size_t>(num_channels)) {
                throw domain_error("network: per-channel sensing list must have one entry per "
                                   "channel");
            }
            for (const auto& c : link.channels) {
                c.validate();
            }
        }
    }

    /// Every link and channel shares one set of sensing parameters.
    bool homogeneous() const
    {
        for (const auto& link : links) {
            if (!link.uniform_across_channels() || !(link.channel(0) == links.front().channel(0))) {
                return false;
            }
        }
        return true;
    }
};

struct ContentionSummary {
    std::int64_t n0 = 0;
    double phi = 0.0;
    double p = 0.0;
    double p_tx = 0.0;
    double p_success = 0.0;
    double mean_slot_s = 0.0;
};

struct ThroughputReport {
    Protocol protocol = Protocol::single;
    double tau_s = 0.0;
    std::int64_t w = 0;
    double nt = 0.0;
    std::vector<double> pf_per_link;
    std::vector<double> p_busy_per_link;
    std::vector<double> pr_n;                ///< Pr(n = n0), n0 = 0..N
    std::vector<double> per_n0_conditional;  ///< conditional throughput, n0 = 0..N
    std::vector<ContentionSummary> contention; ///< n0 = 1..N
    double expected_idle_channels = 0.0;     ///< E[l] = M * P_idle (multi only)
    double winner_idle_channels = 0.0;       ///< E[l | l >= 1] (multi only)
    double channel_factor = 1.0;             ///< factor applied to the sum (multi only)
    std::vector<double> pr_l;                ///< Pr(l = l0), l0 = 0..M (multi only)
    double p_su_idle = 0.0;
    double p_su_busy = 0.0;
};

/// Distribution of the number of successes among independent Bernoulli
/// trials with the given success probabilities, by O(N^2) dynamic programming.
inline std::vector<double> poisson_binomial(std::span<const double> probs)
{
    std::vector<double> dist(probs.size() + 1, 0.0);
    dist[0] = 1.0;
    std::size_t k = 0;
    for (double q : probs) {
        if (!(q >= 0.0 && q <= 1.0)) {
            throw domain_error("poisson_binomial: probability out of [0,1]");
        }
        ++k;
        for (std::size_t j = k; j > 0; --j) {
            dist[j] = dist[j] * (1.0 - q) + dist[j - 1] * q;
        }
        dist[0] *= 1.0 - q;
    }
    return dist;
}

inline std::vector<double> binomial_pmf(std::int64_t n, double q)
{
    return poisson_binomial(std::vector<double>(static_cast<std::size_t>(n), q));
}

struct MultiChannelStats {
    std::vector<double> pr_l;
    Probability p_su_idle;
    Probability p_su_busy;
    double e_l = 0.0;
    double e_l_given_idle = 0.0;
};

namespace detail {

inline void require_tau_in_cycle(double tau, double cycle_s)
{
    if (!(tau > 0.0) || !(tau < cycle_s)) {
        throw domain_error("sensing time must satisfy 0 < tau < T");
    }
}

inline MultiChannelStats multi_stats_from_idle(double p_idle, std::int64_t m)
{
    MultiChannelStats st;
    const double p_busy = 1.0 - p_idle;
    st.pr_l = binomial_pmf(m, p_idle);
    const double su_busy = std::pow(p_busy, static_cast<double>(m));
    st.p_su_busy = Probability::from_unchecked(su_busy);
    st.p_su_idle = Probability::from_unchecked(1.0 - su_busy);
    st.e_l = static_cast<double>(m) * p_idle;
    st.e_l_given_idle = st.p_su_idle > 0.0 ? st.e_l / st.p_su_idle : 0.0;
    return st;
}

} // namespace detail

/// Pr(n = n0), n0 = 0..N, for the single-channel protocol.
inline std::vector<double> single_channel_pr_n(const NetworkConfig& config, double tau)
{
    detail::require_tau_in_cycle(tau, config.cycle_s);
    std::vector<double> idle;
    idle.reserve(config.links.size());
    for (const auto& link : config.links) {
        idle.push_back(participation_probabilities(link, tau).p_idle);
    }
    return poisson_binomial(idle);
}

/// Channel statistics of the homogeneous multi-channel model.
inline MultiChannelStats multi_channel_stats(const NetworkConfig& config, double tau)
{
    detail::require_tau_in_cycle(tau, config.cycle_s);
    if (!config.homogeneous()) {
        throw unsupported_mode("multi-channel analysis needs homogeneous sensing; use the "
                               "simulator for heterogeneous settings");
    }
    const double p_idle = participation_probabilities(config.links.front(), tau).p_idle;
    return detail::multi_stats_from_idle(p_idle, config.num_channels);
}

/// Throughput evaluator for a fixed (config, protocol, W).
///
/// The Bianchi fixed points depend only on (W, m, n0), so they are solved
/// once here and every tau evaluation afterwards is O(N^2).
class ThroughputModel {
  public:
    ThroughputModel(const NetworkConfig& config, Protocol protocol, std::int64_t w)
        : config_(config), protocol_(protocol), w_(w)
    {
        config.validate();
        if (w < 1 || w > config.w_max) {
            throw domain_error("contention window must lie in [1, w_max]");
        }
        if (protocol == Protocol::multi && !config.homogeneous()) {
            throw unsupported_mode("multi-channel analysis needs homogeneous sensing; use the "
                                   "simulator for heterogeneous settings");
        }
        const BackoffParams backoff{w, config.backoff.max_stage};
        const auto n = static_cast<std::int64_t>(config.links.size());
        states_.reserve(static_cast<std::size_t>(n));
        for (std::int64_t n0 = 1; n0 <= n; ++n0) {
            states_.push_back(contention_state(backoff, n0, config.timing, config.mode));
        }
        payload_s_ = config.timing.payload_s();
    }

    const NetworkConfig& config() const { return config_; }
    Protocol protocol() const { return protocol_; }
    std::int64_t w() const { return w_; }
    const std::vector<ContentionState>& states() const { return states_; }

    /// Normalized throughput at sensing time tau.
    double nt(double tau, SlotCount count = SlotCount::floored) const
    {
        detail::require_tau_in_cycle(tau, config_.cycle_s);
        double factor = 1.0;
        const auto pr = participation_distribution(tau, &factor);
        return factor * weighted_sum(pr, tau, count);
    }

    ThroughputReport report(double tau, SlotCount count = SlotCount::floored) const
    {
        detail::require_tau_in_cycle(tau, config_.cycle_s);
        ThroughputReport r;
        r.protocol = protocol_;
        r.tau_s = tau;
        r.w = w_;
        for (const auto& link : config_.links) {
            r.pf_per_link.push_back(false_alarm_at_target_pd(link.channel(0), tau));
            r.p_busy_per_link.push_back(participation_probabilities(link, tau).p_busy);
        }
        double factor = 1.0;
        r.pr_n = participation_distribution(tau, &factor);
        r.per_n0_conditional.push_back(0.0);
        for (const auto& s : states_) {
            r.per_n0_conditional.push_back(
                conditional_throughput(s, tau, config_.cycle_s, payload_s_, count));
            r.contention.push_back({s.n0, s.fixed_point.phi, s.fixed_point.p, s.tx.p_tx,
                                    s.tx.p_success, s.mean_slot_s});
        }
        r.nt = factor * weighted_sum(r.pr_n, tau, count);
        if (protocol_ == Protocol::multi) {
            const auto st = multi_channel_stats(config_, tau);
            r.pr_l = st.pr_l;
            r.p_su_idle = st.p_su_idle;
            r.p_su_busy = st.p_su_busy;
            r.expected_idle_channels = st.e_l;
            r.winner_idle_channels = st.e_l_given_idle;
            r.channel_factor = factor;
        } else {
            r.channel_factor = 1.0;
        }
        return r;
    }

  private:
    std::vector<double> participation_distribution(double tau, double* factor) const
    {
        if (protocol_ == Protocol::single) {
            *factor = 1.0;
            return single_channel_pr_n(config_, tau);
        }
        const double p_idle = participation_probabilities(config_.links.front(), tau).p_idle;
        const auto st = detail::multi_stats_from_idle(p_idle, config_.num_channels);
        const auto m = static_cast<double>(config_.num_channels);
        *factor = config_.channel_factor == ChannelFactor::winner_conditioned
                      ? st.e_l_given_idle / m
                      : st.e_l / m;
        return binomial_pmf(static_cast<std::int64_t>(config_.links.size()), st.p_su_idle);
    }

    double weighted_sum(const std::vector<double>& pr, double tau, SlotCount count) const
    {
        double sum = 0.0;
        for (std::size_t i = 0; i < states_.size(); ++i) {
            sum += conditional_throughput(states_[i], tau, config_.cycle_s, payload_s_, count) *
                   pr[i + 1];
        }
        return sum;
    }

    NetworkConfig config_;
    Protocol protocol_;
    std::int64_t w_;
    std::vector<ContentionState> states_;
    double payload_s_ = 0.0;
};

inline ThroughputReport single_channel_nt(const NetworkConfig& config, double tau, std::int64_t w)
{
    return ThroughputModel(config, Protocol::single, w).report(tau);
}

/// Per-channel normalized throughput of the multi-channel protocol
/// (homogeneous sensing only).
inline ThroughputReport multi_channel_nt(const NetworkConfig& config, double tau, std::int64_t w)
{
    return ThroughputModel(config, Protocol::multi, w).report(tau);
}

inline ThroughputReport analyze(const NetworkConfig& config, Protocol protocol, double tau,
                                std::int64_t w)
{
    return ThroughputModel(config, protocol, w).report(tau);
}

} // namespace cogmac
