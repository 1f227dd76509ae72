#pragma once

// Monte Carlo discrete-event simulation of the cycle-structured MAC.
//
// Each cycle: primary-user states and sensing outcomes are drawn per
// (link, channel); links that see at least one idle channel contend with
// saturated binary exponential backoff; the data phase ends when the next
// event no longer fits in T - tau. Backoff counters and stages persist
// across cycles. In the multi-channel protocol contention runs once on the
// control channel and each success carries one packet on every channel
// the winner sensed idle.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "cogmac/contention.hpp"
#include "cogmac/error.hpp"
#include "cogmac/parallel.hpp"
#include "cogmac/rng.hpp"
#include "cogmac/sensing.hpp"
#include "cogmac/throughput.hpp"

namespace cogmac {

struct SimConfig {
    NetworkConfig network;
    Protocol protocol = Protocol::single;
    std::int64_t w = 32;
    double tau_s = 1e-3;
    std::int64_t num_cycles = 10000;
    std::uint64_t rng_seed = 1;

    void validate() const
    {
        network.validate();
        if (w < 1 || w > network.w_max) {
            throw domain_error("simulation: contention window must lie in [1, w_max]");
        }
        detail::require_tau_in_cycle(tau_s, network.cycle_s);
        if (num_cycles < 1) {
            throw domain_error("simulation: need at least one cycle");
        }
    }
};

struct SimReport {
    std::uint64_t seed = 0;
    double empirical_nt = 0.0;
    double ci95_halfwidth = 0.0;
    std::int64_t cycles = 0;
    std::int64_t collisions = 0;
    std::int64_t successes = 0;
    std::int64_t idle_slots = 0;
    double winner_mean_idle_channels = 0.0;
    std::vector<std::int64_t> per_cycle_participants_histogram; ///< cycles with n0 = 0..N contenders

    std::int64_t contention_slots() const { return idle_slots + successes + collisions; }

    friend bool operator==(const SimReport&, const SimReport&) = default;
};

namespace detail {

class Station {
  public:
    void reset(Rng& rng, std::int64_t w)
    {
        stage_ = 0;
        counter_ = static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(w)));
    }

    std::int64_t counter() const { return counter_; }
    void advance(std::int64_t slots) { counter_ -= slots; }

    void on_success(Rng& rng, std::int64_t w) { reset(rng, w); }

    void on_collision(Rng& rng, std::int64_t w, std::int64_t max_stage)
    {
        stage_ = std::min(stage_ + 1, max_stage);
        counter_ = static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(w) << stage_));
    }

  private:
    std::int64_t stage_ = 0;
    std::int64_t counter_ = 0;
};

} // namespace detail

inline SimReport run_simulation(const SimConfig& sim)
{
    sim.validate();
    const auto& net = sim.network;
    const auto n = net.links.size();
    const auto m = sim.protocol == Protocol::single ? std::int64_t{1} : net.num_channels;
    const auto channels = static_cast<std::size_t>(m);
    const double cycle = net.cycle_s;
    const double sigma = net.timing.sigma_s;
    const double payload = net.timing.payload_s();
    const auto durations = slot_durations(net.timing, net.mode);

    // Per (link, channel) false-alarm and detection probabilities at tau.
    std::vector<double> pf(n * channels);
    std::vector<double> pd(n * channels);
    std::vector<double> h0(n * channels);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < channels; ++j) {
            const auto& s = net.links[i].channel(j);
            pf[i * channels + j] = false_alarm_at_target_pd(s, sim.tau_s);
            pd[i * channels + j] = s.target_pd;
            h0[i * channels + j] = s.prob_h0;
        }
    }

    Rng rng(sim.rng_seed);
    std::vector<detail::Station> stations(n);
    for (auto& st : stations) {
        st.reset(rng, sim.w);
    }

    SimReport r;
    r.seed = sim.rng_seed;
    r.cycles = sim.num_cycles;
    r.per_cycle_participants_histogram.assign(n + 1, 0);

    std::vector<std::int64_t> idle_channels(n);
    std::vector<std::size_t> active;
    std::vector<std::size_t> transmitters;
    active.reserve(n);
    transmitters.reserve(n);
    double payload_total = 0.0;
    double winner_channels_total = 0.0;
    double mean = 0.0;
    double m2 = 0.0;

    for (std::int64_t c = 0; c < sim.num_cycles; ++c) {
        active.clear();
        for (std::size_t i = 0; i < n; ++i) {
            std::int64_t idle = 0;
            for (std::size_t j = 0; j < channels; ++j) {
                const std::size_t k = i * channels + j;
                const bool vacant = rng.bernoulli(h0[k]);
                const bool flagged_busy = rng.bernoulli(vacant ? pf[k] : pd[k]);
                idle += flagged_busy ? 0 : 1;
            }
            idle_channels[i] = idle;
            if (idle > 0) {
                active.push_back(i);
            }
        }
        ++r.per_cycle_participants_histogram[active.size()];

        double remaining = cycle - sim.tau_s;
        double cycle_payload = 0.0;
        while (!active.empty()) {
            std::int64_t wait = stations[active.front()].counter();
            for (auto i : active) {
                wait = std::min(wait, stations[i].counter());
            }
            const double idle_time = static_cast<double>(wait) * sigma;
            if (idle_time > remaining) {
                break;
            }
            transmitters.clear();
            for (auto i : active) {
                stations[i].advance(wait);
                if (stations[i].counter() == 0) {
                    transmitters.push_back(i);
                }
            }
            remaining -= idle_time;
            r.idle_slots += wait;
            const bool success = transmitters.size() == 1;
            const double busy = success ? durations.t_success_s : durations.t_collision_s;
            if (busy > remaining) {
                break;
            }
            remaining -= busy;
            if (success) {
                const auto i = transmitters.front();
                ++r.successes;
                cycle_payload += payload * static_cast<double>(idle_channels[i]);
                winner_channels_total += static_cast<double>(idle_channels[i]);
                stations[i].on_success(rng, sim.w);
            } else {
                ++r.collisions;
                for (auto i : transmitters) {
                    stations[i].on_collision(rng, sim.w, net.backoff.max_stage);
                }
            }
        }

        payload_total += cycle_payload;
        const double x = cycle_payload / (cycle * static_cast<double>(m));
        const double delta = x - mean;
        mean += delta / static_cast<double>(c + 1);
        m2 += delta * (x - mean);
    }

    const auto cycles = static_cast<double>(sim.num_cycles);
    r.empirical_nt = payload_total / (cycles * cycle * static_cast<double>(m));
    r.ci95_halfwidth =
        sim.num_cycles > 1 ? 1.96 * std::sqrt(m2 / (cycles - 1.0)) / std::sqrt(cycles) : 0.0;
    r.winner_mean_idle_channels =
        r.successes > 0 ? winner_channels_total / static_cast<double>(r.successes) : 0.0;
    return r;
}

/// Independent replications; replication k uses seed rng_seed + k.
inline std::vector<SimReport> replicate(const SimConfig& sim, std::int64_t replications,
                                        std::size_t jobs = 1)
{
    if (replications < 1) {
        throw domain_error("replicate: need at least one replication");
    }
    sim.validate();
    return parallel_map(static_cast<std::size_t>(replications), jobs, [&](std::size_t k) {
        SimConfig s = sim;
        s.rng_seed = sim.rng_seed + k;
        return run_simulation(s);
    });
}

struct PooledEstimate {
    double mean = 0.0;
    double ci95_halfwidth = 0.0;
};

/// Mean of replication estimates with a normal-approximation 95% interval.
inline PooledEstimate pool(const std::vector<SimReport>& reports)
{
    PooledEstimate p;
    if (reports.empty()) {
        return p;
    }
    const auto k = static_cast<double>(reports.size());
    for (const auto& r : reports) {
        p.mean += r.empirical_nt / k;
    }
    if (reports.size() == 1) {
        p.ci95_halfwidth = reports.front().ci95_halfwidth;
        return p;
    }
    double ss = 0.0;
    for (const auto& r : reports) {
        ss += (r.empirical_nt - p.mean) * (r.empirical_nt - p.mean);
    }
    p.ci95_halfwidth = 1.96 * std::sqrt(ss / (k - 1.0)) / std::sqrt(k);
    return p;
}

} // namespace cogmac
