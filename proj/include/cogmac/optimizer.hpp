#pragma once

// Joint sensing-time / contention-window optimization.
//
// For a fixed W the fluid (floorless) throughput is unimodal in tau, so a
// coarse grid plus golden-section search finds its peak. The reported
// objective floors the slot count, which splits the curve into plateaus;
// its maximum lies either at the fluid peak or at the right edge of a
// plateau, i.e. at tau = T - k * Tsd(n0) for some n0 and integer k. Those
// edges are enumerated inside the window where the fluid curve can still
// beat the best floored value found so far.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <vector>

#include "cogmac/error.hpp"
#include "cogmac/parallel.hpp"
#include "cogmac/sensing.hpp"
#include "cogmac/throughput.hpp"

namespace cogmac {

struct TauSearchOptions {
    double tau_min_s = 10e-6;
    std::size_t coarse_points = 512;
    double golden_tol_s = 1e-10;
    std::size_t max_edge_candidates = 200000;
};

struct TauOptimum {
    double tau_s = 0.0;
    double nt = 0.0;
    double tau_fluid_s = 0.0; ///< argmax of the floorless objective
    double nt_fluid = 0.0;
    bool degenerate = false;  ///< objective is zero everywhere on the search domain
    std::int64_t evaluations = 0;
};

struct WCurvePoint {
    std::int64_t w = 0;
    double tau_opt_s = 0.0;
    double nt = 0.0;
    double tau_fluid_s = 0.0;
    bool degenerate = false;
};

struct OptimizationResult {
    double tau_star_s = 0.0;
    std::int64_t w_star = 0;
    double nt_star = 0.0;
    std::vector<WCurvePoint> per_w_curve;
    std::int64_t evaluations = 0;
    bool degenerate = false;
};

struct JointSearchOptions {
    TauSearchOptions tau;
    std::vector<std::int64_t> w_grid; ///< explicit W values; empty selects the default grid
    std::int64_t dense_limit = 1024;  ///< scan every integer W up to this w_max
    std::size_t geometric_points = 256;
    std::size_t jobs = 1;
};

/// Values within this distance count as ties; ties go to smaller W, then smaller tau.
inline constexpr double kTieTolerance = 1e-9;

/// Coarse tau grid on [tau_min, T - sigma]: log-spaced and linear points merged.
inline std::vector<double> tau_search_grid(double cycle_s, double sigma_s,
                                           const TauSearchOptions& opt = {})
{
    const double lo = opt.tau_min_s;
    const double hi = cycle_s - sigma_s;
    if (!(lo > 0.0) || !(hi > lo)) {
        throw domain_error("tau search domain [tau_min, T - sigma] is empty");
    }
    const std::size_t n = std::max<std::size_t>(opt.coarse_points, 2);
    std::vector<double> grid;
    grid.reserve(2 * n);
    const double ratio = std::log(hi / lo);
    for (std::size_t i = 0; i < n; ++i) {
        const double t = static_cast<double>(i) / static_cast<double>(n - 1);
        grid.push_back(lo * std::exp(ratio * t));
        grid.push_back(lo + (hi - lo) * t);
    }
    grid.front() = lo;
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    for (auto& t : grid) {
        t = std::clamp(t, lo, hi);
    }
    return grid;
}

namespace detail {

template <typename F>
double golden_section_max(F f, double a, double b, double tol, std::int64_t& evals)
{
    constexpr double inv_phi = 0.6180339887498949;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = f(c);
    double fd = f(d);
    evals += 2;
    for (int it = 0; it < 300 && (b - a) > tol; ++it) {
        if (fc >= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
        ++evals;
    }
    return fc >= fd ? c : d;
}

struct Candidate {
    double tau;
    double nt;
};

inline bool better(const Candidate& a, const Candidate& b)
{
    if (a.nt > b.nt + kTieTolerance) {
        return true;
    }
    if (b.nt > a.nt + kTieTolerance) {
        return false;
    }
    return a.tau < b.tau;
}

} // namespace detail

/// Best sensing time for the model's fixed contention window.
inline TauOptimum optimize_tau(const ThroughputModel& model, const TauSearchOptions& opt = {})
{
    const auto& cfg = model.config();
    const double cycle = cfg.cycle_s;
    const auto grid = tau_search_grid(cycle, cfg.timing.sigma_s, opt);
    const double lo = grid.front();
    const double hi = grid.back();

    TauOptimum out;
    std::vector<double> fluid(grid.size());
    std::vector<double> floored(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        fluid[i] = model.nt(grid[i], SlotCount::fluid);
        floored[i] = model.nt(grid[i], SlotCount::floored);
    }
    out.evaluations += 2 * static_cast<std::int64_t>(grid.size());

    // Fluid peak: grid argmax, then golden section on the bracketing cells.
    const auto peak = static_cast<std::size_t>(
        std::max_element(fluid.begin(), fluid.end()) - fluid.begin());
    const double a = grid[peak == 0 ? 0 : peak - 1];
    const double b = grid[std::min(peak + 1, grid.size() - 1)];
    double tau_fluid = grid[peak];
    double nt_fluid = fluid[peak];
    if (b > a) {
        const double t = detail::golden_section_max(
            [&](double x) { return model.nt(x, SlotCount::fluid); }, a, b, opt.golden_tol_s,
            out.evaluations);
        const double v = model.nt(t, SlotCount::fluid);
        ++out.evaluations;
        if (v > nt_fluid) {
            tau_fluid = t;
            nt_fluid = v;
        }
    }
    out.tau_fluid_s = tau_fluid;
    out.nt_fluid = nt_fluid;

    // Floored objective: grid points, the fluid peak, then plateau edges.
    detail::Candidate best{grid[0], floored[0]};
    for (std::size_t i = 1; i < grid.size(); ++i) {
        if (detail::better({grid[i], floored[i]}, best)) {
            best = {grid[i], floored[i]};
        }
    }
    {
        const detail::Candidate c{tau_fluid, model.nt(tau_fluid, SlotCount::floored)};
        ++out.evaluations;
        if (detail::better(c, best)) {
            best = c;
        }
    }

    // floored <= fluid everywhere, so only cells whose fluid value exceeds
    // the current best can hold a better plateau edge.
    std::vector<std::pair<double, double>> windows;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (fluid[i] + kTieTolerance >= best.nt) {
            const double wlo = grid[i == 0 ? 0 : i - 1];
            const double whi = grid[std::min(i + 1, grid.size() - 1)];
            if (!windows.empty() && wlo <= windows.back().second) {
                windows.back().second = std::max(windows.back().second, whi);
            } else {
                windows.emplace_back(wlo, whi);
            }
        }
    }
    std::size_t edges = 0;
    const double nudge = 1e-12 * cycle;
    for (const auto& [wlo, whi] : windows) {
        for (const auto& s : model.states()) {
            const double slot = s.mean_slot_s;
            const auto k_first = static_cast<std::int64_t>(std::ceil((cycle - whi) / slot));
            const auto k_last = static_cast<std::int64_t>(std::floor((cycle - wlo) / slot));
            for (std::int64_t k = std::max<std::int64_t>(k_first, 1); k <= k_last; ++k) {
                if (edges++ >= opt.max_edge_candidates) {
                    break;
                }
                const double tau = cycle - static_cast<double>(k) * slot - nudge;
                if (tau < lo || tau > hi) {
                    continue;
                }
                const detail::Candidate c{tau, model.nt(tau, SlotCount::floored)};
                ++out.evaluations;
                if (detail::better(c, best)) {
                    best = c;
                }
            }
        }
    }

    if (!(best.nt > 0.0)) {
        out.tau_s = lo;
        out.nt = 0.0;
        out.degenerate = true;
        return out;
    }
    out.tau_s = best.tau;
    out.nt = best.nt;
    return out;
}

inline TauOptimum optimize_tau(const NetworkConfig& config, std::int64_t w, Protocol protocol,
                               const TauSearchOptions& opt = {})
{
    return optimize_tau(ThroughputModel(config, protocol, w), opt);
}

/// Default W values: every integer up to dense_limit, otherwise a geometric
/// subsample of [1, w_max] (refined locally by optimize_joint).
inline std::vector<std::int64_t> default_w_grid(std::int64_t w_max, const JointSearchOptions& opt)
{
    std::vector<std::int64_t> ws;
    if (w_max <= opt.dense_limit) {
        for (std::int64_t w = 1; w <= w_max; ++w) {
            ws.push_back(w);
        }
        return ws;
    }
    const std::size_t n = std::max<std::size_t>(opt.geometric_points, 2);
    for (std::size_t i = 0; i < n; ++i) {
        const double t = static_cast<double>(i) / static_cast<double>(n - 1);
        ws.push_back(std::clamp<std::int64_t>(
            std::llround(std::exp(t * std::log(static_cast<double>(w_max)))), 1, w_max));
    }
    std::sort(ws.begin(), ws.end());
    ws.erase(std::unique(ws.begin(), ws.end()), ws.end());
    return ws;
}

namespace detail {

inline std::vector<WCurvePoint> scan_w(const NetworkConfig& config, Protocol protocol,
                                       const std::vector<std::int64_t>& ws,
                                       const JointSearchOptions& opt, std::int64_t& evaluations)
{
    auto results = parallel_map(ws.size(), opt.jobs, [&](std::size_t i) {
        const auto r = optimize_tau(config, ws[i], protocol, opt.tau);
        return std::pair{WCurvePoint{ws[i], r.tau_s, r.nt, r.tau_fluid_s, r.degenerate},
                         r.evaluations};
    });
    std::vector<WCurvePoint> curve;
    curve.reserve(results.size());
    for (const auto& [point, evals] : results) {
        curve.push_back(point);
        evaluations += evals;
    }
    return curve;
}

inline std::size_t best_index(const std::vector<WCurvePoint>& curve)
{
    std::size_t best = 0;
    for (std::size_t i = 1; i < curve.size(); ++i) {
        const auto& a = curve[i];
        const auto& b = curve[best];
        if (a.nt > b.nt + kTieTolerance) {
            best = i;
        } else if (!(b.nt > a.nt + kTieTolerance) &&
                   (a.w < b.w || (a.w == b.w && a.tau_opt_s < b.tau_opt_s))) {
            best = i;
        }
    }
    return best;
}

} // namespace detail

/// Exhaustive search over W with the optimal tau for each W.
inline OptimizationResult optimize_joint(const NetworkConfig& config, Protocol protocol,
                                         const JointSearchOptions& opt = {})
{
    config.validate();
    auto ws = opt.w_grid.empty() ? default_w_grid(config.w_max, opt) : opt.w_grid;
    for (auto w : ws) {
        if (w < 1 || w > config.w_max) {
            throw domain_error("W grid value outside [1, w_max]");
        }
    }
    std::sort(ws.begin(), ws.end());
    ws.erase(std::unique(ws.begin(), ws.end()), ws.end());

    OptimizationResult result;
    auto curve = detail::scan_w(config, protocol, ws, opt, result.evaluations);

    if (opt.w_grid.empty() && config.w_max > opt.dense_limit) {
        // Fill in every integer between the best subsampled W and its neighbours.
        const std::size_t b = detail::best_index(curve);
        const std::int64_t from = b == 0 ? 1 : curve[b - 1].w + 1;
        const std::int64_t to = b + 1 < curve.size() ? curve[b + 1].w - 1 : config.w_max;
        std::vector<std::int64_t> extra;
        for (std::int64_t w = from; w <= to; ++w) {
            if (w != curve[b].w) {
                extra.push_back(w);
            }
        }
        auto more = detail::scan_w(config, protocol, extra, opt, result.evaluations);
        curve.insert(curve.end(), more.begin(), more.end());
        std::sort(curve.begin(), curve.end(),
                  [](const WCurvePoint& x, const WCurvePoint& y) { return x.w < y.w; });
    }

    const auto& best = curve[detail::best_index(curve)];
    result.w_star = best.w;
    result.tau_star_s = best.tau_opt_s;
    result.nt_star = best.nt;
    result.degenerate = std::all_of(curve.begin(), curve.end(),
                                    [](const WCurvePoint& p) { return p.degenerate; });
    result.per_w_curve = std::move(curve);
    return result;
}

// ---------------------------------------------------------------------------
// Stationary-point decomposition of the fluid objective (homogeneous case).
//
// dNT/dtau = 0 reduces to h(tau) = g(tau) with g = (alpha + gamma sqrt(fs tau))^2;
// h - g > 0 exactly where the (constant-c approximated) objective increases.

struct StationaryDiagnostic {
    double tau_s = 0.0;
    double g_value = 0.0;
    double h_value = 0.0;
    double residual = 0.0; ///< h - g
};

/// K_tau / K_a for the single-channel protocol: N x^(N-1), x = P_busy.
inline double stationary_k_tau_ratio(double x, std::int64_t n)
{
    return static_cast<double>(n) * std::pow(x, static_cast<double>(n - 1));
}

/// K'_tau for the multi-channel protocol: 1 - x^r + r x^(r-1) (1 - x), r = M N.
inline double stationary_k_prime(double x, std::int64_t m, std::int64_t n)
{
    const auto r = static_cast<double>(m * n);
    return 1.0 - std::pow(x, r) + r * std::pow(x, r - 1.0) * (1.0 - x);
}

/// h_1(x) = 2 log(N x^(N-1) / (1 - x^N)).
inline double stationary_h1(double x, std::int64_t n)
{
    const auto nd = static_cast<double>(n);
    return 2.0 * (std::log(nd) + (nd - 1.0) * std::log(x) - std::log1p(-std::pow(x, nd)));
}

/// h'_1(x) = 2 log(K'_tau / ((1 - x)(1 - x^r))), r = M N.
inline double stationary_h1_multi(double x, std::int64_t m, std::int64_t n)
{
    const auto r = static_cast<double>(m * n);
    return 2.0 * (std::log(stationary_k_prime(x, m, n)) - std::log1p(-x) -
                  std::log1p(-std::pow(x, r)));
}

inline StationaryDiagnostic stationary_diagnostic(const NetworkConfig& config, std::int64_t w,
                                                  double tau, Protocol protocol)
{
    config.validate();
    if (w < 1 || w > config.w_max) {
        throw domain_error("contention window must lie in [1, w_max]");
    }
    if (!config.homogeneous()) {
        throw unsupported_mode("stationary diagnostic needs homogeneous sensing");
    }
    detail::require_tau_in_cycle(tau, config.cycle_s);
    const auto& s = config.links.front().channel(0);
    const auto n = static_cast<std::int64_t>(config.links.size());
    const double x = participation_probabilities(s, tau).p_busy;
    const double y = sensing_alpha(s) + s.snr * std::sqrt(s.sampling_freq_hz * tau);

    StationaryDiagnostic d;
    d.tau_s = tau;
    d.g_value = y * y;
    const double lead = 2.0 * std::log(s.prob_h0 * s.snr *
                                       std::sqrt(s.sampling_freq_hz / (8.0 * std::numbers::pi)) *
                                       (config.cycle_s - tau) / std::sqrt(tau));
    d.h_value = lead + (protocol == Protocol::single
                            ? stationary_h1(x, n)
                            : stationary_h1_multi(x, config.num_channels, n));
    d.residual = d.h_value - d.g_value;
    return d;
}

} // namespace cogmac
