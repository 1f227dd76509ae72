#pragma once

// Parameter sweeps over sensing time, contention window and link count.
//
// Axis spec: NAME=VALUES with NAME in {tau, w, n} and VALUES one of
//   v1,v2,...             explicit list
//   lin:START:STOP:COUNT  evenly spaced, endpoints included
//   log:START:STOP:COUNT  geometrically spaced, endpoints included
//                         (w and n round to integers, duplicates dropped)
//   range:START:STOP:STEP arithmetic progression up to STOP
// Rows come out in lexicographic order of the axes as given.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cogmac/config.hpp"
#include "cogmac/error.hpp"
#include "cogmac/parallel.hpp"
#include "cogmac/scenario.hpp"
#include "cogmac/throughput.hpp"

namespace cogmac {

struct Axis {
    std::string name;
    std::vector<double> values;
};

namespace detail {

inline double parse_number(std::string_view s, const std::string& where)
{
    double v = 0.0;
    const auto* end = s.data() + s.size();
    const auto [ptr, ec] = std::from_chars(s.data(), end, v);
    if (ec != std::errc{} || ptr != end || !std::isfinite(v)) {
        throw config_error(where + ": '" + std::string(s) + "' is not a number");
    }
    return v;
}

inline std::vector<std::string_view> split(std::string_view s, char sep)
{
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= s.size(); ++i) {
        if (i == s.size() || s[i] == sep) {
            parts.push_back(s.substr(start, i - start));
            start = i + 1;
        }
    }
    return parts;
}

} // namespace detail

inline Axis parse_axis(const std::string& spec)
{
    const auto eq = spec.find('=');
    if (eq == std::string::npos) {
        throw config_error("axis '" + spec + "': expected NAME=VALUES");
    }
    Axis axis{spec.substr(0, eq), {}};
    if (axis.name != "tau" && axis.name != "w" && axis.name != "n") {
        throw config_error("axis '" + axis.name + "': unknown axis (expected tau, w or n)");
    }
    const std::string where = "axis " + axis.name;
    const std::string_view body = std::string_view(spec).substr(eq + 1);
    const auto parts = detail::split(body, ':');

    if (parts.size() == 1) {
        for (auto item : detail::split(body, ',')) {
            axis.values.push_back(detail::parse_number(item, where));
        }
    } else if (parts.size() == 4) {
        const double a = detail::parse_number(parts[1], where);
        const double b = detail::parse_number(parts[2], where);
        const double c = detail::parse_number(parts[3], where);
        if (parts[0] == "lin" || parts[0] == "log") {
            const auto count = static_cast<std::int64_t>(c);
            if (count < 1 || static_cast<double>(count) != c) {
                throw config_error(where + ": COUNT must be a positive integer");
            }
            if (parts[0] == "log" && !(a > 0.0 && b > 0.0)) {
                throw config_error(where + ": log spacing needs positive endpoints");
            }
            for (std::int64_t i = 0; i < count; ++i) {
                const double t = count == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(count - 1);
                axis.values.push_back(parts[0] == "lin" ? a + (b - a) * t
                                                        : a * std::pow(b / a, t));
            }
            axis.values.back() = b;
            axis.values.front() = a;
            if (axis.name != "tau") {
                for (double& v : axis.values) {
                    v = std::round(v);
                }
                axis.values.erase(std::unique(axis.values.begin(), axis.values.end()),
                                  axis.values.end());
            }
        } else if (parts[0] == "range") {
            if (!(c > 0.0)) {
                throw config_error(where + ": STEP must be positive");
            }
            for (std::int64_t i = 0;; ++i) {
                const double v = a + static_cast<double>(i) * c;
                if (v > b + 1e-12 * std::abs(b)) {
                    break;
                }
                axis.values.push_back(v);
            }
        } else {
            throw config_error(where + ": unknown spacing '" + std::string(parts[0]) + "'");
        }
    } else {
        throw config_error(where + ": malformed values '" + std::string(body) + "'");
    }

    if (axis.values.empty()) {
        throw config_error(where + ": no values");
    }
    if (axis.name != "tau") {
        for (double v : axis.values) {
            if (v < 1.0 || v != std::floor(v)) {
                throw config_error(where + ": values must be positive integers");
            }
        }
    }
    return axis;
}

/// Copy of `cfg` with n links. Needs a scenario section or homogeneous sensing.
inline AppConfig with_links(AppConfig cfg, std::int64_t n)
{
    if (n < 1) {
        throw config_error("link count must be positive");
    }
    if (cfg.scenario) {
        cfg.network.links.assign(static_cast<std::size_t>(n), LinkSensing{});
        apply_scenario(cfg);
        return cfg;
    }
    if (!cfg.network.homogeneous()) {
        throw config_error("axis n: needs homogeneous sensing or a scenario section");
    }
    const LinkSensing proto = cfg.network.links.front();
    cfg.network.links.assign(static_cast<std::size_t>(n), proto);
    return cfg;
}

struct SweepRow {
    std::vector<double> axis_values;
    double nt = 0.0;
    double pf_mean = 0.0;
    double p_busy_mean = 0.0;
    double mean_contenders = 0.0;
    double channel_factor = 1.0;

    friend bool operator==(const SweepRow&, const SweepRow&) = default;
};

inline std::vector<std::string> sweep_header(const std::vector<Axis>& axes)
{
    std::vector<std::string> h;
    for (const auto& a : axes) {
        h.push_back(a.name == "tau" ? "tau_s" : a.name);
    }
    for (const char* c : {"nt", "pf_mean", "p_busy_mean", "mean_contenders", "channel_factor"}) {
        h.emplace_back(c);
    }
    return h;
}

inline std::vector<SweepRow> run_sweep(const AppConfig& base, const std::vector<Axis>& axes,
                                       std::size_t jobs = 1)
{
    if (axes.empty() || axes.size() > 2) {
        throw config_error("sweep: expected one or two axes");
    }
    if (axes.size() == 2 && axes[0].name == axes[1].name) {
        throw config_error("sweep: axes must differ");
    }

    struct Point {
        std::vector<double> values;
        std::int64_t n;
        std::int64_t w;
        double tau;
    };
    std::vector<Point> points;
    const auto base_n = static_cast<std::int64_t>(base.network.links.size());
    auto emit = [&](std::vector<double> values) {
        Point p{values, base_n, base.w(), base.experiment.tau_s};
        for (std::size_t k = 0; k < axes.size(); ++k) {
            const double v = values[k];
            if (axes[k].name == "tau") {
                p.tau = v;
            } else if (axes[k].name == "w") {
                p.w = static_cast<std::int64_t>(v);
            } else {
                p.n = static_cast<std::int64_t>(v);
            }
        }
        points.push_back(std::move(p));
    };
    for (double a : axes[0].values) {
        if (axes.size() == 1) {
            emit({a});
        } else {
            for (double b : axes[1].values) {
                emit({a, b});
            }
        }
    }

    // One model per (n, W); the tau dimension reuses it.
    std::map<std::pair<std::int64_t, std::int64_t>, std::size_t> index;
    std::vector<std::pair<std::int64_t, std::int64_t>> keys;
    for (const auto& p : points) {
        if (index.emplace(std::pair{p.n, p.w}, keys.size()).second) {
            keys.emplace_back(p.n, p.w);
        }
    }
    const auto models = parallel_map(keys.size(), jobs, [&](std::size_t i) {
        const auto cfg = keys[i].first == base_n ? base : with_links(base, keys[i].first);
        return ThroughputModel(cfg.network, base.experiment.protocol, keys[i].second);
    });

    return parallel_map(points.size(), jobs, [&](std::size_t i) {
        const auto& p = points[i];
        const auto& model = models[index.at({p.n, p.w})];
        const auto r = model.report(p.tau);
        SweepRow row;
        row.axis_values = p.values;
        row.nt = r.nt;
        const auto links = static_cast<double>(r.pf_per_link.size());
        for (std::size_t k = 0; k < r.pf_per_link.size(); ++k) {
            row.pf_mean += r.pf_per_link[k] / links;
            row.p_busy_mean += r.p_busy_per_link[k] / links;
        }
        for (std::size_t n0 = 0; n0 < r.pr_n.size(); ++n0) {
            row.mean_contenders += static_cast<double>(n0) * r.pr_n[n0];
        }
        row.channel_factor = r.channel_factor;
        return row;
    });
}

} // namespace cogmac
