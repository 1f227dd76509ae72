#pragma once

// CSV and JSON rendering of results, and run manifests.

#include <array>
#include <charconv>
#include <chrono>
#include <cstdint>
#include <ctime>
#include <fstream>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cogmac/config.hpp"
#include "cogmac/error.hpp"
#include "cogmac/optimizer.hpp"
#include "cogmac/simulator.hpp"
#include "cogmac/sweep.hpp"
#include "cogmac/throughput.hpp"

namespace cogmac {

inline constexpr const char* kToolVersion = "1.0.0";

/// Shortest decimal text that reads back as the same double.
inline std::string format_double(double v)
{
    std::array<char, 32> buf{};
    const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return ec == std::errc{} ? std::string(buf.data(), ptr) : std::string("nan");
}

inline std::string format_int(std::int64_t v) { return std::to_string(v); }

/// RFC 4180 table: CRLF line ends, fields quoted only when needed.
class CsvTable {
  public:
    explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

    void add(std::vector<std::string> row)
    {
        if (row.size() != header_.size()) {
            throw error("csv: row width does not match the header");
        }
        rows_.push_back(std::move(row));
    }

    const std::vector<std::string>& header() const { return header_; }
    const std::vector<std::vector<std::string>>& rows() const { return rows_; }

    void write(std::ostream& out) const
    {
        write_row(out, header_);
        for (const auto& r : rows_) {
            write_row(out, r);
        }
    }

    std::string str() const
    {
        std::string s;
        auto append = [&](const std::vector<std::string>& row) {
            for (std::size_t i = 0; i < row.size(); ++i) {
                if (i) {
                    s += ',';
                }
                s += quote(row[i]);
            }
            s += "\r\n";
        };
        append(header_);
        for (const auto& r : rows_) {
            append(r);
        }
        return s;
    }

    static std::string quote(const std::string& field)
    {
        if (field.find_first_of(",\"\r\n") == std::string::npos) {
            return field;
        }
        std::string q = "\"";
        for (char c : field) {
            q += c;
            if (c == '"') {
                q += '"';
            }
        }
        return q + "\"";
    }

  private:
    static void write_row(std::ostream& out, const std::vector<std::string>& row)
    {
        for (std::size_t i = 0; i < row.size(); ++i) {
            out << (i ? "," : "") << quote(row[i]);
        }
        out << "\r\n";
    }

    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
};

inline CsvTable analysis_csv(const ThroughputReport& r)
{
    CsvTable t({"n0", "pr_n", "conditional_nt", "phi", "p", "p_tx", "p_success", "mean_slot_s"});
    t.add({"0", format_double(r.pr_n.at(0)), format_double(0.0), "", "", "", "", ""});
    for (const auto& c : r.contention) {
        const auto i = static_cast<std::size_t>(c.n0);
        t.add({format_int(c.n0), format_double(r.pr_n.at(i)),
               format_double(r.per_n0_conditional.at(i)), format_double(c.phi), format_double(c.p),
               format_double(c.p_tx), format_double(c.p_success), format_double(c.mean_slot_s)});
    }
    return t;
}

inline CsvTable curve_csv(const OptimizationResult& r)
{
    CsvTable t({"w", "tau_opt_s", "nt"});
    for (const auto& p : r.per_w_curve) {
        t.add({format_int(p.w), format_double(p.tau_opt_s), format_double(p.nt)});
    }
    return t;
}

inline CsvTable simulation_csv(const std::vector<SimReport>& reports)
{
    CsvTable t({"replication", "seed", "empirical_nt", "ci95", "successes", "collisions"});
    for (std::size_t k = 0; k < reports.size(); ++k) {
        const auto& r = reports[k];
        t.add({format_int(static_cast<std::int64_t>(k)), std::to_string(r.seed),
               format_double(r.empirical_nt), format_double(r.ci95_halfwidth),
               format_int(r.successes), format_int(r.collisions)});
    }
    return t;
}

inline CsvTable sweep_csv(const std::vector<Axis>& axes, const std::vector<SweepRow>& rows)
{
    CsvTable t(sweep_header(axes));
    for (const auto& r : rows) {
        std::vector<std::string> cells;
        for (std::size_t k = 0; k < axes.size(); ++k) {
            cells.push_back(axes[k].name == "tau"
                                ? format_double(r.axis_values[k])
                                : format_int(static_cast<std::int64_t>(r.axis_values[k])));
        }
        for (double v : {r.nt, r.pf_mean, r.p_busy_mean, r.mean_contenders, r.channel_factor}) {
            cells.push_back(format_double(v));
        }
        t.add(std::move(cells));
    }
    return t;
}

inline nlohmann::json to_json(const ThroughputReport& r)
{
    nlohmann::json j{{"protocol", to_string(r.protocol)},
                     {"tau_s", r.tau_s},
                     {"w", r.w},
                     {"nt", r.nt},
                     {"pf_per_link", r.pf_per_link},
                     {"p_busy_per_link", r.p_busy_per_link},
                     {"pr_n", r.pr_n},
                     {"per_n0_conditional", r.per_n0_conditional}};
    auto contention = nlohmann::json::array();
    for (const auto& c : r.contention) {
        contention.push_back({{"n0", c.n0},
                              {"phi", c.phi},
                              {"p", c.p},
                              {"p_tx", c.p_tx},
                              {"p_success", c.p_success},
                              {"mean_slot_s", c.mean_slot_s}});
    }
    j["contention"] = contention;
    if (r.protocol == Protocol::multi) {
        j["expected_idle_channels"] = r.expected_idle_channels;
        j["winner_idle_channels"] = r.winner_idle_channels;
        j["channel_factor"] = r.channel_factor;
        j["pr_l"] = r.pr_l;
        j["p_su_idle"] = r.p_su_idle;
        j["p_su_busy"] = r.p_su_busy;
    }
    return j;
}

inline nlohmann::json to_json(const OptimizationResult& r)
{
    return {{"tau_star_s", r.tau_star_s},
            {"w_star", r.w_star},
            {"nt_star", r.nt_star},
            {"evaluations", r.evaluations},
            {"degenerate", r.degenerate},
            {"w_points", r.per_w_curve.size()}};
}

inline nlohmann::json to_json(const SimReport& r)
{
    return {{"seed", r.seed},
            {"empirical_nt", r.empirical_nt},
            {"ci95_halfwidth", r.ci95_halfwidth},
            {"cycles", r.cycles},
            {"collisions", r.collisions},
            {"successes", r.successes},
            {"idle_slots", r.idle_slots},
            {"winner_mean_idle_channels", r.winner_mean_idle_channels},
            {"per_cycle_participants_histogram", r.per_cycle_participants_histogram}};
}

struct RunManifest {
    std::string subcommand;
    std::string config_path;
    nlohmann::json resolved_config;
    std::uint64_t seed = 0;
    std::string tool_version = kToolVersion;
    std::string timestamp;
    std::vector<std::string> outputs;
};

inline std::string utc_timestamp()
{
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    std::array<char, 32> buf{};
    std::strftime(buf.data(), buf.size(), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf.data();
}

inline nlohmann::json to_json(const RunManifest& m)
{
    return {{"subcommand", m.subcommand},     {"config_path", m.config_path},
            {"resolved_config", m.resolved_config}, {"seed", m.seed},
            {"tool_version", m.tool_version}, {"timestamp", m.timestamp},
            {"outputs", m.outputs}};
}

inline void write_text(const std::string& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw error("cannot write '" + path + "'");
    }
    out << text;
    if (!out) {
        throw error("write failed for '" + path + "'");
    }
}

} // namespace cogmac
