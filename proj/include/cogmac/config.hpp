#pragma once

// JSON configuration documents.
//
// Sections: network, sensing | scenario, timing_profile, backoff, experiment.
// Unknown keys are rejected so that typos surface as errors. A run manifest
// is also accepted: its "resolved_config" member is used as the document.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cogmac/contention.hpp"
#include "cogmac/error.hpp"
#include "cogmac/optimizer.hpp"
#include "cogmac/scenario.hpp"
#include "cogmac/sensing.hpp"
#include "cogmac/throughput.hpp"

namespace cogmac {

inline constexpr const char* kDefaultTimingProfile = "bianchi-r3-defaults";

struct ExperimentConfig {
    Protocol protocol = Protocol::single;
    double tau_s = 1e-3;
    std::optional<std::int64_t> w; ///< defaults to backoff.w_min
    std::int64_t cycles = 10000;
    std::int64_t replications = 1;
    std::uint64_t seed = 1;
    double tau_min_s = 10e-6;
    std::vector<std::string> sweep; ///< axis specs, see sweep.hpp
};

struct AppConfig {
    NetworkConfig network;
    std::optional<ScenarioSpec> scenario;
    std::string timing_profile = kDefaultTimingProfile;
    ExperimentConfig experiment;

    std::int64_t w() const { return experiment.w.value_or(network.backoff.w_min); }

    TauSearchOptions tau_search() const
    {
        TauSearchOptions opt;
        opt.tau_min_s = experiment.tau_min_s;
        return opt;
    }
};

inline MacTiming timing_profile(const std::string& name)
{
    if (name == kDefaultTimingProfile) {
        return bianchi_r3_defaults();
    }
    throw config_error("timing_profile: unknown profile '" + name + "'");
}

namespace detail {

using nlohmann::json;

class Section {
  public:
    Section(const json& j, std::string path) : j_(j), path_(std::move(path))
    {
        if (!j_.is_object()) {
            throw config_error(path_ + ": expected an object");
        }
    }

    void allow(std::initializer_list<const char*> keys) const
    {
        for (const auto& [key, value] : j_.items()) {
            bool known = false;
            for (const char* k : keys) {
                known = known || key == k;
            }
            if (!known) {
                throw config_error(path_ + "." + key + ": unknown field");
            }
        }
    }

    bool has(const char* key) const { return j_.contains(key); }
    const json& raw(const char* key) const { return j_.at(key); }
    std::string path(const char* key) const { return path_ + "." + key; }

    double number(const char* key, double fallback) const
    {
        return has(key) ? number(key) : fallback;
    }

    double number(const char* key) const
    {
        require(key);
        const auto& v = j_.at(key);
        if (!v.is_number()) {
            throw config_error(path(key) + ": expected a number");
        }
        return v.get<double>();
    }

    std::int64_t integer(const char* key, std::int64_t fallback) const
    {
        if (!has(key)) {
            return fallback;
        }
        const auto& v = j_.at(key);
        if (!v.is_number_integer()) {
            throw config_error(path(key) + ": expected an integer");
        }
        return v.get<std::int64_t>();
    }

    std::uint64_t unsigned_integer(const char* key, std::uint64_t fallback) const
    {
        if (!has(key)) {
            return fallback;
        }
        const auto& v = j_.at(key);
        if (!v.is_number_unsigned()) {
            throw config_error(path(key) + ": expected a non-negative integer");
        }
        return v.get<std::uint64_t>();
    }

    bool boolean(const char* key, bool fallback) const
    {
        if (!has(key)) {
            return fallback;
        }
        const auto& v = j_.at(key);
        if (!v.is_boolean()) {
            throw config_error(path(key) + ": expected true or false");
        }
        return v.get<bool>();
    }

    std::string string(const char* key, const std::string& fallback) const
    {
        if (!has(key)) {
            return fallback;
        }
        const auto& v = j_.at(key);
        if (!v.is_string()) {
            throw config_error(path(key) + ": expected a string");
        }
        return v.get<std::string>();
    }

    Range range(const char* key, Range fallback) const
    {
        if (!has(key)) {
            return fallback;
        }
        const auto& v = j_.at(key);
        if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
            throw config_error(path(key) + ": expected [low, high]");
        }
        return {v[0].get<double>(), v[1].get<double>()};
    }

  private:
    void require(const char* key) const
    {
        if (!has(key)) {
            throw config_error(path(key) + ": missing required field");
        }
    }

    const json& j_;
    std::string path_;
};

inline AccessMode parse_mode(const std::string& s, const std::string& where)
{
    if (s == "basic") {
        return AccessMode::basic;
    }
    if (s == "rts" || s == "rts_cts") {
        return AccessMode::rts_cts;
    }
    throw config_error(where + ": expected 'basic' or 'rts'");
}

inline Protocol parse_protocol(const std::string& s, const std::string& where)
{
    if (s == "single") {
        return Protocol::single;
    }
    if (s == "multi") {
        return Protocol::multi;
    }
    throw config_error(where + ": expected 'single' or 'multi'");
}

inline ChannelFactor parse_channel_factor(const std::string& s, const std::string& where)
{
    if (s == "winner_conditioned") {
        return ChannelFactor::winner_conditioned;
    }
    if (s == "unconditional") {
        return ChannelFactor::unconditional;
    }
    throw config_error(where + ": expected 'winner_conditioned' or 'unconditional'");
}

inline const char* channel_factor_name(ChannelFactor f)
{
    return f == ChannelFactor::winner_conditioned ? "winner_conditioned" : "unconditional";
}

inline SensingParams parse_sensing(const json& j, const std::string& path)
{
    Section s(j, path);
    s.allow({"snr_db", "snr_linear", "sampling_freq_hz", "target_pd", "prob_h0", "noise_power"});
    if (s.has("snr_db") == s.has("snr_linear")) {
        throw config_error(path + ": give exactly one of snr_db and snr_linear");
    }
    SensingParams p;
    p.snr = s.has("snr_db") ? db_to_linear(s.number("snr_db")) : s.number("snr_linear");
    p.sampling_freq_hz = s.number("sampling_freq_hz", 6e6);
    p.target_pd = s.number("target_pd");
    p.prob_h0 = s.number("prob_h0");
    p.noise_power = s.number("noise_power", 1.0);
    auto require = [&](bool ok, const char* key, const char* what) {
        if (!ok) {
            throw config_error(path + "." + key + ": " + what);
        }
    };
    require(p.snr > 0.0 && std::isfinite(p.snr), s.has("snr_db") ? "snr_db" : "snr_linear",
            "must give a positive finite linear SNR");
    require(p.sampling_freq_hz > 0.0, "sampling_freq_hz", "must be positive");
    require(p.target_pd > 0.0 && p.target_pd < 1.0, "target_pd", "must lie in (0,1)");
    require(p.prob_h0 >= 0.0 && p.prob_h0 <= 1.0, "prob_h0", "must lie in [0,1]");
    require(p.noise_power > 0.0, "noise_power", "must be positive");
    try {
        p.validate();
    } catch (const domain_error& e) {
        throw config_error(path + ": " + e.what());
    }
    return p;
}

inline LinkSensing parse_link(const json& j, const std::string& path)
{
    if (j.is_object() && j.contains("channels")) {
        Section s(j, path);
        s.allow({"channels"});
        const auto& arr = s.raw("channels");
        if (!arr.is_array() || arr.empty()) {
            throw config_error(path + ".channels: expected a non-empty array");
        }
        std::vector<SensingParams> per_channel;
        for (std::size_t k = 0; k < arr.size(); ++k) {
            per_channel.push_back(
                parse_sensing(arr[k], path + ".channels[" + std::to_string(k) + "]"));
        }
        return LinkSensing(std::move(per_channel));
    }
    return LinkSensing(parse_sensing(j, path));
}

inline MacTiming parse_timing(const json& j)
{
    if (j.is_string()) {
        return timing_profile(j.get<std::string>());
    }
    Section s(j, "timing_profile");
    s.allow({"profile", "sigma_s", "sifs_s", "difs_s", "prop_delay_s", "phy_header_bits",
             "mac_header_bits", "payload_bits", "ack_bits", "rts_bits", "cts_bits",
             "bitrate_bps"});
    MacTiming t = timing_profile(s.string("profile", kDefaultTimingProfile));
    t.sigma_s = s.number("sigma_s", t.sigma_s);
    t.sifs_s = s.number("sifs_s", t.sifs_s);
    t.difs_s = s.number("difs_s", t.difs_s);
    t.prop_delay_s = s.number("prop_delay_s", t.prop_delay_s);
    t.phy_header_bits = s.number("phy_header_bits", t.phy_header_bits);
    t.mac_header_bits = s.number("mac_header_bits", t.mac_header_bits);
    t.payload_bits = s.number("payload_bits", t.payload_bits);
    t.ack_bits = s.number("ack_bits", t.ack_bits);
    t.rts_bits = s.number("rts_bits", t.rts_bits);
    t.cts_bits = s.number("cts_bits", t.cts_bits);
    t.bitrate_bps = s.number("bitrate_bps", t.bitrate_bps);
    return t;
}

inline json sensing_to_json(const SensingParams& p)
{
    return json{{"snr_linear", p.snr},           {"sampling_freq_hz", p.sampling_freq_hz},
                {"target_pd", p.target_pd},      {"prob_h0", p.prob_h0},
                {"noise_power", p.noise_power}};
}

} // namespace detail

/// Links and channel count from the scenario section, if any.
inline void apply_scenario(AppConfig& cfg)
{
    if (!cfg.scenario) {
        return;
    }
    cfg.scenario->n_links = static_cast<std::int64_t>(cfg.network.links.size());
    cfg.scenario->m_channels = cfg.network.num_channels;
    cfg.scenario->max_stage = cfg.network.backoff.max_stage;
    cfg.network = generate(*cfg.scenario, cfg.network);
}

inline AppConfig parse_config(const nlohmann::json& doc_in)
{
    using detail::Section;
    const nlohmann::json& doc =
        doc_in.is_object() && doc_in.contains("resolved_config") ? doc_in.at("resolved_config")
                                                                 : doc_in;
    Section top(doc, "config");
    top.allow({"network", "sensing", "scenario", "timing_profile", "backoff", "experiment",
               "description"});

    AppConfig cfg;
    if (!top.has("network")) {
        throw config_error("config.network: missing required section");
    }
    Section net(top.raw("network"), "network");
    net.allow({"links", "channels", "cycle_s", "w_max", "mode", "channel_factor"});
    cfg.network.num_channels = net.integer("channels", 1);
    cfg.network.cycle_s = net.number("cycle_s", 0.1);
    cfg.network.w_max = net.integer("w_max", 1024);
    cfg.network.mode = detail::parse_mode(net.string("mode", "basic"), "network.mode");
    cfg.network.channel_factor = detail::parse_channel_factor(
        net.string("channel_factor", "winner_conditioned"), "network.channel_factor");

    if (top.has("backoff")) {
        Section b(top.raw("backoff"), "backoff");
        b.allow({"w_min", "max_stage"});
        cfg.network.backoff.w_min = b.integer("w_min", 32);
        cfg.network.backoff.max_stage = b.integer("max_stage", 3);
    }

    if (top.has("timing_profile")) {
        const auto& t = top.raw("timing_profile");
        cfg.network.timing = detail::parse_timing(t);
        cfg.timing_profile = t.is_string() ? t.get<std::string>()
                                           : t.value("profile", std::string(kDefaultTimingProfile));
    }

    if (top.has("sensing") == top.has("scenario")) {
        throw config_error("config: give exactly one of the 'sensing' and 'scenario' sections");
    }
    const std::int64_t n_links = net.integer("links", 0);
    if (top.has("sensing")) {
        const auto& s = top.raw("sensing");
        if (s.is_array()) {
            if (s.empty()) {
                throw config_error("sensing: expected at least one link");
            }
            for (std::size_t i = 0; i < s.size(); ++i) {
                cfg.network.links.push_back(
                    detail::parse_link(s[i], "sensing[" + std::to_string(i) + "]"));
            }
            if (net.has("links") && n_links != static_cast<std::int64_t>(s.size())) {
                throw config_error("network.links: does not match the length of 'sensing'");
            }
        } else {
            if (n_links < 1) {
                throw config_error("network.links: must be a positive integer");
            }
            cfg.network.links.assign(static_cast<std::size_t>(n_links),
                                     detail::parse_link(s, "sensing"));
        }
    } else {
        if (n_links < 1) {
            throw config_error("network.links: must be a positive integer");
        }
        Section sc(top.raw("scenario"), "scenario");
        sc.allow({"seed", "homogeneous", "snr_db_range", "target_pd_range", "prob_h0_range",
                  "sampling_freq_hz"});
        ScenarioSpec spec;
        spec.seed = sc.unsigned_integer("seed", 1);
        spec.homogeneous = sc.boolean("homogeneous", true);
        spec.snr_db_range = sc.range("snr_db_range", spec.snr_db_range);
        spec.target_pd_range = sc.range("target_pd_range", spec.target_pd_range);
        spec.prob_h0_range = sc.range("prob_h0_range", spec.prob_h0_range);
        spec.sampling_freq_hz = sc.number("sampling_freq_hz", spec.sampling_freq_hz);
        cfg.scenario = spec;
        cfg.network.links.assign(static_cast<std::size_t>(n_links), LinkSensing{});
        try {
            apply_scenario(cfg);
        } catch (const domain_error& e) {
            throw config_error(std::string("scenario: ") + e.what());
        }
    }

    if (top.has("experiment")) {
        Section ex(top.raw("experiment"), "experiment");
        ex.allow({"protocol", "tau_s", "w", "cycles", "replications", "seed", "tau_min_s",
                  "sweep"});
        auto& e = cfg.experiment;
        e.protocol = detail::parse_protocol(ex.string("protocol", "single"), "experiment.protocol");
        e.tau_s = ex.number("tau_s", e.tau_s);
        if (ex.has("w")) {
            e.w = ex.integer("w", 0);
        }
        e.cycles = ex.integer("cycles", e.cycles);
        e.replications = ex.integer("replications", e.replications);
        e.seed = ex.unsigned_integer("seed", e.seed);
        e.tau_min_s = ex.number("tau_min_s", e.tau_min_s);
        if (ex.has("sweep")) {
            const auto& s = ex.raw("sweep");
            if (!s.is_array()) {
                throw config_error("experiment.sweep: expected an array of axis specs");
            }
            for (const auto& a : s) {
                if (!a.is_string()) {
                    throw config_error("experiment.sweep: axis specs must be strings");
                }
                e.sweep.push_back(a.get<std::string>());
            }
        }
    }

    try {
        cfg.network.validate();
    } catch (const domain_error& e) {
        throw config_error(e.what());
    }
    return cfg;
}

/// Parses JSON text; syntax errors carry line and column.
inline AppConfig parse_config_text(const std::string& text)
{
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw config_error(std::string("malformed JSON: ") + e.what());
    }
    return parse_config(doc);
}

inline AppConfig load_config(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw config_error("cannot open config file '" + path + "'");
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    try {
        return parse_config_text(ss.str());
    } catch (const config_error& e) {
        throw config_error(path + ": " + e.what());
    }
}

/// Normalized document: reparsing it yields the same configuration.
inline nlohmann::json to_json(const AppConfig& cfg)
{
    using nlohmann::json;
    const auto& n = cfg.network;
    json doc;
    doc["network"] = {{"links", n.links.size()},
                      {"channels", n.num_channels},
                      {"cycle_s", n.cycle_s},
                      {"w_max", n.w_max},
                      {"mode", n.mode == AccessMode::basic ? "basic" : "rts"},
                      {"channel_factor", detail::channel_factor_name(n.channel_factor)}};
    doc["backoff"] = {{"w_min", n.backoff.w_min}, {"max_stage", n.backoff.max_stage}};
    const auto& t = n.timing;
    doc["timing_profile"] = {{"profile", cfg.timing_profile},
                             {"sigma_s", t.sigma_s},
                             {"sifs_s", t.sifs_s},
                             {"difs_s", t.difs_s},
                             {"prop_delay_s", t.prop_delay_s},
                             {"phy_header_bits", t.phy_header_bits},
                             {"mac_header_bits", t.mac_header_bits},
                             {"payload_bits", t.payload_bits},
                             {"ack_bits", t.ack_bits},
                             {"rts_bits", t.rts_bits},
                             {"cts_bits", t.cts_bits},
                             {"bitrate_bps", t.bitrate_bps}};
    if (cfg.scenario) {
        const auto& s = *cfg.scenario;
        doc["scenario"] = {{"seed", s.seed},
                           {"homogeneous", s.homogeneous},
                           {"snr_db_range", {s.snr_db_range.low, s.snr_db_range.high}},
                           {"target_pd_range", {s.target_pd_range.low, s.target_pd_range.high}},
                           {"prob_h0_range", {s.prob_h0_range.low, s.prob_h0_range.high}},
                           {"sampling_freq_hz", s.sampling_freq_hz}};
    } else if (n.homogeneous()) {
        doc["sensing"] = detail::sensing_to_json(n.links.front().channel(0));
    } else {
        json links = json::array();
        for (const auto& link : n.links) {
            if (link.channels.size() == 1) {
                links.push_back(detail::sensing_to_json(link.channels.front()));
            } else {
                json chans = json::array();
                for (const auto& c : link.channels) {
                    chans.push_back(detail::sensing_to_json(c));
                }
                links.push_back({{"channels", chans}});
            }
        }
        doc["sensing"] = links;
    }
    const auto& e = cfg.experiment;
    doc["experiment"] = {{"protocol", to_string(e.protocol)},
                         {"tau_s", e.tau_s},
                         {"w", cfg.w()},
                         {"cycles", e.cycles},
                         {"replications", e.replications},
                         {"seed", e.seed},
                         {"tau_min_s", e.tau_min_s},
                         {"sweep", e.sweep}};
    return doc;
}

} // namespace cogmac
