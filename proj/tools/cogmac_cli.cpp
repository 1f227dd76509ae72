// cogmac: analyze, optimize, simulate and sweep cognitive MAC throughput.
//
// Exit codes: 0 ok, 2 config error, 3 infeasible parameters, 4 solver
// non-convergence, 1 anything else.

#include <cstdint>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "cogmac/cogmac.hpp"

namespace {

using namespace cogmac;

struct Options {
    std::string config_path;
    std::string out;
    std::optional<std::uint64_t> seed;
    std::optional<std::int64_t> cycles;
    std::optional<std::int64_t> replications;
    std::optional<std::string> mode;
    std::optional<std::string> protocol;
    std::optional<double> tau;
    std::optional<std::int64_t> w;
    std::vector<std::string> axes;
    std::size_t jobs = 1;
};

std::size_t default_jobs()
{
    if (const char* env = std::getenv("COGMAC_JOBS")) {
        try {
            const long v = std::stol(env);
            if (v > 0) {
                return static_cast<std::size_t>(v);
            }
        } catch (const std::exception&) {
        }
        throw config_error("COGMAC_JOBS must be a positive integer");
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

AppConfig load(const Options& o)
{
    AppConfig cfg = load_config(o.config_path);
    auto& e = cfg.experiment;
    if (o.mode) {
        cfg.network.mode = detail::parse_mode(*o.mode, "--mode");
    }
    if (o.protocol) {
        e.protocol = detail::parse_protocol(*o.protocol, "--protocol");
    }
    if (o.tau) {
        e.tau_s = *o.tau;
    }
    if (o.w) {
        e.w = *o.w;
    }
    if (o.seed) {
        e.seed = *o.seed;
    }
    if (o.cycles) {
        e.cycles = *o.cycles;
    }
    if (o.replications) {
        e.replications = *o.replications;
    }
    if (!o.axes.empty()) {
        e.sweep = o.axes;
    }
    return cfg;
}

/// Writes `csv` to --out (plus its manifest), or to stdout without --out.
void emit(const Options& o, const std::string& subcommand, const AppConfig& cfg,
          const CsvTable& csv, const nlohmann::json* summary)
{
    if (o.out.empty()) {
        if (summary) {
            std::cout << summary->dump(2) << "\n";
        } else {
            csv.write(std::cout);
        }
        return;
    }
    write_text(o.out, csv.str());
    RunManifest m;
    m.subcommand = subcommand;
    m.config_path = o.config_path;
    m.resolved_config = to_json(cfg);
    m.seed = cfg.experiment.seed;
    m.timestamp = utc_timestamp();
    m.outputs = {o.out};
    write_text(o.out + ".manifest.json", to_json(m).dump(2) + "\n");
    if (summary) {
        std::cout << summary->dump(2) << "\n";
    }
}

void cmd_analyze(const Options& o)
{
    const auto cfg = load(o);
    const auto report = analyze(cfg.network, cfg.experiment.protocol, cfg.experiment.tau_s, cfg.w());
    const auto j = to_json(report);
    emit(o, "analyze", cfg, analysis_csv(report), &j);
}

void cmd_optimize(const Options& o)
{
    const auto cfg = load(o);
    JointSearchOptions opt;
    opt.tau = cfg.tau_search();
    opt.jobs = o.jobs;
    const auto result = optimize_joint(cfg.network, cfg.experiment.protocol, opt);
    const auto j = to_json(result);
    emit(o, "optimize", cfg, curve_csv(result), &j);
}

void cmd_simulate(const Options& o)
{
    const auto cfg = load(o);
    const auto& e = cfg.experiment;
    const SimConfig sim{cfg.network, e.protocol, cfg.w(), e.tau_s, e.cycles, e.seed};
    const auto reports = replicate(sim, e.replications, o.jobs);
    const auto pooled = pool(reports);
    nlohmann::json j{{"replications", reports.size()},
                     {"pooled_nt", pooled.mean},
                     {"pooled_ci95", pooled.ci95_halfwidth}};
    auto list = nlohmann::json::array();
    for (const auto& r : reports) {
        list.push_back(to_json(r));
    }
    j["reports"] = list;
    const auto csv = simulation_csv(reports);
    emit(o, "simulate", cfg, csv, o.out.empty() ? nullptr : &j);
}

void cmd_sweep(const Options& o)
{
    const auto cfg = load(o);
    if (cfg.experiment.sweep.empty()) {
        throw config_error("sweep: no axes (use --axis or experiment.sweep)");
    }
    std::vector<Axis> axes;
    for (const auto& spec : cfg.experiment.sweep) {
        axes.push_back(parse_axis(spec));
    }
    const auto rows = run_sweep(cfg, axes, o.jobs);
    emit(o, "sweep", cfg, sweep_csv(axes, rows), nullptr);
}

void add_common(CLI::App* sub, Options& o)
{
    sub->add_option("--config", o.config_path, "JSON configuration or run manifest")
        ->required();
    sub->add_option("--out", o.out, "output CSV path (a manifest is written beside it)");
    sub->add_option("--seed", o.seed, "random seed");
    sub->add_option("--cycles", o.cycles, "simulated cycles per replication");
    sub->add_option("--replications", o.replications, "independent replications");
    sub->add_option("--jobs", o.jobs, "worker threads (default: $COGMAC_JOBS)");
    sub->add_option("--mode", o.mode, "access mode: basic or rts");
    sub->add_option("--protocol", o.protocol, "single or multi");
    sub->add_option("--tau", o.tau, "sensing time in seconds");
    sub->add_option("--w", o.w, "minimum contention window");
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Throughput analysis, optimization and simulation of sensing-based cognitive MAC "
                 "protocols"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kToolVersion);

    Options o;
    try {
        o.jobs = default_jobs();
    } catch (const config_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }

    auto* analyze_cmd = app.add_subcommand("analyze", "throughput and intermediates at (tau, W)");
    auto* optimize_cmd = app.add_subcommand("optimize", "joint (tau, W) optimization");
    auto* simulate_cmd = app.add_subcommand("simulate", "Monte Carlo simulation");
    auto* sweep_cmd = app.add_subcommand("sweep", "throughput over a grid of tau, w and n");
    for (auto* sub : {analyze_cmd, optimize_cmd, simulate_cmd, sweep_cmd}) {
        add_common(sub, o);
    }
    sweep_cmd->add_option("--axis", o.axes, "NAME=VALUES with NAME in {tau, w, n}");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (o.jobs < 1) {
            throw config_error("--jobs must be positive");
        }
        if (*analyze_cmd) {
            cmd_analyze(o);
        } else if (*optimize_cmd) {
            cmd_optimize(o);
        } else if (*simulate_cmd) {
            cmd_simulate(o);
        } else {
            cmd_sweep(o);
        }
    } catch (const config_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const solver_error& e) {
        std::cerr << "solver error: " << e.what() << "\n";
        return 4;
    } catch (const domain_error& e) {
        std::cerr << "infeasible: " << e.what() << "\n";
        return 3;
    } catch (const unsupported_mode& e) {
        std::cerr << "infeasible: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
