// casimir_cli.cpp - command-line front end
//
// Subcommands: config, timescales, casimir, detectability, run, pair, sweep,
// check. Exit codes: 0 success, 1 usage/config error, 2 numerical failure,
// 3 failed self-check.

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <iostream>

#include "casimir/checks.hpp"
#include "casimir/config.hpp"
#include "casimir/errors.hpp"
#include "casimir/io.hpp"
#include "casimir/metrics.hpp"
#include "casimir/version.hpp"

namespace fs = std::filesystem;
using namespace casimir;

namespace {

struct CommonOpts {
    std::string config;
    std::string out = ".";
    std::string model;
    std::string seed;
    int workers = -1;
    std::vector<std::string> overrides;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--config", o.config, "configuration file (defaults used when omitted)");
    cmd->add_option("--out", o.out, "output directory");
    cmd->add_option("--seed", o.seed, "master seed (u64)");
    cmd->add_option("--workers", o.workers, "worker threads for sweeps");
    cmd->add_option("--model", o.model, "integration model: full|reduced");
    cmd->add_option("--override,-O", o.overrides, "config override key=value (repeatable)");
}

RunConfig build_config(const CommonOpts& o) {
    std::vector<std::string> ov = o.overrides;
    if (!o.model.empty()) ov.push_back("run.model=" + o.model);
    if (!o.seed.empty()) ov.push_back("run.seed=" + o.seed);
    if (o.workers >= 0) ov.push_back("run.workers=" + std::to_string(o.workers));
    return load_config(o.config, ov);
}

std::string now_string() {
    const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
    return buf;
}

std::string join(const std::string& dir, const std::string& name) {
    return (fs::path(dir) / name).string();
}

void ensure_dir(const std::string& dir) { fs::create_directories(dir); }

int cmd_config(const CommonOpts& o, bool defaults_only) {
    if (defaults_only) {
        std::cout << config_defaults().serialize();
        return 0;
    }
    std::cout << build_config(o).resolved().serialize();
    return 0;
}

int cmd_timescales(const CommonOpts& o) {
    const RunConfig cfg = build_config(o);
    const Timescales ts = compute_timescales(cfg.species, cfg.cavity, cfg.beam.n_at,
                                             cfg.beam.temperature, cfg.ic.n_photons);
    std::cout << "t1_free_s = " << format_sci(ts.t1_free) << "\n"
              << "t1_cav_s = " << format_sci(ts.t1_cav) << "\n"
              << "t_sr_s = " << format_sci(ts.t_sr) << "\n"
              << "gamma_inv_s = " << format_sci(ts.gamma_inv) << "\n"
              << "t2_star_s = " << format_sci(ts.t2_star) << "\n"
              << "t_delay_s = " << format_sci(ts.t_delay) << "\n"
              << "t_delay_jitter_s = " << format_sci(ts.t_delay_jitter) << "\n"
              << "burst_peak_power_w = "
              << format_sci(
                     superradiant_peak_power(cfg.beam.n_at, cfg.cavity.omega, ts.t_sr))
              << "\n";
    return 0;
}

int cmd_casimir(const CommonOpts& o, double q_epsilon, double time) {
    RunConfig cfg = build_config(o);
    if (q_epsilon > 0.0) cfg.drive.epsilon = q_epsilon / cfg.cavity.quality;
    std::cout << "epsilon = " << format_sci(cfg.drive.epsilon) << "\n"
              << "quality = " << format_sci(cfg.cavity.quality) << "\n"
              << "q_epsilon = " << format_sci(cfg.drive.epsilon * cfg.cavity.quality) << "\n"
              << "hold_time_s = " << format_sci(cfg.cavity.hold_time()) << "\n";
    if (time >= 0.0)
        std::cout << "n_photons_at_t = "
                  << format_sci(casimir_photon_number(cfg.drive, cfg.cavity, time,
                                                      cfg.allow_off_resonance))
                  << "\n";
    std::cout << "n_saturation = " << format_sci(casimir_saturation(cfg.drive, cfg.cavity)) << "\n"
              << "saturated_power_w = " << format_sci(casimir_power(cfg.drive, cfg.cavity))
              << "\n";
    return 0;
}

int cmd_detectability(const CommonOpts& o, double eps_min, double eps_max, int eps_steps,
                      double q_min, double q_max, int q_steps) {
    const RunConfig cfg = build_config(o);
    ensure_dir(o.out);
    const std::string path = join(o.out, "detectability.csv");
    write_detectability_csv(path, cfg.cavity, cfg.drive.n0, cfg.detector, eps_min, eps_max,
                            eps_steps, q_min, q_max, q_steps);
    std::cout << "wrote " << path << "\n";
    return 0;
}

int cmd_run(const CommonOpts& o) {
    const RunConfig cfg = build_config(o);
    ensure_dir(o.out);
    ManifestInfo info;
    info.started = now_string();
    const RunResult result = execute(cfg);
    info.finished = now_string();
    const std::string series = join(o.out, "series.csv");
    const std::string summary = join(o.out, "summary.txt");
    write_series_csv(series, result.series);
    write_summary(summary, result);
    info.outputs = {series, summary};
    write_manifest(join(o.out, "manifest.txt"), cfg, info);
    std::cout << "model = " << result.model << "\n"
              << "peak_photons = " << format_sci(result.peak_photons) << "\n"
              << "peak_time_s = " << format_sci(result.peak_time) << "\n"
              << "ground_pop_resonant = " << format_sci(result.ground_pop_resonant) << "\n"
              << "wrote " << series << "\n";
    return 0;
}

int cmd_pair(const CommonOpts& o) {
    const RunConfig cfg = build_config(o);
    ensure_dir(o.out);
    ManifestInfo info;
    info.started = now_string();
    const PairOutcome pair = run_pair(cfg);
    info.finished = now_string();
    const std::string sr = join(o.out, "series_sr.csv");
    const std::string sf = join(o.out, "series_sf.csv");
    const std::string metrics = join(o.out, "metrics.csv");
    write_series_csv(sr, pair.sr.series);
    write_series_csv(sf, pair.sf.series);
    write_metrics_csv(metrics, {pair.metrics});
    write_summary(join(o.out, "summary_sr.txt"), pair.sr);
    write_summary(join(o.out, "summary_sf.txt"), pair.sf);
    info.outputs = {sr, sf, metrics};
    write_manifest(join(o.out, "manifest.txt"), cfg, info);
    std::cout << "eta = " << format_sci(pair.metrics.eta) << "\n"
              << "xi = " << format_sci(pair.metrics.xi) << "\n"
              << "rho_gnd_sr_pct = " << format_sci(pair.metrics.rho_gnd_sr) << "\n"
              << "wrote " << metrics << "\n";
    return 0;
}

int cmd_sweep(const CommonOpts& o) {
    const RunConfig cfg = build_config(o);
    if (cfg.sweep_axes.empty())
        throw ConfigError("sweep: config declares no sweep.axis.* entries");
    ensure_dir(o.out);
    ManifestInfo info;
    info.started = now_string();
    const std::vector<MetricsRow> rows = run_sweep(cfg);
    info.finished = now_string();
    const std::string metrics = join(o.out, "metrics.csv");
    write_metrics_csv(metrics, rows);
    info.outputs = {metrics};
    write_manifest(join(o.out, "manifest.txt"), cfg, info);
    int failures = 0;
    for (const auto& r : rows)
        if (!r.error.empty()) ++failures;
    std::cout << "points = " << rows.size() << "\n"
              << "failed_points = " << failures << "\n"
              << "wrote " << metrics << "\n";
    return 0;
}

int cmd_check() {
    const std::vector<CheckResult> results = run_self_checks();
    bool all_ok = true;
    for (const auto& r : results) {
        std::cout << (r.passed ? "[PASS] " : "[FAIL] ") << r.name
                  << "  (max error " << format_sci(r.metric) << ", limit "
                  << format_sci(r.limit) << ")\n";
        all_ok = all_ok && r.passed;
    }
    return all_ok ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{std::string("cavity superradiance / parametric photon simulator (v") +
                 kVersion + ")"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    CommonOpts opts;

    bool defaults_only = false;
    CLI::App* config_cmd = app.add_subcommand("config", "print the (resolved) configuration");
    config_cmd->add_flag("--defaults", defaults_only, "print built-in defaults");
    add_common(config_cmd, opts);

    CLI::App* ts_cmd = app.add_subcommand("timescales", "characteristic times for a config");
    add_common(ts_cmd, opts);

    double q_epsilon = 0.0, cas_time = -1.0;
    CLI::App* cas_cmd = app.add_subcommand("casimir", "parametric photon growth numbers");
    cas_cmd->add_option("--q-epsilon", q_epsilon, "set epsilon from a Q*epsilon product");
    cas_cmd->add_option("--time", cas_time, "also evaluate the photon number at time t (s)");
    add_common(cas_cmd, opts);

    double eps_min = 1e-11, eps_max = 1e-6, q_min = 1e5, q_max = 1e12;
    int eps_steps = 26, q_steps = 36;
    CLI::App* det_cmd = app.add_subcommand("detectability", "(epsilon, Q) region grid -> CSV");
    det_cmd->add_option("--eps-min", eps_min);
    det_cmd->add_option("--eps-max", eps_max);
    det_cmd->add_option("--eps-steps", eps_steps);
    det_cmd->add_option("--q-min", q_min);
    det_cmd->add_option("--q-max", q_max);
    det_cmd->add_option("--q-steps", q_steps);
    add_common(det_cmd, opts);

    CLI::App* run_cmd = app.add_subcommand("run", "single run -> series CSV + manifest");
    add_common(run_cmd, opts);

    CLI::App* pair_cmd = app.add_subcommand("pair", "seeded + unseeded pair -> metrics");
    add_common(pair_cmd, opts);

    CLI::App* sweep_cmd = app.add_subcommand("sweep", "parameter sweep -> metrics CSV");
    add_common(sweep_cmd, opts);

    CLI::App* check_cmd = app.add_subcommand("check", "run the built-in invariant suite");
    (void)check_cmd;

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;  // usage errors exit 1
    }

    try {
        if (config_cmd->parsed()) return cmd_config(opts, defaults_only);
        if (ts_cmd->parsed()) return cmd_timescales(opts);
        if (cas_cmd->parsed()) return cmd_casimir(opts, q_epsilon, cas_time);
        if (det_cmd->parsed())
            return cmd_detectability(opts, eps_min, eps_max, eps_steps, q_min, q_max, q_steps);
        if (run_cmd->parsed()) return cmd_run(opts);
        if (pair_cmd->parsed()) return cmd_pair(opts);
        if (sweep_cmd->parsed()) return cmd_sweep(opts);
        if (check_cmd->parsed()) return cmd_check();
    } catch (const NumericalBlowup& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 2;
    } catch (const RegimeError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
