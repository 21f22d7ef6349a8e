#include "metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "errors.hpp"

namespace casimir {

MetricsRow compute_metrics(const RunResult& sr, const RunResult& sf, const RunConfig& cfg) {
    if (sr.config_fingerprint != sf.config_fingerprint)
        throw PairingError("compute_metrics: SR/SF results come from different configurations");
    if (sr.model != sf.model)
        throw PairingError("compute_metrics: SR/SF results come from different models");
    if (sf.n_seed_photons != 0.0)
        throw PairingError("compute_metrics: reference run carries seed photons");

    MetricsRow row;
    row.n_cas_max = sr.n_seed_photons;
    row.n_at = cfg.beam.n_at;
    row.v_at = cfg.beam.speed;
    row.quality = cfg.cavity.quality;
    row.t_at = cfg.beam.temperature;
    row.peak_photons_sr = sr.peak_photons;
    row.rho_gnd_sr = 100.0 * sr.ground_pop_resonant;
    row.t_delay_sr = sr.peak_time;

    if (sf.peak_photons > 0.0) {
        row.eta = sr.peak_photons / sf.peak_photons;
    } else {
        row.eta = std::numeric_limits<double>::infinity();
        row.sf_zero_flag = true;
    }
    if (sf.ground_pop_resonant > 0.0) {
        row.xi = sr.ground_pop_resonant / sf.ground_pop_resonant;
    } else {
        row.xi = std::numeric_limits<double>::infinity();
        row.sf_zero_flag = true;
    }
    return row;
}

PairOutcome run_pair(const RunConfig& cfg) {
    RunConfig sr_cfg = cfg;
    sr_cfg.ic.kind = InitialCondition::Kind::casimir_seeded;

    RunConfig sf_cfg = cfg;
    sf_cfg.ic.kind = InitialCondition::Kind::superfluorescence;
    sf_cfg.ic.n_photons = 0.0;

    PairOutcome out;
    out.sr = execute(sr_cfg);
    out.sf = execute(sf_cfg);
    out.metrics = compute_metrics(out.sr, out.sf, cfg);
    return out;
}

long long sweep_point_count(const RunConfig& base) {
    long long n = 1;
    for (const auto& axis : base.sweep_axes) {
        n *= static_cast<long long>(axis.values.size());
        if (n <= 0 || n > base.sweep_limit)
            throw ConfigError("sweep grid exceeds sweep.limit = " +
                              std::to_string(base.sweep_limit));
    }
    return n;
}

RunConfig sweep_point_config(const RunConfig& base, long long index) {
    KeyValues kv = base.resolved();
    // decode row-major index, first axis slowest
    long long radix = 1;
    for (const auto& axis : base.sweep_axes) radix *= static_cast<long long>(axis.values.size());
    long long rem = index;
    for (const auto& axis : base.sweep_axes) {
        radix /= static_cast<long long>(axis.values.size());
        const long long pick = rem / radix;
        rem %= radix;
        kv.set(axis.param, axis.values[static_cast<std::size_t>(pick)]);
    }
    RunConfig cfg = config_from_keyvalues(kv);
    cfg.sweep_axes.clear();
    cfg.master_seed = derive_seed(base.master_seed, static_cast<std::uint64_t>(index));
    cfg.ic.seed = derive_seed(cfg.master_seed, 1);
    cfg.run_opts.collisions.seed = derive_seed(cfg.master_seed, 2);
    cfg.reduced_opts.collisions.seed = cfg.run_opts.collisions.seed;
    return cfg;
}

namespace {

MetricsRow averaged_pair_metrics(const RunConfig& point, int seeds_per_point) {
    if (seeds_per_point <= 1) return run_pair(point).metrics;
    // seeded ensembles: average metrics over per-seed sub-runs
    MetricsRow acc;
    for (int s = 0; s < seeds_per_point; ++s) {
        RunConfig sub = point;
        sub.master_seed = derive_seed(point.master_seed, 1000 + static_cast<std::uint64_t>(s));
        sub.ic.seed = derive_seed(sub.master_seed, 1);
        sub.run_opts.collisions.seed = derive_seed(sub.master_seed, 2);
        sub.reduced_opts.collisions.seed = sub.run_opts.collisions.seed;
        const MetricsRow m = run_pair(sub).metrics;
        if (s == 0) {
            acc = m;
        } else {
            acc.peak_photons_sr += m.peak_photons_sr;
            acc.eta += m.eta;
            acc.rho_gnd_sr += m.rho_gnd_sr;
            acc.xi += m.xi;
            acc.t_delay_sr += m.t_delay_sr;
            acc.sf_zero_flag = acc.sf_zero_flag || m.sf_zero_flag;
        }
    }
    const double inv = 1.0 / seeds_per_point;
    acc.peak_photons_sr *= inv;
    acc.eta *= inv;
    acc.rho_gnd_sr *= inv;
    acc.xi *= inv;
    acc.t_delay_sr *= inv;
    return acc;
}

}  // namespace

std::vector<MetricsRow> run_sweep(const RunConfig& base) {
    const long long n = sweep_point_count(base);
    std::vector<MetricsRow> rows(static_cast<std::size_t>(n));

#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) num_threads( \
    base.workers > 0 ? base.workers : omp_get_max_threads())
#endif
    for (long long i = 0; i < n; ++i) {
        MetricsRow row;
        try {
            const RunConfig point = sweep_point_config(base, i);
            row = averaged_pair_metrics(point, base.seeds_per_point);
        } catch (const std::exception& e) {
            std::string msg = e.what();
            std::replace(msg.begin(), msg.end(), ',', ';');
            std::replace(msg.begin(), msg.end(), '\n', ' ');
            row.error = msg;
            try {
                const RunConfig point = sweep_point_config(base, i);
                row.n_cas_max = point.ic.n_photons;
                row.n_at = point.beam.n_at;
                row.v_at = point.beam.speed;
                row.quality = point.cavity.quality;
                row.t_at = point.beam.temperature;
            } catch (const std::exception&) {
            }
        }
        rows[static_cast<std::size_t>(i)] = row;
    }
    return rows;
}

}  // namespace casimir
