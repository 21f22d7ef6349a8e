// metrics.hpp - SR/SF paired execution and discrimination metrics
//
// eta is the peak-intensity ratio of the seeded run to the unseeded run and
// xi the analogous ratio of exit ground-state populations; together they
// quantify how well a seeded burst stands out of the spontaneous background.

#pragma once

#include "config.hpp"

namespace casimir {

struct MetricsRow {
    // inputs
    double n_cas_max = 0.0;
    double n_at = 0.0;
    double v_at = 0.0;      // m/s
    double quality = 0.0;
    double t_at = 0.0;      // K
    // outputs
    double peak_photons_sr = 0.0;
    double eta = 0.0;           // peak_SR / peak_SF
    double rho_gnd_sr = 0.0;    // percent
    double xi = 0.0;            // rho_SR / rho_SF
    double t_delay_sr = 0.0;    // s
    bool sf_zero_flag = false;  // SF peak or ground population was zero
    std::string error;          // empty on success
};

// Ratio metrics for one SR/SF pair. The two results must come from configs
// identical up to the initial photon number (checked via fingerprints).
MetricsRow compute_metrics(const RunResult& sr, const RunResult& sf, const RunConfig& cfg);

struct PairOutcome {
    RunResult sr;
    RunResult sf;
    MetricsRow metrics;
};

// Execute the seeded and unseeded runs with identical everything else.
PairOutcome run_pair(const RunConfig& cfg);

// Cartesian sweep over the config's axes; one MetricsRow per grid point in
// row-major order (first axis slowest), regardless of worker scheduling.
// Per-point failures are recorded in-row and the sweep continues.
std::vector<MetricsRow> run_sweep(const RunConfig& base);

// Grid point -> config (exposed for tests; index is row-major)
RunConfig sweep_point_config(const RunConfig& base, long long index);
long long sweep_point_count(const RunConfig& base);

}  // namespace casimir
