// dynamics.hpp - mean-field integration of the coupled atom-field equations
//
// Envelope equations in the per-mode rotating frames, with Delta the
// cavity-minus-atom detuning of each (mode, cell) pair and chi the real
// coupling along the trajectory:
//
//   d sigma_z    = -4 Re( chi sigma_plus a~ e^{-i Delta t} )
//   d sigma_plus =  chi sigma_z conj(a~) e^{+i Delta t}
//   d a~         = -Gamma a~ + sum_cells N chi conj(sigma_plus) e^{+i Delta t}
//   d leaked     =  sum_modes 2 Gamma |a~|^2
//
// With Gamma = 0 this set conserves sum N (sigma_z + 1)/2 + |a~|^2 exactly
// and conserves every cell's Bloch length for any Gamma; the leaked photon
// integral extends the first invariant to lossy runs.
//
// Two kernels compute the same derivative: a plain serial reference and an
// OpenMP version parallel over cells. The parallel field reduction uses
// fixed-size chunks summed in index order, so results do not depend on the
// thread count.

#pragma once

#include "rng.hpp"
#include "system.hpp"

namespace casimir {

enum class Kernel { serial, parallel };

struct RunOptions {
    double dt = 0.0;       // 0 -> auto: min(T_SR/200, 0.2/Gamma, 0.2/max detuning)
    double t_max = 0.0;    // 0 -> auto from the transit geometry
    int output_stride = 100;
    bool dt_guard_override = false;  // permit dt > T_SR/50
    bool force_lossless = false;     // zero cavity loss (conservation diagnostics)
    Kernel kernel = Kernel::serial;
    CollisionModel collisions;
    double exit_coupling_fraction = 1e-6;  // of the antinode coupling
};

struct ObservableRow {
    double t = 0.0;
    double photons = 0.0;
    double inversion = 0.0;
    double bloch_length = 0.0;
    double coupling_profile = 0.0;
    double emitted_power = 0.0;
};

// One derivative evaluation; `out` takes the shape of `state`.
void eval_derivatives(const CavitySystem& sys, const SystemState& state, SystemState& out,
                      Kernel kernel = Kernel::serial);

// One classical 4th-order step; throws NumericalBlowup when non-finite
// values appear.
SystemState step_rk4(const CavitySystem& sys, const SystemState& state, double dt,
                     Kernel kernel = Kernel::serial);

// Random phase kick per cell modelling collisions: sigma_plus *= e^{i xi},
// xi ~ Normal(0, 2 rate dt / N_cell). Inversion and |sigma_plus| unchanged.
void apply_collisions(SystemState& state, double dt, const CollisionModel& model,
                      const PhaseSpaceGrid& grid, Rng& rng);

// Observable extraction for one output row.
ObservableRow observables(const CavitySystem& sys, const SystemState& state);

// Integrate from the given initial state until the beam leaves the mode
// region or t_max, recording observables every output stride.
RunResult run(const CavitySystem& sys, const SystemState& initial, const RunOptions& opt);

// auto step size / time span used when RunOptions has zeros
double resolve_dt(const CavitySystem& sys, const RunOptions& opt);
double resolve_t_max(const CavitySystem& sys, const RunOptions& opt);

// Emission-burst peak of a photon series: the global maximum after skipping
// an initial monotone decay of a seeded field (when a later rise exists),
// refined by a parabola through the three bracketing samples.
struct PeakEstimate {
    double time = 0.0;
    double value = 0.0;
    std::size_t index = 0;
};
PeakEstimate find_burst_peak(const std::vector<double>& t, const std::vector<double>& y);

}  // namespace casimir
