// reduced.hpp - atom-only equations after adiabatic elimination of the field
//
// Valid when the cavity decays much faster than the collective emission
// (Gamma * T_SR >> 1). The field integrates to a memory kernel
//   g(t) = (1 - exp[(-i Delta - Gamma) t]) / (i Delta + Gamma)
// and each cell is driven by the decaying initial field plus feedback from
// every cell accumulated over one cavity lifetime:
//
//   d sigma_plus_j = chi_j sigma_z_j e^{+i Delta_j t}
//                    [ conj(a0) e^{-Gamma t} + S(t) ]
//   d sigma_z_j    = -4 Re( chi_j sigma_plus_j e^{-i Delta_j t}
//                    [ a0 e^{-Gamma t} + conj(S(t)) ] )
//   S(t) = sum_i N_i chi_i conj(g_i(t)) sigma_plus_i e^{-i Delta_i t}
//
// The double sum form expands S into per-pair phases e^{i(Delta_j-Delta_i)t}
// and is evaluated pairwise (O(cells^2), serial reference and OpenMP); the
// factored form accumulates S once (O(cells)) and must agree to 1e-12.
// The emitted intensity is reconstructed as |a0 e^{-Gamma t} + conj(S)|^2.

#pragma once

#include "dynamics.hpp"

namespace casimir {

struct GreenKernel {
    double detuning = 0.0;  // Delta (cavity minus atom), rad/s
    double gamma = 0.0;     // Gamma, 1/s
};

// field memory kernel; |g| <= 2 / sqrt(Delta^2 + Gamma^2)
Complex green_g(const GreenKernel& kernel, double t);

// Relative error between chi*(r_j) chi(r_i) g(Delta=0, t >> 1/Gamma) and
// V U*(r_j) U(r_i) / (2 T1_cav); an algebraic identity of the coupling
// normalization, so the result is at rounding level for any valid inputs.
double coefficient_identity_check(const Vec3& r_i, const Vec3& r_j, const CavitySystem& sys);

struct RegimeGuard {
    double gamma_tsr = 0.0;   // Gamma * T_SR
    double threshold = 10.0;  // minimum admissible value

    bool satisfied() const { return gamma_tsr >= threshold; }
};

RegimeGuard make_regime_guard(const CavitySystem& sys, double threshold = 10.0);

enum class ReducedKernel { direct, direct_parallel, factored };

struct ReducedOptions {
    double dt = 0.0;     // 0 -> auto (same rule as the full model, loss excluded)
    double t_max = 0.0;  // 0 -> auto from the transit geometry
    int output_stride = 100;
    bool regime_override = false;
    double regime_threshold = 10.0;
    ReducedKernel kernel = ReducedKernel::direct;
    CollisionModel collisions;
    double exit_coupling_fraction = 1e-6;
};

// One derivative evaluation; `initial_field` is a~(0) of the fundamental mode.
void eval_reduced_derivatives(const CavitySystem& sys, const SystemState& state,
                              Complex initial_field, SystemState& out,
                              ReducedKernel kernel = ReducedKernel::direct);

// Field envelope rebuilt from the atomic state at time state.time.
Complex reconstruct_field(const CavitySystem& sys, const SystemState& state,
                          Complex initial_field);

// Integrate the reduced equations; RunResult in the full-model schema with
// model = "reduced". Throws RegimeError when the guard fails without an
// override; instability outside the validity regime surfaces as
// NumericalBlowup rather than being silently damped.
RunResult run_reduced(const CavitySystem& sys, const SystemState& initial,
                      const ReducedOptions& opt);

struct ComparisonReport {
    double peak_time_ratio = 0.0;       // reduced / full
    double peak_intensity_ratio = 0.0;  // reduced / full
    RunResult full;
    RunResult reduced;
};

// Run both integrators from the same initial state and report peak ratios.
ComparisonReport compare_full_reduced(const CavitySystem& sys, const SystemState& initial,
                                      const RunOptions& full_opt, const ReducedOptions& red_opt);

}  // namespace casimir
