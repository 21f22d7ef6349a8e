#include "reduced.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "errors.hpp"
#include "state_ops.hpp"

namespace casimir {

using detail::add_scaled;
using detail::combine_rk4;
using detail::resize_like;
using detail::state_is_finite;

Complex green_g(const GreenKernel& kernel, double t) {
    if (t < 0.0) throw DomainError("green_g: t must be >= 0");
    if (kernel.gamma <= 0.0) throw DomainError("green_g: gamma must be > 0");
    const Complex pole{kernel.gamma, kernel.detuning};  // Gamma + i Delta
    return (1.0 - std::exp(-pole * t)) / pole;
}

double coefficient_identity_check(const Vec3& r_i, const Vec3& r_j, const CavitySystem& sys) {
    const GaussianMode& mode = sys.modes[0];
    const double gamma = sys.mode_loss[0];
    const double chi_i = sys.mode_chi_unit[0] * mode.amplitude(r_i);
    const double chi_j = sys.mode_chi_unit[0] * mode.amplitude(r_j);

    // long-time resonant kernel value 1/Gamma
    const double lhs = chi_j * chi_i / gamma;

    const double t1cav = t1_cavity(sys.species, mode.cavity, sys.consts);
    const double rhs =
        mode.cavity.mode_volume * mode.amplitude(r_j) * mode.amplitude(r_i) / (2.0 * t1cav);
    if (rhs == 0.0) return lhs == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    return std::abs(lhs - rhs) / std::abs(rhs);
}

RegimeGuard make_regime_guard(const CavitySystem& sys, double threshold) {
    RegimeGuard guard;
    guard.threshold = threshold;
    const double t1cav = t1_cavity(sys.species, sys.modes[0].cavity, sys.consts);
    const double t_sr = t1cav / sys.grid.total_atoms();
    guard.gamma_tsr = sys.mode_loss[0] * t_sr;
    return guard;
}

namespace {

struct PerCell {
    double chi = 0.0;
    Complex g = {0.0, 0.0};
    Complex rot = {1.0, 0.0};  // e^{+i Delta t}
};

void fill_per_cell(const CavitySystem& sys, double t, std::vector<PerCell>& pc) {
    const std::size_t nc = sys.n_cells();
    pc.resize(nc);
    const double gamma = sys.mode_loss[0];
    for (std::size_t c = 0; c < nc; ++c) {
        const double delta = sys.detuning(0, c);
        pc[c].chi = sys.coupling(0, c, t);
        pc[c].g = green_g({delta, gamma}, t);
        pc[c].rot = std::polar(1.0, delta * t);
    }
}

// factored accumulation S(t) = sum_i N_i chi_i conj(g_i) sigma_plus_i e^{-i Delta_i t}
Complex accumulate_feedback(const CavitySystem& sys, const SystemState& s,
                            const std::vector<PerCell>& pc) {
    Complex sum{0.0, 0.0};
    for (std::size_t i = 0; i < sys.n_cells(); ++i)
        sum += sys.grid.cells[i].count * pc[i].chi * std::conj(pc[i].g) * s.sigma_plus[i] *
               std::conj(pc[i].rot);
    return sum;
}

void reduced_factored(const CavitySystem& sys, const SystemState& s, Complex a0, SystemState& d,
                      std::vector<PerCell>& pc) {
    fill_per_cell(sys, s.time, pc);
    const double gamma = sys.mode_loss[0];
    const double decay = std::exp(-gamma * s.time);
    const Complex S = accumulate_feedback(sys, s, pc);
    const Complex drive_plus = std::conj(a0) * decay + S;        // multiplies e^{+i Delta_j t}
    const Complex field = a0 * decay + std::conj(S);             // reconstructed envelope

    for (std::size_t j = 0; j < sys.n_cells(); ++j) {
        d.sigma_plus[j] = pc[j].chi * s.sigma_z[j] * pc[j].rot * drive_plus;
        d.sigma_z[j] =
            -4.0 * std::real(pc[j].chi * s.sigma_plus[j] * std::conj(pc[j].rot) * field);
    }
    d.leaked = 0.0;
}

// pairwise double sum, as derived: per pair phase e^{i(Delta_j - Delta_i) t}
template <bool Parallel>
void reduced_direct(const CavitySystem& sys, const SystemState& s, Complex a0, SystemState& d,
                    std::vector<PerCell>& pc) {
    fill_per_cell(sys, s.time, pc);
    const double gamma = sys.mode_loss[0];
    const double decay = std::exp(-gamma * s.time);
    const double t = s.time;
    const std::size_t nc = sys.n_cells();

#ifdef _OPENMP
#pragma omp parallel for schedule(static) if (Parallel)
#endif
    for (long long j = 0; j < static_cast<long long>(nc); ++j) {
        const std::size_t cj = static_cast<std::size_t>(j);
        const double delta_j = sys.detuning(0, cj);
        Complex feedback_plus{0.0, 0.0};  // sum_i N_i chi_i conj(g_i) sigma_plus_i e^{i Delta_ji t}
        for (std::size_t i = 0; i < nc; ++i) {
            const Complex pair_rot = std::polar(1.0, (delta_j - sys.detuning(0, i)) * t);
            feedback_plus += sys.grid.cells[i].count * pc[i].chi * std::conj(pc[i].g) *
                             s.sigma_plus[i] * pair_rot;
        }
        const Complex drive_plus = std::conj(a0) * decay * pc[cj].rot + feedback_plus;
        d.sigma_plus[cj] = pc[cj].chi * s.sigma_z[cj] * drive_plus;
    }
#ifdef _OPENMP
#pragma omp parallel for schedule(static) if (Parallel)
#endif
    for (long long j = 0; j < static_cast<long long>(nc); ++j) {
        const std::size_t cj = static_cast<std::size_t>(j);
        const double delta_j = sys.detuning(0, cj);
        Complex feedback_minus{0.0, 0.0};  // sum_i N_i chi_i g_i sigma_minus_i e^{-i Delta_ji t}
        for (std::size_t i = 0; i < nc; ++i) {
            const Complex pair_rot = std::polar(1.0, -(delta_j - sys.detuning(0, i)) * t);
            feedback_minus += sys.grid.cells[i].count * pc[i].chi * pc[i].g *
                              std::conj(s.sigma_plus[i]) * pair_rot;
        }
        const Complex drive_minus = a0 * decay * std::conj(pc[cj].rot) + feedback_minus;
        d.sigma_z[cj] = -4.0 * std::real(pc[cj].chi * s.sigma_plus[cj] * drive_minus);
    }
    d.leaked = 0.0;
}

}  // namespace

void eval_reduced_derivatives(const CavitySystem& sys, const SystemState& state,
                              Complex initial_field, SystemState& out, ReducedKernel kernel) {
    if (sys.n_modes() != 1)
        throw DomainError("reduced model: single-mode systems only");
    resize_like(out, state);
    std::vector<PerCell> pc;
    switch (kernel) {
        case ReducedKernel::factored:
            reduced_factored(sys, state, initial_field, out, pc);
            break;
        case ReducedKernel::direct_parallel:
            reduced_direct<true>(sys, state, initial_field, out, pc);
            break;
        case ReducedKernel::direct:
        default:
            reduced_direct<false>(sys, state, initial_field, out, pc);
            break;
    }
}

Complex reconstruct_field(const CavitySystem& sys, const SystemState& state,
                          Complex initial_field) {
    std::vector<PerCell> pc;
    fill_per_cell(sys, state.time, pc);
    const double decay = std::exp(-sys.mode_loss[0] * state.time);
    return initial_field * decay + std::conj(accumulate_feedback(sys, state, pc));
}

RunResult run_reduced(const CavitySystem& sys, const SystemState& initial,
                      const ReducedOptions& opt) {
    if (sys.n_modes() != 1)
        throw DomainError("reduced model: single-mode systems only");
    const RegimeGuard guard = make_regime_guard(sys, opt.regime_threshold);
    if (!guard.satisfied() && !opt.regime_override)
        throw RegimeError("reduced model outside its validity regime: Gamma*T_SR = " +
                          std::to_string(guard.gamma_tsr) + " < threshold " +
                          std::to_string(guard.threshold) +
                          " (set the regime override to study the instability)");

    RunOptions full_like;
    full_like.dt = opt.dt;
    full_like.t_max = opt.t_max;
    full_like.exit_coupling_fraction = opt.exit_coupling_fraction;
    full_like.force_lossless = true;  // keep the auto-dt rule off the cavity pole
    const double dt = resolve_dt(sys, full_like);
    const double t_max = resolve_t_max(sys, full_like);
    const int stride = std::max(1, opt.output_stride);

    const Complex a0 = initial.modes.empty() ? Complex{0.0, 0.0} : initial.modes[0];

    SystemState s = initial;
    s.modes.assign(1, a0);  // carried for output only; not integrated
    Rng collision_rng(opt.collisions.seed);

    // scratch for RK4 over the atomic variables
    SystemState k1, k2, k3, k4, tmp;
    std::vector<PerCell> pc;
    auto deriv = [&](const SystemState& in, SystemState& out) {
        resize_like(out, in);
        switch (opt.kernel) {
            case ReducedKernel::factored: reduced_factored(sys, in, a0, out, pc); break;
            case ReducedKernel::direct_parallel: reduced_direct<true>(sys, in, a0, out, pc); break;
            default: reduced_direct<false>(sys, in, a0, out, pc); break;
        }
        for (auto& m : out.modes) m = Complex{0.0, 0.0};
    };

    RunResult result;
    result.model = "reduced";
    result.n_seed_photons = std::norm(a0);

    ObservableSeries& series = result.series;
    auto record = [&](SystemState& state) {
        state.modes[0] = reconstruct_field(sys, state, a0);
        const ObservableRow row = observables(sys, state);
        series.t.push_back(row.t);
        series.photons.push_back(row.photons);
        series.inversion.push_back(row.inversion);
        series.bloch_length.push_back(row.bloch_length);
        series.coupling_profile.push_back(row.coupling_profile);
        series.emitted_power.push_back(row.emitted_power);
    };

    std::vector<double> bloch0(sys.n_cells());
    for (std::size_t c = 0; c < sys.n_cells(); ++c) bloch0[c] = s.bloch_length(c);
    double max_bloch_drift = 0.0;
    auto track = [&](const SystemState& state) {
        for (std::size_t c = 0; c < sys.n_cells(); ++c)
            max_bloch_drift = std::max(max_bloch_drift,
                                       std::abs(state.bloch_length(c) - bloch0[c]) / bloch0[c]);
    };

    record(s);
    track(s);

    const double exit_threshold = opt.exit_coupling_fraction * sys.chi_reference;
    bool entered = sys.max_coupling(0.0) > exit_threshold;

    long long step_index = 0;
    while (s.time < t_max) {
        const double h = std::min(dt, t_max - s.time);
        const double t = s.time;
        deriv(s, k1);
        add_scaled(tmp, s, 0.5 * h, k1);
        tmp.time = t + 0.5 * h;
        deriv(tmp, k2);
        add_scaled(tmp, s, 0.5 * h, k2);
        tmp.time = t + 0.5 * h;
        deriv(tmp, k3);
        add_scaled(tmp, s, h, k3);
        tmp.time = t + h;
        deriv(tmp, k4);
        combine_rk4(s, h, k1, k2, k3, k4);
        s.time = t + h;
        ++step_index;

        apply_collisions(s, h, opt.collisions, sys.grid, collision_rng);

        if (!std::isfinite(s.sigma_z[0]) || !std::isfinite(s.sigma_plus[0].real()))
            throw NumericalBlowup(s.time, "reduced-model state diverged");

        if (step_index % stride == 0 || s.time >= t_max) {
            if (!state_is_finite(s))
                throw NumericalBlowup(s.time, "reduced-model state diverged");
            record(s);
            track(s);
            const double chi_now = sys.max_coupling(s.time);
            if (!entered && chi_now > exit_threshold) entered = true;
            if (entered && chi_now < exit_threshold) break;
        }
    }
    if (series.t.back() != s.time) {
        record(s);
        track(s);
    }

    const PeakEstimate peak = find_burst_peak(series.t, series.photons);
    result.peak_photons = peak.value;
    result.peak_time = peak.time;
    result.exit_state = s;
    result.ground_pop_resonant = (1.0 - s.sigma_z[sys.grid.central_index]) / 2.0;
    result.conservation.excitation_drift = std::numeric_limits<double>::quiet_NaN();
    result.conservation.bloch_drift = max_bloch_drift;
    return result;
}

ComparisonReport compare_full_reduced(const CavitySystem& sys, const SystemState& initial,
                                      const RunOptions& full_opt, const ReducedOptions& red_opt) {
    ComparisonReport report;
    report.full = run(sys, initial, full_opt);
    report.reduced = run_reduced(sys, initial, red_opt);
    report.peak_time_ratio = report.reduced.peak_time / report.full.peak_time;
    report.peak_intensity_ratio = report.reduced.peak_photons / report.full.peak_photons;
    return report;
}

}  // namespace casimir
