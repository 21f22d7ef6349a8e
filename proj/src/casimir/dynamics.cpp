#include "dynamics.hpp"

#include <algorithm>
#include <cmath>

#include "errors.hpp"
#include "physics.hpp"
#include "state_ops.hpp"

namespace casimir {

using detail::add_scaled;
using detail::combine_rk4;
using detail::resize_like;
using detail::state_is_finite;

namespace {

constexpr std::size_t kChunk = 64;  // cells per reduction chunk (fixed for determinism)

void derivatives_serial(const CavitySystem& sys, const SystemState& s, SystemState& d) {
    const std::size_t nc = sys.n_cells();
    const std::size_t nm = sys.n_modes();
    const double t = s.time;

    double leak = 0.0;
    for (std::size_t m = 0; m < nm; ++m) {
        d.modes[m] = -sys.mode_loss[m] * s.modes[m];
        leak += 2.0 * sys.mode_loss[m] * std::norm(s.modes[m]);
    }
    d.leaked = leak;

    for (std::size_t c = 0; c < nc; ++c) {
        double dz = 0.0;
        Complex dp{0.0, 0.0};
        for (std::size_t m = 0; m < nm; ++m) {
            const double chi = sys.coupling(m, c, t);
            if (chi == 0.0) continue;
            const Complex rot = std::polar(1.0, sys.detuning(m, c) * t);  // e^{+i Delta t}
            const Complex a = s.modes[m];
            dz += -4.0 * std::real(chi * s.sigma_plus[c] * a * std::conj(rot));
            dp += chi * s.sigma_z[c] * std::conj(a) * rot;
            d.modes[m] += sys.grid.cells[c].count * chi * std::conj(s.sigma_plus[c]) * rot;
        }
        d.sigma_z[c] = dz;
        d.sigma_plus[c] = dp;
    }
    d.time = 1.0;  // unused; derivatives carry no clock
}

void derivatives_parallel(const CavitySystem& sys, const SystemState& s, SystemState& d,
                          std::vector<Complex>& chunk_sums) {
    const std::size_t nc = sys.n_cells();
    const std::size_t nm = sys.n_modes();
    const double t = s.time;
    const std::size_t nchunks = (nc + kChunk - 1) / kChunk;
    chunk_sums.assign(nchunks * nm, Complex{0.0, 0.0});

#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (long long ci = 0; ci < static_cast<long long>(nchunks); ++ci) {
        const std::size_t begin = static_cast<std::size_t>(ci) * kChunk;
        const std::size_t end = std::min(begin + kChunk, nc);
        for (std::size_t c = begin; c < end; ++c) {
            double dz = 0.0;
            Complex dp{0.0, 0.0};
            for (std::size_t m = 0; m < nm; ++m) {
                const double chi = sys.coupling(m, c, t);
                if (chi == 0.0) continue;
                const Complex rot = std::polar(1.0, sys.detuning(m, c) * t);
                const Complex a = s.modes[m];
                dz += -4.0 * std::real(chi * s.sigma_plus[c] * a * std::conj(rot));
                dp += chi * s.sigma_z[c] * std::conj(a) * rot;
                chunk_sums[static_cast<std::size_t>(ci) * nm + m] +=
                    sys.grid.cells[c].count * chi * std::conj(s.sigma_plus[c]) * rot;
            }
            d.sigma_z[c] = dz;
            d.sigma_plus[c] = dp;
        }
    }

    double leak = 0.0;
    for (std::size_t m = 0; m < nm; ++m) {
        Complex sum{0.0, 0.0};
        for (std::size_t ci = 0; ci < nchunks; ++ci) sum += chunk_sums[ci * nm + m];  // index order
        d.modes[m] = -sys.mode_loss[m] * s.modes[m] + sum;
        leak += 2.0 * sys.mode_loss[m] * std::norm(s.modes[m]);
    }
    d.leaked = leak;
    d.time = 1.0;
}

// RK4 stepper with preallocated scratch
class Stepper {
public:
    Stepper(const CavitySystem& sys, Kernel kernel) : sys_(sys), kernel_(kernel) {}

    void derivatives(const SystemState& s, SystemState& out) {
        resize_like(out, s);
        if (kernel_ == Kernel::parallel)
            derivatives_parallel(sys_, s, out, chunk_sums_);
        else
            derivatives_serial(sys_, s, out);
    }

    void step(SystemState& s, double dt) {
        const double t = s.time;
        derivatives(s, k1_);
        add_scaled(tmp_, s, 0.5 * dt, k1_);
        tmp_.time = t + 0.5 * dt;
        derivatives(tmp_, k2_);
        add_scaled(tmp_, s, 0.5 * dt, k2_);
        tmp_.time = t + 0.5 * dt;
        derivatives(tmp_, k3_);
        add_scaled(tmp_, s, dt, k3_);
        tmp_.time = t + dt;
        derivatives(tmp_, k4_);
        combine_rk4(s, dt, k1_, k2_, k3_, k4_);
        s.time = t + dt;
    }

private:
    const CavitySystem& sys_;
    Kernel kernel_;
    SystemState k1_, k2_, k3_, k4_, tmp_;
    std::vector<Complex> chunk_sums_;
};

}  // namespace

void eval_derivatives(const CavitySystem& sys, const SystemState& state, SystemState& out,
                      Kernel kernel) {
    resize_like(out, state);
    if (kernel == Kernel::parallel) {
        std::vector<Complex> scratch;
        derivatives_parallel(sys, state, out, scratch);
    } else {
        derivatives_serial(sys, state, out);
    }
}

SystemState step_rk4(const CavitySystem& sys, const SystemState& state, double dt,
                     Kernel kernel) {
    if (dt <= 0.0) throw DomainError("step_rk4: dt must be > 0");
    SystemState s = state;
    Stepper stepper(sys, kernel);
    stepper.step(s, dt);
    if (!state_is_finite(s)) throw NumericalBlowup(s.time, "non-finite state after RK4 step");
    return s;
}

void apply_collisions(SystemState& state, double dt, const CollisionModel& model,
                      const PhaseSpaceGrid& grid, Rng& rng) {
    if (!model.enabled || model.rate <= 0.0) return;
    if (grid.cells.size() != state.cell_count())
        throw DomainError("apply_collisions: grid/state cell count mismatch");
    for (std::size_t c = 0; c < state.cell_count(); ++c) {
        // phase variance shrinks with the represented population
        const double sigma_phi = std::sqrt(2.0 * model.rate * dt / grid.cells[c].count);
        state.sigma_plus[c] *= std::polar(1.0, sigma_phi * rng.next_normal());
    }
}

ObservableRow observables(const CavitySystem& sys, const SystemState& s) {
    ObservableRow row;
    row.t = s.time;
    row.photons = s.photon_number();

    double n_at = 0.0, inv = 0.0, bloch = 0.0;
    for (std::size_t c = 0; c < sys.n_cells(); ++c) {
        const double n = sys.grid.cells[c].count;
        n_at += n;
        inv += n * s.sigma_z[c];
        bloch += n * s.bloch_length(c);
    }
    row.inversion = inv / n_at;
    row.bloch_length = bloch / n_at;
    row.coupling_profile =
        std::abs(sys.coupling(0, sys.grid.central_index, s.time)) / sys.chi_reference;

    double power = 0.0;
    for (std::size_t m = 0; m < sys.n_modes(); ++m)
        power += 2.0 * sys.mode_loss[m] * std::norm(s.modes[m]) * sys.consts.hbar *
                 sys.modes[m].cavity.omega;
    row.emitted_power = power;
    return row;
}

double resolve_dt(const CavitySystem& sys, const RunOptions& opt) {
    const double t1cav = t1_cavity(sys.species, sys.modes[0].cavity, sys.consts);
    const double t_sr = t1cav / sys.grid.total_atoms();
    if (opt.dt > 0.0) {
        if (opt.dt > t_sr / 50.0 && !opt.dt_guard_override)
            throw DomainError("run: dt exceeds T_SR/50; shrink dt or set the guard override");
        return opt.dt;
    }
    double dt = t_sr / 200.0;
    if (!opt.force_lossless) {
        for (double g : sys.mode_loss)
            if (g > 0.0) dt = std::min(dt, 0.2 / g);
    }
    for (double delta : sys.detunings)
        if (delta != 0.0) dt = std::min(dt, 0.2 / std::abs(delta));
    return dt;
}

double resolve_t_max(const CavitySystem& sys, const RunOptions& opt) {
    if (opt.t_max > 0.0) return opt.t_max;
    // transverse exit of the central cell: shape falls to the exit fraction
    const Cell& c = sys.grid.cells[sys.grid.central_index];
    const CavityConfig& cav = sys.modes[0].cavity;
    const double z0 = c.entry_position.z;
    const double axial =
        std::abs(std::sin(sys.modes[0].axial_index * kPi * z0 / cav.length));
    const double ratio = std::max(axial / opt.exit_coupling_fraction, 2.0);
    const double x_exit = cav.waist * std::sqrt(std::log(ratio));
    return 1.02 * (x_exit - c.entry_position.x) / c.velocity.x;
}

RunResult run(const CavitySystem& sys, const SystemState& initial, const RunOptions& opt) {
    const double dt = resolve_dt(sys, opt);
    const double t_max = resolve_t_max(sys, opt);
    const int stride = std::max(1, opt.output_stride);

    CavitySystem local = sys;  // lossless override acts on a copy
    if (opt.force_lossless)
        for (auto& g : local.mode_loss) g = 0.0;

    SystemState s = initial;
    Stepper stepper(local, opt.kernel);
    Rng collision_rng(opt.collisions.seed);

    RunResult result;
    result.n_seed_photons = initial.photon_number();

    ObservableSeries& series = result.series;
    auto record = [&](const SystemState& state) {
        const ObservableRow row = observables(local, state);
        series.t.push_back(row.t);
        series.photons.push_back(row.photons);
        series.inversion.push_back(row.inversion);
        series.bloch_length.push_back(row.bloch_length);
        series.coupling_profile.push_back(row.coupling_profile);
        series.emitted_power.push_back(row.emitted_power);
    };

    // conservation references
    double excitation0 = s.leaked + s.photon_number();
    for (std::size_t c = 0; c < local.n_cells(); ++c)
        excitation0 += local.grid.cells[c].count * (s.sigma_z[c] + 1.0) / 2.0;
    std::vector<double> bloch0(local.n_cells());
    for (std::size_t c = 0; c < local.n_cells(); ++c) bloch0[c] = s.bloch_length(c);

    double max_exc_drift = 0.0, max_bloch_drift = 0.0;
    auto track_conservation = [&](const SystemState& state) {
        double e = state.leaked + state.photon_number();
        for (std::size_t c = 0; c < local.n_cells(); ++c)
            e += local.grid.cells[c].count * (state.sigma_z[c] + 1.0) / 2.0;
        max_exc_drift = std::max(max_exc_drift, std::abs(e - excitation0) /
                                                    std::max(std::abs(excitation0), 1.0));
        for (std::size_t c = 0; c < local.n_cells(); ++c)
            max_bloch_drift = std::max(
                max_bloch_drift, std::abs(state.bloch_length(c) - bloch0[c]) / bloch0[c]);
    };

    record(s);
    track_conservation(s);

    const double exit_threshold = opt.exit_coupling_fraction * local.chi_reference;
    bool entered = local.max_coupling(0.0) > exit_threshold;

    long long step_index = 0;
    while (s.time < t_max) {
        const double h = std::min(dt, t_max - s.time);
        stepper.step(s, h);
        ++step_index;

        apply_collisions(s, h, opt.collisions, local.grid, collision_rng);

        if (!std::isfinite(s.modes[0].real()) || !std::isfinite(s.sigma_z[0]))
            throw NumericalBlowup(s.time, "non-finite state during run");

        if (step_index % stride == 0 || s.time >= t_max) {
            if (!state_is_finite(s)) throw NumericalBlowup(s.time, "non-finite state during run");
            record(s);
            track_conservation(s);
            const double chi_now = local.max_coupling(s.time);
            if (!entered && chi_now > exit_threshold) entered = true;
            if (entered && chi_now < exit_threshold) break;  // beam left the mode region
        }
    }
    if (series.t.back() != s.time) {
        record(s);
        track_conservation(s);
    }

    const PeakEstimate peak = find_burst_peak(series.t, series.photons);
    result.peak_photons = peak.value;
    result.peak_time = peak.time;
    result.exit_state = s;
    result.ground_pop_resonant = (1.0 - s.sigma_z[local.grid.central_index]) / 2.0;
    result.conservation.excitation_drift = max_exc_drift;
    result.conservation.bloch_drift = max_bloch_drift;
    return result;
}

PeakEstimate find_burst_peak(const std::vector<double>& t, const std::vector<double>& y) {
    PeakEstimate p;
    const std::size_t n = y.size();
    if (n == 0) return p;
    if (n == 1) return {t[0], y[0], 0};

    // skip an initial monotone decay (decaying seed field) when a burst follows
    std::size_t start = 0;
    if (y[1] < y[0]) {
        std::size_t m = 1;
        while (m + 1 < n && y[m + 1] < y[m]) ++m;
        if (m + 1 < n) start = m;  // otherwise the series is pure decay
    }

    std::size_t best = start;
    for (std::size_t i = start; i < n; ++i)
        if (y[i] > y[best]) best = i;

    p.index = best;
    p.time = t[best];
    p.value = y[best];

    if (best > 0 && best + 1 < n) {
        // parabola through the three bracketing samples (general spacing)
        const double x0 = t[best - 1], x1 = t[best], x2 = t[best + 1];
        const double y0 = y[best - 1], y1 = y[best], y2 = y[best + 1];
        const double d1 = (y1 - y0) / (x1 - x0);
        const double d2 = (y2 - y1) / (x2 - x1);
        const double a = (d2 - d1) / (x2 - x0);
        if (a < 0.0) {
            const double xv = 0.5 * (x0 + x1) - d1 / (2.0 * a);
            if (xv >= x0 && xv <= x2) {
                p.time = xv;
                p.value = y0 + d1 * (xv - x0) + a * (xv - x0) * (xv - x1);
            }
        }
    }
    return p;
}

}  // namespace casimir
