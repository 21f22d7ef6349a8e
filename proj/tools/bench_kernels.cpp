// bench_kernels.cpp - timing comparison of the derivative kernels
//
// Full model: serial reference vs OpenMP (chunked deterministic reduction).
// Reduced model: pairwise double sum (serial and OpenMP) vs the factored
// O(cells) accumulation. Each variant is checked against the serial
// reference before timing.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>

#include "casimir/config.hpp"
#include "casimir/reduced.hpp"

using namespace casimir;

namespace {

double max_diff(const SystemState& a, const SystemState& b) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.sigma_z.size(); ++i) {
        d = std::max(d, std::abs(a.sigma_z[i] - b.sigma_z[i]));
        d = std::max(d, std::abs(a.sigma_plus[i] - b.sigma_plus[i]));
    }
    for (std::size_t m = 0; m < a.modes.size(); ++m)
        d = std::max(d, std::abs(a.modes[m] - b.modes[m]));
    return d;
}

CavitySystem make_system(int cells) {
    KeyValues kv;
    kv.set("beam.n_at", "1e12");
    kv.set("beam.temperature_k", "0.01");
    kv.set("grid.velocity_cells", std::to_string(cells));
    kv.set("grid.velocity_span_sigma", "1");
    kv.set("cavity.quality", "5.6e2");
    kv.set("cavity.mode_volume_m3", "1.14e-16");
    kv.set("cavity.waist_m", "0.05");
    kv.set("cavity.height_fraction", "0.5");
    kv.set("beam.entry_offset_m", "0");
    return build_system(config_from_keyvalues(kv));
}

SystemState make_state(const CavitySystem& sys) {
    InitialCondition ic;
    ic.kind = InitialCondition::Kind::casimir_seeded;
    ic.tip_phase = InitialCondition::TipPhase::random_per_cell;
    ic.seed = 7;
    SystemState s = init_casimir_seeded(sys.grid, ic, 100.0, sys.n_modes());
    s.time = 1e-6;  // nonzero so the detuning phases are exercised
    return s;
}

template <typename F>
double time_ms(int reps, F&& fn) {
    const auto t0 = std::chrono::steady_clock::now();
    for (int r = 0; r < reps; ++r) fn();
    const auto t1 = std::chrono::steady_clock::now();
    return std::chrono::duration<double, std::milli>(t1 - t0).count() / reps;
}

void bench_full(int cells, int reps) {
    const CavitySystem sys = make_system(cells);
    const SystemState s = make_state(sys);
    SystemState d_ref, d_par;

    eval_derivatives(sys, s, d_ref, Kernel::serial);
    eval_derivatives(sys, s, d_par, Kernel::parallel);
    const double err = max_diff(d_ref, d_par);

    const double t_ser = time_ms(reps, [&] { eval_derivatives(sys, s, d_ref, Kernel::serial); });
    const double t_par = time_ms(reps, [&] { eval_derivatives(sys, s, d_par, Kernel::parallel); });
    std::printf("  full    %6d cells   serial %9.3f ms   omp %9.3f ms   speedup %5.2fx   max|diff| %.2e\n",
                cells, t_ser, t_par, t_ser / t_par, err);
}

void bench_reduced(int cells, int reps) {
    const CavitySystem sys = make_system(cells);
    const SystemState s = make_state(sys);
    const Complex a0{10.0, 0.0};
    SystemState d_ref, d_par, d_fac;

    eval_reduced_derivatives(sys, s, a0, d_ref, ReducedKernel::direct);
    eval_reduced_derivatives(sys, s, a0, d_par, ReducedKernel::direct_parallel);
    eval_reduced_derivatives(sys, s, a0, d_fac, ReducedKernel::factored);
    const double err_par = max_diff(d_ref, d_par);
    const double err_fac = max_diff(d_ref, d_fac);

    const double t_ser = time_ms(
        reps, [&] { eval_reduced_derivatives(sys, s, a0, d_ref, ReducedKernel::direct); });
    const double t_par = time_ms(reps, [&] {
        eval_reduced_derivatives(sys, s, a0, d_par, ReducedKernel::direct_parallel);
    });
    const double t_fac = time_ms(
        reps, [&] { eval_reduced_derivatives(sys, s, a0, d_fac, ReducedKernel::factored); });
    std::printf("  reduced %6d cells   serial %9.3f ms   omp %9.3f ms (%5.2fx)   factored %9.3f ms (%7.1fx)   diffs %.2e / %.2e\n",
                cells, t_ser, t_par, t_ser / t_par, t_fac, t_ser / t_fac, err_par, err_fac);
}

}  // namespace

int main() {
    std::printf("derivative kernel benchmark (single evaluation, averaged)\n\n");
    for (int cells : {64, 256, 1024, 4096}) bench_full(cells, cells >= 1024 ? 20 : 200);
    std::printf("\n");
    for (int cells : {64, 256, 1024, 2048}) bench_reduced(cells, cells >= 1024 ? 3 : 50);
    return 0;
}
