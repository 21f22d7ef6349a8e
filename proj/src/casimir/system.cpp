#include "system.hpp"

#include <cmath>

#include "errors.hpp"
#include "rng.hpp"

namespace casimir {

void CavitySystem::finalize() {
    species.validate();
    cavity.validate();
    if (modes.empty()) throw DomainError("system: at least one mode is required");
    if (grid.cells.empty()) throw DomainError("system: empty phase-space grid");

    const std::size_t nc = grid.cells.size();
    const std::size_t nm = modes.size();
    mode_loss.resize(nm);
    mode_chi_unit.resize(nm);
    detunings.resize(nm * nc);

    const double atom_omega = species.transition_omega();
    for (std::size_t m = 0; m < nm; ++m) {
        const CavityConfig& mc = modes[m].cavity;
        mc.validate();
        mode_loss[m] = mc.loss_rate();
        mode_chi_unit[m] =
            species.moment * std::sqrt(consts.mu0 * consts.hbar * mc.omega / 2.0) / consts.hbar;
        const double k = modes[m].wavenumber(consts);
        for (std::size_t c = 0; c < nc; ++c)
            detunings[m * nc + c] =
                mc.omega - (atom_omega - k * grid.cells[c].axial_velocity);
    }
    chi_reference = mode_chi_unit[0] * modes[0].peak_amplitude();
}

double CavitySystem::max_coupling(double t) const {
    double best = 0.0;
    for (std::size_t m = 0; m < n_modes(); ++m)
        for (std::size_t c = 0; c < n_cells(); ++c)
            best = std::max(best, std::abs(coupling(m, c, t)));
    return best;
}

namespace {

SystemState init_atoms(const PhaseSpaceGrid& grid, const InitialCondition& ic,
                       std::size_t n_modes) {
    SystemState s;
    const std::size_t nc = grid.cells.size();
    s.sigma_z.resize(nc);
    s.sigma_plus.resize(nc);
    s.modes.assign(n_modes, Complex{0.0, 0.0});

    const double n_at = grid.total_atoms();
    const double theta0 = 2.0 / std::sqrt(n_at);
    const double sz = std::cos(theta0);
    const double sp = std::sin(theta0) / 2.0;

    Rng rng(ic.seed);
    for (std::size_t c = 0; c < nc; ++c) {
        s.sigma_z[c] = sz;
        double phase = 0.0;
        if (ic.tip_phase == InitialCondition::TipPhase::random_per_cell)
            phase = 2.0 * kPi * rng.next_double();
        s.sigma_plus[c] = std::polar(sp, phase);
    }
    return s;
}

}  // namespace

SystemState init_superfluorescence(const PhaseSpaceGrid& grid, const InitialCondition& ic,
                                   std::size_t n_modes) {
    if (ic.kind != InitialCondition::Kind::superfluorescence)
        throw DomainError("init_superfluorescence: wrong initial-condition kind");
    return init_atoms(grid, ic, n_modes);
}

SystemState init_casimir_seeded(const PhaseSpaceGrid& grid, const InitialCondition& ic,
                                double n_cas_max, std::size_t n_modes) {
    if (ic.kind != InitialCondition::Kind::casimir_seeded)
        throw DomainError("init_casimir_seeded: wrong initial-condition kind");
    if (n_cas_max < 0.0) throw DomainError("init_casimir_seeded: photon number must be >= 0");
    SystemState s = init_atoms(grid, ic, n_modes);
    s.modes[0] = Complex{std::sqrt(n_cas_max), 0.0};
    return s;
}

}  // namespace casimir
