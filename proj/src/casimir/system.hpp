// system.hpp - assembled simulation system: species + cavity + modes + grid
//
// Precomputes per-cell/per-mode detunings and the coupling prefactor so the
// derivative kernels only evaluate the mode envelope along each trajectory.
// Detuning convention (rotating frames): Delta for cell m and mode l is
//   Delta = omega_mode - (Omega - k v_parallel),
// positive when the cavity runs above the Doppler-shifted atom resonance.

#pragma once

#include <vector>

#include "beam.hpp"
#include "state.hpp"

namespace casimir {

struct CavitySystem {
    AtomSpecies species;
    CavityConfig cavity;
    std::vector<GaussianMode> modes;
    PhaseSpaceGrid grid;
    PhysicalConstants consts = kConstants;

    // derived, filled by finalize()
    std::vector<double> mode_loss;      // Gamma per mode, 1/s
    std::vector<double> mode_chi_unit;  // mu sqrt(mu0 hbar omega/2)/hbar per mode; chi = unit * U
    std::vector<double> detunings;      // [mode * n_cells + cell], rad/s
    double chi_reference = 0.0;         // fundamental-mode chi at the mode antinode

    void finalize();

    std::size_t n_cells() const { return grid.cells.size(); }
    std::size_t n_modes() const { return modes.size(); }

    double detuning(std::size_t mode, std::size_t cell) const {
        return detunings[mode * n_cells() + cell];
    }

    // chi for a cell at time t; zero once the trajectory leaves the mirror gap
    double coupling(std::size_t mode, std::size_t cell, double t) const {
        const Cell& c = grid.cells[cell];
        const Vec3 p{c.entry_position.x + c.velocity.x * t,
                     c.entry_position.y + c.velocity.y * t,
                     c.entry_position.z + c.velocity.z * t};
        return mode_chi_unit[mode] * modes[mode].amplitude_or_zero(p);
    }

    // largest |chi| over cells and modes at time t
    double max_coupling(double t) const;
};

// Initial states ------------------------------------------------------------

// Fully inverted atoms with a small tipping angle theta0 = 2 / sqrt(N_at):
// sigma_z = cos(theta0), |sigma_plus| = sin(theta0)/2, all fields zero.
SystemState init_superfluorescence(const PhaseSpaceGrid& grid, const InitialCondition& ic,
                                   std::size_t n_modes = 1);

// Same atoms plus a coherent field sqrt(n_cas_max) in the fundamental mode.
SystemState init_casimir_seeded(const PhaseSpaceGrid& grid, const InitialCondition& ic,
                                double n_cas_max, std::size_t n_modes = 1);

}  // namespace casimir
