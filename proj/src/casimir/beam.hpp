// beam.hpp - atomic beam discretization into phase-space cells
//
// The beam crosses the cavity perpendicular to its axis (along x) at height
// z0 = height_fraction * L. Cells partition the axial velocity component
// (the only one that Doppler-shifts the transition); the counted atoms in a
// cell evolve as one effective atom weighted by the cell population.

#pragma once

#include <cstdint>
#include <vector>

#include "mode.hpp"

namespace casimir {

struct BeamConfig {
    double n_at = 0.0;          // total atom count
    double speed = 0.0;         // transit speed v_at along x, m/s
    double temperature = 0.0;   // transverse temperature setting the axial spread, K
    double entry_offset = 0.0;  // starting x relative to the mode axis, m

    void validate() const;
};

struct GridSpec {
    int velocity_cells = 5;          // bins over +-span_sigma sigma_v, centered on 0
    int spatial_cells[3] = {1, 1, 1};
    double velocity_span_sigma = 2.0;

    void validate() const;
};

struct Cell {
    double count = 0.0;          // atoms represented (integer-valued)
    Vec3 entry_position;         // m
    Vec3 velocity;               // mean velocity: (v_at, 0, v_parallel), m/s
    double axial_velocity = 0.0; // v_parallel along the cavity axis, m/s
    double weight = 0.0;         // count / n_at
    double detuning = 0.0;       // k * v_parallel, rad/s
};

struct PhaseSpaceGrid {
    std::vector<Cell> cells;
    std::size_t central_index = 0;  // cell with axial velocity closest to 0

    double total_atoms() const;
};

// Straight-line position of a cell's mean atom at time t.
Vec3 trajectory(const Cell& cell, double t);

// Partition the beam into velocity cells. Weights are Gaussian integrals
// over equal-width bins spanning +-span_sigma sigma_v, renormalized to one;
// counts round to integers with a largest-remainder correction so they sum
// to n_at exactly. Throws if any cell would hold fewer than 10 atoms.
// T = 0 collapses to a single cell regardless of the requested bin count.
PhaseSpaceGrid dice_phase_space(const BeamConfig& beam, const GaussianMode& mode,
                                const AtomSpecies& species, const GridSpec& spec,
                                const PhysicalConstants& k = kConstants);

// Coupling coefficient chi for the cell at time t; positions outside the
// mirror gap throw (use the system-level evaluation for running dynamics).
double coupling_at(const Cell& cell, const GaussianMode& mode, const AtomSpecies& species,
                   double t, const PhysicalConstants& k = kConstants);

}  // namespace casimir
