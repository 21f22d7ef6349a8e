// state.hpp - mean-field state, initial conditions, observables, run results
//
// Rotating-frame variables: per cell an inversion sigma_z in [-1, 1] and a
// complex coherence envelope sigma_plus (|sigma_plus| <= 1/2), per mode a
// complex field envelope a~ in the frame rotating at that mode's frequency.
// `leaked` integrates the cavity loss flux 2 Gamma |a~|^2 alongside the
// state so the conservation diagnostic stays at integrator accuracy.

#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <string>
#include <vector>

namespace casimir {

using Complex = std::complex<double>;

struct SystemState {
    double time = 0.0;
    std::vector<double> sigma_z;
    std::vector<Complex> sigma_plus;
    std::vector<Complex> modes;
    double leaked = 0.0;  // photons lost through the mirrors since t = 0

    std::size_t cell_count() const { return sigma_z.size(); }

    double photon_number() const {
        double n = 0.0;
        for (const auto& a : modes) n += std::norm(a);
        return n;
    }

    // Bloch vector length of one cell, sqrt(sigma_z^2 + 4 |sigma_plus|^2)
    double bloch_length(std::size_t cell) const {
        const double sz = sigma_z[cell];
        return std::sqrt(sz * sz + 4.0 * std::norm(sigma_plus[cell]));
    }
};

struct InitialCondition {
    enum class Kind { superfluorescence, casimir_seeded };
    enum class TipPhase { uniform, random_per_cell };

    Kind kind = Kind::superfluorescence;
    double n_photons = 0.0;  // coherent photon number placed in the fundamental mode
    TipPhase tip_phase = TipPhase::uniform;
    std::uint64_t seed = 0;  // used only for random_per_cell
};

struct CollisionModel {
    bool enabled = false;
    double rate = 0.0;  // collisions per atom per second
    std::uint64_t seed = 0;
};

struct ObservableSeries {
    std::vector<double> t;                 // s
    std::vector<double> photons;           // sum over modes of |a~|^2
    std::vector<double> inversion;         // population-weighted mean sigma_z
    std::vector<double> bloch_length;      // population-weighted mean Bloch length
    std::vector<double> coupling_profile;  // |chi(t)| / chi_peak for the central cell
    std::vector<double> emitted_power;     // 2 Gamma |a~|^2 hbar omega, W

    std::size_t rows() const { return t.size(); }
};

struct ConservationReport {
    double excitation_drift = 0.0;  // max relative drift of excitation + leaked photons
    double bloch_drift = 0.0;       // max relative drift of any cell's Bloch length
};

struct RunResult {
    std::string model = "full";  // provenance: "full" or "reduced"
    ObservableSeries series;
    double peak_photons = 0.0;  // photon number at the emission-burst peak
    double peak_time = 0.0;     // s, parabolic-refined
    SystemState exit_state;
    double ground_pop_resonant = 0.0;  // (1 - sigma_z(central cell)) / 2 at exit
    ConservationReport conservation;
    std::uint64_t config_fingerprint = 0;  // hash of the config minus the initial condition
    double n_seed_photons = 0.0;           // initial photon number used
};

}  // namespace casimir
