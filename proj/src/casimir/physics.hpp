// physics.hpp - closed-form source and amplifier physics
//
// Parametric photon growth and saturation in a driven cavity, magnetic-dipole
// lifetimes in free space and in the cavity, the collective emission
// timescale and peak power, delay statistics of the burst, Doppler
// dephasing, and the (epsilon, Q) detectability classification.
// Everything here is a pure function of its inputs.

#pragma once

#include <string>

#include "constants.hpp"
#include "species.hpp"

namespace casimir {

struct CavityConfig {
    double omega = 0.0;           // mode angular frequency omega_lambda, rad/s
    double quality = 0.0;         // Q
    double mode_volume = 0.0;     // V_lambda, m^3 (normalization volume)
    double length = 0.0;          // mirror spacing L, m
    double waist = 5.6e-3;        // transverse envelope scale w0, m
    double height_fraction = 0.1; // beam height above the planar mirror, fraction of L
    int axial_index = 1;          // longitudinal mode number n

    double loss_rate() const { return omega / (2.0 * quality); }  // Gamma, 1/s
    double hold_time() const { return quality / omega; }          // tau, s
    double wavelength() const { return 2.0 * kPi * kConstants.c / omega; }

    void validate() const;
};

struct CasimirDrive {
    double epsilon = 0.0;     // modulation depth v/c
    double n0 = 0.5;          // initial photon number (vacuum seed 1/2)
    double omega_mech = 0.0;  // drive angular frequency, rad/s

    // parametric resonance requires omega_mech = 2*omega to within 1 ppm
    bool on_parametric_resonance(const CavityConfig& cavity) const;
    void validate() const;
};

struct DetectorModel {
    double direct_floor = 1e-16;  // minimum directly detectable power, W
    double sr_floor = 1e-16;      // floor after superradiant gain, W
    double sr_gain = 1e9;         // assumed amplification factor

    void validate() const;
};

struct Timescales {
    double t1_free = 0.0;         // s
    double t1_cav = 0.0;          // s
    double t_sr = 0.0;            // s
    double gamma_inv = 0.0;       // 1/Gamma, s
    double t2_star = 0.0;         // Doppler dephasing time (inf at T = 0), s
    double t_delay = 0.0;         // T_D, s
    double t_delay_jitter = 0.0;  // Delta T_D, s
};

struct DelayStats {
    double t_delay = 0.0;
    double t_delay_jitter = 0.0;
};

enum class DetectabilityRegion { direct, superradiant_assisted, inaccessible };

std::string to_string(DetectabilityRegion r);

// photon number N(t) = N0 sinh^2(omega_mech * epsilon * t) under parametric
// drive; throws unless the resonance condition holds or the caller overrides
double casimir_photon_number(const CasimirDrive& drive, const CavityConfig& cavity, double t,
                             bool allow_off_resonance = false);

// saturated photon number N0 sinh^2(2 Q epsilon), reached at the hold time
double casimir_saturation(const CasimirDrive& drive, const CavityConfig& cavity);

// saturated emitted power N_max hbar omega / tau
double casimir_power(const CasimirDrive& drive, const CavityConfig& cavity,
                     const PhysicalConstants& k = kConstants);

// free-space magnetic-dipole lifetime (4pi/mu0) 3 hbar / (4 mu^2 (omega/c)^3)
double t1_free(const AtomSpecies& species, double omega, const PhysicalConstants& k = kConstants);

// cavity-reduced lifetime (4pi/mu0) hbar V / (8 pi mu^2 Q)
double t1_cavity(const AtomSpecies& species, const CavityConfig& cavity,
                 const PhysicalConstants& k = kConstants);

// same lifetime via the equivalent density-of-states route
// (4 pi^2 / 3Q)(V / lambda^3) t1_free; agrees with t1_cavity identically
double t1_cavity_alt(const AtomSpecies& species, const CavityConfig& cavity,
                     const PhysicalConstants& k = kConstants);

// mode volume that yields a prescribed cavity lifetime (inversion of t1_cavity)
double volume_for_lifetime(double t1_cav_target, const AtomSpecies& species, double quality,
                           const PhysicalConstants& k = kConstants);

// collective emission timescale T1_cav / N_at
double superradiant_lifetime(double t1_cav, double n_at);

// burst peak power N_at hbar omega / T_SR
double superradiant_peak_power(double n_at, double omega, double t_sr,
                               const PhysicalConstants& k = kConstants);

// delay of the burst peak and its shot-to-shot spread for n_ph seed photons
DelayStats delay_stats(double t_sr, double n_at, double n_ph);

// 1 / (k sigma_v) with sigma_v = sqrt(kB T / m); infinity at T = 0
double doppler_dephasing(const AtomSpecies& species, double temperature, double wavenumber,
                         const PhysicalConstants& k = kConstants);

// threshold classification of the saturated source power against a detector
DetectabilityRegion classify_detectability(double epsilon, double quality,
                                           const CavityConfig& cavity_template, double drive_n0,
                                           const DetectorModel& detector,
                                           const PhysicalConstants& k = kConstants);

// all characteristic times for one configuration
Timescales compute_timescales(const AtomSpecies& species, const CavityConfig& cavity, double n_at,
                              double temperature, double n_ph,
                              const PhysicalConstants& k = kConstants);

}  // namespace casimir
