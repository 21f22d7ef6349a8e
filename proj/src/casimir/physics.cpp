#include "physics.hpp"

#include <cmath>
#include <limits>

#include "errors.hpp"

namespace casimir {

void CavityConfig::validate() const {
    if (omega <= 0.0) throw DomainError("cavity: omega must be > 0");
    if (quality <= 0.0) throw DomainError("cavity: quality must be > 0");
    if (mode_volume <= 0.0) throw DomainError("cavity: mode volume must be > 0");
    if (length <= 0.0) throw DomainError("cavity: length must be > 0");
    if (waist <= 0.0) throw DomainError("cavity: waist must be > 0");
    if (height_fraction <= 0.0 || height_fraction >= 1.0)
        throw DomainError("cavity: height fraction must lie in (0, 1)");
    if (axial_index < 1) throw DomainError("cavity: axial index must be >= 1");
}

bool CasimirDrive::on_parametric_resonance(const CavityConfig& cavity) const {
    const double target = 2.0 * cavity.omega;
    return std::abs(omega_mech - target) <= 1e-6 * target;
}

void CasimirDrive::validate() const {
    if (epsilon < 0.0) throw DomainError("drive: epsilon must be >= 0");
    if (n0 < 0.0) throw DomainError("drive: n0 must be >= 0");
    if (omega_mech <= 0.0) throw DomainError("drive: omega_mech must be > 0");
}

void DetectorModel::validate() const {
    if (sr_floor <= 0.0 || direct_floor <= 0.0)
        throw DomainError("detector: floors must be > 0");
    if (sr_floor > direct_floor)
        throw DomainError("detector: sr_floor must not exceed direct_floor");
    if (sr_gain < 1.0) throw DomainError("detector: sr_gain must be >= 1");
}

std::string to_string(DetectabilityRegion r) {
    switch (r) {
        case DetectabilityRegion::direct: return "direct";
        case DetectabilityRegion::superradiant_assisted: return "sr_assisted";
        case DetectabilityRegion::inaccessible: return "inaccessible";
    }
    return "?";
}

double casimir_photon_number(const CasimirDrive& drive, const CavityConfig& cavity, double t,
                             bool allow_off_resonance) {
    if (t < 0.0) throw DomainError("casimir_photon_number: t must be >= 0");
    if (!allow_off_resonance && !drive.on_parametric_resonance(cavity))
        throw DomainError("casimir_photon_number: drive is off parametric resonance "
                          "(omega_mech != 2*omega); pass the override to evaluate anyway");
    const double s = std::sinh(drive.omega_mech * drive.epsilon * t);
    return drive.n0 * s * s;
}

double casimir_saturation(const CasimirDrive& drive, const CavityConfig& cavity) {
    const double s = std::sinh(2.0 * cavity.quality * drive.epsilon);
    return drive.n0 * s * s;
}

double casimir_power(const CasimirDrive& drive, const CavityConfig& cavity,
                     const PhysicalConstants& k) {
    return casimir_saturation(drive, cavity) * k.hbar * cavity.omega / cavity.hold_time();
}

double t1_free(const AtomSpecies& species, double omega, const PhysicalConstants& k) {
    if (omega <= 0.0) throw DomainError("t1_free: omega must be > 0");
    const double mu = species.moment;
    const double kc = omega / k.c;
    return (4.0 * kPi / k.mu0) * 3.0 * k.hbar / (4.0 * mu * mu * kc * kc * kc);
}

double t1_cavity(const AtomSpecies& species, const CavityConfig& cavity,
                 const PhysicalConstants& k) {
    const double mu = species.moment;
    return (4.0 * kPi / k.mu0) * k.hbar * cavity.mode_volume /
           (8.0 * kPi * mu * mu * cavity.quality);
}

double t1_cavity_alt(const AtomSpecies& species, const CavityConfig& cavity,
                     const PhysicalConstants& k) {
    const double lambda = cavity.wavelength();
    return (4.0 * kPi * kPi / (3.0 * cavity.quality)) *
           (cavity.mode_volume / (lambda * lambda * lambda)) *
           t1_free(species, cavity.omega, k);
}

double volume_for_lifetime(double t1_cav_target, const AtomSpecies& species, double quality,
                           const PhysicalConstants& k) {
    if (t1_cav_target <= 0.0) throw DomainError("volume_for_lifetime: target must be > 0");
    const double mu = species.moment;
    return t1_cav_target * (k.mu0 / (4.0 * kPi)) * 8.0 * kPi * mu * mu * quality / k.hbar;
}

double superradiant_lifetime(double t1_cav, double n_at) {
    if (n_at < 1.0) throw DomainError("superradiant_lifetime: n_at must be >= 1");
    return t1_cav / n_at;
}

double superradiant_peak_power(double n_at, double omega, double t_sr,
                               const PhysicalConstants& k) {
    if (n_at < 1.0) throw DomainError("superradiant_peak_power: n_at must be >= 1");
    if (t_sr <= 0.0) throw DomainError("superradiant_peak_power: t_sr must be > 0");
    return n_at * k.hbar * omega / t_sr;
}

DelayStats delay_stats(double t_sr, double n_at, double n_ph) {
    if (n_at < 1.0) throw DomainError("delay_stats: n_at must be >= 1");
    if (n_ph < 0.0) throw DomainError("delay_stats: n_ph must be >= 0");
    if (n_ph > n_at - 1.0)
        throw DomainError("delay_stats: n_ph > n_at - 1 gives a negative delay");
    DelayStats d;
    d.t_delay = t_sr * std::log(n_at / (1.0 + n_ph));
    d.t_delay_jitter = 2.0 * t_sr / std::sqrt(1.0 + n_ph);
    return d;
}

double doppler_dephasing(const AtomSpecies& species, double temperature, double wavenumber,
                         const PhysicalConstants& k) {
    if (temperature < 0.0) throw DomainError("doppler_dephasing: temperature must be >= 0");
    if (wavenumber <= 0.0) throw DomainError("doppler_dephasing: wavenumber must be > 0");
    if (temperature == 0.0) return std::numeric_limits<double>::infinity();
    const double sigma_v = std::sqrt(k.k_boltzmann * temperature / species.mass);
    return 1.0 / (wavenumber * sigma_v);
}

DetectabilityRegion classify_detectability(double epsilon, double quality,
                                           const CavityConfig& cavity_template, double drive_n0,
                                           const DetectorModel& detector,
                                           const PhysicalConstants& k) {
    if (epsilon < 0.0) throw DomainError("classify_detectability: epsilon must be >= 0");
    if (quality <= 0.0) throw DomainError("classify_detectability: quality must be > 0");
    CavityConfig cavity = cavity_template;
    cavity.quality = quality;
    CasimirDrive drive;
    drive.epsilon = epsilon;
    drive.n0 = drive_n0;
    drive.omega_mech = 2.0 * cavity.omega;
    const double power = casimir_power(drive, cavity, k);
    if (power >= detector.direct_floor) return DetectabilityRegion::direct;
    if (power * detector.sr_gain >= detector.sr_floor)
        return DetectabilityRegion::superradiant_assisted;
    return DetectabilityRegion::inaccessible;
}

Timescales compute_timescales(const AtomSpecies& species, const CavityConfig& cavity, double n_at,
                              double temperature, double n_ph, const PhysicalConstants& k) {
    Timescales ts;
    ts.t1_free = t1_free(species, cavity.omega, k);
    ts.t1_cav = t1_cavity(species, cavity, k);
    ts.t_sr = superradiant_lifetime(ts.t1_cav, n_at);
    ts.gamma_inv = 1.0 / cavity.loss_rate();
    ts.t2_star = doppler_dephasing(species, temperature, cavity.omega / k.c, k);
    const DelayStats d = delay_stats(ts.t_sr, n_at, n_ph);
    ts.t_delay = d.t_delay;
    ts.t_delay_jitter = d.t_delay_jitter;
    return ts;
}

}  // namespace casimir
