#include "mode.hpp"

#include <cmath>

#include "errors.hpp"

namespace casimir {

double GaussianMode::peak_amplitude() const {
    return 1.0 / std::sqrt(cavity.mode_volume);
}

double GaussianMode::normalization_volume() const {
    return cavity.length * kPi * cavity.waist * cavity.waist / 4.0;
}

double GaussianMode::wavenumber(const PhysicalConstants& k) const {
    return cavity.omega / k.c;
}

double GaussianMode::amplitude(const Vec3& p) const {
    if (p.z < 0.0 || p.z > cavity.length)
        throw DomainError("mode amplitude requested outside the mirror gap (z out of [0, L])");
    return amplitude_or_zero(p);
}

double GaussianMode::amplitude_or_zero(const Vec3& p) const {
    if (p.z < 0.0 || p.z > cavity.length) return 0.0;
    const double rho2 = p.x * p.x + p.y * p.y;
    const double w0 = cavity.waist;
    const double axial = std::sin(axial_index * kPi * p.z / cavity.length);
    return peak_amplitude() * axial * std::exp(-rho2 / (w0 * w0));
}

double coupling_amplitude_scale(const AtomSpecies& species, const GaussianMode& mode,
                                const PhysicalConstants& k) {
    const double omega = mode.cavity.omega;
    return species.moment * std::sqrt(k.mu0 * k.hbar * omega / 2.0) * mode.peak_amplitude() /
           k.hbar;
}

double coupling_at_position(const AtomSpecies& species, const GaussianMode& mode,
                            const Vec3& position, const PhysicalConstants& k) {
    const double u = mode.amplitude(position);
    return species.moment * std::sqrt(k.mu0 * k.hbar * mode.cavity.omega / 2.0) * u / k.hbar;
}

}  // namespace casimir
