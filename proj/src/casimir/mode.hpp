// mode.hpp - cavity mode profile and the atom-field coupling coefficient
//
// Mode convention: the cavity axis is z with the planar mirror at z = 0,
//   U(r) = U_peak * sin(n pi z / L) * exp(-rho^2 / w0^2),
// rho the transverse distance from the axis and U_peak = 1 / sqrt(V) with V
// the configured mode volume. When V equals the geometric normalization
// volume L pi w0^2 / 4 the profile integrates to one; V may instead be set
// from a target cavity lifetime, in which case it fixes the coupling
// strength while L and w0 fix only the envelope shape.

#pragma once

#include "physics.hpp"

namespace casimir {

struct Vec3 {
    double x = 0.0, y = 0.0, z = 0.0;
};

struct GaussianMode {
    CavityConfig cavity;
    int axial_index = 1;

    double peak_amplitude() const;                    // U_peak = 1/sqrt(V), m^-3/2
    double normalization_volume() const;              // geometric L pi w0^2 / 4
    double wavenumber(const PhysicalConstants& k = kConstants) const;  // omega/c, rad/m

    // profile value at a point; throws DomainError for z outside [0, L]
    double amplitude(const Vec3& position) const;

    // same evaluation but returning 0 outside the axial domain, for
    // trajectories that leave the mirror gap
    double amplitude_or_zero(const Vec3& position) const;
};

// Rabi frequency coefficient chi = mu sqrt(mu0 hbar omega / 2) U(r) / hbar,
// real under the mode convention above. Units 1/s.
double coupling_amplitude_scale(const AtomSpecies& species, const GaussianMode& mode,
                                const PhysicalConstants& k = kConstants);  // chi at U = U_peak

double coupling_at_position(const AtomSpecies& species, const GaussianMode& mode,
                            const Vec3& position, const PhysicalConstants& k = kConstants);

}  // namespace casimir
