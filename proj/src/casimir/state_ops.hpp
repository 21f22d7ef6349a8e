// state_ops.hpp - elementwise state arithmetic shared by the integrators

#pragma once

#include <cmath>

#include "state.hpp"

namespace casimir::detail {

inline void resize_like(SystemState& dst, const SystemState& src) {
    dst.sigma_z.resize(src.sigma_z.size());
    dst.sigma_plus.resize(src.sigma_plus.size());
    dst.modes.resize(src.modes.size());
}

// dst = a + h * b; the caller sets dst.time
inline void add_scaled(SystemState& dst, const SystemState& a, double h, const SystemState& b) {
    resize_like(dst, a);
    const std::size_t nc = a.sigma_z.size();
    for (std::size_t i = 0; i < nc; ++i) {
        dst.sigma_z[i] = a.sigma_z[i] + h * b.sigma_z[i];
        dst.sigma_plus[i] = a.sigma_plus[i] + h * b.sigma_plus[i];
    }
    for (std::size_t m = 0; m < a.modes.size(); ++m) dst.modes[m] = a.modes[m] + h * b.modes[m];
    dst.leaked = a.leaked + h * b.leaked;
}

inline void combine_rk4(SystemState& s, double dt, const SystemState& k1, const SystemState& k2,
                        const SystemState& k3, const SystemState& k4) {
    const double w1 = dt / 6.0, w2 = dt / 3.0;
    const std::size_t nc = s.sigma_z.size();
    for (std::size_t i = 0; i < nc; ++i) {
        s.sigma_z[i] += w1 * (k1.sigma_z[i] + k4.sigma_z[i]) + w2 * (k2.sigma_z[i] + k3.sigma_z[i]);
        s.sigma_plus[i] +=
            w1 * (k1.sigma_plus[i] + k4.sigma_plus[i]) + w2 * (k2.sigma_plus[i] + k3.sigma_plus[i]);
    }
    for (std::size_t m = 0; m < s.modes.size(); ++m)
        s.modes[m] += w1 * (k1.modes[m] + k4.modes[m]) + w2 * (k2.modes[m] + k3.modes[m]);
    s.leaked += w1 * (k1.leaked + k4.leaked) + w2 * (k2.leaked + k3.leaked);
}

inline bool state_is_finite(const SystemState& s) {
    for (const auto& a : s.modes)
        if (!std::isfinite(a.real()) || !std::isfinite(a.imag())) return false;
    for (double z : s.sigma_z)
        if (!std::isfinite(z)) return false;
    for (const auto& p : s.sigma_plus)
        if (!std::isfinite(p.real()) || !std::isfinite(p.imag())) return false;
    return std::isfinite(s.leaked);
}

}  // namespace casimir::detail
