// rng.hpp - small deterministic random number generator
//
// std::normal_distribution is implementation-defined, which would break the
// bit-exact replay contract across standard libraries. This is splitmix64
// plus an explicit Box-Muller transform, so a (seed, draw index) pair maps to
// the same value everywhere.

#pragma once

#include <cmath>
#include <cstdint>

#include "constants.hpp"

namespace casimir {

class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // uniform in [0, 1)
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // standard normal via Box-Muller; two uniforms consumed per draw
    double next_normal() {
        double u1 = next_double();
        double u2 = next_double();
        while (u1 <= 0.0) u1 = next_double();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
    }

private:
    std::uint64_t state_;
};

// Stateless mixer for deriving per-job seeds from (master seed, index).
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
    Rng r(master ^ (0x9e3779b97f4a7c15ULL * (index + 1)));
    return r.next_u64();
}

}  // namespace casimir
