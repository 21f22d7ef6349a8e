// constants.hpp - fixed physical reference values (SI units)
//
// These are the 2018 CODATA values. They are compile-time constants and are
// never mutated at runtime; species- or cavity-dependent quantities live in
// their own config structs.

#pragma once

namespace casimir {

struct PhysicalConstants {
    double hbar;         // reduced Planck constant, J s
    double mu0;          // magnetic permeability of vacuum, T m/A
    double mu_bohr;      // Bohr magneton, J/T
    double k_boltzmann;  // Boltzmann constant, J/K
    double c;            // speed of light, m/s
};

inline constexpr PhysicalConstants kConstants{
    1.054571817e-34,       // hbar
    1.25663706212e-6,      // mu0 (= 4*pi*1e-7 to within CODATA 2018)
    9.2740100783e-24,      // mu_bohr
    1.380649e-23,          // k_boltzmann (exact since 2019 SI)
    299792458.0,           // c (exact)
};

inline constexpr double kPi = 3.141592653589793238462643383279502884;

}  // namespace casimir
