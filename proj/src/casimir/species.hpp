// species.hpp - alkali atom data for the ground-state hyperfine transition

#pragma once

#include <string>
#include <vector>

#include "constants.hpp"

namespace casimir {

struct AtomSpecies {
    std::string name;
    double mass = 0.0;            // kg
    double hyperfine_omega = 0.0; // transition angular frequency Omega_0, rad/s
    double moment = 0.0;          // transition magnetic moment mu, J/T
    double zeeman_offset = 0.0;   // DC-field tuning shift added to Omega_0, rad/s

    // effective transition frequency after DC-field tuning
    double transition_omega() const { return hyperfine_omega + zeeman_offset; }

    void validate() const;
};

// Built-in table: Li-7, Na-23, Rb-87, Cs-133 with mu = mu_B by default.
const std::vector<AtomSpecies>& builtin_species();

// Lookup by case-insensitive name; throws DomainError if unknown.
AtomSpecies species_by_name(const std::string& name);

// Load additional/overriding species from a key-value data file
// (see docs/schema.md). Returns the table in file order.
std::vector<AtomSpecies> load_species_file(const std::string& path);

// Read the constants block of a data file. These are fixed reference
// values; the loader exists so the shipped table can be cross-checked
// against the compiled-in ones, not to reconfigure physics at runtime.
PhysicalConstants load_constants_file(const std::string& path);

}  // namespace casimir
