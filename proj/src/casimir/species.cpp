#include "species.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <sstream>

#include "errors.hpp"

namespace casimir {

void AtomSpecies::validate() const {
    if (mass <= 0.0) throw DomainError("species '" + name + "': mass must be > 0");
    if (hyperfine_omega <= 0.0)
        throw DomainError("species '" + name + "': hyperfine frequency must be > 0");
    if (moment <= 0.0) throw DomainError("species '" + name + "': moment must be > 0");
    if (transition_omega() <= 0.0)
        throw DomainError("species '" + name + "': zeeman offset drives frequency <= 0");
}

namespace {

constexpr double kTwoPi = 2.0 * kPi;

AtomSpecies make(const std::string& name, double mass_kg, double hyperfine_hz) {
    AtomSpecies s;
    s.name = name;
    s.mass = mass_kg;
    s.hyperfine_omega = kTwoPi * hyperfine_hz;
    s.moment = kConstants.mu_bohr;
    return s;
}

std::string lower(std::string v) {
    std::transform(v.begin(), v.end(), v.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return v;
}

}  // namespace

const std::vector<AtomSpecies>& builtin_species() {
    // Ground-state hyperfine splittings; masses of the listed isotopes.
    static const std::vector<AtomSpecies> table = {
        make("Li", 1.16503486e-26, 8.03504087e8),
        make("Na", 3.8175e-26, 1.7716e9),
        make("Rb", 1.44316060e-25, 6.83468261e9),
        make("Cs", 2.20694650e-25, 9.19263177e9),
    };
    return table;
}

AtomSpecies species_by_name(const std::string& name) {
    const std::string key = lower(name);
    for (const auto& s : builtin_species())
        if (lower(s.name) == key) return s;
    throw DomainError("unknown species '" + name + "'");
}

namespace {

// flat "key = value" scan shared by the species and constants loaders
std::map<std::string, double> scan_data_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError(path, "cannot open data file");
    std::map<std::string, double> values;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::string key, eq, value;
        std::istringstream ls(line);
        if (!(ls >> key)) continue;
        if (!(ls >> eq >> value) || eq != "=")
            throw ConfigError(path + ":" + std::to_string(lineno) + ": expected 'key = value'");
        if (key != "schema_version" && key.rfind("species.", 0) != 0 &&
            key.rfind("constants.", 0) != 0)
            throw ConfigError(path + ":" + std::to_string(lineno) + ": unknown key '" + key + "'");
        try {
            values[key] = std::stod(value);
        } catch (const std::exception&) {
            throw ConfigError(path + ":" + std::to_string(lineno) + ": bad number '" + value + "'");
        }
    }
    return values;
}

}  // namespace

std::vector<AtomSpecies> load_species_file(const std::string& path) {
    const std::map<std::string, double> raw = scan_data_file(path);

    // regroup "species.<name>.<field>" keys, preserving name order
    std::map<std::string, std::map<std::string, double>> fields;
    std::vector<std::string> order;
    for (const auto& [key, value] : raw) {
        if (key.rfind("species.", 0) != 0) continue;
        std::string rest = key.substr(8);
        auto dot = rest.find('.');
        if (dot == std::string::npos)
            throw ConfigError(path + ": expected species.<name>.<field>, got '" + key + "'");
        std::string name = rest.substr(0, dot);
        std::string field = rest.substr(dot + 1);
        if (fields.find(name) == fields.end()) order.push_back(name);
        fields[name][field] = value;
    }

    std::vector<AtomSpecies> out;
    for (const auto& name : order) {
        const auto& f = fields[name];
        AtomSpecies s;
        s.name = name;
        auto get = [&](const char* k) -> double {
            auto it = f.find(k);
            if (it == f.end())
                throw ConfigError(path + ": species '" + name + "' missing field '" + k + "'");
            return it->second;
        };
        s.mass = get("mass_kg");
        s.hyperfine_omega = kTwoPi * get("hyperfine_freq_hz");
        s.moment = f.count("moment_bohr") ? f.at("moment_bohr") * kConstants.mu_bohr
                                          : kConstants.mu_bohr;
        if (f.count("zeeman_offset_rad_s")) s.zeeman_offset = f.at("zeeman_offset_rad_s");
        s.validate();
        out.push_back(s);
    }
    return out;
}

PhysicalConstants load_constants_file(const std::string& path) {
    const std::map<std::string, double> raw = scan_data_file(path);
    auto get = [&](const char* key) {
        auto it = raw.find(key);
        if (it == raw.end())
            throw ConfigError(path + ": missing constants key '" + std::string(key) + "'");
        return it->second;
    };
    PhysicalConstants k;
    k.hbar = get("constants.hbar_j_s");
    k.mu0 = get("constants.mu0_t_m_per_a");
    k.mu_bohr = get("constants.mu_bohr_j_per_t");
    k.k_boltzmann = get("constants.k_boltzmann_j_per_k");
    k.c = get("constants.c_m_per_s");
    return k;
}

}  // namespace casimir
