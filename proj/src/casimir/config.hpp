// config.hpp - run configuration: schema, parsing, resolution
//
// Flat dotted-key text format, one `key = value` per line, '#' comments.
// Unset keys take schema defaults; several keys accept "auto" and resolve
// from the physics (see docs/schema.md for the full key list). A resolved
// config serializes canonically with every auto replaced by its value, which
// is what manifests store and what makes replay reproduce runs bit-exactly.

#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "dynamics.hpp"
#include "reduced.hpp"

namespace casimir {

class KeyValues {
public:
    void set(const std::string& key, const std::string& value);
    bool has(const std::string& key) const;
    const std::string& get(const std::string& key) const;  // throws ConfigError when missing
    const std::vector<std::string>& keys() const { return order_; }

    double get_double(const std::string& key) const;
    long long get_int(const std::string& key) const;
    std::uint64_t get_uint64(const std::string& key) const;
    bool get_bool(const std::string& key) const;
    bool is_auto(const std::string& key) const;
    std::vector<double> get_list(const std::string& key) const;

    static KeyValues parse_file(const std::string& path);
    static KeyValues parse_string(const std::string& text, const std::string& origin = "<string>");
    std::string serialize() const;

private:
    std::map<std::string, std::string> values_;
    std::vector<std::string> order_;
};

// Schema-defaulted configuration text; every known key with its default.
const KeyValues& config_defaults();
bool is_known_key(const std::string& key);

struct SweepAxis {
    std::string param;
    std::vector<std::string> values;
};

// Fully resolved run configuration.
struct RunConfig {
    AtomSpecies species;
    CavityConfig cavity;
    CasimirDrive drive;
    bool allow_off_resonance = false;
    DetectorModel detector;
    BeamConfig beam;
    GridSpec grid;
    InitialCondition ic;
    RunOptions run_opts;
    ReducedOptions reduced_opts;
    std::string model = "full";  // "full" | "reduced"
    bool kernel_auto = true;
    std::uint64_t master_seed = 12345;
    int workers = 0;

    std::vector<SweepAxis> sweep_axes;
    long long sweep_limit = 1000;
    int seeds_per_point = 1;

    // canonical resolved snapshot (auto keys replaced by their values)
    KeyValues resolved() const;
    // hash of the resolved snapshot without the initial-condition keys;
    // SR/SF partners of one configuration share this value
    std::uint64_t fingerprint() const;
};

// Merge order: defaults <- file (optional) <- overrides ("key=value").
// Unknown keys and malformed values throw ConfigError.
RunConfig load_config(const std::string& path, const std::vector<std::string>& overrides = {});
RunConfig config_from_keyvalues(KeyValues kv);
void apply_override(KeyValues& kv, const std::string& assignment);

// System assembly and execution -------------------------------------------

CavitySystem build_system(const RunConfig& cfg);
SystemState build_initial_state(const RunConfig& cfg, const CavitySystem& sys);

// Dispatch on cfg.model; full runs honor the kernel choice (auto selects the
// parallel kernel from 64 cells up).
RunResult execute(const RunConfig& cfg);

}  // namespace casimir
