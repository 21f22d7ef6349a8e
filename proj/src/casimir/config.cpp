#include "config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "errors.hpp"

namespace casimir {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

std::string format_full(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

// schema: key -> default value ("auto" where physics resolves it)
const std::vector<std::pair<std::string, std::string>>& schema() {
    static const std::vector<std::pair<std::string, std::string>> s = {
        {"species.name", "Na"},
        {"species.file", "none"},
        {"species.mass_kg", "auto"},
        {"species.hyperfine_freq_hz", "auto"},
        {"species.moment_bohr", "1"},
        {"species.zeeman_offset_rad_s", "0"},
        {"cavity.freq_hz", "auto"},
        {"cavity.quality", "1e9"},
        {"cavity.mode_volume_m3", "auto"},
        {"cavity.length_m", "auto"},
        {"cavity.waist_m", "5.6e-3"},
        {"cavity.height_fraction", "0.1"},
        {"cavity.axial_index", "1"},
        {"drive.epsilon", "1e-9"},
        {"drive.n0", "0.5"},
        {"drive.omega_mech_rad_s", "auto"},
        {"drive.allow_off_resonance", "false"},
        {"detector.direct_floor_w", "1e-16"},
        {"detector.sr_floor_w", "1e-16"},
        {"detector.sr_gain", "1e9"},
        {"beam.n_at", "1e10"},
        {"beam.speed_m_s", "1"},
        {"beam.temperature_k", "0.01"},
        {"beam.entry_offset_m", "auto"},
        {"grid.velocity_cells", "5"},
        {"grid.velocity_span_sigma", "2"},
        {"grid.spatial_cells", "1 1 1"},
        {"ic.kind", "casimir"},
        {"ic.n_photons", "100"},
        {"ic.tip_phase", "uniform"},
        {"collisions.enabled", "false"},
        {"collisions.rate_hz", "0"},
        {"run.model", "full"},
        {"run.dt_s", "auto"},
        {"run.t_max_s", "auto"},
        {"run.output_stride", "100"},
        {"run.dt_guard_override", "false"},
        {"run.force_lossless", "false"},
        {"run.kernel", "auto"},
        {"run.reduced_kernel", "direct"},
        {"run.regime_override", "false"},
        {"run.regime_threshold", "10"},
        {"run.exit_coupling_fraction", "1e-6"},
        {"run.seed", "12345"},
        {"run.workers", "0"},
        {"sweep.limit", "1000"},
        {"sweep.seeds_per_point", "1"},
    };
    return s;
}

bool is_sweep_axis_key(const std::string& key) { return key.rfind("sweep.axis.", 0) == 0; }

}  // namespace

void KeyValues::set(const std::string& key, const std::string& value) {
    if (values_.find(key) == values_.end()) order_.push_back(key);
    values_[key] = value;
}

bool KeyValues::has(const std::string& key) const { return values_.count(key) != 0; }

const std::string& KeyValues::get(const std::string& key) const {
    auto it = values_.find(key);
    if (it == values_.end()) throw ConfigError("missing config key '" + key + "'");
    return it->second;
}

double KeyValues::get_double(const std::string& key) const {
    const std::string& v = get(key);
    try {
        std::size_t pos = 0;
        const double value = std::stod(v, &pos);
        if (trim(v.substr(pos)).empty()) return value;
    } catch (const std::exception&) {
    }
    throw ConfigError("key '" + key + "': expected a number, got '" + v + "'");
}

long long KeyValues::get_int(const std::string& key) const {
    const double v = get_double(key);
    const long long i = static_cast<long long>(std::llround(v));
    if (static_cast<double>(i) != v)
        throw ConfigError("key '" + key + "': expected an integer, got '" + get(key) + "'");
    return i;
}

std::uint64_t KeyValues::get_uint64(const std::string& key) const {
    const std::string& v = get(key);
    try {
        std::size_t pos = 0;
        const unsigned long long value = std::stoull(v, &pos);
        if (trim(v.substr(pos)).empty()) return value;
    } catch (const std::exception&) {
    }
    throw ConfigError("key '" + key + "': expected an unsigned integer, got '" + v + "'");
}

bool KeyValues::get_bool(const std::string& key) const {
    const std::string v = trim(get(key));
    if (v == "true" || v == "1") return true;
    if (v == "false" || v == "0") return false;
    throw ConfigError("key '" + key + "': expected true/false, got '" + v + "'");
}

bool KeyValues::is_auto(const std::string& key) const { return trim(get(key)) == "auto"; }

std::vector<double> KeyValues::get_list(const std::string& key) const {
    std::string v = get(key);
    std::replace(v.begin(), v.end(), ',', ' ');
    std::istringstream in(v);
    std::vector<double> out;
    double x;
    while (in >> x) out.push_back(x);
    if (out.empty()) throw ConfigError("key '" + key + "': expected a list of numbers");
    return out;
}

KeyValues KeyValues::parse_string(const std::string& text, const std::string& origin) {
    KeyValues kv;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(origin + ":" + std::to_string(lineno) + ": expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty())
            throw ConfigError(origin + ":" + std::to_string(lineno) + ": empty key or value");
        kv.set(key, value);
    }
    return kv;
}

KeyValues KeyValues::parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError(path, "cannot open config file");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_string(buf.str(), path);
}

std::string KeyValues::serialize() const {
    std::ostringstream out;
    for (const auto& k : order_) out << k << " = " << values_.at(k) << "\n";
    return out.str();
}

const KeyValues& config_defaults() {
    static const KeyValues kv = [] {
        KeyValues v;
        for (const auto& [key, value] : schema()) v.set(key, value);
        return v;
    }();
    return kv;
}

bool is_known_key(const std::string& key) {
    if (is_sweep_axis_key(key)) return true;
    if (key.rfind("manifest.", 0) == 0 || key.rfind("output.", 0) == 0) return true;
    for (const auto& [k, v] : schema())
        if (k == key) return true;
    return false;
}

void apply_override(KeyValues& kv, const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos)
        throw ConfigError("override '" + assignment + "': expected key=value");
    const std::string key = trim(assignment.substr(0, eq));
    const std::string value = trim(assignment.substr(eq + 1));
    if (!is_known_key(key)) throw ConfigError("override: unknown config key '" + key + "'");
    kv.set(key, value);
}

namespace {

AtomSpecies resolve_species(const KeyValues& kv) {
    AtomSpecies s;
    const std::string name = kv.get("species.name");
    const bool explicit_mass = !kv.is_auto("species.mass_kg");
    const bool explicit_freq = !kv.is_auto("species.hyperfine_freq_hz");
    if (kv.get("species.file") != "none") {
        const auto table = load_species_file(kv.get("species.file"));
        auto it = std::find_if(table.begin(), table.end(),
                               [&](const AtomSpecies& a) { return a.name == name; });
        if (it != table.end())
            s = *it;
        else
            s = species_by_name(name);
    } else if (explicit_mass && explicit_freq) {
        s.name = name;
    } else {
        s = species_by_name(name);
    }
    if (explicit_mass) s.mass = kv.get_double("species.mass_kg");
    if (explicit_freq) s.hyperfine_omega = 2.0 * kPi * kv.get_double("species.hyperfine_freq_hz");
    s.moment = kv.get_double("species.moment_bohr") * kConstants.mu_bohr;
    s.zeeman_offset = kv.get_double("species.zeeman_offset_rad_s");
    s.validate();
    return s;
}

}  // namespace

RunConfig config_from_keyvalues(KeyValues kv) {
    // unknown keys are config errors (catches typos early)
    for (const auto& key : kv.keys())
        if (!is_known_key(key)) throw ConfigError("unknown config key '" + key + "'");

    // fill unset keys with defaults
    KeyValues merged = config_defaults();
    for (const auto& key : kv.keys()) merged.set(key, kv.get(key));

    RunConfig cfg;
    cfg.species = resolve_species(merged);

    CavityConfig& cav = cfg.cavity;
    cav.omega = merged.is_auto("cavity.freq_hz")
                    ? cfg.species.transition_omega()
                    : 2.0 * kPi * merged.get_double("cavity.freq_hz");
    cav.quality = merged.get_double("cavity.quality");
    cav.waist = merged.get_double("cavity.waist_m");
    cav.height_fraction = merged.get_double("cavity.height_fraction");
    cav.axial_index = static_cast<int>(merged.get_int("cavity.axial_index"));
    cav.length = merged.is_auto("cavity.length_m")
                     ? cav.axial_index * cav.wavelength() / 2.0
                     : merged.get_double("cavity.length_m");
    cav.mode_volume = merged.is_auto("cavity.mode_volume_m3")
                          ? cav.length * kPi * cav.waist * cav.waist / 4.0
                          : merged.get_double("cavity.mode_volume_m3");
    cav.validate();

    cfg.drive.epsilon = merged.get_double("drive.epsilon");
    cfg.drive.n0 = merged.get_double("drive.n0");
    cfg.drive.omega_mech = merged.is_auto("drive.omega_mech_rad_s")
                               ? 2.0 * cav.omega
                               : merged.get_double("drive.omega_mech_rad_s");
    cfg.drive.validate();
    cfg.allow_off_resonance = merged.get_bool("drive.allow_off_resonance");

    cfg.detector.direct_floor = merged.get_double("detector.direct_floor_w");
    cfg.detector.sr_floor = merged.get_double("detector.sr_floor_w");
    cfg.detector.sr_gain = merged.get_double("detector.sr_gain");
    cfg.detector.validate();

    cfg.beam.n_at = merged.get_double("beam.n_at");
    cfg.beam.speed = merged.get_double("beam.speed_m_s");
    cfg.beam.temperature = merged.get_double("beam.temperature_k");
    cfg.beam.entry_offset = merged.is_auto("beam.entry_offset_m")
                                ? -3.0 * cav.waist
                                : merged.get_double("beam.entry_offset_m");
    cfg.beam.validate();

    cfg.grid.velocity_cells = static_cast<int>(merged.get_int("grid.velocity_cells"));
    cfg.grid.velocity_span_sigma = merged.get_double("grid.velocity_span_sigma");
    {
        const auto cells = merged.get_list("grid.spatial_cells");
        if (cells.size() != 3) throw ConfigError("grid.spatial_cells: expected three integers");
        for (int i = 0; i < 3; ++i) cfg.grid.spatial_cells[i] = static_cast<int>(cells[i]);
    }
    cfg.grid.validate();

    const std::string kind = merged.get("ic.kind");
    if (kind == "casimir")
        cfg.ic.kind = InitialCondition::Kind::casimir_seeded;
    else if (kind == "superfluorescence")
        cfg.ic.kind = InitialCondition::Kind::superfluorescence;
    else
        throw ConfigError("ic.kind: expected casimir|superfluorescence, got '" + kind + "'");
    cfg.ic.n_photons = merged.get_double("ic.n_photons");
    if (cfg.ic.n_photons < 0.0) throw ConfigError("ic.n_photons must be >= 0");
    if (cfg.ic.kind == InitialCondition::Kind::superfluorescence) cfg.ic.n_photons = 0.0;
    const std::string tip = merged.get("ic.tip_phase");
    if (tip == "uniform")
        cfg.ic.tip_phase = InitialCondition::TipPhase::uniform;
    else if (tip == "random")
        cfg.ic.tip_phase = InitialCondition::TipPhase::random_per_cell;
    else
        throw ConfigError("ic.tip_phase: expected uniform|random, got '" + tip + "'");

    cfg.master_seed = merged.get_uint64("run.seed");
    cfg.ic.seed = derive_seed(cfg.master_seed, 1);

    RunOptions& ro = cfg.run_opts;
    ro.dt = merged.is_auto("run.dt_s") ? 0.0 : merged.get_double("run.dt_s");
    ro.t_max = merged.is_auto("run.t_max_s") ? 0.0 : merged.get_double("run.t_max_s");
    ro.output_stride = static_cast<int>(merged.get_int("run.output_stride"));
    ro.dt_guard_override = merged.get_bool("run.dt_guard_override");
    ro.force_lossless = merged.get_bool("run.force_lossless");
    ro.exit_coupling_fraction = merged.get_double("run.exit_coupling_fraction");
    ro.collisions.enabled = merged.get_bool("collisions.enabled");
    ro.collisions.rate = merged.get_double("collisions.rate_hz");
    ro.collisions.seed = derive_seed(cfg.master_seed, 2);

    const std::string kernel = merged.get("run.kernel");
    if (kernel == "auto") {
        cfg.kernel_auto = true;
        ro.kernel = Kernel::serial;  // refined at system build time
    } else if (kernel == "serial") {
        cfg.kernel_auto = false;
        ro.kernel = Kernel::serial;
    } else if (kernel == "parallel") {
        cfg.kernel_auto = false;
        ro.kernel = Kernel::parallel;
    } else {
        throw ConfigError("run.kernel: expected auto|serial|parallel");
    }

    ReducedOptions& rd = cfg.reduced_opts;
    rd.dt = ro.dt;
    rd.t_max = ro.t_max;
    rd.output_stride = ro.output_stride;
    rd.regime_override = merged.get_bool("run.regime_override");
    rd.regime_threshold = merged.get_double("run.regime_threshold");
    rd.exit_coupling_fraction = ro.exit_coupling_fraction;
    rd.collisions = ro.collisions;
    const std::string rk = merged.get("run.reduced_kernel");
    if (rk == "direct")
        rd.kernel = ReducedKernel::direct;
    else if (rk == "direct_parallel")
        rd.kernel = ReducedKernel::direct_parallel;
    else if (rk == "factored")
        rd.kernel = ReducedKernel::factored;
    else
        throw ConfigError("run.reduced_kernel: expected direct|direct_parallel|factored");

    cfg.model = merged.get("run.model");
    if (cfg.model != "full" && cfg.model != "reduced")
        throw ConfigError("run.model: expected full|reduced");

    cfg.workers = static_cast<int>(merged.get_int("run.workers"));
    cfg.sweep_limit = merged.get_int("sweep.limit");
    cfg.seeds_per_point = static_cast<int>(merged.get_int("sweep.seeds_per_point"));

    for (const auto& key : kv.keys()) {
        if (!is_sweep_axis_key(key)) continue;
        SweepAxis axis;
        axis.param = key.substr(std::string("sweep.axis.").size());
        if (!is_known_key(axis.param) || axis.param.rfind("sweep.", 0) == 0)
            throw ConfigError("sweep axis over unknown parameter '" + axis.param + "'");
        std::string v = kv.get(key);
        std::replace(v.begin(), v.end(), ',', ' ');
        std::istringstream in(v);
        std::string tok;
        while (in >> tok) axis.values.push_back(tok);
        if (axis.values.empty()) throw ConfigError("sweep axis '" + axis.param + "' has no values");
        cfg.sweep_axes.push_back(std::move(axis));
    }
    return cfg;
}

RunConfig load_config(const std::string& path, const std::vector<std::string>& overrides) {
    KeyValues kv = path.empty() ? KeyValues{} : KeyValues::parse_file(path);
    // manifest replay: ignore bookkeeping keys
    KeyValues clean;
    for (const auto& key : kv.keys())
        if (key.rfind("manifest.", 0) != 0 && key.rfind("output.", 0) != 0)
            clean.set(key, kv.get(key));
    for (const auto& o : overrides) apply_override(clean, o);
    return config_from_keyvalues(clean);
}

KeyValues RunConfig::resolved() const {
    KeyValues kv;
    kv.set("species.name", species.name);
    kv.set("species.file", "none");
    kv.set("species.mass_kg", format_full(species.mass));
    kv.set("species.hyperfine_freq_hz", format_full(species.hyperfine_omega / (2.0 * kPi)));
    kv.set("species.moment_bohr", format_full(species.moment / kConstants.mu_bohr));
    kv.set("species.zeeman_offset_rad_s", format_full(species.zeeman_offset));
    kv.set("cavity.freq_hz", format_full(cavity.omega / (2.0 * kPi)));
    kv.set("cavity.quality", format_full(cavity.quality));
    kv.set("cavity.mode_volume_m3", format_full(cavity.mode_volume));
    kv.set("cavity.length_m", format_full(cavity.length));
    kv.set("cavity.waist_m", format_full(cavity.waist));
    kv.set("cavity.height_fraction", format_full(cavity.height_fraction));
    kv.set("cavity.axial_index", std::to_string(cavity.axial_index));
    kv.set("drive.epsilon", format_full(drive.epsilon));
    kv.set("drive.n0", format_full(drive.n0));
    kv.set("drive.omega_mech_rad_s", format_full(drive.omega_mech));
    kv.set("drive.allow_off_resonance", allow_off_resonance ? "true" : "false");
    kv.set("detector.direct_floor_w", format_full(detector.direct_floor));
    kv.set("detector.sr_floor_w", format_full(detector.sr_floor));
    kv.set("detector.sr_gain", format_full(detector.sr_gain));
    kv.set("beam.n_at", format_full(beam.n_at));
    kv.set("beam.speed_m_s", format_full(beam.speed));
    kv.set("beam.temperature_k", format_full(beam.temperature));
    kv.set("beam.entry_offset_m", format_full(beam.entry_offset));
    kv.set("grid.velocity_cells", std::to_string(grid.velocity_cells));
    kv.set("grid.velocity_span_sigma", format_full(grid.velocity_span_sigma));
    kv.set("grid.spatial_cells", "1 1 1");
    kv.set("ic.kind", ic.kind == InitialCondition::Kind::casimir_seeded ? "casimir"
                                                                        : "superfluorescence");
    kv.set("ic.n_photons", format_full(ic.n_photons));
    kv.set("ic.tip_phase",
           ic.tip_phase == InitialCondition::TipPhase::uniform ? "uniform" : "random");
    kv.set("collisions.enabled", run_opts.collisions.enabled ? "true" : "false");
    kv.set("collisions.rate_hz", format_full(run_opts.collisions.rate));
    kv.set("run.model", model);
    kv.set("run.dt_s", run_opts.dt > 0.0 ? format_full(run_opts.dt) : "auto");
    kv.set("run.t_max_s", run_opts.t_max > 0.0 ? format_full(run_opts.t_max) : "auto");
    kv.set("run.output_stride", std::to_string(run_opts.output_stride));
    kv.set("run.dt_guard_override", run_opts.dt_guard_override ? "true" : "false");
    kv.set("run.force_lossless", run_opts.force_lossless ? "true" : "false");
    kv.set("run.kernel", kernel_auto ? "auto"
                                     : (run_opts.kernel == Kernel::parallel ? "parallel"
                                                                            : "serial"));
    kv.set("run.reduced_kernel", reduced_opts.kernel == ReducedKernel::factored
                                     ? "factored"
                                     : (reduced_opts.kernel == ReducedKernel::direct_parallel
                                            ? "direct_parallel"
                                            : "direct"));
    kv.set("run.regime_override", reduced_opts.regime_override ? "true" : "false");
    kv.set("run.regime_threshold", format_full(reduced_opts.regime_threshold));
    kv.set("run.exit_coupling_fraction", format_full(run_opts.exit_coupling_fraction));
    kv.set("run.seed", std::to_string(master_seed));
    kv.set("run.workers", std::to_string(workers));
    kv.set("sweep.limit", std::to_string(sweep_limit));
    kv.set("sweep.seeds_per_point", std::to_string(seeds_per_point));
    for (const auto& axis : sweep_axes) {
        std::string joined;
        for (const auto& v : axis.values) joined += (joined.empty() ? "" : " ") + v;
        kv.set("sweep.axis." + axis.param, joined);
    }
    return kv;
}

std::uint64_t RunConfig::fingerprint() const {
    const KeyValues kv = resolved();
    std::uint64_t h = 1469598103934665603ULL;  // FNV-1a
    auto mix = [&](const std::string& s) {
        for (unsigned char c : s) {
            h ^= c;
            h *= 1099511628211ULL;
        }
    };
    for (const auto& key : kv.keys()) {
        if (key == "ic.kind" || key == "ic.n_photons") continue;  // SR/SF partners match
        mix(key);
        mix("=");
        mix(kv.get(key));
        mix("\n");
    }
    return h;
}

CavitySystem build_system(const RunConfig& cfg) {
    CavitySystem sys;
    sys.species = cfg.species;
    sys.cavity = cfg.cavity;
    GaussianMode mode;
    mode.cavity = cfg.cavity;
    mode.axial_index = cfg.cavity.axial_index;
    sys.modes.push_back(mode);
    sys.grid = dice_phase_space(cfg.beam, mode, cfg.species, cfg.grid);
    sys.finalize();
    return sys;
}

SystemState build_initial_state(const RunConfig& cfg, const CavitySystem& sys) {
    InitialCondition ic = cfg.ic;
    if (ic.kind == InitialCondition::Kind::casimir_seeded)
        return init_casimir_seeded(sys.grid, ic, ic.n_photons, sys.n_modes());
    return init_superfluorescence(sys.grid, ic, sys.n_modes());
}

RunResult execute(const RunConfig& cfg) {
    const CavitySystem sys = build_system(cfg);
    const SystemState initial = build_initial_state(cfg, sys);
    RunResult result;
    if (cfg.model == "reduced") {
        result = run_reduced(sys, initial, cfg.reduced_opts);
    } else {
        RunOptions opts = cfg.run_opts;
        if (cfg.kernel_auto)
            opts.kernel = sys.n_cells() >= 64 ? Kernel::parallel : Kernel::serial;
        result = run(sys, initial, opts);
    }
    result.config_fingerprint = cfg.fingerprint();
    return result;
}

}  // namespace casimir
