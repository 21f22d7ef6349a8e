#include "io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "errors.hpp"
#include "version.hpp"

namespace casimir {

std::string format_sci(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.8e", v);
    return buf;
}

std::string series_csv_header() {
    return "t,photons,inversion,bloch_length,coupling_profile,emitted_power_W";
}

std::string metrics_csv_header() {
    return "n_cas_max,n_at,v_at,quality,t_at,peak_photons_sr,eta,rho_gnd_sr,xi,t_delay_sr,error";
}

namespace {

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary);  // binary: identical bytes on every platform
    if (!out) throw IoError(path, "cannot open output file");
    return out;
}

}  // namespace

void write_series_csv(const std::string& path, const ObservableSeries& series) {
    std::ofstream out = open_out(path);
    out << series_csv_header() << "\n";
    for (std::size_t i = 0; i < series.rows(); ++i) {
        out << format_sci(series.t[i]) << ',' << format_sci(series.photons[i]) << ','
            << format_sci(series.inversion[i]) << ',' << format_sci(series.bloch_length[i]) << ','
            << format_sci(series.coupling_profile[i]) << ','
            << format_sci(series.emitted_power[i]) << "\n";
    }
    if (!out) throw IoError(path, "write failed");
}

void write_metrics_csv(const std::string& path, const std::vector<MetricsRow>& rows) {
    std::ofstream out = open_out(path);
    out << metrics_csv_header() << "\n";
    for (const auto& r : rows) {
        out << format_sci(r.n_cas_max) << ',' << format_sci(r.n_at) << ',' << format_sci(r.v_at)
            << ',' << format_sci(r.quality) << ',' << format_sci(r.t_at) << ','
            << format_sci(r.peak_photons_sr) << ',' << format_sci(r.eta) << ','
            << format_sci(r.rho_gnd_sr) << ',' << format_sci(r.xi) << ','
            << format_sci(r.t_delay_sr) << ',';
        if (!r.error.empty())
            out << r.error;
        else if (r.sf_zero_flag)
            out << "sf_zero";
        out << "\n";
    }
    if (!out) throw IoError(path, "write failed");
}

void write_summary(const std::string& path, const RunResult& result) {
    std::ofstream out = open_out(path);
    out << "model = " << result.model << "\n";
    out << "peak_photons = " << format_sci(result.peak_photons) << "\n";
    out << "peak_time_s = " << format_sci(result.peak_time) << "\n";
    out << "t_delay_s = " << format_sci(result.peak_time) << "\n";
    out << "ground_pop_resonant = " << format_sci(result.ground_pop_resonant) << "\n";
    out << "exit_time_s = " << format_sci(result.exit_state.time) << "\n";
    out << "n_seed_photons = " << format_sci(result.n_seed_photons) << "\n";
    out << "excitation_drift_rel = " << format_sci(result.conservation.excitation_drift) << "\n";
    out << "bloch_drift_rel = " << format_sci(result.conservation.bloch_drift) << "\n";
    out << "series_rows = " << result.series.rows() << "\n";
    if (!out) throw IoError(path, "write failed");
}

void write_manifest(const std::string& path, const RunConfig& cfg, const ManifestInfo& info) {
    std::ofstream out = open_out(path);
    out << "manifest.schema_version = " << kManifestSchemaVersion << "\n";
    out << "manifest.code_version = " << kVersion << "\n";
    if (!info.started.empty()) out << "manifest.started = " << info.started << "\n";
    if (!info.finished.empty()) out << "manifest.finished = " << info.finished << "\n";
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(cfg.fingerprint()));
    out << "manifest.config_hash = " << buf << "\n";
    for (std::size_t i = 0; i < info.outputs.size(); ++i)
        out << "output." << i << " = " << info.outputs[i] << "\n";
    out << cfg.resolved().serialize();
    if (!out) throw IoError(path, "write failed");
}

void write_detectability_csv(const std::string& path, const CavityConfig& cavity_template,
                             double drive_n0, const DetectorModel& detector, double eps_min,
                             double eps_max, int eps_steps, double q_min, double q_max,
                             int q_steps) {
    if (eps_steps < 2 || q_steps < 2)
        throw DomainError("detectability grid: need at least 2 steps per axis");
    std::ofstream out = open_out(path);
    out << "epsilon,quality,power_W,region,q_epsilon,on_benchmark_line\n";
    const double leps = std::log10(eps_min), leps_step = (std::log10(eps_max) - leps) / (eps_steps - 1);
    const double lq = std::log10(q_min), lq_step = (std::log10(q_max) - lq) / (q_steps - 1);
    for (int qi = 0; qi < q_steps; ++qi) {
        const double q = std::pow(10.0, lq + qi * lq_step);
        for (int ei = 0; ei < eps_steps; ++ei) {
            const double eps = std::pow(10.0, leps + ei * leps_step);
            CavityConfig cav = cavity_template;
            cav.quality = q;
            CasimirDrive drive;
            drive.epsilon = eps;
            drive.n0 = drive_n0;
            drive.omega_mech = 2.0 * cav.omega;
            const double power = casimir_power(drive, cav);
            const DetectabilityRegion region =
                classify_detectability(eps, q, cavity_template, drive_n0, detector);
            const double qeps = q * eps;
            // flag cells the Q*epsilon = 1 line passes through (log metric)
            const bool benchmark = std::abs(std::log10(qeps)) <= 0.5 * (leps_step + lq_step) / 2.0;
            out << format_sci(eps) << ',' << format_sci(q) << ',' << format_sci(power) << ','
                << to_string(region) << ',' << format_sci(qeps) << ',' << (benchmark ? 1 : 0)
                << "\n";
        }
    }
    if (!out) throw IoError(path, "write failed");
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError(path, "cannot open file");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

}  // namespace casimir
