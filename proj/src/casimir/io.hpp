// io.hpp - CSV / summary / manifest writers (byte-stable given equal inputs)
//
// CSV numbers are written in scientific notation with 9 significant digits.
// Schemas are documented in docs/schema.md; the manifest doubles as a config
// file, so replaying it reproduces the run bit-exactly.

#pragma once

#include <string>
#include <vector>

#include "metrics.hpp"
#include "physics.hpp"

namespace casimir {

std::string format_sci(double v);  // %.8e, "inf"/"nan" spelled out

std::string series_csv_header();
std::string metrics_csv_header();

void write_series_csv(const std::string& path, const ObservableSeries& series);
void write_metrics_csv(const std::string& path, const std::vector<MetricsRow>& rows);
void write_summary(const std::string& path, const RunResult& result);

struct ManifestInfo {
    std::string started;   // wall-clock strings; excluded from replay
    std::string finished;
    std::vector<std::string> outputs;
};

void write_manifest(const std::string& path, const RunConfig& cfg, const ManifestInfo& info);

// (epsilon, Q) classification grid; log-spaced axes. Rows carry the product
// Q*epsilon and flag the cells the Q*epsilon = 1 benchmark line crosses.
void write_detectability_csv(const std::string& path, const CavityConfig& cavity_template,
                             double drive_n0, const DetectorModel& detector, double eps_min,
                             double eps_max, int eps_steps, double q_min, double q_max,
                             int q_steps);

std::string read_text_file(const std::string& path);

}  // namespace casimir
