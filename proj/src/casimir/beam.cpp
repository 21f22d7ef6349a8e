#include "beam.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "errors.hpp"

namespace casimir {

void BeamConfig::validate() const {
    if (n_at < 1.0) throw DomainError("beam: n_at must be >= 1");
    if (speed <= 0.0) throw DomainError("beam: speed must be > 0");
    if (temperature < 0.0) throw DomainError("beam: temperature must be >= 0");
}

void GridSpec::validate() const {
    if (velocity_cells < 1) throw DomainError("grid: velocity_cells must be >= 1");
    if (velocity_span_sigma <= 0.0) throw DomainError("grid: velocity span must be > 0");
    for (int n : spatial_cells)
        if (n != 1)
            throw ConfigError("grid: spatial dicing is limited to 1x1x1 cells; all atoms "
                              "share the single transit chord");
}

double PhaseSpaceGrid::total_atoms() const {
    double sum = 0.0;
    for (const auto& c : cells) sum += c.count;
    return sum;
}

Vec3 trajectory(const Cell& cell, double t) {
    if (t < 0.0) throw DomainError("trajectory: t must be >= 0");
    return {cell.entry_position.x + cell.velocity.x * t,
            cell.entry_position.y + cell.velocity.y * t,
            cell.entry_position.z + cell.velocity.z * t};
}

namespace {

double gaussian_cdf(double x) { return 0.5 * (1.0 + std::erf(x / std::sqrt(2.0))); }

// round weight*n_at to integers summing exactly to n_at (largest remainder)
std::vector<double> apportion_counts(const std::vector<double>& weights, double n_at) {
    const std::size_t n = weights.size();
    std::vector<double> counts(n);
    std::vector<double> frac(n);
    double assigned = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double raw = weights[i] * n_at;
        counts[i] = std::floor(raw);
        frac[i] = raw - counts[i];
        assigned += counts[i];
    }
    long long remainder = static_cast<long long>(std::llround(n_at - assigned));
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return frac[a] > frac[b]; });
    for (long long r = 0; r < remainder; ++r) counts[order[static_cast<std::size_t>(r) % n]] += 1.0;
    return counts;
}

}  // namespace

PhaseSpaceGrid dice_phase_space(const BeamConfig& beam, const GaussianMode& mode,
                                const AtomSpecies& species, const GridSpec& spec,
                                const PhysicalConstants& k) {
    beam.validate();
    spec.validate();

    const double z0 = mode.cavity.height_fraction * mode.cavity.length;
    const double kmode = mode.wavenumber(k);
    const double sigma_v =
        beam.temperature > 0.0 ? std::sqrt(k.k_boltzmann * beam.temperature / species.mass) : 0.0;

    PhaseSpaceGrid grid;

    auto make_cell = [&](double count, double weight, double v_par) {
        Cell c;
        c.count = count;
        c.weight = weight;
        c.axial_velocity = v_par;
        c.entry_position = {beam.entry_offset, 0.0, z0};
        c.velocity = {beam.speed, 0.0, v_par};
        c.detuning = kmode * v_par;
        return c;
    };

    if (sigma_v == 0.0 || spec.velocity_cells == 1) {
        grid.cells.push_back(make_cell(std::round(beam.n_at), 1.0, 0.0));
        grid.central_index = 0;
        if (grid.cells[0].count < 10.0)
            throw DomainError("grid too fine: velocity cell 0 holds " +
                              std::to_string(grid.cells[0].count) + " atoms (< 10)");
        return grid;
    }

    const int nv = spec.velocity_cells;
    const double span = spec.velocity_span_sigma;  // in units of sigma_v
    const double width = 2.0 * span / nv;

    std::vector<double> weights(nv);
    double sum = 0.0;
    for (int i = 0; i < nv; ++i) {
        const double lo = -span + i * width;
        const double hi = lo + width;
        weights[i] = gaussian_cdf(hi) - gaussian_cdf(lo);
        sum += weights[i];
    }
    for (auto& w : weights) w /= sum;

    const std::vector<double> counts = apportion_counts(weights, std::round(beam.n_at));

    grid.cells.reserve(nv);
    for (int i = 0; i < nv; ++i) {
        const double center = (-span + (i + 0.5) * width) * sigma_v;
        if (counts[i] < 10.0)
            throw DomainError("grid too fine: velocity cell " + std::to_string(i) + " (v_par = " +
                              std::to_string(center) + " m/s) holds " +
                              std::to_string(counts[i]) + " atoms (< 10)");
        grid.cells.push_back(make_cell(counts[i], counts[i] / std::round(beam.n_at), center));
    }

    grid.central_index = 0;
    for (std::size_t i = 1; i < grid.cells.size(); ++i)
        if (std::abs(grid.cells[i].axial_velocity) <
            std::abs(grid.cells[grid.central_index].axial_velocity))
            grid.central_index = i;
    return grid;
}

double coupling_at(const Cell& cell, const GaussianMode& mode, const AtomSpecies& species,
                   double t, const PhysicalConstants& k) {
    return coupling_at_position(species, mode, trajectory(cell, t), k);
}

}  // namespace casimir
