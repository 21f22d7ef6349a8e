// Beam discretization and mode geometry: profile convention, normalization,
// velocity-cell weights and counts, trajectories, and the coupling
// coefficient along them.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "casimir/beam.hpp"
#include "casimir/errors.hpp"
#include "casimir/rng.hpp"
#include "casimir/system.hpp"

using namespace casimir;

namespace {

constexpr double kNaOmega = 2.0 * kPi * 1.7716e9;

GaussianMode default_mode(double volume = 0.0, double quality = 1e9) {
    CavityConfig c;
    c.omega = kNaOmega;
    c.quality = quality;
    c.length = c.wavelength() / 2.0;
    c.waist = 5.6e-3;
    c.mode_volume = volume > 0.0 ? volume : c.length * kPi * c.waist * c.waist / 4.0;
    GaussianMode m;
    m.cavity = c;
    return m;
}

BeamConfig default_beam(double n_at = 1e10, double temperature = 0.01) {
    BeamConfig b;
    b.n_at = n_at;
    b.speed = 1.0;
    b.temperature = temperature;
    b.entry_offset = -3.0 * 5.6e-3;
    return b;
}

}  // namespace

TEST_CASE("mode profile convention") {
    const GaussianMode mode = default_mode();
    const double L = mode.cavity.length;
    const double w0 = mode.cavity.waist;
    const double peak = mode.peak_amplitude();

    // antinode on axis
    CHECK(mode.amplitude({0.0, 0.0, L / 2.0}) == doctest::Approx(peak).epsilon(1e-12));
    // axial factor sin(pi z / L) at z = 0.1 L
    CHECK(mode.amplitude({0.0, 0.0, 0.1 * L}) ==
          doctest::Approx(0.309017 * peak).epsilon(1e-5));
    // transverse Gaussian reaches 1/e at one waist
    CHECK(mode.amplitude({w0, 0.0, L / 2.0}) ==
          doctest::Approx(peak * std::exp(-1.0)).epsilon(1e-12));

    // outside the mirror gap
    CHECK_THROWS_AS(mode.amplitude({0.0, 0.0, -1e-6}), DomainError);
    CHECK_THROWS_AS(mode.amplitude({0.0, 0.0, L + 1e-6}), DomainError);
    CHECK(mode.amplitude_or_zero({0.0, 0.0, L + 1e-6}) == 0.0);
}

TEST_CASE("mode normalization integrates to one for the geometric volume") {
    const GaussianMode mode = default_mode();  // volume = L pi w0^2 / 4
    const double L = mode.cavity.length;
    const double w0 = mode.cavity.waist;

    // composite Simpson quadrature in (z, rho), rho measure 2 pi rho
    const int nz = 512, nr = 512;
    const double rmax = 8.0 * w0;
    const double hz = L / nz, hr = rmax / nr;
    auto simpson_weight = [](int i, int n) {
        if (i == 0 || i == n) return 1.0;
        return (i % 2 == 1) ? 4.0 : 2.0;
    };
    double integral = 0.0;
    for (int i = 0; i <= nz; ++i) {
        const double z = i * hz;
        double row = 0.0;
        for (int j = 0; j <= nr; ++j) {
            const double rho = j * hr;
            const double u = mode.amplitude({rho, 0.0, z});
            row += simpson_weight(j, nr) * u * u * 2.0 * kPi * rho;
        }
        integral += simpson_weight(i, nz) * row * (hr / 3.0);
    }
    integral *= hz / 3.0;
    CHECK(integral == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("velocity dicing: weights, counts, symmetry") {
    const AtomSpecies na = species_by_name("Na");
    const GaussianMode mode = default_mode();
    GridSpec spec;  // 5 cells over +-2 sigma

    const PhaseSpaceGrid grid = dice_phase_space(default_beam(), mode, na, spec);
    REQUIRE(grid.cells.size() == 5);

    // thermal spread 1.90 m/s at 10 mK -> bin centers within +-2 sigma
    const double sigma_v = std::sqrt(kConstants.k_boltzmann * 0.01 / na.mass);
    CHECK(sigma_v == doctest::Approx(1.90).epsilon(2e-3));
    CHECK(grid.cells.front().axial_velocity == doctest::Approx(-1.6 * sigma_v).epsilon(1e-12));
    CHECK(grid.cells.back().axial_velocity == doctest::Approx(1.6 * sigma_v).epsilon(1e-12));
    CHECK(grid.cells[2].axial_velocity == doctest::Approx(0.0));
    CHECK(grid.central_index == 2);

    // symmetric weights, independent-quadrature oracle for the bin integrals
    CHECK(grid.cells[0].weight == doctest::Approx(grid.cells[4].weight).epsilon(1e-12));
    CHECK(grid.cells[1].weight == doctest::Approx(grid.cells[3].weight).epsilon(1e-12));
    auto bin_weight = [&](double lo, double hi) {
        const int n = 20000;
        double sum = 0.0;
        for (int i = 0; i < n; ++i) {
            const double x = lo + (i + 0.5) * (hi - lo) / n;
            sum += std::exp(-0.5 * x * x) / std::sqrt(2.0 * kPi) * (hi - lo) / n;
        }
        return sum;
    };
    const double norm = bin_weight(-2.0, 2.0);
    CHECK(grid.cells[2].weight == doctest::Approx(bin_weight(-0.4, 0.4) / norm).epsilon(1e-6));
    CHECK(grid.cells[1].weight == doctest::Approx(bin_weight(-1.2, -0.4) / norm).epsilon(1e-6));

    // exact conservation
    CHECK(grid.total_atoms() == 1e10);
    double wsum = 0.0;
    for (const auto& c : grid.cells) {
        wsum += c.weight;
        CHECK(c.count == std::floor(c.count));  // integer-valued
        CHECK(c.count >= 10.0);
    }
    CHECK(std::abs(wsum - 1.0) < 1e-12);

    // Doppler detuning stored per cell
    const double k = mode.wavenumber();
    CHECK(grid.cells[4].detuning == doctest::Approx(k * 1.6 * sigma_v).epsilon(1e-12));
}

TEST_CASE("velocity dicing edge cases") {
    const AtomSpecies na = species_by_name("Na");
    const GaussianMode mode = default_mode();
    GridSpec spec;

    // zero temperature collapses to the single central cell
    const PhaseSpaceGrid cold = dice_phase_space(default_beam(1e10, 0.0), mode, na, spec);
    CHECK(cold.cells.size() == 1);
    CHECK(cold.cells[0].axial_velocity == 0.0);
    CHECK(cold.cells[0].count == 1e10);
    CHECK(cold.cells[0].weight == 1.0);

    // too few atoms for the outer bins: error names the offending cell
    CHECK_THROWS_WITH_AS(dice_phase_space(default_beam(20, 0.01), mode, na, spec),
                         doctest::Contains("velocity cell 0"), DomainError);

    // conservation under the rounding correction for awkward totals
    for (double n_at : {1037.0, 9999.0, 54321.0, 1.0000001e7}) {
        GridSpec s;
        s.velocity_cells = 7;
        const PhaseSpaceGrid g = dice_phase_space(default_beam(n_at, 0.01), mode, na, s);
        CHECK(g.total_atoms() == std::round(n_at));
    }

    // spatial dicing is a documented 1x1x1 restriction
    GridSpec spatial;
    spatial.spatial_cells[0] = 2;
    CHECK_THROWS_AS(dice_phase_space(default_beam(), mode, na, spatial), ConfigError);

    BeamConfig bad = default_beam();
    bad.speed = 0.0;
    CHECK_THROWS_AS(dice_phase_space(bad, mode, na, spec), DomainError);
}

TEST_CASE("straight-line trajectories") {
    const AtomSpecies na = species_by_name("Na");
    const GaussianMode mode = default_mode();
    const double L = mode.cavity.length;
    GridSpec spec;
    const PhaseSpaceGrid grid = dice_phase_space(default_beam(), mode, na, spec);

    const Cell& central = grid.cells[grid.central_index];
    const Vec3 start = trajectory(central, 0.0);
    CHECK(start.x == doctest::Approx(-3.0 * 5.6e-3));
    CHECK(start.y == 0.0);
    CHECK(start.z == doctest::Approx(0.1 * L).epsilon(1e-12));  // beam height

    // reaches the mode axis after entry_offset / speed
    const Vec3 at_axis = trajectory(central, 3.0 * 5.6e-3 / 1.0);
    CHECK(at_axis.x == doctest::Approx(0.0).epsilon(1e-12));

    // axial drift for a detuned cell: z advances at the cell's axial velocity
    const Cell& fast = grid.cells.back();
    const double t = 10e-3;
    CHECK(trajectory(fast, t).z ==
          doctest::Approx(0.1 * L + fast.axial_velocity * t).epsilon(1e-12));
    CHECK(fast.axial_velocity * t == doctest::Approx(19e-3).epsilon(0.05));  // ~19 mm drift

    CHECK_THROWS_AS(trajectory(central, -1.0), DomainError);
}

TEST_CASE("coupling coefficient: calibrated peak value and two derivations") {
    const AtomSpecies na = species_by_name("Na");
    // coupling-calibration volume (cavity lifetime 1e6 s at Q = 1e9)
    const double volume = volume_for_lifetime(1e6, na, 1e9);
    const GaussianMode mode = default_mode(volume);

    const double chi0 = coupling_at_position(na, mode, {0.0, 0.0, mode.cavity.length / 2.0});
    CHECK(chi0 == doctest::Approx(1.67e-3).epsilon(2e-3));

    // independent route through the damping rate and the cavity lifetime
    const double gamma = mode.cavity.loss_rate();
    CHECK(chi0 == doctest::Approx(std::sqrt(gamma / (2.0 * 1e6))).epsilon(1e-10));

    // profile factor at the beam height
    const double chi_off = coupling_at_position(na, mode, {0.0, 0.0, 0.1 * mode.cavity.length});
    CHECK(chi_off == doctest::Approx(0.309017 * chi0).epsilon(1e-5));

    // vanishing far outside the waist
    const double chi_far =
        coupling_at_position(na, mode, {20.0 * mode.cavity.waist, 0.0, mode.cavity.length / 2.0});
    CHECK(std::abs(chi_far) < 1e-170);

    // cell-level evaluation matches the position-level one along the path
    GridSpec spec;
    const PhaseSpaceGrid grid = dice_phase_space(default_beam(), mode, na, spec);
    const Cell& cell = grid.cells[grid.central_index];
    for (double t : {0.0, 5e-3, 16.8e-3}) {
        CHECK(coupling_at(cell, mode, na, t) ==
              doctest::Approx(coupling_at_position(na, mode, trajectory(cell, t))).epsilon(1e-14));
    }

    // out-of-domain propagates once a drifting cell leaves the mirror gap
    const Cell& down = grid.cells.front();  // negative axial velocity
    const double t_out = (0.1 * mode.cavity.length) / std::abs(down.axial_velocity) + 1e-3;
    CHECK_THROWS_AS(coupling_at(down, mode, na, t_out), DomainError);
}

TEST_CASE("coupling-lifetime consistency relation at sampled positions") {
    // |chi(r)|^2 (2Q/omega) = V |U(r)|^2 / (2 T1_cav) to 1e-10 everywhere
    const AtomSpecies na = species_by_name("Na");
    const GaussianMode mode = default_mode(volume_for_lifetime(1e6, na, 1e9));
    const double t1cav = t1_cavity(na, mode.cavity);
    const double two_q_over_omega = 2.0 * mode.cavity.quality / mode.cavity.omega;

    Rng rng(11);
    for (int i = 0; i < 200; ++i) {
        const Vec3 p{(2.0 * rng.next_double() - 1.0) * 2.0 * mode.cavity.waist,
                     (2.0 * rng.next_double() - 1.0) * 2.0 * mode.cavity.waist,
                     (0.02 + 0.96 * rng.next_double()) * mode.cavity.length};
        const double chi = coupling_at_position(na, mode, p);
        const double u = mode.amplitude(p);
        const double lhs = chi * chi * two_q_over_omega;
        const double rhs = mode.cavity.mode_volume * u * u / (2.0 * t1cav);
        if (rhs == 0.0) continue;
        CHECK(std::abs(lhs - rhs) / rhs < 1e-10);
    }
}

TEST_CASE("system assembly precomputes detunings against the mode frame") {
    const AtomSpecies na = species_by_name("Na");
    const GaussianMode mode = default_mode();
    GridSpec spec;

    CavitySystem sys;
    sys.species = na;
    sys.cavity = mode.cavity;
    sys.modes.push_back(mode);
    sys.grid = dice_phase_space(default_beam(), mode, na, spec);
    sys.finalize();

    // resonant cavity: detuning is the Doppler shift k v_parallel (up to the
    // rounding floor of the omega - (Omega - k v) cancellation, ~2e-6 rad/s)
    const double k = mode.wavenumber();
    for (std::size_t c = 0; c < sys.n_cells(); ++c) {
        if (sys.grid.cells[c].axial_velocity == 0.0) {
            CHECK(sys.detuning(0, c) == 0.0);
            continue;
        }
        CHECK(sys.detuning(0, c) ==
              doctest::Approx(k * sys.grid.cells[c].axial_velocity).epsilon(1e-6));
    }

    // coupling accessor matches the free-function evaluation
    CHECK(sys.coupling(0, sys.grid.central_index, 1e-3) ==
          doctest::Approx(coupling_at(sys.grid.cells[sys.grid.central_index], mode, na, 1e-3))
              .epsilon(1e-14));

    // and returns zero once a drifting cell leaves the mirror gap
    const Cell& down = sys.grid.cells.front();  // negative axial velocity
    const double t_exit = (0.1 * mode.cavity.length) / std::abs(down.axial_velocity) + 1e-3;
    CHECK(sys.coupling(0, 0, t_exit) == 0.0);
}
