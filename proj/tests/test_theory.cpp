#include <doctest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "rydsim/correlation.hpp"
#include "rydsim/theory.hpp"
#include "support/oracles.hpp"

using namespace rydsim;

namespace {

// Interpolated first positive zero of dphi: half the oscillation period for
// a trajectory started at rest.
double half_period_from(const LandauTrajectory& traj) {
    for (std::size_t i = 1; i + 1 < traj.t.size(); ++i) {
        const double a = traj.dphi[i], b = traj.dphi[i + 1];
        if (a < 0.0 && b >= 0.0)
            return traj.t[i] + (traj.t[i + 1] - traj.t[i]) * (0.0 - a) / (b - a);
    }
    return -1.0;
}

}  // namespace

TEST_CASE("order-parameter dynamics in closed-form regimes") {
    SUBCASE("harmonic limit") {
        const LandauTrajectory traj = landau_evolve(1.0, 0.0, 0.1, 0.0, 20.0, 0.01);
        for (std::size_t i = 0; i < traj.t.size(); ++i) {
            CHECK(std::abs(traj.phi[i] - 0.1 * std::cos(traj.t[i])) <= 1e-8);
            CHECK(std::abs(traj.dphi[i] + 0.1 * std::sin(traj.t[i])) <= 1e-8);
        }
        CHECK(traj.energy_drift <= 1e-10);
    }

    SUBCASE("small oscillation about the ordered minimum runs at sqrt(2|q|)") {
        const double eps = 1e-3;
        const LandauTrajectory traj =
            landau_evolve(-1.0, 1.0, 1.0 + eps, 0.0, 40.0, 0.005);
        const FitResult fit = fit_damped_oscillator(traj.t, traj.phi);
        REQUIRE(fit.converged);
        CHECK(std::abs(std::abs(fit.param("omega")) - std::sqrt(2.0)) <=
              1e-3 * std::sqrt(2.0));
    }

    SUBCASE("disordered small oscillation runs at sqrt(q)") {
        const LandauTrajectory traj =
            landau_evolve(1.0, 1.0, 1e-3, 0.0, 40.0, 0.005);
        const FitResult fit = fit_damped_oscillator(traj.t, traj.phi);
        REQUIRE(fit.converged);
        CHECK(std::abs(std::abs(fit.param("omega")) - 1.0) <= 1e-3);
    }

    SUBCASE("anharmonic period matches the quadrature oracle") {
        const LandauTrajectory traj = landau_evolve(1.0, 1.0, 0.5, 0.0, 12.0, 0.001);
        const double period = 2.0 * half_period_from(traj);
        const double want = testsupport::anharmonic_period(1.0, 1.0, 0.5);
        REQUIRE(period > 0.0);
        CHECK(std::abs(period - want) <= 1e-4 * want);
    }

    SUBCASE("moderate anharmonicity keeps the frequency near sqrt(q)") {
        const LandauTrajectory traj = landau_evolve(1.0, 0.1, 0.05, 0.0, 60.0, 0.01);
        const FitResult fit = fit_damped_oscillator(traj.t, traj.phi);
        REQUIRE(fit.converged);
        CHECK(std::abs(std::abs(fit.param("omega")) - 1.0) <= 0.02);
    }

    SUBCASE("integration is time-reversal symmetric") {
        const double tol = 1e-10;
        const LandauTrajectory fwd =
            landau_evolve(-1.0, 1.0, 0.3, 0.2, 8.0, 0.5, tol);
        const LandauTrajectory back =
            landau_evolve(-1.0, 1.0, fwd.phi.back(), -fwd.dphi.back(), 8.0, 0.5, tol);
        CHECK(std::abs(back.phi.back() - 0.3) <= 10.0 * tol);
        CHECK(std::abs(back.dphi.back() + 0.2) <= 10.0 * tol);
    }

    SUBCASE("argument validation") {
        CHECK_THROWS_AS(landau_evolve(1.0, 0.0, 0.1, 0.0, -1.0, 0.01),
                        std::invalid_argument);
        CHECK_THROWS_AS(landau_evolve(1.0, 0.0, 0.1, 0.0, 1.0, 0.01, -1.0),
                        std::invalid_argument);
    }
}

TEST_CASE("small-oscillation frequencies from the Landau potential") {
    const LandauFrequencies dis = landau_frequencies(4.0, 1.0);
    CHECK(dis.omega == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(dis.phi0 == 0.0);
    CHECK(!dis.critical);

    const LandauFrequencies ord = landau_frequencies(-4.0, 1.0);
    CHECK(ord.omega == doctest::Approx(2.0 * std::sqrt(2.0)).epsilon(1e-12));
    CHECK(std::abs(ord.phi0) == doctest::Approx(2.0).epsilon(1e-12));

    SUBCASE("ordered/disordered ratio is sqrt(2) at matched |q|") {
        for (double q : {0.5, 1.0, 7.3}) {
            const double r = landau_frequencies(-q, 1.0).omega /
                             landau_frequencies(q, 1.0).omega;
            CHECK(r == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
        }
    }

    SUBCASE("critical point is flagged") {
        const LandauFrequencies crit = landau_frequencies(0.0, 1.0);
        CHECK(crit.critical);
        CHECK(crit.omega == 0.0);
    }

    SUBCASE("ordered side requires a stabilizing quartic") {
        CHECK_THROWS_AS(landau_frequencies(-1.0, 0.0), std::invalid_argument);
    }
}

TEST_CASE("gaussian mode flow in closed form") {
    SUBCASE("single k=0 mode breathes at twice the mode frequency") {
        GaussianState init;
        init.k = {0.0};
        init.d_phiphi = {1.0};
        init.d_phipi = {0.0};
        init.d_pipi = {0.0};
        const GaussianTrajectory traj = gaussian_evolve(init, 1.0, 0.0, 10.0, 0.01);
        for (std::size_t i = 0; i < traj.t.size(); ++i) {
            const double want = std::pow(std::cos(traj.t[i]), 2);
            CHECK(std::abs(traj.states[i].d_phiphi[0] - want) <= 1e-8);
        }
        // The breathing frequency is 2 sqrt(q).
        std::vector<double> d00;
        for (const auto& s : traj.states) d00.push_back(s.d_phiphi[0]);
        const auto peak = dominant_frequency(traj.t, d00);
        REQUIRE(peak.has_value());
        CHECK(*peak == doctest::Approx(2.0).epsilon(0.02));
    }

    SUBCASE("equilibrium covariances are a fixed point") {
        const std::vector<double> k = uniform_k_grid(8);
        const GaussianState eq = gaussian_equilibrium(k, 1.0, 0.5, 0.0);
        for (int m = 0; m < eq.n_modes(); ++m) {
            const double w2 = k[static_cast<std::size_t>(m)] *
                              k[static_cast<std::size_t>(m)] + 1.0;
            CHECK(eq.d_pipi[static_cast<std::size_t>(m)] ==
                  doctest::Approx(w2 * eq.d_phiphi[static_cast<std::size_t>(m)])
                      .epsilon(1e-12));
            CHECK(eq.d_phipi[static_cast<std::size_t>(m)] == 0.0);
        }
        const GaussianTrajectory traj = gaussian_evolve(eq, 1.0, 0.5, 5.0, 0.5);
        for (const auto& s : traj.states)
            for (int m = 0; m < s.n_modes(); ++m) {
                CHECK(std::abs(s.d_phiphi[static_cast<std::size_t>(m)] -
                               eq.d_phiphi[static_cast<std::size_t>(m)]) <= 1e-8);
                CHECK(std::abs(s.d_phipi[static_cast<std::size_t>(m)]) <= 1e-8);
            }
    }

    SUBCASE("per-mode invariant is conserved while the condensate is fixed") {
        const std::vector<double> k = uniform_k_grid(6);
        GaussianState init = gaussian_equilibrium(k, 2.0, 0.0, 0.0);
        // Kick the state off equilibrium but keep lambda = 0 so the mass
        // term never moves.
        for (auto& v : init.d_pipi) v *= 3.0;
        for (auto& v : init.d_phipi) v += 0.1;
        std::vector<double> inv0;
        for (int m = 0; m < init.n_modes(); ++m) inv0.push_back(init.invariant(m));

        const GaussianTrajectory traj =
            gaussian_evolve(init, 2.0, 0.0, 6.0, 0.2, 1e-11);
        for (const auto& s : traj.states)
            for (int m = 0; m < s.n_modes(); ++m) {
                CHECK(std::abs(s.invariant(m) - inv0[static_cast<std::size_t>(m)]) <=
                      1e-9 * std::max(1.0, std::abs(inv0[static_cast<std::size_t>(m)])));
                CHECK(s.d_phiphi[static_cast<std::size_t>(m)] >= 0.0);
                CHECK(s.d_pipi[static_cast<std::size_t>(m)] >= 0.0);
            }
    }

    SUBCASE("negative effective frequencies are rejected at equilibrium") {
        CHECK_THROWS_AS(gaussian_equilibrium(uniform_k_grid(4), -5.0, 0.0, 0.0),
                        std::invalid_argument);
    }

    SUBCASE("state validation") {
        GaussianState bad;
        bad.k = {0.1, 0.2};
        bad.d_phiphi = {1.0};
        bad.d_phipi = {0.0, 0.0};
        bad.d_pipi = {1.0, 1.0};
        CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
        bad.d_phiphi = {1.0, -0.5};
        CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    }
}

TEST_CASE("uniform momentum grid spans (0, pi]") {
    const std::vector<double> k = uniform_k_grid(32);
    REQUIRE(k.size() == 32);
    CHECK(k.front() > 0.0);
    CHECK(k.back() == doctest::Approx(std::numbers::pi).epsilon(1e-15));
    for (std::size_t i = 1; i < k.size(); ++i) {
        CHECK(k[i] > k[i - 1]);
        CHECK(k[i] - k[i - 1] ==
              doctest::Approx(k[1] - k[0]).epsilon(1e-12));
    }
    CHECK_THROWS_AS(uniform_k_grid(0), std::invalid_argument);
}

TEST_CASE("correlation length extraction from mode spectra") {
    SUBCASE("planted structure-factor profile is recovered per slice") {
        const std::vector<double> k = uniform_k_grid(64);
        GaussianState slice;
        slice.k = k;
        for (double kk : k) {
            const double d = 1.0 + 4.0 * kk * kk;  // xi = 2
            slice.d_phiphi.push_back(5.0 / (d * std::sqrt(d)));
            slice.d_phipi.push_back(0.0);
            slice.d_pipi.push_back(1.0);
        }
        GaussianTrajectory traj;
        traj.t = {0.0, 1.0};
        traj.states = {slice, slice};
        const GaussianLengthSeries series = gaussian_correlation_length(traj);
        REQUIRE(series.xi.size() == 2);
        for (std::size_t i = 0; i < series.xi.size(); ++i) {
            CHECK(series.fit_converged[i]);
            CHECK(series.xi[i] == doctest::Approx(2.0).epsilon(1e-6));
        }
        // Identical slices fit identically: the length series is exactly
        // constant and carries no frequency.
        CHECK(series.xi[0] == series.xi[1]);
        CHECK(!dominant_frequency(series.t, series.xi).has_value());
    }

    SUBCASE("static equilibrium has constant length") {
        const std::vector<double> k = uniform_k_grid(32);
        const GaussianState eq = gaussian_equilibrium(k, 1.0, 0.0, 0.0);
        const GaussianTrajectory traj = gaussian_evolve(eq, 1.0, 0.0, 5.0, 0.1);
        const GaussianLengthSeries series = gaussian_correlation_length(traj);
        for (std::size_t i = 1; i < series.xi.size(); ++i)
            CHECK(std::abs(series.xi[i] - series.xi[0]) <= 1e-6);
    }
}

TEST_CASE("frequency doubling between the length and the order parameter") {
    SUBCASE("disordered quench oscillates the length at twice the rate") {
        const FrequencyDoublingResult res = frequency_doubling_disordered();
        REQUIRE(res.valid);
        CHECK(res.ratio >= 1.9);
        CHECK(res.ratio <= 2.1);
        CHECK(res.omega_xi == doctest::Approx(res.ratio * res.omega_phi).epsilon(1e-12));
        CHECK(res.t.size() == res.phi.size());
        CHECK(res.t.size() == res.xi.size());
    }

    SUBCASE("ordered driven case locks the two frequencies") {
        const FrequencyDoublingResult res = frequency_doubling_ordered();
        REQUIRE(res.valid);
        CHECK(res.ratio >= 0.9);
        CHECK(res.ratio <= 1.1);
    }
}

TEST_CASE("freeze-out scales follow the quench-rate power laws") {
    TheoryParams p;
    p.tau = 1.0;
    p.t0 = 1.0;
    p.l0 = 1.0;

    SUBCASE("tau equal to the microscopic time is the anchor point") {
        const KzmScales s = kzm_scales(p);
        CHECK(s.t_kz == doctest::Approx(1.0).epsilon(1e-15));
        CHECK(s.xi_kz == doctest::Approx(1.0).epsilon(1e-15));
    }

    SUBCASE("absorbed scales act multiplicatively") {
        TheoryParams q = p;
        q.t0 = 3.0;
        q.l0 = 5.0;
        q.tau = 3.0;
        const KzmScales s = kzm_scales(q);
        CHECK(s.t_kz == doctest::Approx(3.0).epsilon(1e-12));
        CHECK(s.xi_kz == doctest::Approx(5.0).epsilon(1e-12));
    }

    SUBCASE("doubling the ramp time applies the 0.386 exponent") {
        TheoryParams slow = p;
        slow.tau = 2.0;
        const KzmScales s1 = kzm_scales(p);
        const KzmScales s2 = kzm_scales(slow);
        const double expo = p.nu * p.z / (p.nu * p.z + 1.0);
        CHECK(expo == doctest::Approx(0.629 / 1.629).epsilon(1e-12));
        CHECK(s2.t_kz / s1.t_kz == doctest::Approx(std::pow(2.0, expo)).epsilon(1e-12));
        CHECK(s2.xi_kz / s1.xi_kz ==
              doctest::Approx(std::pow(2.0, p.nu / (p.nu * p.z + 1.0))).epsilon(1e-12));
    }
}

TEST_CASE("coarsening-rate scaling in the detuning offset") {
    const TheoryParams p;
    const double dc = p.delta_c_over_omega;

    SUBCASE("normalization and spot values") {
        CHECK(coarsening_rate(dc + 1.0, p) == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(coarsening_rate(dc + 2.0, p) ==
              doctest::Approx(std::pow(2.0, -0.629)).epsilon(1e-12));
        CHECK(coarsening_rate(dc + 0.5, p) / coarsening_rate(dc + 2.0, p) ==
              doctest::Approx(std::pow(4.0, 0.629)).epsilon(1e-12));
    }

    SUBCASE("arbitrary ratios follow the pure power law") {
        for (double a : {1.3, 2.0, 3.7})
            for (double b : {0.6, 1.9}) {
                const double r = coarsening_rate(dc + a, p) / coarsening_rate(dc + b, p);
                CHECK(r == doctest::Approx(std::pow(a / b, -p.nu)).epsilon(1e-12));
            }
    }

    SUBCASE("strictly decreasing in the offset") {
        double prev = coarsening_rate(dc + 0.05, p);
        for (int i = 1; i <= 60; ++i) {
            const double cur = coarsening_rate(dc + 0.05 + 0.1 * i, p);
            CHECK(cur < prev);
            prev = cur;
        }
    }

    SUBCASE("at or below the critical point throws") {
        CHECK_THROWS_AS(coarsening_rate(dc, p), std::invalid_argument);
        CHECK_THROWS_AS(coarsening_rate(dc - 0.3, p), std::invalid_argument);
        CHECK_THROWS_AS(coarsening_rate(dc + 1.0, p, -1.0), std::invalid_argument);
    }
}

TEST_CASE("two-regime growth scaling function") {
    const TheoryParams p;  // C = 2, C_s = 1, nu = 0.629, z = 1, z_d = 2

    SUBCASE("ramp branch is the bare power law") {
        CHECK(scaling_function_F(1.0, 4.0, p) == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(scaling_function_F(2.25, 4.0, p) ==
              doctest::Approx(1.5).epsilon(1e-12));
    }

    SUBCASE("worked value at the branch boundary") {
        const double want = std::pow(4.0, 0.1855);
        CHECK(scaling_function_F(4.0, 4.0, p) == doctest::Approx(want).epsilon(1e-4));
        // Same number from the raw held-branch expression.
        const double direct = std::pow(4.0, -p.nu + p.nu * p.z / p.z_d) *
                              std::sqrt(p.c_big * 4.0 - p.c_small * 4.0);
        CHECK(scaling_function_F(4.0, 4.0, p) ==
              doctest::Approx(direct).epsilon(1e-14));
    }

    SUBCASE("held branch grows linearly in x when z_d = 2") {
        // F^2 is affine in x: equal increments in x give equal increments
        // in F^2.
        const double xs = 3.0;
        const double f1 = scaling_function_F(4.0, xs, p);
        const double f2 = scaling_function_F(5.0, xs, p);
        const double f3 = scaling_function_F(6.0, xs, p);
        CHECK(f2 * f2 - f1 * f1 == doctest::Approx(f3 * f3 - f2 * f2).epsilon(1e-10));
    }

    SUBCASE("strictly increasing in x on a 100-point grid") {
        const double xs = 4.0;
        double prev = scaling_function_F(xs, xs, p);
        for (int i = 1; i <= 100; ++i) {
            const double x = xs + 0.08 * i;
            const double cur = scaling_function_F(x, xs, p);
            CHECK(cur > prev);
            prev = cur;
        }
    }

    SUBCASE("earlier stops coarsen faster at fixed elapsed hold") {
        const double d = 2.0;
        double prev = scaling_function_F(2.0 + d, 2.0, p);
        for (int i = 1; i <= 100; ++i) {
            const double xs = 2.0 + 0.04 * i;
            const double cur = scaling_function_F(xs + d, xs, p);
            CHECK(cur < prev);
            prev = cur;
        }
    }

    SUBCASE("regime validation") {
        CHECK_THROWS_AS(scaling_function_F(1.0, 0.5, p), std::invalid_argument);
        CHECK_THROWS_AS(scaling_function_F(-0.1, 4.0, p), std::invalid_argument);
    }
}

TEST_CASE("theory parameter validation") {
    TheoryParams p;
    CHECK_NOTHROW(p.validate());
    TheoryParams bad_nu = p;
    bad_nu.nu = -0.1;
    CHECK_THROWS_AS(bad_nu.validate(), std::invalid_argument);
    TheoryParams bad_scale = p;
    bad_scale.t0 = 0.0;
    CHECK_THROWS_AS(bad_scale.validate(), std::invalid_argument);
    TheoryParams bad_c = p;
    bad_c.c_big = bad_c.c_small;
    CHECK_THROWS_AS(bad_c.validate(), std::invalid_argument);
}

TEST_CASE("reference frequency ratio constant") {
    CHECK(kWilsonFisherFrequencyRatio == 1.9);
}
