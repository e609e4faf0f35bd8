#include <doctest.h>

#include <cmath>
#include <vector>

#include "rydsim/errors.hpp"
#include "rydsim/ode.hpp"

using namespace rydsim;

TEST_CASE("exponential decay matches the closed form") {
    auto rhs = [](double, const double* y, double* dy) { dy[0] = -y[0]; };
    std::vector<double> y = {1.0};
    OdeOptions opts;
    opts.rel_tol = 1e-10;
    opts.abs_tol = 1e-12;
    const OdeStats stats = integrate_adaptive(rhs, y, 0.0, 5.0, opts);
    CHECK(y[0] == doctest::Approx(std::exp(-5.0)).epsilon(1e-9));
    CHECK(stats.n_steps > 0);
    CHECK(stats.n_rhs > stats.n_steps);
}

TEST_CASE("harmonic oscillator conserves energy over many periods") {
    auto rhs = [](double, const double* y, double* dy) {
        dy[0] = y[1];
        dy[1] = -y[0];
    };
    std::vector<double> y = {1.0, 0.0};
    OdeOptions opts;
    opts.rel_tol = 1e-11;
    opts.abs_tol = 1e-13;
    const double t_end = 50.0 * 2.0 * 3.14159265358979323846;
    integrate_adaptive(rhs, y, 0.0, t_end, opts);
    const double energy = 0.5 * (y[0] * y[0] + y[1] * y[1]);
    CHECK(energy == doctest::Approx(0.5).epsilon(1e-8));
    CHECK(y[0] == doctest::Approx(1.0).epsilon(1e-7));
}

TEST_CASE("driven linear system matches the particular solution") {
    // y' = -10 (y - sin t); closed form approached after the transient:
    // y_p(t) = (100 sin t - 10 cos t) / 101 with decaying homogeneous part.
    auto rhs = [](double t, const double* y, double* dy) {
        dy[0] = -10.0 * (y[0] - std::sin(t));
    };
    const double c = 10.0 / 101.0;  // y(0)=c makes the solution purely particular
    std::vector<double> y = {-10.0 / 101.0 + c + 10.0 / 101.0};
    y[0] = -10.0 / 101.0;  // y_p(0)
    integrate_adaptive(rhs, y, 0.0, 3.0, {});
    const double expect = (100.0 * std::sin(3.0) - 10.0 * std::cos(3.0)) / 101.0;
    CHECK(y[0] == doctest::Approx(expect).epsilon(1e-8));
}

TEST_CASE("tighter tolerance gives smaller error") {
    auto rhs = [](double, const double* y, double* dy) {
        dy[0] = y[1];
        dy[1] = -y[0];
    };
    auto run = [&](double tol) {
        std::vector<double> y = {1.0, 0.0};
        OdeOptions opts;
        opts.rel_tol = tol;
        opts.abs_tol = tol * 1e-2;
        integrate_adaptive(rhs, y, 0.0, 20.0, opts);
        return std::abs(y[0] - std::cos(20.0));
    };
    const double loose = run(1e-5);
    const double tight = run(1e-11);
    CHECK(tight < loose);
    CHECK(tight < 1e-8);
}

TEST_CASE("split integration agrees with one span") {
    auto rhs = [](double t, const double* y, double* dy) {
        dy[0] = std::cos(t) * y[0];
    };
    std::vector<double> whole = {1.0};
    integrate_adaptive(rhs, whole, 0.0, 2.0, {});
    std::vector<double> split = {1.0};
    integrate_adaptive(rhs, split, 0.0, 0.7, {});
    integrate_adaptive(rhs, split, 0.7, 2.0, {});
    CHECK(whole[0] == doctest::Approx(split[0]).epsilon(1e-9));
    CHECK(whole[0] == doctest::Approx(std::exp(std::sin(2.0))).epsilon(1e-9));
}

TEST_CASE("step budget violation throws") {
    auto rhs = [](double, const double* y, double* dy) { dy[0] = -y[0]; };
    std::vector<double> y = {1.0};
    OdeOptions opts;
    opts.max_steps = 3;
    CHECK_THROWS_AS(integrate_adaptive(rhs, y, 0.0, 100.0, opts), NumericalError);
}

TEST_CASE("zero-length span is a no-op") {
    auto rhs = [](double, const double* y, double* dy) { dy[0] = y[0]; };
    std::vector<double> y = {2.5};
    const OdeStats stats = integrate_adaptive(rhs, y, 1.0, 1.0, {});
    CHECK(y[0] == 2.5);
    CHECK(stats.n_steps == 0);
}

TEST_CASE("max_step bound is honored") {
    // With max_step = h the integrator needs at least span/h steps.
    auto rhs = [](double, const double*, double* dy) { dy[0] = 1.0; };
    std::vector<double> y = {0.0};
    OdeOptions opts;
    opts.max_step = 0.01;
    const OdeStats stats = integrate_adaptive(rhs, y, 0.0, 1.0, opts);
    CHECK(stats.n_steps >= 100);
    CHECK(y[0] == doctest::Approx(1.0).epsilon(1e-12));
}
