#include "rydsim/theory.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "rydsim/correlation.hpp"
#include "rydsim/ode.hpp"

namespace rydsim {

void TheoryParams::validate() const {
    if (!(nu > 0) || !(z > 0) || !(z_d > 0) || !(z_bar > 0))
        throw std::invalid_argument("TheoryParams: exponents must be positive");
    if (!(tau > 0) || !(t0 > 0) || !(l0 > 0))
        throw std::invalid_argument("TheoryParams: scales must be positive");
    if (!(c_big > c_small))
        throw std::invalid_argument("TheoryParams: requires C > C_s");
}

LandauTrajectory landau_evolve(double q, double lambda, double phi_init,
                               double dphi_init, double t_end, double dt_sample,
                               double tol) {
    if (!(tol > 0)) throw std::invalid_argument("landau_evolve: tol must be positive");
    if (!(t_end > 0) || !(dt_sample > 0))
        throw std::invalid_argument("landau_evolve: need positive t_end and dt_sample");

    const OdeRhs rhs = [q, lambda](double, const double* y, double* dydt) {
        dydt[0] = y[1];
        dydt[1] = -(q + lambda * y[0] * y[0]) * y[0];
    };
    const auto energy = [q, lambda](double phi, double dphi) {
        return 0.5 * dphi * dphi + 0.5 * q * phi * phi +
               0.25 * lambda * phi * phi * phi * phi;
    };

    OdeOptions opts;
    opts.rel_tol = tol;
    opts.abs_tol = tol * 1e-2;

    LandauTrajectory traj;
    std::vector<double> y{phi_init, dphi_init};
    const double e0 = energy(phi_init, dphi_init);
    const int n_samples = static_cast<int>(std::round(t_end / dt_sample));
    traj.t.push_back(0.0);
    traj.phi.push_back(phi_init);
    traj.dphi.push_back(dphi_init);
    double t = 0.0;
    for (int i = 1; i <= n_samples; ++i) {
        const double t_next = std::min(i * dt_sample, t_end);
        integrate_adaptive(rhs, y, t, t_next, opts);
        t = t_next;
        traj.t.push_back(t);
        traj.phi.push_back(y[0]);
        traj.dphi.push_back(y[1]);
        traj.energy_drift =
            std::max(traj.energy_drift, std::abs(energy(y[0], y[1]) - e0));
    }
    return traj;
}

LandauFrequencies landau_frequencies(double q, double lambda) {
    LandauFrequencies out;
    if (q == 0.0) {
        out.critical = true;
        return out;
    }
    if (q > 0) {
        out.omega = std::sqrt(q);
        out.phi0 = 0.0;
    } else {
        if (!(lambda > 0))
            throw std::invalid_argument(
                "landau_frequencies: ordered phase requires lambda > 0");
        out.omega = std::sqrt(2.0 * std::abs(q));
        out.phi0 = std::sqrt(-q / lambda);
    }
    return out;
}

void GaussianState::validate() const {
    const std::size_t n = k.size();
    if (d_phiphi.size() != n || d_phipi.size() != n || d_pipi.size() != n)
        throw std::invalid_argument("GaussianState: covariance arrays mismatch k grid");
    for (std::size_t i = 0; i < n; ++i) {
        if (d_phiphi[i] < 0 || d_pipi[i] < 0)
            throw std::invalid_argument("GaussianState: negative diagonal covariance");
    }
}

double GaussianState::invariant(int mode) const {
    return d_phiphi[mode] * d_pipi[mode] - d_phipi[mode] * d_phipi[mode];
}

std::vector<double> uniform_k_grid(int n_modes) {
    if (n_modes < 1) throw std::invalid_argument("uniform_k_grid: n_modes < 1");
    std::vector<double> k(n_modes);
    for (int i = 0; i < n_modes; ++i)
        k[i] = std::numbers::pi * (i + 1) / n_modes;
    return k;
}

GaussianState gaussian_equilibrium(const std::vector<double>& k, double q,
                                   double lambda, double phi) {
    GaussianState state;
    state.k = k;
    state.phi = phi;
    state.dphi = 0.0;
    state.d_phiphi.reserve(k.size());
    state.d_phipi.assign(k.size(), 0.0);
    state.d_pipi.reserve(k.size());
    for (double kv : k) {
        const double w_sq = kv * kv + q + 3.0 * lambda * phi * phi;
        if (!(w_sq > 0))
            throw std::invalid_argument(
                "gaussian_equilibrium: non-positive mode frequency squared");
        const double w = std::sqrt(w_sq);
        state.d_phiphi.push_back(0.5 / w);
        state.d_pipi.push_back(0.5 * w);
    }
    return state;
}

GaussianTrajectory gaussian_evolve(const GaussianState& init, double q,
                                   double lambda, double t_end, double dt_sample,
                                   double tol) {
    init.validate();
    if (!(tol > 0) || !(t_end > 0) || !(dt_sample > 0))
        throw std::invalid_argument("gaussian_evolve: bad time or tolerance arguments");

    const int nm = init.n_modes();
    const std::vector<double> k = init.k;

    // Layout: [phi, dphi, (D_phiphi, D_phipi, D_pipi) per mode].
    std::vector<double> y(2 + 3 * static_cast<std::size_t>(nm));
    y[0] = init.phi;
    y[1] = init.dphi;
    for (int m = 0; m < nm; ++m) {
        y[2 + 3 * m] = init.d_phiphi[m];
        y[3 + 3 * m] = init.d_phipi[m];
        y[4 + 3 * m] = init.d_pipi[m];
    }

    const OdeRhs rhs = [q, lambda, k, nm](double, const double* s, double* ds) {
        const double phi = s[0];
        ds[0] = s[1];
        ds[1] = -(q + lambda * phi * phi) * phi;
        const double mass = q + 3.0 * lambda * phi * phi;
        for (int m = 0; m < nm; ++m) {
            const double w_sq = k[m] * k[m] + mass;
            const double dpp = s[2 + 3 * m], dpq = s[3 + 3 * m], dqq = s[4 + 3 * m];
            ds[2 + 3 * m] = 2.0 * dpq;
            ds[3 + 3 * m] = dqq - w_sq * dpp;
            ds[4 + 3 * m] = -2.0 * w_sq * dpq;
        }
    };

    OdeOptions opts;
    opts.rel_tol = tol;
    opts.abs_tol = tol * 1e-2;

    GaussianTrajectory traj;
    const auto record = [&](double t) {
        GaussianState st;
        st.k = k;
        st.phi = y[0];
        st.dphi = y[1];
        st.d_phiphi.resize(nm);
        st.d_phipi.resize(nm);
        st.d_pipi.resize(nm);
        for (int m = 0; m < nm; ++m) {
            st.d_phiphi[m] = y[2 + 3 * m];
            st.d_phipi[m] = y[3 + 3 * m];
            st.d_pipi[m] = y[4 + 3 * m];
        }
        traj.t.push_back(t);
        traj.states.push_back(std::move(st));
    };

    record(0.0);
    const int n_samples = static_cast<int>(std::round(t_end / dt_sample));
    double t = 0.0;
    for (int i = 1; i <= n_samples; ++i) {
        const double t_next = std::min(i * dt_sample, t_end);
        integrate_adaptive(rhs, y, t, t_next, opts);
        t = t_next;
        record(t);
    }
    return traj;
}

GaussianLengthSeries gaussian_correlation_length(const GaussianTrajectory& traj) {
    GaussianLengthSeries series;
    for (std::size_t i = 0; i < traj.states.size(); ++i) {
        const GaussianState& st = traj.states[i];
        if (st.n_modes() < 4)
            throw std::invalid_argument(
                "gaussian_correlation_length: need >= 4 momentum modes");
        const FitResult fit =
            fit_correlation_length(st.k, st.d_phiphi, /*oz_exponent=*/false);
        series.t.push_back(traj.t[i]);
        series.xi.push_back(fit.param("xi"));
        series.fit_converged.push_back(fit.converged);
    }
    return series;
}

namespace {

FrequencyDoublingResult doubling_from_trajectory(const GaussianTrajectory& traj) {
    FrequencyDoublingResult out;
    const GaussianLengthSeries xi = gaussian_correlation_length(traj);
    out.t = traj.t;
    out.xi = xi.xi;
    out.phi.reserve(traj.states.size());
    for (const auto& st : traj.states) out.phi.push_back(st.phi);

    const auto w_phi = dominant_frequency(out.t, out.phi);
    const auto w_xi = dominant_frequency(out.t, out.xi);
    if (!w_phi || !w_xi) return out;
    out.omega_phi = *w_phi;
    out.omega_xi = *w_xi;
    out.ratio = out.omega_xi / out.omega_phi;
    out.valid = true;
    return out;
}

}  // namespace

FrequencyDoublingResult frequency_doubling_disordered() {
    // Quench within the disordered phase: covariances equilibrated to a
    // deeper mass (q = 4) released at q = 1 with a small condensate kick.
    // Every mode then rings at 2 w_k while phi rings at sqrt(q).
    const double q = 1.0, lambda = 0.0;
    GaussianState init = gaussian_equilibrium(uniform_k_grid(32), 4.0, 0.0, 0.0);
    init.phi = 0.1;
    return doubling_from_trajectory(gaussian_evolve(init, q, lambda, 25.0, 0.05));
}

FrequencyDoublingResult frequency_doubling_ordered() {
    // Ordered phase with the condensate displaced from phi0 = 1: the
    // oscillating mass term 3 lambda phi(t)^2 drives the covariances
    // linearly at the condensate frequency.
    const double q = -1.0, lambda = 1.0, phi_start = 1.05;
    GaussianState init =
        gaussian_equilibrium(uniform_k_grid(32), q, lambda, phi_start);
    return doubling_from_trajectory(gaussian_evolve(init, q, lambda, 25.0, 0.05));
}

KzmScales kzm_scales(const TheoryParams& params) {
    params.validate();
    const double nz = params.nu * params.z;
    KzmScales out;
    out.t_kz = params.t0 * std::pow(params.tau / params.t0, nz / (nz + 1.0));
    out.xi_kz = params.l0 * std::pow(params.tau / params.t0, params.nu / (nz + 1.0));
    return out;
}

double coarsening_rate(double delta_over_omega, const TheoryParams& params,
                       double reference_offset) {
    params.validate();
    if (!(reference_offset > 0))
        throw std::invalid_argument("coarsening_rate: reference offset must be positive");
    const double offset = delta_over_omega - params.delta_c_over_omega;
    if (!(offset > 0))
        throw std::invalid_argument(
            "coarsening_rate: detuning must exceed the critical point");
    return std::pow(offset / reference_offset, -params.nu);
}

double scaling_function_F(double x, double x_s, const TheoryParams& params) {
    params.validate();
    if (!(x_s >= 1.0))
        throw std::invalid_argument(
            "scaling_function_F: valid only in the noncritical regime x_s >= 1");
    if (!(x >= 0.0))
        throw std::invalid_argument("scaling_function_F: x must be non-negative");

    if (x < x_s) return std::pow(x, 1.0 / params.z_d);
    const double prefactor =
        std::pow(x_s, -params.nu + params.nu * params.z / params.z_d);
    const double arg = params.c_big * x - params.c_small * x_s;
    return prefactor * std::pow(arg, 1.0 / params.z_d);
}

}  // namespace rydsim
