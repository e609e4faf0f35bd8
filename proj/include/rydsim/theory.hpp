#pragma once

// Effective field-theory layer: Landau order-parameter dynamics, Gaussian
// fluctuation modes with frequency doubling, Kibble-Zurek scales, and the
// coarsening growth/scaling laws used to interpret simulation output.

#include <vector>

#include "rydsim/fitting.hpp"

namespace rydsim {

// Critical exponents and scale constants consumed by the scaling laws.
// Defaults: (2+1)D Ising exponents with z = 1, diffusive z_d = 2.
struct TheoryParams {
    double nu = 0.629;      // correlation-length exponent
    double z = 1.0;         // dynamical exponent at the critical point
    double z_d = 2.0;       // coarsening (curvature-driven) exponent
    double z_bar = 2.16;    // effective exponent combining both regimes
    double tau = 1.0;       // ramp time scale
    double t0 = 1.0;        // microscopic time scale
    double l0 = 1.0;        // microscopic length scale
    double c_big = 2.0;     // order-one constant C  (C > C_s)
    double c_small = 1.0;   // order-one constant C_s
    double delta_c_over_omega = 1.12;  // critical detuning

    void validate() const;  // throws std::invalid_argument
};

// Equilibrium amplitude ratio between the ordered and disordered mode
// frequencies from Wilson-Fisher calculations; stored for reference output
// only, never computed here.
inline constexpr double kWilsonFisherFrequencyRatio = 1.9;

// --- Landau (mean-field) order parameter -------------------------------

// d^2 phi/dt^2 = -(q + lambda phi^2) phi, sampled on a uniform time grid.
struct LandauTrajectory {
    std::vector<double> t;
    std::vector<double> phi;
    std::vector<double> dphi;
    double energy_drift = 0.0;  // max |E(t) - E(0)| over samples
};

LandauTrajectory landau_evolve(double q, double lambda, double phi_init,
                               double dphi_init, double t_end, double dt_sample,
                               double tol = 1e-10);

// Small-amplitude frequencies: omega = sqrt(q) about phi0 = 0 for q > 0 and
// omega = sqrt(2|q|) about phi0 = sqrt(-q/lambda) for q < 0.  q = 0 returns
// omega = 0 with `critical` set.
struct LandauFrequencies {
    double omega = 0.0;
    double phi0 = 0.0;
    bool critical = false;
};

LandauFrequencies landau_frequencies(double q, double lambda);

// --- Gaussian fluctuation modes -----------------------------------------

// Connected equal-time covariances per momentum mode alongside the
// condensate: D_phiphi = <phi phi>_c, D_phipi = <phi pi>_c, D_pipi =
// <pi pi>_c with pi = d phi/dt.
struct GaussianState {
    std::vector<double> k;
    std::vector<double> d_phiphi;
    std::vector<double> d_phipi;
    std::vector<double> d_pipi;
    double phi = 0.0;
    double dphi = 0.0;

    int n_modes() const { return static_cast<int>(k.size()); }
    void validate() const;  // shape and positivity checks

    // Per-mode Gaussian invariant D_phiphi * D_pipi - D_phipi^2 (conserved
    // while the condensate is constant).
    double invariant(int mode) const;
};

// Uniform momentum grid over (0, pi].
std::vector<double> uniform_k_grid(int n_modes = 32);

// Static covariances for effective squared frequency k^2 + q + 3 lambda
// phi^2: D_phiphi = 1/(2 w_k), D_phipi = 0, D_pipi = w_k/2.  Requires the
// squared frequency to be positive for every mode.
GaussianState gaussian_equilibrium(const std::vector<double>& k, double q,
                                   double lambda, double phi);

struct GaussianTrajectory {
    std::vector<double> t;
    std::vector<GaussianState> states;
};

// Coupled flow: condensate phi under the Landau equation; per mode
//   d D_phiphi = 2 D_phipi
//   d D_phipi  = D_pipi - (k^2 + q + 3 lambda phi^2) D_phiphi
//   d D_pipi   = -2 (k^2 + q + 3 lambda phi^2) D_phipi.
GaussianTrajectory gaussian_evolve(const GaussianState& init, double q,
                                   double lambda, double t_end, double dt_sample,
                                   double tol = 1e-10);

// Correlation length per time slice from fitting D_phiphi(k) with the
// structure-factor form S0/(1 + xi^2 k^2)^(3/2).
struct GaussianLengthSeries {
    std::vector<double> t;
    std::vector<double> xi;
    std::vector<bool> fit_converged;
};

GaussianLengthSeries gaussian_correlation_length(const GaussianTrajectory& traj);

// Canned quench scenarios for the frequency-doubling check: ratio of the
// correlation-length oscillation frequency to the order-parameter
// oscillation frequency (nominally 2 in the disordered phase, 1 in the
// ordered driven case).
struct FrequencyDoublingResult {
    double omega_phi = 0.0;
    double omega_xi = 0.0;
    double ratio = 0.0;
    bool valid = false;
    std::vector<double> t;
    std::vector<double> phi;
    std::vector<double> xi;
};

FrequencyDoublingResult frequency_doubling_disordered();
FrequencyDoublingResult frequency_doubling_ordered();

// --- Scaling laws --------------------------------------------------------

// Kibble-Zurek freeze-out scales with proportionality constants absorbed
// into t0 and l0: t_KZ = t0 (tau/t0)^(nu z/(nu z + 1)), xi_KZ =
// l0 (tau/t0)^(nu/(nu z + 1)).
struct KzmScales {
    double t_kz = 0.0;
    double xi_kz = 0.0;
};

KzmScales kzm_scales(const TheoryParams& params);

// Curvature-driven growth-rate prediction v ~ (delta - delta_c)^(-nu),
// normalized to 1 at reference_offset above the critical point (offsets in
// units of omega).  Throws for detunings at or below the critical point.
double coarsening_rate(double delta_over_omega, const TheoryParams& params,
                       double reference_offset = 1.0);

// Two-regime growth scaling function: F(x) = x^(1/z_d) while the ramp is
// still running (x < x_s) and F(x) = x_s^(-nu + nu z/z_d) (C x - C_s
// x_s)^(1/z_d) once the drive stops at x_s.  The held branch owns the x =
// x_s boundary.  Valid in the noncritical regime x_s >= 1 with x >= 0.
double scaling_function_F(double x, double x_s, const TheoryParams& params);

}  // namespace rydsim
