#pragma once

// Nonlinear least squares (Levenberg-Marquardt with numerical Jacobians).
// Contract shared by every fitter built on top: the sum of squared
// residuals is non-increasing across accepted iterations, convergence is
// declared at relative residual change <= rel_tol, and the reported
// covariance is sigma^2 (J^T J)^-1, symmetric positive semidefinite.

#include <functional>
#include <string>
#include <vector>

namespace rydsim {

struct FitResult {
    std::vector<std::string> names;
    std::vector<double> params;
    std::vector<double> std_errors;   // sqrt of covariance diagonal
    std::vector<double> covariance;   // row-major p x p
    double residual_norm = 0.0;       // sqrt(sum of squared residuals)
    bool converged = false;
    int iterations = 0;
    int n_points = 0;
    std::vector<std::string> flags;   // human-readable diagnostics

    double param(const std::string& name) const;
    double std_error(const std::string& name) const;
    bool has_flag(const std::string& substring) const;
};

// Model value at abscissa x for parameter vector p.
using ModelFunction =
    std::function<double(double x, const std::vector<double>& p)>;

struct LmOptions {
    int max_iterations = 400;
    double rel_tol = 1e-10;       // relative change of SSR on accepted steps
    double lambda_init = 1e-3;    // initial damping
    double lambda_max = 1e12;     // give up inflating beyond this
    double jacobian_step = 1e-6;  // relative central-difference step
};

// Fits model(x_i, p) to y_i over the named parameters starting from
// `initial`.  Never throws on non-convergence: `converged` is false and
// `flags` explains why.  Throws std::invalid_argument on shape errors.
FitResult fit_least_squares(const std::vector<double>& x,
                            const std::vector<double>& y,
                            const ModelFunction& model,
                            const std::vector<double>& initial,
                            const std::vector<std::string>& names,
                            const LmOptions& opts = {});

}  // namespace rydsim
