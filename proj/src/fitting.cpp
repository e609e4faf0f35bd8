#include "rydsim/fitting.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace rydsim {

double FitResult::param(const std::string& name) const {
    for (std::size_t i = 0; i < names.size(); ++i)
        if (names[i] == name) return params[i];
    throw std::invalid_argument("FitResult: unknown parameter " + name);
}

double FitResult::std_error(const std::string& name) const {
    for (std::size_t i = 0; i < names.size(); ++i)
        if (names[i] == name) return std_errors[i];
    throw std::invalid_argument("FitResult: unknown parameter " + name);
}

bool FitResult::has_flag(const std::string& substring) const {
    for (const auto& f : flags)
        if (f.find(substring) != std::string::npos) return true;
    return false;
}

namespace {

double sum_squared_residuals(const std::vector<double>& x,
                             const std::vector<double>& y,
                             const ModelFunction& model,
                             const std::vector<double>& p,
                             Eigen::VectorXd* residuals) {
    double ssr = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double r = y[i] - model(x[i], p);
        if (!std::isfinite(r)) return std::numeric_limits<double>::infinity();
        if (residuals) (*residuals)(static_cast<Eigen::Index>(i)) = r;
        ssr += r * r;
    }
    return ssr;
}

// Central-difference Jacobian of the residual vector r_i = y_i - f(x_i, p):
// J(i, j) = d r_i / d p_j = -df/dp_j.
Eigen::MatrixXd numerical_jacobian(const std::vector<double>& x,
                                   const ModelFunction& model,
                                   const std::vector<double>& p, double rel_step) {
    const auto n = static_cast<Eigen::Index>(x.size());
    const auto np = static_cast<Eigen::Index>(p.size());
    Eigen::MatrixXd jac(n, np);
    std::vector<double> pp = p;
    for (Eigen::Index j = 0; j < np; ++j) {
        const double h = rel_step * std::max(1.0, std::abs(p[j]));
        pp[j] = p[j] + h;
        for (Eigen::Index i = 0; i < n; ++i) jac(i, j) = model(x[i], pp);
        pp[j] = p[j] - h;
        for (Eigen::Index i = 0; i < n; ++i)
            jac(i, j) = -(jac(i, j) - model(x[i], pp)) / (2.0 * h);
        pp[j] = p[j];
    }
    return jac;
}

}  // namespace

FitResult fit_least_squares(const std::vector<double>& x,
                            const std::vector<double>& y,
                            const ModelFunction& model,
                            const std::vector<double>& initial,
                            const std::vector<std::string>& names,
                            const LmOptions& opts) {
    if (x.size() != y.size())
        throw std::invalid_argument("fit_least_squares: x/y size mismatch");
    if (initial.size() != names.size())
        throw std::invalid_argument("fit_least_squares: initial/names size mismatch");
    if (initial.empty()) throw std::invalid_argument("fit_least_squares: no parameters");
    if (x.size() < initial.size())
        throw std::invalid_argument("fit_least_squares: fewer points than parameters");

    const auto n = static_cast<Eigen::Index>(x.size());
    const auto np = static_cast<Eigen::Index>(initial.size());

    FitResult out;
    out.names = names;
    out.params = initial;
    out.n_points = static_cast<int>(x.size());

    Eigen::VectorXd residuals(n);
    double ssr = sum_squared_residuals(x, y, model, out.params, &residuals);
    if (!std::isfinite(ssr)) {
        out.flags.push_back("initial guess produced non-finite residuals");
        out.residual_norm = std::numeric_limits<double>::infinity();
        out.std_errors.assign(initial.size(), 0.0);
        out.covariance.assign(initial.size() * initial.size(), 0.0);
        return out;
    }

    double lambda = opts.lambda_init;
    Eigen::MatrixXd jac;
    bool jacobian_stale = true;
    Eigen::MatrixXd jtj;
    Eigen::VectorXd jtr;

    for (int iter = 0; iter < opts.max_iterations; ++iter) {
        out.iterations = iter + 1;
        if (jacobian_stale) {
            jac = numerical_jacobian(x, model, out.params, opts.jacobian_step);
            jtj = jac.transpose() * jac;
            jtr = jac.transpose() * residuals;
            jacobian_stale = false;
        }

        // Gradient of SSR is 2 J^T r; tiny gradient means a stationary point.
        if (jtr.lpNorm<Eigen::Infinity>() <= 1e-14 * std::max(1.0, std::sqrt(ssr))) {
            out.converged = true;
            break;
        }

        Eigen::MatrixXd damped = jtj;
        for (Eigen::Index j = 0; j < np; ++j)
            damped(j, j) += lambda * std::max(jtj(j, j), 1e-12);
        const Eigen::VectorXd step = damped.ldlt().solve(-jtr);

        std::vector<double> trial = out.params;
        for (Eigen::Index j = 0; j < np; ++j) trial[j] += step(j);

        Eigen::VectorXd trial_residuals(n);
        const double trial_ssr =
            sum_squared_residuals(x, y, model, trial, &trial_residuals);

        if (trial_ssr <= ssr) {  // accept: SSR never increases
            const double rel_change = (ssr - trial_ssr) / std::max(ssr, 1e-300);
            out.params = std::move(trial);
            residuals = std::move(trial_residuals);
            ssr = trial_ssr;
            lambda = std::max(lambda * 0.3, 1e-12);
            jacobian_stale = true;
            if (rel_change <= opts.rel_tol) {
                out.converged = true;
                break;
            }
        } else {
            lambda *= 10.0;
            if (lambda > opts.lambda_max) {
                out.flags.push_back("damping exceeded limit without progress");
                break;
            }
        }
    }
    if (!out.converged && out.flags.empty())
        out.flags.push_back("iteration budget exhausted");

    out.residual_norm = std::sqrt(ssr);

    // Covariance sigma^2 (J^T J)^-1 at the solution, symmetrized.  With
    // n == p the variance estimate has zero degrees of freedom; report 0.
    jac = numerical_jacobian(x, model, out.params, opts.jacobian_step);
    jtj = jac.transpose() * jac;
    const double dof = static_cast<double>(n - np);
    const double sigma_sq = dof > 0 ? ssr / dof : 0.0;
    Eigen::MatrixXd cov =
        sigma_sq * jtj.completeOrthogonalDecomposition().pseudoInverse();
    cov = 0.5 * (cov + cov.transpose()).eval();
    out.covariance.resize(static_cast<std::size_t>(np) * np);
    out.std_errors.resize(static_cast<std::size_t>(np));
    for (Eigen::Index i = 0; i < np; ++i) {
        for (Eigen::Index j = 0; j < np; ++j)
            out.covariance[static_cast<std::size_t>(i) * np + j] = cov(i, j);
        out.std_errors[static_cast<std::size_t>(i)] = std::sqrt(std::max(0.0, cov(i, i)));
    }
    return out;
}

}  // namespace rydsim
