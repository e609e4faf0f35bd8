#include "rydsim/ode.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "rydsim/errors.hpp"

namespace rydsim {

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                 a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                 b5 = -2187.0 / 6784, b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

double error_norm(const std::vector<double>& err, const std::vector<double>& y0,
                  const std::vector<double>& y1, double atol, double rtol) {
  double sum = 0.0;
  const std::size_t n = err.size();
  for (std::size_t i = 0; i < n; ++i) {
    const double sc = atol + rtol * std::max(std::abs(y0[i]), std::abs(y1[i]));
    const double r = err[i] / sc;
    sum += r * r;
  }
  return std::sqrt(sum / static_cast<double>(n));
}

double scaled_rms(const std::vector<double>& v, const std::vector<double>& ref,
                  double atol, double rtol) {
  double sum = 0.0;
  const std::size_t n = v.size();
  for (std::size_t i = 0; i < n; ++i) {
    const double sc = atol + rtol * std::abs(ref[i]);
    const double r = v[i] / sc;
    sum += r * r;
  }
  return std::sqrt(sum / static_cast<double>(n));
}

}  // namespace

OdeStats integrate_adaptive(const OdeRhs& rhs, std::vector<double>& y,
                            double t0, double t1, const OdeOptions& opts) {
  OdeStats stats;
  const double span = t1 - t0;
  if (span == 0.0) return stats;
  if (span < 0.0) throw NumericalError("integration interval is reversed");
  const std::size_t n = y.size();

  std::vector<double> k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n);
  std::vector<double> ytmp(n), ynew(n), err(n);

  double t = t0;
  rhs(t, y.data(), k1.data());
  ++stats.n_rhs;

  // Step-size seed following the usual two-sample heuristic.
  double h = opts.first_step;
  if (h <= 0.0) {
    const double d0 = scaled_rms(y, y, opts.abs_tol, opts.rel_tol);
    const double d1 = scaled_rms(k1, y, opts.abs_tol, opts.rel_tol);
    double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
    h0 = std::min(h0, span);
    for (std::size_t i = 0; i < n; ++i) ytmp[i] = y[i] + h0 * k1[i];
    rhs(t + h0, ytmp.data(), k2.data());
    ++stats.n_rhs;
    for (std::size_t i = 0; i < n; ++i) err[i] = k2[i] - k1[i];
    const double d2 = scaled_rms(err, y, opts.abs_tol, opts.rel_tol) / h0;
    double h1;
    if (std::max(d1, d2) <= 1e-15)
      h1 = std::max(1e-6, h0 * 1e-3);
    else
      h1 = std::pow(0.01 / std::max(d1, d2), 0.2);
    h = std::min({100.0 * h0, h1, span});
  }
  if (opts.max_step > 0.0) h = std::min(h, opts.max_step);

  const double h_floor = 1e-14 * std::max(std::abs(t0), std::abs(t1)) + 1e-300;
  bool fsal_valid = true;

  while (t < t1) {
    if (stats.n_steps + stats.n_rejected >= opts.max_steps)
      throw NumericalError("step budget exhausted at t = " + std::to_string(t));
    h = std::min(h, t1 - t);
    if (h < h_floor)
      throw NumericalError("step size underflow at t = " + std::to_string(t) +
                           ", h = " + std::to_string(h));

    if (!fsal_valid) {
      rhs(t, y.data(), k1.data());
      ++stats.n_rhs;
      fsal_valid = true;
    }

    for (std::size_t i = 0; i < n; ++i) ytmp[i] = y[i] + h * a21 * k1[i];
    rhs(t + c2 * h, ytmp.data(), k2.data());
    for (std::size_t i = 0; i < n; ++i)
      ytmp[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
    rhs(t + c3 * h, ytmp.data(), k3.data());
    for (std::size_t i = 0; i < n; ++i)
      ytmp[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
    rhs(t + c4 * h, ytmp.data(), k4.data());
    for (std::size_t i = 0; i < n; ++i)
      ytmp[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
    rhs(t + c5 * h, ytmp.data(), k5.data());
    for (std::size_t i = 0; i < n; ++i)
      ytmp[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] +
                            a64 * k4[i] + a65 * k5[i]);
    rhs(t + h, ytmp.data(), k6.data());
    for (std::size_t i = 0; i < n; ++i)
      ynew[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] +
                            b5 * k5[i] + b6 * k6[i]);
    rhs(t + h, ynew.data(), k7.data());
    stats.n_rhs += 6;

    for (std::size_t i = 0; i < n; ++i)
      err[i] = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] +
                    e6 * k6[i] + e7 * k7[i]);
    const double enorm = error_norm(err, y, ynew, opts.abs_tol, opts.rel_tol);

    if (enorm <= 1.0) {
      t += h;
      y.swap(ynew);
      k1.swap(k7);  // first-same-as-last
      ++stats.n_steps;
      const double grow = enorm >  0.0 ? 0.9 * std::pow(enorm, -0.2) : 5.0;
      h *= std::clamp(grow, 0.2, 5.0);
    } else {
      ++stats.n_rejected;
      h *= std::max(0.2, 0.9 * std::pow(enorm, -0.2));
      // k1 still matches (t, y); no recompute needed.
    }
    if (opts.max_step > 0.0) h = std::min(h, opts.max_step);
  }
  return stats;
}

}  // namespace rydsim
