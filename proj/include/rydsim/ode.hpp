#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace rydsim {

struct OdeOptions {
  double rel_tol = 1e-9;
  double abs_tol = 1e-11;
  double first_step = 0.0;          // 0: choose automatically
  double max_step = 0.0;            // 0: unbounded
  std::size_t max_steps = 20'000'000;
};

struct OdeStats {
  std::size_t n_steps = 0;
  std::size_t n_rejected = 0;
  std::size_t n_rhs = 0;
};

// rhs(t, y, dydt) with y and dydt of the state dimension.
using OdeRhs = std::function<void(double t, const double* y, double* dydt)>;

// Adaptive embedded Runge-Kutta 5(4) step control. Advances y from t0 to t1
// in place. Throws NumericalError (with t and step size in the message) if
// the step size underflows or the step budget is exhausted.
OdeStats integrate_adaptive(const OdeRhs& rhs, std::vector<double>& y,
                            double t0, double t1, const OdeOptions& opts = {});

}  // namespace rydsim
