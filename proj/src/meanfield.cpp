#include "rydsim/meanfield.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "rydsim/errors.hpp"
#include "rydsim/rng.hpp"

namespace rydsim {

ProductState::ProductState(const Lattice& lat,
                           std::vector<std::array<double, 3>> spins, double time)
    : lat_(&lat), spins_(std::move(spins)), time_(time) {
  if (static_cast<int>(spins_.size()) != lat.size())
    throw std::invalid_argument("spin count does not match lattice");
}

ProductState ProductState::all_ground(const Lattice& lat) {
  return ProductState(lat, std::vector<std::array<double, 3>>(
                               static_cast<std::size_t>(lat.size()),
                               {0.0, 0.0, -1.0}));
}

double ProductState::max_norm_error() const {
  double worst = 0.0;
  for (const auto& s : spins_) {
    const double n = std::sqrt(s[0] * s[0] + s[1] * s[1] + s[2] * s[2]);
    worst = std::max(worst, std::abs(n - 1.0));
  }
  return worst;
}

void ProductState::renormalize() {
  for (auto& s : spins_) {
    const double n = std::sqrt(s[0] * s[0] + s[1] * s[1] + s[2] * s[2]);
    if (n == 0.0) throw NumericalError("Bloch vector collapsed to zero");
    s[0] /= n;
    s[1] /= n;
    s[2] /= n;
  }
}

double meanfield_energy(const ProductState& state, double omega, double delta,
                        const std::vector<double>& site_detuning) {
  const Lattice& lat = state.lattice();
  if (!site_detuning.empty() &&
      static_cast<int>(site_detuning.size()) != lat.size())
    throw std::invalid_argument("site detuning size mismatch");
  double e = 0.0;
  for (int i = 0; i < lat.size(); ++i) {
    const double di = site_detuning.empty() ? delta
                                            : site_detuning[static_cast<std::size_t>(i)];
    e += 0.5 * omega * state.spin(i)[0] - di * state.occupation(i);
  }
  for (const auto& pr : lat.pairs())
    e += pr.v * state.occupation(pr.a) * state.occupation(pr.b);
  return e;
}

double staggered_magnetization(const ProductState& state) {
  const Lattice& lat = state.lattice();
  double m = 0.0;
  for (int i = 0; i < lat.size(); ++i)
    m += lat.parity(i) * state.spin(i)[2];
  return m / lat.size();
}

double classical_energy(const ProductState& state, double delta) {
  const Lattice& lat = state.lattice();
  double e = 0.0;
  for (int i = 0; i < lat.size(); ++i)
    e += -delta * (state.occupation(i) - 1.0);
  for (const auto& pr : lat.pairs())
    e += pr.v * state.occupation(pr.a) * state.occupation(pr.b);
  return e;
}

namespace {

// Polar-angle parameterization s = (-sin t, 0, -cos t); t = 0 is |g>.
std::array<double, 3> spin_from_angle(double t) {
  return {-std::sin(t), 0.0, -std::cos(t)};
}

ProductState state_from_angles(const Lattice& lat, double theta_even,
                               double theta_odd,
                               const std::vector<std::uint8_t>& pinned) {
  std::vector<std::array<double, 3>> spins(static_cast<std::size_t>(lat.size()));
  for (int i = 0; i < lat.size(); ++i) {
    if (!pinned.empty() && pinned[static_cast<std::size_t>(i)])
      spins[static_cast<std::size_t>(i)] = {0.0, 0.0, -1.0};
    else
      spins[static_cast<std::size_t>(i)] =
          spin_from_angle(lat.parity(i) > 0 ? theta_even : theta_odd);
  }
  return ProductState(lat, std::move(spins));
}

}  // namespace

MinimizeResult meanfield_minimize(const Lattice& lat, double omega, double delta,
                                  const std::vector<std::uint8_t>& pinned,
                                  const MinimizeOptions& opts) {
  if (!pinned.empty() && static_cast<int>(pinned.size()) != lat.size())
    throw std::invalid_argument("pinned mask size mismatch");
  if (omega < 0.0) throw std::invalid_argument("omega must be nonnegative");

  const double scale = std::abs(omega) + std::abs(delta) + lat.v_nn() + 1.0;
  const double gtol = opts.grad_tol * scale;

  int n_unpinned = 0;
  for (int i = 0; i < lat.size(); ++i)
    if (pinned.empty() || !pinned[static_cast<std::size_t>(i)]) ++n_unpinned;

  MinimizeResult res{ProductState::all_ground(lat), 0.0, 0.0, 0.0, 0.0, 0};
  if (n_unpinned == 0) {
    res.state = state_from_angles(lat, 0.0, 0.0, pinned);
    res.energy = meanfield_energy(res.state, omega, delta);
    return res;
  }

  if (!opts.per_site) {
    auto energy_at = [&](double te, double to) {
      return meanfield_energy(state_from_angles(lat, te, to, pinned), omega, delta);
    };

    // Coarse scan, then damped Newton on the two angles.
    const int grid = 48;
    double best_e = 0.0, te = 0.0, to = 0.0;
    bool first = true;
    for (int a = 0; a <= grid; ++a) {
      for (int b = 0; b <= grid; ++b) {
        const double ta = std::numbers::pi * a / grid,
                     tb = std::numbers::pi * b / grid;
        const double e = energy_at(ta, tb);
        if (first || e < best_e) {
          best_e = e;
          te = ta;
          to = tb;
          first = false;
        }
      }
    }

    const double h = 1e-5;
    double gnorm = 0.0;
    int it = 0;
    for (; it < opts.max_iterations; ++it) {
      const double e0 = energy_at(te, to);
      const double gx = (energy_at(te + h, to) - energy_at(te - h, to)) / (2 * h);
      const double gy = (energy_at(te, to + h) - energy_at(te, to - h)) / (2 * h);
      gnorm = std::sqrt(gx * gx + gy * gy) / n_unpinned;
      if (gnorm <= gtol) break;
      const double hxx =
          (energy_at(te + h, to) - 2 * e0 + energy_at(te - h, to)) / (h * h);
      const double hyy =
          (energy_at(te, to + h) - 2 * e0 + energy_at(te, to - h)) / (h * h);
      const double hxy = (energy_at(te + h, to + h) - energy_at(te + h, to - h) -
                          energy_at(te - h, to + h) + energy_at(te - h, to - h)) /
                         (4 * h * h);
      // Levenberg-damped Newton step; falls back toward gradient descent
      // when the Hessian is not positive definite.
      double lambda = 0.0;
      for (int tries = 0; tries < 60; ++tries) {
        const double axx = hxx + lambda, ayy = hyy + lambda;
        const double det = axx * ayy - hxy * hxy;
        double dx, dy;
        if (det > 1e-14 && axx > 0.0) {
          dx = -(ayy * gx - hxy * gy) / det;
          dy = -(axx * gy - hxy * gx) / det;
        } else {
          const double step = 1.0 / (scale + lambda);
          dx = -gx * step;
          dy = -gy * step;
        }
        if (energy_at(te + dx, to + dy) < e0) {
          te += dx;
          to += dy;
          break;
        }
        lambda = lambda == 0.0 ? scale : 2.0 * lambda;
        if (tries == 59) it = opts.max_iterations;  // stalled
      }
    }

    res.state = state_from_angles(lat, te, to, pinned);
    res.energy = energy_at(te, to);
    res.theta_even = te;
    res.theta_odd = to;
    res.grad_norm_per_site = gnorm;
    res.iterations = it;
    return res;
  }

  // Per-site coordinate relaxation: each angle has the closed-form optimum
  // theta = atan2(omega, c_i) with c_i = -delta + sum_j V_ij n_j.
  std::vector<double> theta(static_cast<std::size_t>(lat.size()), 0.0);
  // Seed from the profile solution to land in the same basin.
  MinimizeOptions seed_opts = opts;
  seed_opts.per_site = false;
  const MinimizeResult seed = meanfield_minimize(lat, omega, delta, pinned, seed_opts);
  for (int i = 0; i < lat.size(); ++i)
    theta[static_cast<std::size_t>(i)] =
        lat.parity(i) > 0 ? seed.theta_even : seed.theta_odd;

  auto occ = [&](int i) {
    if (!pinned.empty() && pinned[static_cast<std::size_t>(i)]) return 0.0;
    return 0.5 * (1.0 - std::cos(theta[static_cast<std::size_t>(i)]));
  };

  int it = 0;
  double gnorm = 0.0;
  for (; it < opts.max_iterations; ++it) {
    double moved = 0.0;
    for (int i = 0; i < lat.size(); ++i) {
      if (!pinned.empty() && pinned[static_cast<std::size_t>(i)]) continue;
      double c = -delta;
      for (const auto& [j, v] : lat.neighbors(i)) c += v * occ(j);
      const double target = std::atan2(omega, c);
      moved = std::max(moved, std::abs(target - theta[static_cast<std::size_t>(i)]));
      theta[static_cast<std::size_t>(i)] = target;
    }
    // Per-site gradient dE/dtheta_i = (c_i/2) sin - (omega/2) cos.
    gnorm = 0.0;
    for (int i = 0; i < lat.size(); ++i) {
      if (!pinned.empty() && pinned[static_cast<std::size_t>(i)]) continue;
      double c = -delta;
      for (const auto& [j, v] : lat.neighbors(i)) c += v * occ(j);
      const double ti = theta[static_cast<std::size_t>(i)];
      const double g = 0.5 * c * std::sin(ti) - 0.5 * omega * std::cos(ti);
      gnorm += g * g;
    }
    gnorm = std::sqrt(gnorm / n_unpinned);
    if (gnorm <= gtol && moved < 1e-12) break;
  }

  std::vector<std::array<double, 3>> spins(static_cast<std::size_t>(lat.size()));
  for (int i = 0; i < lat.size(); ++i) {
    if (!pinned.empty() && pinned[static_cast<std::size_t>(i)])
      spins[static_cast<std::size_t>(i)] = {0.0, 0.0, -1.0};
    else
      spins[static_cast<std::size_t>(i)] =
          spin_from_angle(theta[static_cast<std::size_t>(i)]);
  }
  res.state = ProductState(lat, std::move(spins));
  res.energy = meanfield_energy(res.state, omega, delta);
  res.grad_norm_per_site = gnorm;
  res.iterations = it;
  return res;
}

MeanfieldEvolveReport meanfield_evolve(ProductState& state,
                                       const DriveSchedule& schedule,
                                       double t_final,
                                       const MeanfieldEvolveOptions& opts) {
  MeanfieldEvolveReport report;
  const double t0 = state.time();
  if (t_final < t0) throw std::invalid_argument("cannot evolve backwards in time");
  if (t_final == t0) return report;
  const Lattice& lat = state.lattice();
  const int n = lat.size();
  if (!schedule.local_weights().empty() &&
      static_cast<int>(schedule.local_weights().size()) != n)
    throw std::invalid_argument("schedule local pattern does not match lattice");

  std::vector<double> cuts{t0};
  for (double b : schedule.breakpoints())
    if (b > t0 + 1e-12 && b < t_final - 1e-12) cuts.push_back(b);
  cuts.push_back(t_final);
  std::sort(cuts.begin(), cuts.end());

  std::vector<double> y(static_cast<std::size_t>(3 * n));
  for (int i = 0; i < n; ++i)
    for (int c = 0; c < 3; ++c)
      y[static_cast<std::size_t>(3 * i + c)] = state.spin(i)[static_cast<std::size_t>(c)];

  std::vector<double> bz(static_cast<std::size_t>(n));
  OdeRhs rhs = [&](double t, const double* yv, double* dydt) {
    const double w = schedule.omega(t);
    for (int i = 0; i < n; ++i) {
      double field = -schedule.site_detuning(t, i);
      for (const auto& [j, v] : lat.neighbors(i))
        field += v * 0.5 * (1.0 + yv[3 * j + 2]);
      bz[static_cast<std::size_t>(i)] = field;
    }
    for (int i = 0; i < n; ++i) {
      const double sx = yv[3 * i], sy = yv[3 * i + 1], sz = yv[3 * i + 2];
      const double bzi = bz[static_cast<std::size_t>(i)];
      dydt[3 * i] = -bzi * sy;
      dydt[3 * i + 1] = bzi * sx - w * sz;
      dydt[3 * i + 2] = w * sy;
    }
  };

  OdeOptions oo;
  oo.rel_tol = opts.rel_tol;
  oo.abs_tol = opts.abs_tol;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    const OdeStats s = integrate_adaptive(rhs, y, cuts[k], cuts[k + 1], oo);
    report.ode.n_steps += s.n_steps;
    report.ode.n_rejected += s.n_rejected;
    report.ode.n_rhs += s.n_rhs;
    for (int i = 0; i < n; ++i) {
      double* p = y.data() + 3 * i;
      const double nn = std::sqrt(p[0] * p[0] + p[1] * p[1] + p[2] * p[2]);
      report.max_norm_drift = std::max(report.max_norm_drift, std::abs(nn - 1.0));
      if (nn == 0.0) throw NumericalError("Bloch vector collapsed during evolution");
      p[0] /= nn;
      p[1] /= nn;
      p[2] /= nn;
    }
  }

  for (int i = 0; i < n; ++i)
    for (int c = 0; c < 3; ++c)
      state.spin(i)[static_cast<std::size_t>(c)] =
          y[static_cast<std::size_t>(3 * i + c)];
  state.set_time(t_final);
  return report;
}

SnapshotSet meanfield_sample(const ProductState& state, int n_shots,
                             std::uint64_t seed) {
  if (n_shots < 0) throw std::invalid_argument("shot count must be nonnegative");
  const Lattice& lat = state.lattice();
  SnapshotSet set;
  set.width = lat.width();
  set.height = lat.height();
  set.meta.seed = seed;
  set.meta.hold_time = state.time();

  std::vector<double> p(static_cast<std::size_t>(lat.size()));
  for (int i = 0; i < lat.size(); ++i)
    p[static_cast<std::size_t>(i)] = std::clamp(state.occupation(i), 0.0, 1.0);

  std::mt19937_64 rng(mix_seed(seed, 0xb10c));
  set.shots.reserve(static_cast<std::size_t>(n_shots));
  for (int s = 0; s < n_shots; ++s) {
    std::vector<std::uint8_t> shot(static_cast<std::size_t>(lat.size()));
    for (std::size_t i = 0; i < shot.size(); ++i)
      shot[i] = random_unit(rng) < p[i] ? 1 : 0;
    set.shots.push_back(std::move(shot));
  }
  return set;
}

}  // namespace rydsim
