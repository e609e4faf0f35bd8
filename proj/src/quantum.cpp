#include "rydsim/quantum.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

#include <Eigen/Dense>

#include "rydsim/errors.hpp"
#include "rydsim/rng.hpp"

namespace rydsim {

namespace {

using cplx = std::complex<double>;

void check_site_count(const Lattice& lat) {
  if (lat.size() > kMaxExactSites)
    throw std::invalid_argument("state-vector engine supports at most " +
                                std::to_string(kMaxExactSites) + " sites");
}

double vec_norm(const std::vector<double>& y) {
  double s = 0.0;
  for (double v : y) s += v * v;
  return std::sqrt(s);
}

}  // namespace

HamiltonianAction::HamiltonianAction(const Lattice& lat) : lat_(&lat) {
  check_site_count(lat);
  const std::size_t d = dim();
  v_diag_.assign(d, 0.0);
  // v_diag[b] extends v_diag[b without its lowest set bit] by the couplings
  // of that bit to the remaining ones.
  for (std::size_t b = 1; b < d; ++b) {
    const int i = std::countr_zero(b);
    const std::size_t rest = b & (b - 1);
    double add = 0.0;
    for (const auto& [j, v] : lat_->neighbors(i))
      if (rest >> j & 1u) add += v;
    v_diag_[b] = v_diag_[rest] + add;
  }
}

void HamiltonianAction::set_local_weights(const std::vector<double>& weights) {
  if (weights == weights_) return;
  if (!weights.empty() && static_cast<int>(weights.size()) != n_sites())
    throw std::invalid_argument("local weight pattern size mismatch");
  weights_ = weights;
  if (weights_.empty()) {
    alpha_diag_.clear();
    return;
  }
  const std::size_t d = dim();
  alpha_diag_.assign(d, 0.0);
  for (std::size_t b = 1; b < d; ++b) {
    const int i = std::countr_zero(b);
    alpha_diag_[b] = alpha_diag_[b & (b - 1)] + weights_[i];
  }
}

double HamiltonianAction::diagonal(std::size_t basis, double delta,
                                   double local_amp) const {
  double d = v_diag_[basis] - delta * std::popcount(basis);
  if (!alpha_diag_.empty() && local_amp != 0.0)
    d -= local_amp * alpha_diag_[basis];
  return d;
}

void HamiltonianAction::apply(double omega, double delta, double local_amp,
                              const cplx* in, cplx* out) const {
  const std::size_t d = dim();
  const bool has_alpha = !alpha_diag_.empty() && local_amp != 0.0;
  for (std::size_t b = 0; b < d; ++b) {
    double diag = v_diag_[b] - delta * static_cast<double>(std::popcount(b));
    if (has_alpha) diag -= local_amp * alpha_diag_[b];
    out[b] = diag * in[b];
  }
  const double half = 0.5 * omega;
  if (half == 0.0) return;
  const int n = n_sites();
  for (int i = 0; i < n; ++i) {
    const std::size_t m = std::size_t{1} << i;
    for (std::size_t hi = 0; hi < d; hi += 2 * m) {
      for (std::size_t lo = 0; lo < m; ++lo) {
        const std::size_t b0 = hi + lo;
        const std::size_t b1 = b0 + m;
        out[b0] += half * in[b1];
        out[b1] += half * in[b0];
      }
    }
  }
}

void HamiltonianAction::apply_real(double omega, double delta, double local_amp,
                                   const double* in, double* out) const {
  const std::size_t d = dim();
  const bool has_alpha = !alpha_diag_.empty() && local_amp != 0.0;
  for (std::size_t b = 0; b < d; ++b) {
    double diag = v_diag_[b] - delta * static_cast<double>(std::popcount(b));
    if (has_alpha) diag -= local_amp * alpha_diag_[b];
    out[b] = diag * in[b];
  }
  const double half = 0.5 * omega;
  if (half == 0.0) return;
  const int n = n_sites();
  for (int i = 0; i < n; ++i) {
    const std::size_t m = std::size_t{1} << i;
    for (std::size_t hi = 0; hi < d; hi += 2 * m) {
      for (std::size_t lo = 0; lo < m; ++lo) {
        const std::size_t b0 = hi + lo;
        const std::size_t b1 = b0 + m;
        out[b0] += half * in[b1];
        out[b1] += half * in[b0];
      }
    }
  }
}

QuantumState::QuantumState(const Lattice& lat, std::vector<cplx> amplitudes,
                           double time)
    : lat_(&lat), amp_(std::move(amplitudes)), time_(time) {
  check_site_count(lat);
  if (amp_.size() != (std::size_t{1} << lat.size()))
    throw std::invalid_argument("state dimension does not match lattice");
}

QuantumState QuantumState::all_ground(const Lattice& lat) {
  return basis_state(lat, 0);
}

QuantumState QuantumState::basis_state(const Lattice& lat, std::uint64_t bits) {
  check_site_count(lat);
  std::vector<cplx> amp(std::size_t{1} << lat.size(), cplx{0.0, 0.0});
  if (bits >= amp.size()) throw std::invalid_argument("basis index out of range");
  amp[bits] = 1.0;
  return QuantumState(lat, std::move(amp));
}

QuantumState QuantumState::from_real(const Lattice& lat,
                                     const std::vector<double>& re) {
  std::vector<cplx> amp(re.size());
  for (std::size_t i = 0; i < re.size(); ++i) amp[i] = re[i];
  return QuantumState(lat, std::move(amp));
}

double QuantumState::norm() const {
  double s = 0.0;
  for (const auto& a : amp_) s += std::norm(a);
  return std::sqrt(s);
}

void QuantumState::normalize() {
  const double n = norm();
  if (n == 0.0) throw NumericalError("cannot normalize a zero state");
  for (auto& a : amp_) a /= n;
}

EvolveReport evolve(QuantumState& state, HamiltonianAction& ham,
                    const DriveSchedule& schedule, double t_final,
                    const EvolveOptions& opts) {
  if (&state.lattice() != &ham.lattice() &&
      state.dim() != ham.dim())
    throw std::invalid_argument("state and Hamiltonian dimensions differ");
  ham.set_local_weights(schedule.local_weights());

  EvolveReport report;
  const double t0 = state.time();
  if (t_final < t0) throw std::invalid_argument("cannot evolve backwards in time");
  if (t_final == t0) return report;

  std::vector<double> cuts{t0};
  for (double b : schedule.breakpoints())
    if (b > t0 + 1e-12 && b < t_final - 1e-12) cuts.push_back(b);
  cuts.push_back(t_final);
  std::sort(cuts.begin(), cuts.end());

  // Block layout [re; im]: H is real, so d(re)/dt = H im, d(im)/dt = -H re.
  const std::size_t d = state.dim();
  std::vector<double> y(2 * d);
  for (std::size_t i = 0; i < d; ++i) {
    y[i] = state.amplitudes()[i].real();
    y[d + i] = state.amplitudes()[i].imag();
  }

  OdeRhs rhs = [&](double t, const double* yv, double* dydt) {
    const double w = schedule.omega(t);
    const double dl = schedule.delta(t);
    const double la = schedule.local_amplitude(t);
    ham.apply_real(w, dl, la, yv + d, dydt);          // H im
    ham.apply_real(w, dl, la, yv, dydt + d);          // H re
    for (std::size_t i = d; i < 2 * d; ++i) dydt[i] = -dydt[i];
  };

  OdeOptions oo;
  oo.rel_tol = opts.rel_tol;
  oo.abs_tol = opts.abs_tol;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    const OdeStats s = integrate_adaptive(rhs, y, cuts[k], cuts[k + 1], oo);
    report.ode.n_steps += s.n_steps;
    report.ode.n_rejected += s.n_rejected;
    report.ode.n_rhs += s.n_rhs;
    const double n = vec_norm(y);
    report.max_norm_drift = std::max(report.max_norm_drift, std::abs(n - 1.0));
    if (n == 0.0) throw NumericalError("state norm collapsed during evolution");
    for (double& v : y) v /= n;
  }

  for (std::size_t i = 0; i < d; ++i)
    state.amplitudes()[i] = cplx(y[i], y[d + i]);
  state.set_time(t_final);
  return report;
}

namespace {

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

void axpy(double alpha, const std::vector<double>& x, std::vector<double>& y) {
  for (std::size_t i = 0; i < y.size(); ++i) y[i] += alpha * x[i];
}

}  // namespace

SpectrumResult ground_state_and_gaps(const Lattice& lat, double omega,
                                     double delta, const EigenOptions& opts) {
  check_site_count(lat);
  if (opts.n_states < 1) throw std::invalid_argument("need at least one state");
  HamiltonianAction ham(lat);
  ham.set_local_weights(opts.local_weights);
  const std::size_t d = ham.dim();
  const int n_states = std::min<int>(opts.n_states, static_cast<int>(d));

  auto apply_h = [&](const std::vector<double>& in, std::vector<double>& out) {
    ham.apply_real(omega, delta, opts.local_amp, in.data(), out.data());
  };

  SpectrumResult result;
  std::mt19937_64 rng(mix_seed(opts.seed, 0));
  std::vector<std::vector<double>> found;

  auto deflate = [&](std::vector<double>& w) {
    for (const auto& e : found) axpy(-dot(e, w), e, w);
  };

  for (int k = 0; k < n_states; ++k) {
    std::vector<double> v(d);
    for (auto& x : v) x = random_normal(rng);
    deflate(v);
    double nv = vec_norm(v);
    if (nv == 0.0) throw NumericalError("eigensolver start vector vanished");
    for (auto& x : v) x /= nv;

    bool converged = false;
    double theta = 0.0, residual = 0.0;
    std::vector<double> x;

    for (int restart = 0; restart < opts.max_restarts && !converged; ++restart) {
      std::vector<std::vector<double>> basis{v};
      std::vector<double> alphas, betas;
      std::vector<double> w(d);

      const int m = std::min<int>(opts.max_basis, static_cast<int>(d));
      for (int j = 0; j < m; ++j) {
        apply_h(basis[static_cast<std::size_t>(j)], w);
        deflate(w);
        const double alpha = dot(basis[static_cast<std::size_t>(j)], w);
        alphas.push_back(alpha);
        axpy(-alpha, basis[static_cast<std::size_t>(j)], w);
        if (j > 0) axpy(-betas.back(), basis[static_cast<std::size_t>(j - 1)], w);
        for (int pass = 0; pass < 2; ++pass)
          for (const auto& q : basis) axpy(-dot(q, w), q, w);
        const double beta = vec_norm(w);
        if (j + 1 == m || beta < 1e-12) break;
        betas.push_back(beta);
        std::vector<double> next(d);
        for (std::size_t i = 0; i < d; ++i) next[i] = w[i] / beta;
        basis.push_back(std::move(next));
      }

      const int sz = static_cast<int>(alphas.size());
      result.iterations += sz;
      Eigen::MatrixXd tri = Eigen::MatrixXd::Zero(sz, sz);
      for (int i = 0; i < sz; ++i) {
        tri(i, i) = alphas[static_cast<std::size_t>(i)];
        if (i + 1 < sz) {
          tri(i, i + 1) = betas[static_cast<std::size_t>(i)];
          tri(i + 1, i) = betas[static_cast<std::size_t>(i)];
        }
      }
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(tri);
      theta = es.eigenvalues()(0);
      const double scale =
          std::max({std::abs(es.eigenvalues()(0)), std::abs(es.eigenvalues()(sz - 1)), 1.0});

      x.assign(d, 0.0);
      for (int j = 0; j < sz; ++j)
        axpy(es.eigenvectors()(j, 0), basis[static_cast<std::size_t>(j)], x);
      deflate(x);
      const double nx = vec_norm(x);
      if (nx < 1e-12) {
        // Ritz vector collapsed under deflation; restart from randomness.
        for (auto& e : v) e = random_normal(rng);
        deflate(v);
        const double nr = vec_norm(v);
        for (auto& e : v) e /= nr;
        continue;
      }
      for (auto& e : x) e /= nx;

      apply_h(x, w);
      deflate(w);
      axpy(-theta, x, w);
      residual = vec_norm(w);
      if (residual <= opts.tol * scale) {
        converged = true;
      } else {
        v = x;
      }
    }

    if (!converged)
      throw NumericalError("eigensolver did not converge after " +
                           std::to_string(result.iterations) +
                           " iterations (residual " + std::to_string(residual) + ")");
    found.push_back(x);
    result.energies.push_back(theta);
    result.vectors.push_back(std::move(x));
    result.residuals.push_back(residual);
  }

  // Deflated runs can land states out of order when levels are close.
  std::vector<std::size_t> idx(result.energies.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    return result.energies[a] < result.energies[b];
  });
  SpectrumResult sorted;
  sorted.iterations = result.iterations;
  for (std::size_t i : idx) {
    sorted.energies.push_back(result.energies[i]);
    sorted.vectors.push_back(std::move(result.vectors[i]));
    sorted.residuals.push_back(result.residuals[i]);
  }
  return sorted;
}

std::vector<double> occupations(const QuantumState& state) {
  const int n = state.lattice().size();
  std::vector<double> occ(static_cast<std::size_t>(n), 0.0);
  const auto& amp = state.amplitudes();
  for (std::size_t b = 0; b < amp.size(); ++b) {
    const double p = std::norm(amp[b]);
    if (p == 0.0) continue;
    std::size_t bits = b;
    while (bits) {
      occ[static_cast<std::size_t>(std::countr_zero(bits))] += p;
      bits &= bits - 1;
    }
  }
  return occ;
}

double occupation(const QuantumState& state, int site) {
  if (site < 0 || site >= state.lattice().size())
    throw std::invalid_argument("site index out of range");
  return occupations(state)[static_cast<std::size_t>(site)];
}

double mean_rydberg_density(const QuantumState& state) {
  const auto occ = occupations(state);
  return std::accumulate(occ.begin(), occ.end(), 0.0) / static_cast<double>(occ.size());
}

namespace {

// Staggered magnetization of a basis state, normalized per site; +1 when
// Rydberg excitations fill the even sublattice.
double basis_staggered(const Lattice& lat, std::size_t b, std::size_t even_mask,
                       int n_even) {
  const int n = lat.size();
  const int pc_e = std::popcount(b & even_mask);
  const int pc_o = std::popcount(b) - pc_e;
  const int n_odd = n - n_even;
  const int z_sum = 2 * (pc_e - pc_o) - (n_even - n_odd);
  return static_cast<double>(z_sum) / n;
}

std::size_t even_sublattice_mask(const Lattice& lat, int* n_even) {
  std::size_t mask = 0;
  int count = 0;
  for (int i = 0; i < lat.size(); ++i) {
    if (lat.parity(i) > 0) {
      mask |= std::size_t{1} << i;
      ++count;
    }
  }
  if (n_even) *n_even = count;
  return mask;
}

}  // namespace

double staggered_magnetization(const QuantumState& state) {
  int n_even = 0;
  const std::size_t mask = even_sublattice_mask(state.lattice(), &n_even);
  const auto& amp = state.amplitudes();
  double sum = 0.0;
  for (std::size_t b = 0; b < amp.size(); ++b) {
    const double p = std::norm(amp[b]);
    if (p != 0.0) sum += p * basis_staggered(state.lattice(), b, mask, n_even);
  }
  return sum;
}

double staggered_magnetization_sq(const QuantumState& state) {
  int n_even = 0;
  const std::size_t mask = even_sublattice_mask(state.lattice(), &n_even);
  const auto& amp = state.amplitudes();
  double sum = 0.0;
  for (std::size_t b = 0; b < amp.size(); ++b) {
    const double p = std::norm(amp[b]);
    if (p != 0.0) {
      const double m = basis_staggered(state.lattice(), b, mask, n_even);
      sum += p * m * m;
    }
  }
  return sum;
}

double energy_expectation(const QuantumState& state, const HamiltonianAction& ham,
                          double omega, double delta, double local_amp) {
  std::vector<cplx> h(state.dim());
  ham.apply(omega, delta, local_amp, state.amplitudes().data(), h.data());
  cplx e{0.0, 0.0};
  double n2 = 0.0;
  for (std::size_t b = 0; b < h.size(); ++b) {
    e += std::conj(state.amplitudes()[b]) * h[b];
    n2 += std::norm(state.amplitudes()[b]);
  }
  return e.real() / n2;
}

double classical_energy_expectation(const QuantumState& state,
                                    const HamiltonianAction& ham, double delta) {
  const auto& amp = state.amplitudes();
  const int n = state.lattice().size();
  double e = 0.0, n2 = 0.0;
  for (std::size_t b = 0; b < amp.size(); ++b) {
    const double p = std::norm(amp[b]);
    if (p == 0.0) continue;
    e += p * (ham.interaction_diagonal(b) -
              delta * (std::popcount(b) - n));
    n2 += p;
  }
  return e / n2;
}

double connected_staggered_correlation(const QuantumState& state, int a, int b) {
  const Lattice& lat = state.lattice();
  if (a < 0 || a >= lat.size() || b < 0 || b >= lat.size())
    throw std::invalid_argument("site index out of range");
  const double pa = lat.parity(a), pb = lat.parity(b);
  const auto& amp = state.amplitudes();
  double zab = 0.0, za = 0.0, zb = 0.0;
  for (std::size_t s = 0; s < amp.size(); ++s) {
    const double p = std::norm(amp[s]);
    if (p == 0.0) continue;
    const double sa = (s >> a & 1u) ? 1.0 : -1.0;
    const double sb = (s >> b & 1u) ? 1.0 : -1.0;
    zab += p * sa * sb;
    za += p * sa;
    zb += p * sb;
  }
  return pa * pb * (zab - za * zb);
}

double nn_double_occupancy(const QuantumState& state) {
  const Lattice& lat = state.lattice();
  std::vector<std::size_t> masks;
  for (const auto& pr : lat.pairs())
    if (std::abs(lat.distance_sq(pr.a, pr.b) - 1.0) < 1e-9)
      masks.push_back((std::size_t{1} << pr.a) | (std::size_t{1} << pr.b));
  if (masks.empty()) return 0.0;
  const auto& amp = state.amplitudes();
  double sum = 0.0;
  for (std::size_t b = 0; b < amp.size(); ++b) {
    const double p = std::norm(amp[b]);
    if (p == 0.0) continue;
    for (std::size_t m : masks)
      if ((b & m) == m) sum += p;
  }
  return sum / static_cast<double>(masks.size());
}

SnapshotSet sample_snapshots(const QuantumState& state, int n_shots,
                             std::uint64_t seed) {
  if (n_shots < 0) throw std::invalid_argument("shot count must be nonnegative");
  const auto& amp = state.amplitudes();
  std::vector<double> cdf(amp.size());
  double acc = 0.0;
  for (std::size_t b = 0; b < amp.size(); ++b) {
    acc += std::norm(amp[b]);
    cdf[b] = acc;
  }
  if (acc <= 0.0) throw NumericalError("cannot sample from a zero state");

  const Lattice& lat = state.lattice();
  SnapshotSet set;
  set.width = lat.width();
  set.height = lat.height();
  set.meta.seed = seed;
  set.meta.hold_time = state.time();
  set.shots.reserve(static_cast<std::size_t>(n_shots));

  std::mt19937_64 rng(mix_seed(seed, 0x5a17));
  const std::size_t n_sites = static_cast<std::size_t>(lat.size());
  for (int s = 0; s < n_shots; ++s) {
    const double u = random_unit(rng) * acc;
    const std::size_t b = static_cast<std::size_t>(
        std::lower_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
    std::vector<std::uint8_t> shot(n_sites, 0);
    for (std::size_t i = 0; i < n_sites; ++i)
      shot[i] = static_cast<std::uint8_t>(b >> i & 1u);
    set.shots.push_back(std::move(shot));
  }
  return set;
}

}  // namespace rydsim
