#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "rydsim/lattice.hpp"
#include "rydsim/ode.hpp"
#include "rydsim/schedule.hpp"
#include "rydsim/snapshot.hpp"

namespace rydsim {

inline constexpr int kMaxExactSites = 20;

// Matrix-free action of
//   H = (omega/2) sum_i X_i - sum_i n_i (delta + w_i * local_amp)
//       + sum_{i<j} V_ij n_i n_j
// on the computational basis. Site i maps to bit i of the basis index
// (row-major site order), bit set = Rydberg.
class HamiltonianAction {
 public:
  explicit HamiltonianAction(const Lattice& lat);

  const Lattice& lattice() const { return *lat_; }
  int n_sites() const { return lat_->size(); }
  std::size_t dim() const { return std::size_t{1} << n_sites(); }

  // Per-site weights of the local detuning term; empty clears the pattern.
  // No-op when the weights already match.
  void set_local_weights(const std::vector<double>& weights);
  const std::vector<double>& local_weights() const { return weights_; }

  void apply(double omega, double delta, double local_amp,
             const std::complex<double>* in, std::complex<double>* out) const;
  void apply_real(double omega, double delta, double local_amp,
                  const double* in, double* out) const;

  double diagonal(std::size_t basis, double delta, double local_amp) const;
  // sum_{i<j} V_ij n_i n_j of a basis state.
  double interaction_diagonal(std::size_t basis) const { return v_diag_[basis]; }

 private:
  const Lattice* lat_;
  std::vector<double> v_diag_;
  std::vector<double> alpha_diag_;  // sum_i w_i n_i per basis state
  std::vector<double> weights_;
};

class QuantumState {
 public:
  QuantumState(const Lattice& lat, std::vector<std::complex<double>> amplitudes,
               double time = 0.0);
  static QuantumState all_ground(const Lattice& lat);
  static QuantumState basis_state(const Lattice& lat, std::uint64_t bits);
  static QuantumState from_real(const Lattice& lat, const std::vector<double>& re);

  const Lattice& lattice() const { return *lat_; }
  std::size_t dim() const { return amp_.size(); }
  double time() const { return time_; }
  void set_time(double t) { time_ = t; }
  std::vector<std::complex<double>>& amplitudes() { return amp_; }
  const std::vector<std::complex<double>>& amplitudes() const { return amp_; }
  double norm() const;
  void normalize();

 private:
  const Lattice* lat_;
  std::vector<std::complex<double>> amp_;
  double time_;
};

struct EvolveOptions {
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
};

struct EvolveReport {
  double max_norm_drift = 0.0;  // |norm - 1| before renormalization
  OdeStats ode;
};

// Integrate i d|psi>/dt = H(t)|psi> from state.time() to t_final, splitting
// at schedule breakpoints and renormalizing after each span.
EvolveReport evolve(QuantumState& state, HamiltonianAction& ham,
                    const DriveSchedule& schedule, double t_final,
                    const EvolveOptions& opts = {});

struct EigenOptions {
  int n_states = 2;
  double tol = 1e-8;          // residual bound relative to the spectral scale
  int max_basis = 80;         // Krylov vectors kept per restart cycle
  int max_restarts = 400;
  std::uint64_t seed = 7;
  std::vector<double> local_weights;
  double local_amp = 0.0;
};

struct SpectrumResult {
  std::vector<double> energies;               // ascending
  std::vector<std::vector<double>> vectors;   // real eigenvectors
  std::vector<double> residuals;              // ||H v - E v|| per state
  int iterations = 0;
};

// Lowest eigenpairs from a restarted, fully reorthogonalized Krylov
// iteration on the matrix-free action, with deflation between states.
// Throws NumericalError with the iteration count on non-convergence.
SpectrumResult ground_state_and_gaps(const Lattice& lat, double omega,
                                     double delta, const EigenOptions& opts = {});

// Observables.
double occupation(const QuantumState& state, int site);
std::vector<double> occupations(const QuantumState& state);
double mean_rydberg_density(const QuantumState& state);
// Staggered magnetization per site, +1 for the pattern with Rydberg
// excitations on the even sublattice.
double staggered_magnetization(const QuantumState& state);
double staggered_magnetization_sq(const QuantumState& state);
double energy_expectation(const QuantumState& state, const HamiltonianAction& ham,
                          double omega, double delta, double local_amp);
// Diagonal (interaction + detuning) energy -delta * sum_i <n_i - 1> +
// <sum_{i<j} V_ij n_i n_j> over the full lattice.
double classical_energy_expectation(const QuantumState& state,
                                    const HamiltonianAction& ham, double delta);
// <Zt_a Zt_b> - <Zt_a><Zt_b> with Zt the parity-staggered Pauli Z.
double connected_staggered_correlation(const QuantumState& state, int a, int b);
double nn_double_occupancy(const QuantumState& state);

// Projective measurements in the occupation basis; deterministic per seed.
SnapshotSet sample_snapshots(const QuantumState& state, int n_shots,
                             std::uint64_t seed);

}  // namespace rydsim
