#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "rydsim/lattice.hpp"
#include "rydsim/ode.hpp"
#include "rydsim/schedule.hpp"
#include "rydsim/snapshot.hpp"

namespace rydsim {

// Product state of unit Bloch vectors s_i = (<X_i>, <Y_i>, <Z_i>);
// |g> = (0, 0, -1), Rydberg occupation n_i = (1 + s_z)/2.
class ProductState {
 public:
  ProductState(const Lattice& lat, std::vector<std::array<double, 3>> spins,
               double time = 0.0);
  static ProductState all_ground(const Lattice& lat);

  const Lattice& lattice() const { return *lat_; }
  int size() const { return lat_->size(); }
  double time() const { return time_; }
  void set_time(double t) { time_ = t; }

  std::array<double, 3>& spin(int i) { return spins_[static_cast<std::size_t>(i)]; }
  const std::array<double, 3>& spin(int i) const { return spins_[static_cast<std::size_t>(i)]; }
  std::vector<std::array<double, 3>>& spins() { return spins_; }
  const std::vector<std::array<double, 3>>& spins() const { return spins_; }

  double occupation(int i) const { return 0.5 * (1.0 + spin(i)[2]); }
  double max_norm_error() const;  // max | |s_i| - 1 |
  void renormalize();

 private:
  const Lattice* lat_;
  std::vector<std::array<double, 3>> spins_;
  double time_;
};

// E = sum_i [(omega/2) s_x,i - delta_i (1+s_z,i)/2]
//     + sum_{i<j} V_ij (1+s_z,i)(1+s_z,j)/4,
// with delta_i = delta uniformly, or site_detuning[i] when provided.
double meanfield_energy(const ProductState& state, double omega, double delta,
                        const std::vector<double>& site_detuning = {});

double staggered_magnetization(const ProductState& state);
// -delta * sum_i (n_i - 1) + sum_{i<j} V_ij n_i n_j in the product state.
double classical_energy(const ProductState& state, double delta);

struct MinimizeOptions {
  bool per_site = false;     // full site-resolved relaxation instead of the
                             // two-sublattice-angle profile
  double grad_tol = 1e-9;    // per-site gradient exit threshold (relative to
                             // the drive/coupling scale)
  int max_iterations = 20000;
};

struct MinimizeResult {
  ProductState state;
  double energy = 0.0;
  double theta_even = 0.0, theta_odd = 0.0;  // two-angle profile (radians)
  double grad_norm_per_site = 0.0;
  int iterations = 0;
};

// Variational energy minimum with pinned sites held exactly at |g>. The
// default profile gives every unpinned site on a checkerboard sublattice the
// same polar angle; spatially inhomogeneous relaxation sits behind per_site.
MinimizeResult meanfield_minimize(const Lattice& lat, double omega, double delta,
                                  const std::vector<std::uint8_t>& pinned = {},
                                  const MinimizeOptions& opts = {});

struct MeanfieldEvolveOptions {
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
};

struct MeanfieldEvolveReport {
  double max_norm_drift = 0.0;
  OdeStats ode;
};

// Torque equations ds_i/dt = B_i x s_i with
// B_i = (omega(t), 0, -delta_i(t) + sum_j V_ij (1+s_z,j)/2); exact for a
// single atom, mean-field decoupled otherwise.
MeanfieldEvolveReport meanfield_evolve(ProductState& state,
                                       const DriveSchedule& schedule,
                                       double t_final,
                                       const MeanfieldEvolveOptions& opts = {});

// Independent per-site Bernoulli readout with p_i = (1+s_z,i)/2.
SnapshotSet meanfield_sample(const ProductState& state, int n_shots,
                             std::uint64_t seed);

}  // namespace rydsim
