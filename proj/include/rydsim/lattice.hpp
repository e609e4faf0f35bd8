#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace rydsim {

enum class Boundary { open, periodic };
enum class Cutoff { nearest, next_nearest, third_nearest };

std::string to_string(Boundary b);
std::string to_string(Cutoff c);
Boundary boundary_from_string(const std::string& s);
Cutoff cutoff_from_string(const std::string& s);

struct PairCoupling {
  int a = 0, b = 0;   // site indices, a < b
  double v = 0.0;     // interaction strength, rad/us
};

// Rectangular square-lattice array of two-level atoms with van der Waals
// couplings v(d) = v_nn / (d/a)^6 truncated at the configured neighbor shell.
// Sites are indexed row-major: index = x + width*y.
class Lattice {
 public:
  Lattice(int width, int height, double spacing_um, double v_nn,
          Boundary boundary = Boundary::open,
          Cutoff cutoff = Cutoff::third_nearest);

  int width() const { return width_; }
  int height() const { return height_; }
  int size() const { return width_ * height_; }
  double spacing() const { return spacing_; }
  double v_nn() const { return v_nn_; }
  Boundary boundary() const { return boundary_; }
  Cutoff cutoff() const { return cutoff_; }

  int index(int x, int y) const;
  std::pair<int, int> coords(int site) const;
  bool in_bounds(int x, int y) const;

  // +1 on the even checkerboard sublattice ((x+y) even), -1 on the odd one.
  int parity(int site) const;

  // Squared distance between sites in units of the spacing (minimum image
  // when periodic).
  double distance_sq(int i, int j) const;

  // Coupling between two distinct sites; 0 beyond the cutoff shell.
  double coupling(int i, int j) const;

  const std::vector<PairCoupling>& pairs() const { return pairs_; }
  // Per-site list of (neighbor, v) within the cutoff shell.
  const std::vector<std::pair<int, double>>& neighbors(int site) const;
  // Sites at distance exactly one spacing.
  std::vector<int> nearest_neighbors(int site) const;

 private:
  int width_, height_;
  double spacing_;
  double v_nn_;
  Boundary boundary_;
  Cutoff cutoff_;
  std::vector<PairCoupling> pairs_;
  std::vector<std::vector<std::pair<int, double>>> neighbor_lists_;
};

// Manhattan distance on the open lattice (no wraparound). Throws
// std::invalid_argument for out-of-range sites.
int manhattan_distance(const Lattice& lat, int i, int j);

// Blockade radius over spacing, (v_nn/omega)^(1/6). Requires both > 0.
double blockade_radius_ratio(double v_nn, double omega);

}  // namespace rydsim
