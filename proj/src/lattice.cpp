#include "rydsim/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <stdexcept>

namespace rydsim {

namespace {

double cutoff_radius_sq(Cutoff c) {
  switch (c) {
    case Cutoff::nearest: return 1.0;
    case Cutoff::next_nearest: return 2.0;
    case Cutoff::third_nearest: return 4.0;
  }
  throw std::invalid_argument("unknown cutoff");
}

}  // namespace

std::string to_string(Boundary b) {
  return b == Boundary::open ? "open" : "periodic";
}

std::string to_string(Cutoff c) {
  switch (c) {
    case Cutoff::nearest: return "nearest";
    case Cutoff::next_nearest: return "next_nearest";
    case Cutoff::third_nearest: return "third_nearest";
  }
  return "?";
}

Boundary boundary_from_string(const std::string& s) {
  if (s == "open") return Boundary::open;
  if (s == "periodic") return Boundary::periodic;
  throw std::invalid_argument("boundary must be 'open' or 'periodic', got '" + s + "'");
}

Cutoff cutoff_from_string(const std::string& s) {
  if (s == "nearest") return Cutoff::nearest;
  if (s == "next_nearest") return Cutoff::next_nearest;
  if (s == "third_nearest") return Cutoff::third_nearest;
  throw std::invalid_argument("cutoff must be 'nearest', 'next_nearest' or 'third_nearest', got '" + s + "'");
}

Lattice::Lattice(int width, int height, double spacing_um, double v_nn,
                 Boundary boundary, Cutoff cutoff)
    : width_(width), height_(height), spacing_(spacing_um), v_nn_(v_nn),
      boundary_(boundary), cutoff_(cutoff) {
  if (width < 1 || height < 1)
    throw std::invalid_argument("lattice dimensions must be positive");
  if (spacing_um <= 0.0)
    throw std::invalid_argument("lattice spacing must be positive");
  if (v_nn < 0.0)
    throw std::invalid_argument("nearest-neighbor coupling must be nonnegative");

  const double r2max = cutoff_radius_sq(cutoff) + 1e-9;
  const int n = size();
  neighbor_lists_.resize(n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double d2 = distance_sq(i, j);
      if (d2 > r2max) continue;
      const double v = v_nn_ / (d2 * d2 * d2);  // v_nn / d^6
      pairs_.push_back({i, j, v});
      neighbor_lists_[i].push_back({j, v});
      neighbor_lists_[j].push_back({i, v});
    }
  }
}

int Lattice::index(int x, int y) const {
  if (!in_bounds(x, y)) throw std::invalid_argument("site coordinates out of range");
  return x + width_ * y;
}

std::pair<int, int> Lattice::coords(int site) const {
  if (site < 0 || site >= size()) throw std::invalid_argument("site index out of range");
  return {site % width_, site / width_};
}

bool Lattice::in_bounds(int x, int y) const {
  return x >= 0 && x < width_ && y >= 0 && y < height_;
}

int Lattice::parity(int site) const {
  const auto [x, y] = coords(site);
  return ((x + y) % 2 == 0) ? 1 : -1;
}

double Lattice::distance_sq(int i, int j) const {
  const auto [xi, yi] = coords(i);
  const auto [xj, yj] = coords(j);
  int dx = std::abs(xi - xj);
  int dy = std::abs(yi - yj);
  if (boundary_ == Boundary::periodic) {
    dx = std::min(dx, width_ - dx);
    dy = std::min(dy, height_ - dy);
  }
  return static_cast<double>(dx) * dx + static_cast<double>(dy) * dy;
}

double Lattice::coupling(int i, int j) const {
  if (i == j) return 0.0;
  for (const auto& [k, v] : neighbor_lists_[i])
    if (k == j) return v;
  return 0.0;
}

const std::vector<std::pair<int, double>>& Lattice::neighbors(int site) const {
  if (site < 0 || site >= size()) throw std::invalid_argument("site index out of range");
  return neighbor_lists_[site];
}

std::vector<int> Lattice::nearest_neighbors(int site) const {
  std::vector<int> out;
  for (const auto& [j, v] : neighbors(site))
    if (std::abs(distance_sq(site, j) - 1.0) < 1e-9) out.push_back(j);
  std::sort(out.begin(), out.end());
  return out;
}

int manhattan_distance(const Lattice& lat, int i, int j) {
  const auto [xi, yi] = lat.coords(i);
  const auto [xj, yj] = lat.coords(j);
  return std::abs(xi - xj) + std::abs(yi - yj);
}

double blockade_radius_ratio(double v_nn, double omega) {
  if (v_nn <= 0.0 || omega <= 0.0)
    throw std::invalid_argument("blockade radius requires positive coupling and drive");
  return std::pow(v_nn / omega, 1.0 / 6.0);
}

}  // namespace rydsim
