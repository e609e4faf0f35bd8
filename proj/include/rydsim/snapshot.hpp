#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace rydsim {

// Physics context carried alongside a snapshot set so analysis can run
// without the generating configuration. Frequencies in rad/us; zero means
// "not recorded".
struct SnapshotMeta {
  double hold_time = 0.0;
  double omega = 0.0;
  double delta = 0.0;
  double v_nn = 0.0;
  double v_nnn = 0.0;
  std::uint64_t seed = 0;
  std::string protocol;
  int center_x = -1, center_y = -1;        // analysis hint for radial profiles
  std::vector<std::uint8_t> pinned_mask;   // row-major, optional
};

// A stack of binary site-occupation images from repeated projective readout.
struct SnapshotSet {
  int width = 0, height = 0;
  std::vector<std::vector<std::uint8_t>> shots;  // row-major, n[x + width*y]
  SnapshotMeta meta;

  int n_shots() const { return static_cast<int>(shots.size()); }
  std::uint8_t at(int shot, int x, int y) const {
    return shots[static_cast<std::size_t>(shot)][static_cast<std::size_t>(x + width * y)];
  }
  void validate() const;  // throws std::invalid_argument on shape/value errors
};

struct ShotView {
  int width = 0, height = 0;
  const std::uint8_t* n = nullptr;
  std::uint8_t at(int x, int y) const { return n[x + width * y]; }
  int size() const { return width * height; }
};

ShotView view(const SnapshotSet& set, int shot);
ShotView make_view(int width, int height, const std::vector<std::uint8_t>& data);

// Plain-text format: a "width height n_shots" header line followed by one
// row-major 0/1 string per shot. A JSON sidecar (same path with extension
// .meta.json) carries SnapshotMeta.
void write_snapshots(const std::filesystem::path& path, const SnapshotSet& set);

// Throws IoError naming the byte offset on malformed input; loads the
// sidecar when present.
SnapshotSet read_snapshots(const std::filesystem::path& path);

std::filesystem::path sidecar_path(const std::filesystem::path& path);

}  // namespace rydsim
