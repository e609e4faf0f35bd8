#include "rydsim/snapshot.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "rydsim/errors.hpp"

namespace rydsim {

using nlohmann::json;

void SnapshotSet::validate() const {
  if (width < 1 || height < 1)
    throw std::invalid_argument("snapshot dimensions must be positive");
  const std::size_t expect = static_cast<std::size_t>(width) * height;
  for (const auto& s : shots) {
    if (s.size() != expect)
      throw std::invalid_argument("snapshot size does not match dimensions");
    for (auto v : s)
      if (v > 1) throw std::invalid_argument("snapshot values must be 0 or 1");
  }
}

ShotView view(const SnapshotSet& set, int shot) {
  return {set.width, set.height, set.shots[static_cast<std::size_t>(shot)].data()};
}

ShotView make_view(int width, int height, const std::vector<std::uint8_t>& data) {
  return {width, height, data.data()};
}

std::filesystem::path sidecar_path(const std::filesystem::path& path) {
  std::filesystem::path p = path;
  p.replace_extension(".meta.json");
  return p;
}

void write_snapshots(const std::filesystem::path& path, const SnapshotSet& set) {
  set.validate();
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << set.width << ' ' << set.height << ' ' << set.n_shots() << '\n';
  std::string line(static_cast<std::size_t>(set.width) * set.height, '0');
  for (const auto& shot : set.shots) {
    for (std::size_t i = 0; i < shot.size(); ++i) line[i] = shot[i] ? '1' : '0';
    out << line << '\n';
  }
  if (!out) throw IoError("write failure on " + path.string());
  out.close();

  json meta;
  meta["hold_time_us"] = set.meta.hold_time;
  meta["omega"] = set.meta.omega;
  meta["delta"] = set.meta.delta;
  meta["v_nn"] = set.meta.v_nn;
  meta["v_nnn"] = set.meta.v_nnn;
  meta["seed"] = set.meta.seed;
  meta["protocol"] = set.meta.protocol;
  meta["center_x"] = set.meta.center_x;
  meta["center_y"] = set.meta.center_y;
  if (!set.meta.pinned_mask.empty()) {
    std::string mask(set.meta.pinned_mask.size(), '0');
    for (std::size_t i = 0; i < mask.size(); ++i)
      mask[i] = set.meta.pinned_mask[i] ? '1' : '0';
    meta["pinned_mask"] = mask;
  }
  std::ofstream mout(sidecar_path(path));
  if (!mout) throw IoError("cannot open " + sidecar_path(path).string() + " for writing");
  mout << meta.dump(2) << '\n';
}

namespace {

[[noreturn]] void parse_fail(const std::filesystem::path& path, std::size_t offset,
                             const std::string& what) {
  throw IoError(path.string() + ": parse error at byte " + std::to_string(offset) +
                ": " + what);
}

}  // namespace

SnapshotSet read_snapshots(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::string content((std::istreambuf_iterator<char>(in)),
                      std::istreambuf_iterator<char>());

  SnapshotSet set;
  std::size_t pos = 0;
  auto read_int = [&](const char* name) {
    while (pos < content.size() && (content[pos] == ' ' || content[pos] == '\t'))
      ++pos;
    const std::size_t start = pos;
    bool neg = pos < content.size() && content[pos] == '-';
    if (neg) ++pos;
    long v = 0;
    bool any = false;
    while (pos < content.size() && content[pos] >= '0' && content[pos] <= '9') {
      v = v * 10 + (content[pos] - '0');
      ++pos;
      any = true;
    }
    if (!any) parse_fail(path, start, std::string("expected integer ") + name);
    return neg ? -v : v;
  };

  const long w = read_int("width");
  const long h = read_int("height");
  const long n = read_int("n_shots");
  if (w < 1 || h < 1) parse_fail(path, 0, "dimensions must be positive");
  if (n < 0) parse_fail(path, 0, "shot count must be nonnegative");
  while (pos < content.size() && (content[pos] == ' ' || content[pos] == '\r')) ++pos;
  if (pos >= content.size() || content[pos] != '\n')
    parse_fail(path, pos, "expected newline after header");
  ++pos;

  set.width = static_cast<int>(w);
  set.height = static_cast<int>(h);
  const std::size_t row_len = static_cast<std::size_t>(w) * static_cast<std::size_t>(h);
  set.shots.reserve(static_cast<std::size_t>(n));
  for (long s = 0; s < n; ++s) {
    std::vector<std::uint8_t> shot(row_len);
    for (std::size_t i = 0; i < row_len; ++i, ++pos) {
      if (pos >= content.size()) parse_fail(path, pos, "unexpected end of file in shot");
      const char c = content[pos];
      if (c != '0' && c != '1')
        parse_fail(path, pos, std::string("expected '0' or '1', got '") + c + "'");
      shot[i] = static_cast<std::uint8_t>(c - '0');
    }
    while (pos < content.size() && content[pos] == '\r') ++pos;
    if (pos < content.size()) {
      if (content[pos] != '\n') parse_fail(path, pos, "expected newline after shot");
      ++pos;
    } else if (s + 1 < n) {
      parse_fail(path, pos, "unexpected end of file; missing shots");
    }
    set.shots.push_back(std::move(shot));
  }

  const auto meta_file = sidecar_path(path);
  if (std::filesystem::exists(meta_file)) {
    std::ifstream min(meta_file);
    json meta;
    try {
      min >> meta;
    } catch (const json::exception& e) {
      throw IoError(meta_file.string() + ": " + e.what());
    }
    set.meta.hold_time = meta.value("hold_time_us", 0.0);
    set.meta.omega = meta.value("omega", 0.0);
    set.meta.delta = meta.value("delta", 0.0);
    set.meta.v_nn = meta.value("v_nn", 0.0);
    set.meta.v_nnn = meta.value("v_nnn", 0.0);
    set.meta.seed = meta.value("seed", std::uint64_t{0});
    set.meta.protocol = meta.value("protocol", std::string{});
    set.meta.center_x = meta.value("center_x", -1);
    set.meta.center_y = meta.value("center_y", -1);
    if (meta.contains("pinned_mask")) {
      const std::string mask = meta["pinned_mask"];
      set.meta.pinned_mask.resize(mask.size());
      for (std::size_t i = 0; i < mask.size(); ++i)
        set.meta.pinned_mask[i] = mask[i] == '1' ? 1 : 0;
    }
  }
  set.validate();
  return set;
}

}  // namespace rydsim
