#include "rydsim/schedule.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rydsim {

namespace {

double lerp_segment(double t, double t0, double t1, double v0, double v1) {
  if (t1 <= t0) return v1;
  const double u = (t - t0) / (t1 - t0);
  return v0 + (v1 - v0) * u;
}

}  // namespace

DriveSchedule::DriveSchedule(std::vector<ScheduleSegment> segments,
                             std::vector<double> local_weights)
    : segments_(std::move(segments)), local_weights_(std::move(local_weights)) {}

double DriveSchedule::total_time() const {
  return segments_.empty() ? 0.0 : segments_.back().t1;
}

const ScheduleSegment& DriveSchedule::segment_at(double t) const {
  if (segments_.empty()) throw std::invalid_argument("empty schedule");
  // Later segment wins at shared boundaries so steps take their new value.
  for (std::size_t k = segments_.size(); k-- > 0;) {
    if (t >= segments_[k].t0) return segments_[k];
  }
  return segments_.front();
}

double DriveSchedule::omega(double t) const {
  const auto& s = segment_at(t);
  return lerp_segment(std::clamp(t, s.t0, s.t1), s.t0, s.t1, s.omega0, s.omega1);
}

double DriveSchedule::delta(double t) const {
  const auto& s = segment_at(t);
  return lerp_segment(std::clamp(t, s.t0, s.t1), s.t0, s.t1, s.delta0, s.delta1);
}

double DriveSchedule::local_amplitude(double t) const {
  const auto& s = segment_at(t);
  return lerp_segment(std::clamp(t, s.t0, s.t1), s.t0, s.t1, s.local0, s.local1);
}

double DriveSchedule::site_detuning(double t, int site) const {
  double d = delta(t);
  if (!local_weights_.empty()) {
    if (site < 0 || site >= static_cast<int>(local_weights_.size()))
      throw std::invalid_argument("site index outside local weight pattern");
    d += local_weights_[site] * local_amplitude(t);
  }
  return d;
}

bool DriveSchedule::has_local_pattern() const {
  return std::any_of(local_weights_.begin(), local_weights_.end(),
                     [](double w) { return w != 0.0; });
}

std::vector<double> DriveSchedule::breakpoints() const {
  std::vector<double> out;
  for (const auto& s : segments_) out.push_back(s.t0);
  if (!segments_.empty()) out.push_back(segments_.back().t1);
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

void DriveSchedule::validate() const {
  if (segments_.empty()) throw std::invalid_argument("schedule has no segments");
  if (segments_.front().t0 != 0.0)
    throw std::invalid_argument("schedule must start at t = 0");
  for (std::size_t k = 0; k < segments_.size(); ++k) {
    const auto& s = segments_[k];
    if (!(s.t1 > s.t0)) throw std::invalid_argument("segment has nonpositive duration");
    if (k + 1 < segments_.size() && segments_[k + 1].t0 != s.t1)
      throw std::invalid_argument("segments are not contiguous");
    if (s.omega0 < 0.0 || s.omega1 < 0.0)
      throw std::invalid_argument("omega must be nonnegative");
    if (s.local0 > 0.0 || s.local1 > 0.0)
      throw std::invalid_argument("local detuning amplitude must be nonpositive");
  }
  for (double w : local_weights_)
    if (w < 0.0 || w > 1.0)
      throw std::invalid_argument("local weights must lie in [0, 1]");
}

DriveSchedule linear_sweep_and_hold(double omega, double delta_start,
                                    double delta_end, double sweep_rate,
                                    double hold_time, const SweepOptions& opts) {
  if (omega <= 0.0) throw std::invalid_argument("sweep requires omega > 0");
  if (sweep_rate <= 0.0) throw std::invalid_argument("sweep rate must be positive");
  if (hold_time < 0.0) throw std::invalid_argument("hold time must be nonnegative");
  if (opts.omega_ramp < 0.0) throw std::invalid_argument("omega ramp must be nonnegative");
  if (opts.pin_amplitude > 0.0)
    throw std::invalid_argument("pin amplitude must be nonpositive");

  const double t_sweep = (delta_end - delta_start) / (omega * omega * sweep_rate);
  if (!(t_sweep > 0.0))
    throw std::invalid_argument("sweep rate sign does not match detuning span");

  const double pin = opts.local_weights.empty() ? 0.0 : opts.pin_amplitude;
  std::vector<ScheduleSegment> segs;
  double t = 0.0;
  if (opts.omega_ramp > 0.0) {
    segs.push_back({t, t + opts.omega_ramp, 0.0, omega, delta_start, delta_start, pin, pin});
    t += opts.omega_ramp;
  }
  segs.push_back({t, t + t_sweep, omega, omega, delta_start, delta_end, pin, pin});
  t += t_sweep;
  if (hold_time > 0.0) {
    segs.push_back({t, t + hold_time, omega, omega, delta_end, delta_end, pin, pin});
  }
  DriveSchedule sched(std::move(segs), opts.local_weights);
  sched.validate();
  return sched;
}

namespace {

// Sub-interval [a, b] of a segment with exactly interpolated endpoint values.
ScheduleSegment slice_segment(const ScheduleSegment& s, double a, double b) {
  ScheduleSegment out;
  out.t0 = a;
  out.t1 = b;
  out.omega0 = lerp_segment(a, s.t0, s.t1, s.omega0, s.omega1);
  out.omega1 = lerp_segment(b, s.t0, s.t1, s.omega0, s.omega1);
  out.delta0 = lerp_segment(a, s.t0, s.t1, s.delta0, s.delta1);
  out.delta1 = lerp_segment(b, s.t0, s.t1, s.delta0, s.delta1);
  out.local0 = lerp_segment(a, s.t0, s.t1, s.local0, s.local1);
  out.local1 = lerp_segment(b, s.t0, s.t1, s.local0, s.local1);
  return out;
}

}  // namespace

DriveSchedule local_quench_off(const DriveSchedule& schedule, double t_off,
                               double ramp_duration) {
  if (t_off < 0.0 || ramp_duration < 0.0)
    throw std::invalid_argument("quench-off times must be nonnegative");
  const double t_end = t_off + ramp_duration;

  std::vector<ScheduleSegment> base = schedule.segments();
  if (base.empty()) throw std::invalid_argument("empty schedule");
  if (t_end > base.back().t1)
    throw std::invalid_argument("quench-off ramp extends past the schedule end");

  const double l_off = schedule.local_amplitude(std::min(t_off, schedule.total_time()));
  auto ramp_value = [&](double t) {
    if (ramp_duration <= 0.0) return 0.0;
    return l_off * (1.0 - (t - t_off) / ramp_duration);
  };

  std::vector<ScheduleSegment> segs;
  for (const auto& s : base) {
    std::vector<double> cuts = {s.t0};
    if (t_off > s.t0 && t_off < s.t1) cuts.push_back(t_off);
    if (t_end > s.t0 && t_end < s.t1 && t_end > cuts.back()) cuts.push_back(t_end);
    cuts.push_back(s.t1);
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
      ScheduleSegment sub = slice_segment(s, cuts[k], cuts[k + 1]);
      const double mid = 0.5 * (sub.t0 + sub.t1);
      if (mid >= t_end) {
        sub.local0 = sub.local1 = 0.0;
      } else if (mid > t_off) {
        sub.local0 = std::min(0.0, ramp_value(sub.t0));
        sub.local1 = std::min(0.0, ramp_value(sub.t1));
      }
      segs.push_back(sub);
    }
  }
  DriveSchedule out(std::move(segs), schedule.local_weights());
  out.validate();
  return out;
}

bool target_rydberg(Order order, int x, int y) {
  const bool even = ((x + y) % 2) == 0;
  return order == Order::af1 ? even : !even;
}

int PinPattern::pinned_count() const {
  int n = 0;
  for (auto p : pinned) n += p;
  return n;
}

PinPattern pin_pattern(const Lattice& lat, const std::vector<Order>& target) {
  if (static_cast<int>(target.size()) != lat.size())
    throw std::invalid_argument("target order map size mismatch");
  const int n = lat.size();
  PinPattern pat;
  pat.pinned.assign(n, 0);
  pat.weights.assign(n, 0.0);
  double wmax = 0.0;
  for (int i = 0; i < n; ++i) {
    const auto [x, y] = lat.coords(i);
    if (target_rydberg(target[i], x, y)) continue;  // target-Rydberg sites stay free
    pat.pinned[i] = 1;
    int ryd_nn = 0;
    for (int j : lat.nearest_neighbors(i)) {
      const auto [xj, yj] = lat.coords(j);
      if (target_rydberg(target[j], xj, yj)) ++ryd_nn;
    }
    pat.weights[i] = 1.0 / std::max(1, ryd_nn);
    wmax = std::max(wmax, pat.weights[i]);
  }
  if (wmax > 0.0)
    for (double& w : pat.weights) w /= wmax;
  return pat;
}

std::vector<Order> uniform_order(const Lattice& lat, Order order) {
  return std::vector<Order>(lat.size(), order);
}

std::vector<Order> centered_square_order(const Lattice& lat, int half_width,
                                         int cx, int cy, Order inner, Order outer) {
  if (half_width < 0) throw std::invalid_argument("half width must be nonnegative");
  if (cx < 0) cx = lat.width() / 2;
  if (cy < 0) cy = lat.height() / 2;
  std::vector<Order> out(lat.size(), outer);
  for (int i = 0; i < lat.size(); ++i) {
    const auto [x, y] = lat.coords(i);
    if (std::abs(x - cx) <= half_width && std::abs(y - cy) <= half_width)
      out[i] = inner;
  }
  return out;
}

std::vector<Order> zigzag_order(const Lattice& lat, int wall_x) {
  std::vector<Order> out(lat.size(), Order::af2);
  for (int i = 0; i < lat.size(); ++i) {
    const auto [x, y] = lat.coords(i);
    if (x < wall_x + (y & 1)) out[i] = Order::af1;
  }
  return out;
}

DriveSchedule ordered_phase_quench(const OrderedQuenchParams& p,
                                   std::vector<std::string>* warnings) {
  if (p.omega <= 0.0) throw std::invalid_argument("quench requires omega > 0");
  if (p.delta_high <= p.delta_start)
    throw std::invalid_argument("delta_high must exceed delta_start");
  if (p.hold_time < 0.0 || p.quench_ramp < 0.0 || p.settle_time < 0.0)
    throw std::invalid_argument("durations must be nonnegative");

  const double delta_c = p.delta_c > 0.0 ? p.delta_c : 1.12 * p.omega;
  if (warnings && p.delta_final <= delta_c)
    warnings->push_back("delta_final does not exceed the critical detuning; "
                        "the post-quench hold is not in the ordered phase");

  SweepOptions opts;
  opts.omega_ramp = p.omega_ramp;
  opts.local_weights = p.local_weights;
  opts.pin_amplitude = p.pin_amplitude;
  DriveSchedule sweep = linear_sweep_and_hold(p.omega, p.delta_start, p.delta_high,
                                              p.sweep_rate, 0.0, opts);
  const double t_sweep_end = sweep.total_time();

  std::vector<ScheduleSegment> segs = sweep.segments();
  double t = t_sweep_end;
  const double pin = opts.local_weights.empty() ? 0.0 : p.pin_amplitude;
  if (p.quench_ramp > 0.0) {
    segs.push_back({t, t + p.quench_ramp, p.omega, p.omega,
                    p.delta_high, p.delta_high, pin, 0.0});
    t += p.quench_ramp;
  }
  if (p.settle_time > 0.0) {
    segs.push_back({t, t + p.settle_time, p.omega, p.omega,
                    p.delta_high, p.delta_high, 0.0, 0.0});
    t += p.settle_time;
  }
  // Detuning step down happens across this boundary.
  if (p.hold_time > 0.0) {
    segs.push_back({t, t + p.hold_time, p.omega, p.omega,
                    p.delta_final, p.delta_final, 0.0, 0.0});
  }
  DriveSchedule out(std::move(segs), p.local_weights);
  out.validate();
  return out;
}

}  // namespace rydsim
