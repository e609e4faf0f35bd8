#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rydsim/lattice.hpp"

namespace rydsim {

// One piecewise-linear interval. Values interpolate linearly between the
// endpoint samples; adjacent segments may disagree at a shared boundary,
// which represents a step (the later segment wins at the boundary instant).
struct ScheduleSegment {
  double t0 = 0, t1 = 0;
  double omega0 = 0, omega1 = 0;   // Rabi drive, rad/us, >= 0
  double delta0 = 0, delta1 = 0;   // global detuning, rad/us
  double local0 = 0, local1 = 0;   // local detuning amplitude, rad/us, <= 0
};

// Global drive plus an optional site-resolved detuning pattern. The detuning
// seen by site i at time t is delta(t) + weight[i] * local_amplitude(t).
class DriveSchedule {
 public:
  DriveSchedule() = default;
  DriveSchedule(std::vector<ScheduleSegment> segments,
                std::vector<double> local_weights = {});

  double total_time() const;
  double omega(double t) const;
  double delta(double t) const;
  double local_amplitude(double t) const;
  double site_detuning(double t, int site) const;

  const std::vector<ScheduleSegment>& segments() const { return segments_; }
  const std::vector<double>& local_weights() const { return local_weights_; }
  bool has_local_pattern() const;

  // Segment boundaries, ascending, including 0 and total_time().
  std::vector<double> breakpoints() const;

  // Throws std::invalid_argument on gaps, reversed intervals, negative
  // omega, positive local amplitude, or weights outside [0, 1].
  void validate() const;

 private:
  const ScheduleSegment& segment_at(double t) const;
  std::vector<ScheduleSegment> segments_;
  std::vector<double> local_weights_;
};

struct SweepOptions {
  double omega_ramp = 0.2;             // us spent ramping omega from 0
  std::vector<double> local_weights;   // empty: no local pattern
  double pin_amplitude = 0.0;          // rad/us, <= 0, applied from t = 0
};

// Ramp omega up at delta_start, sweep delta linearly to delta_end at the
// dimensionless rate (delta_end - delta_start)/(omega^2 T_sweep), then hold.
DriveSchedule linear_sweep_and_hold(double omega, double delta_start,
                                    double delta_end, double sweep_rate,
                                    double hold_time,
                                    const SweepOptions& opts = {});

// Replace the local-detuning amplitude by a linear ramp to zero starting at
// t_off and lasting ramp_duration (a step when ramp_duration = 0).
DriveSchedule local_quench_off(const DriveSchedule& schedule, double t_off,
                               double ramp_duration);

enum class Order : std::uint8_t { af1, af2 };

// Site-resolved pinning derived from a target ordering: every atom that is
// in the ground state under the target pattern is pinned, with weight
// inversely proportional to its number of target-Rydberg nearest neighbors,
// normalized so the largest weight is 1.
struct PinPattern {
  std::vector<std::uint8_t> pinned;  // size N, 1 on pinned sites
  std::vector<double> weights;       // size N, 0 on unpinned sites
  int pinned_count() const;
};

// AF1 puts Rydberg excitations on the even checkerboard sublattice
// ((x+y) even), AF2 on the odd one.
bool target_rydberg(Order order, int x, int y);

PinPattern pin_pattern(const Lattice& lat, const std::vector<Order>& target);

std::vector<Order> uniform_order(const Lattice& lat, Order order);
// (2*half_width+1)^2 square of opposite order centered at (cx, cy)
// (defaults to width/2, height/2).
std::vector<Order> centered_square_order(const Lattice& lat, int half_width,
                                         int cx = -1, int cy = -1,
                                         Order inner = Order::af2,
                                         Order outer = Order::af1);
// Vertical interface with a one-site zigzag: AF1 where x < wall_x + (y & 1).
std::vector<Order> zigzag_order(const Lattice& lat, int wall_x);

struct OrderedQuenchParams {
  double omega = 0;                // rad/us
  double delta_start = 0;          // rad/us (typically negative)
  double delta_high = 0;           // sweep endpoint deep in the ordered phase
  double delta_final = 0;          // post-quench detuning for the hold
  double hold_time = 0;            // us
  double sweep_rate = 0.477;       // dimensionless, ~3.0/2pi
  double omega_ramp = 0.2;         // us
  double quench_ramp = 0.05;       // us, local-detuning turn-off
  double settle_time = 0.05;       // us between quench-off and the delta step
  double delta_c = 0;              // rad/us; 0: use 1.12 * omega
  std::vector<double> local_weights;
  double pin_amplitude = 0.0;      // rad/us, <= 0
};

// Sweep into the ordered phase with pinning, quench the pins off, then step
// the detuning down to delta_final and hold. Appends a diagnostic when
// delta_final does not sit above the critical detuning.
DriveSchedule ordered_phase_quench(const OrderedQuenchParams& params,
                                   std::vector<std::string>* warnings = nullptr);

}  // namespace rydsim
