#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "rydsim/lattice.hpp"
#include "rydsim/schedule.hpp"

using namespace rydsim;

TEST_CASE("linear sweep timing and interpolation") {
    const double omega = 4.0, d0 = -20.0, d1 = 12.0, rate = 0.5, hold = 1.5;
    SweepOptions opts;
    opts.omega_ramp = 0.25;
    const DriveSchedule s = linear_sweep_and_hold(omega, d0, d1, rate, hold, opts);

    const double t_sweep = (d1 - d0) / (omega * omega * rate);
    CHECK(s.total_time() == doctest::Approx(0.25 + t_sweep + hold).epsilon(1e-14));

    // Rabi ramp: linear from 0 at fixed detuning.
    CHECK(s.omega(0.0) == 0.0);
    CHECK(s.omega(0.125) == doctest::Approx(omega / 2).epsilon(1e-14));
    CHECK(s.delta(0.1) == doctest::Approx(d0).epsilon(1e-14));

    // Sweep midpoint hits the midpoint detuning.
    CHECK(s.delta(0.25 + t_sweep / 2) == doctest::Approx((d0 + d1) / 2).epsilon(1e-13));
    CHECK(s.omega(0.25 + t_sweep / 2) == doctest::Approx(omega));

    // Hold freezes both.
    CHECK(s.delta(s.total_time()) == doctest::Approx(d1));
    CHECK(s.omega(s.total_time()) == doctest::Approx(omega));
    CHECK(s.local_amplitude(0.7) == 0.0);

    // Breakpoints bracket the schedule and are strictly increasing.
    const auto bp = s.breakpoints();
    REQUIRE(bp.size() >= 2);
    CHECK(bp.front() == 0.0);
    CHECK(bp.back() == doctest::Approx(s.total_time()));
    for (std::size_t i = 1; i < bp.size(); ++i) CHECK(bp[i] > bp[i - 1]);
}

TEST_CASE("sweep argument validation") {
    CHECK_THROWS_AS(linear_sweep_and_hold(0.0, -1.0, 1.0, 0.5, 0.0),
                    std::invalid_argument);
    CHECK_THROWS_AS(linear_sweep_and_hold(1.0, -1.0, 1.0, -0.5, 0.0),
                    std::invalid_argument);
    CHECK_THROWS_AS(linear_sweep_and_hold(1.0, 1.0, -1.0, 0.5, 0.0),
                    std::invalid_argument);  // rate sign vs span
    CHECK_THROWS_AS(linear_sweep_and_hold(1.0, -1.0, 1.0, 0.5, -0.1),
                    std::invalid_argument);
}

TEST_CASE("local detuning pattern applies per-site weights") {
    SweepOptions opts;
    opts.omega_ramp = 0.0;
    opts.local_weights = {1.0, 0.5, 0.0, 0.25};
    opts.pin_amplitude = -8.0;
    const DriveSchedule s = linear_sweep_and_hold(2.0, -4.0, 4.0, 1.0, 0.5, opts);

    CHECK(s.has_local_pattern());
    CHECK(s.local_amplitude(0.1) == doctest::Approx(-8.0));
    const double t = 0.3;
    CHECK(s.site_detuning(t, 0) == doctest::Approx(s.delta(t) - 8.0).epsilon(1e-13));
    CHECK(s.site_detuning(t, 1) == doctest::Approx(s.delta(t) - 4.0).epsilon(1e-13));
    CHECK(s.site_detuning(t, 2) == doctest::Approx(s.delta(t)).epsilon(1e-13));
    CHECK(s.site_detuning(t, 3) == doctest::Approx(s.delta(t) - 2.0).epsilon(1e-13));
}

TEST_CASE("weight-amplitude rescaling leaves site detunings unchanged") {
    // alpha_i -> c * alpha_i together with amplitude -> amplitude / c is the
    // identity on the physical per-site shifts.
    const double c = 0.5;
    SweepOptions a, b;
    a.local_weights = {1.0, 0.6, 0.2};
    a.pin_amplitude = -6.0;
    b.local_weights = {c * 1.0, c * 0.6, c * 0.2};
    b.pin_amplitude = -6.0 / c;
    const DriveSchedule sa = linear_sweep_and_hold(2.0, -4.0, 4.0, 1.0, 0.4, a);
    const DriveSchedule sb = linear_sweep_and_hold(2.0, -4.0, 4.0, 1.0, 0.4, b);
    for (double t : {0.0, 0.31, 1.7, sa.total_time()})
        for (int i = 0; i < 3; ++i)
            CHECK(sa.site_detuning(t, i) ==
                  doctest::Approx(sb.site_detuning(t, i)).epsilon(1e-13));
}

TEST_CASE("local quench-off ramps the amplitude to zero") {
    SweepOptions opts;
    opts.omega_ramp = 0.1;
    opts.local_weights = {1.0, 0.5};
    opts.pin_amplitude = -10.0;
    const DriveSchedule base = linear_sweep_and_hold(2.0, -4.0, 4.0, 1.0, 2.0, opts);
    const double t_off = 1.0, ramp = 0.05;
    const DriveSchedule q = local_quench_off(base, t_off, ramp);

    CHECK(q.total_time() == doctest::Approx(base.total_time()));
    CHECK(q.local_amplitude(0.5) == doctest::Approx(-10.0));
    CHECK(q.local_amplitude(t_off + ramp / 2) == doctest::Approx(-5.0).epsilon(1e-12));
    CHECK(q.local_amplitude(t_off + ramp) == doctest::Approx(0.0));
    CHECK(q.local_amplitude(base.total_time()) == 0.0);
    // Global drives are untouched.
    for (double t : {0.2, 0.9, 1.02, 1.8})
        CHECK(q.delta(t) == doctest::Approx(base.delta(t)).epsilon(1e-13));

    SUBCASE("zero-duration ramp is a step") {
        const DriveSchedule step = local_quench_off(base, t_off, 0.0);
        CHECK(step.local_amplitude(t_off - 1e-9) == doctest::Approx(-10.0));
        CHECK(step.local_amplitude(t_off + 1e-9) == 0.0);
    }
    SUBCASE("already-zero amplitude is unchanged") {
        SweepOptions plain;
        const DriveSchedule flat = linear_sweep_and_hold(2.0, -4.0, 4.0, 1.0, 2.0, plain);
        const DriveSchedule same = local_quench_off(flat, 1.0, 0.05);
        for (double t : {0.0, 0.5, 1.02, 3.0})
            CHECK(same.local_amplitude(t) == 0.0);
    }
    SUBCASE("out-of-range quench times throw") {
        CHECK_THROWS_AS(local_quench_off(base, -0.1, 0.05), std::invalid_argument);
        CHECK_THROWS_AS(local_quench_off(base, base.total_time(), 0.05),
                        std::invalid_argument);
    }
}

TEST_CASE("pin pattern pins the target-ground sublattice with inverse-count weights") {
    Lattice lat(4, 4, 1.0, 1.0);
    const PinPattern pat = pin_pattern(lat, uniform_order(lat, Order::af1));

    CHECK(pat.pinned_count() == 8);  // one parity class
    for (int i = 0; i < lat.size(); ++i) {
        const auto [x, y] = lat.coords(i);
        const bool rydberg_target = ((x + y) % 2) == 0;
        CHECK(pat.pinned[i] == (rydberg_target ? 0 : 1));
        if (rydberg_target) CHECK(pat.weights[i] == 0.0);
    }
    // Odd-parity corner (3,0) has 2 Rydberg neighbors -> weight 1/2 before
    // normalization, twice the bulk weight of 1/4; after max-normalization
    // the corner carries 1 and the bulk 1/2, edges 2/3.
    CHECK(pat.weights[lat.index(3, 0)] == doctest::Approx(1.0));
    CHECK(pat.weights[lat.index(2, 1)] == doctest::Approx(0.5));
    CHECK(pat.weights[lat.index(1, 0)] == doctest::Approx(2.0 / 3.0));

    CHECK_THROWS_AS(pin_pattern(lat, {}), std::invalid_argument);
}

TEST_CASE("domain layout builders") {
    Lattice lat(16, 16, 1.0, 1.0);
    SUBCASE("centered square") {
        const auto target = centered_square_order(lat, 2);
        int inner = 0;
        for (int i = 0; i < lat.size(); ++i)
            if (target[i] == Order::af2) ++inner;
        CHECK(inner == 25);
        CHECK(target[lat.index(8, 8)] == Order::af2);
        CHECK(target[lat.index(0, 0)] == Order::af1);
        // Boundary pinned sites next to the domain get larger weights than
        // deep-bulk pinned sites (fewer target-Rydberg neighbors).
        const PinPattern pat = pin_pattern(lat, target);
        double max_near_wall = 0.0;
        for (int i = 0; i < lat.size(); ++i)
            if (pat.pinned[i] && manhattan_distance(lat, i, lat.index(8, 8)) <= 3)
                max_near_wall = std::max(max_near_wall, pat.weights[i]);
        CHECK(max_near_wall > 0.5);
    }
    SUBCASE("zigzag wall alternates row offsets") {
        const auto target = zigzag_order(lat, 8);
        CHECK(target[lat.index(7, 0)] == Order::af1);
        CHECK(target[lat.index(8, 0)] == Order::af2);
        CHECK(target[lat.index(8, 1)] == Order::af1);  // odd rows shift right
        CHECK(target[lat.index(9, 1)] == Order::af2);
    }
}

TEST_CASE("ordered-phase quench structure") {
    OrderedQuenchParams p;
    p.omega = 2.0;
    p.delta_start = -6.0;
    p.delta_high = 6.6;   // 3.3 * omega
    p.delta_final = 4.0;  // 2.0 * omega
    p.hold_time = 1.0;
    p.sweep_rate = 0.5;
    p.local_weights = {1.0, 0.5, 0.25, 0.0};
    p.pin_amplitude = -8.0;

    std::vector<std::string> warnings;
    const DriveSchedule s = ordered_phase_quench(p, &warnings);
    CHECK(warnings.empty());

    const double t_sweep = (p.delta_high - p.delta_start) / (p.omega * p.omega * p.sweep_rate);
    const double t_top = p.omega_ramp + t_sweep;
    // Pinned during the sweep, quenched off right after, detuning steps down
    // only after the settle window.
    CHECK(s.local_amplitude(t_top - 1e-6) == doctest::Approx(-8.0));
    CHECK(s.local_amplitude(t_top + p.quench_ramp) == doctest::Approx(0.0));
    CHECK(s.delta(t_top + p.quench_ramp / 2) == doctest::Approx(p.delta_high));
    CHECK(s.delta(t_top + p.quench_ramp + p.settle_time + 1e-9) ==
          doctest::Approx(p.delta_final));
    CHECK(s.delta(s.total_time()) == doctest::Approx(p.delta_final));
    CHECK(s.total_time() == doctest::Approx(t_top + p.quench_ramp + p.settle_time +
                                            p.hold_time));

    SUBCASE("hold below the critical detuning warns") {
        OrderedQuenchParams bad = p;
        bad.delta_final = 2.0;  // below 1.12 * omega = 2.24
        std::vector<std::string> w;
        ordered_phase_quench(bad, &w);
        REQUIRE(w.size() == 1);
    }
    SUBCASE("delta_final equal to delta_high is a plain hold") {
        OrderedQuenchParams flat = p;
        flat.delta_final = flat.delta_high;
        const DriveSchedule hold = ordered_phase_quench(flat, nullptr);
        CHECK(hold.delta(hold.total_time() - 1e-9) == doctest::Approx(flat.delta_high));
    }
    SUBCASE("invalid spans throw") {
        OrderedQuenchParams bad = p;
        bad.delta_high = p.delta_start - 1.0;
        CHECK_THROWS_AS(ordered_phase_quench(bad, nullptr), std::invalid_argument);
    }
}

TEST_CASE("schedule validation rejects malformed segments") {
    // Overlapping segments.
    std::vector<ScheduleSegment> segs = {{0.0, 1.0, 1.0, 1.0, 0.0, 0.0, 0.0, 0.0},
                                         {0.5, 2.0, 1.0, 1.0, 0.0, 0.0, 0.0, 0.0}};
    CHECK_THROWS_AS(DriveSchedule(segs, {}).validate(), std::invalid_argument);
    // Positive local amplitude.
    std::vector<ScheduleSegment> pos = {{0.0, 1.0, 1.0, 1.0, 0.0, 0.0, 0.5, 0.5}};
    CHECK_THROWS_AS(DriveSchedule(pos, {1.0}).validate(), std::invalid_argument);
    // Weight out of range.
    std::vector<ScheduleSegment> ok = {{0.0, 1.0, 1.0, 1.0, 0.0, 0.0, 0.0, 0.0}};
    CHECK_THROWS_AS(DriveSchedule(ok, {1.5}).validate(), std::invalid_argument);
}
