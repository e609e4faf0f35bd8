#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "rydsim/analysis.hpp"
#include "rydsim/snapshot.hpp"
#include "rydsim/units.hpp"
#include "support/shots.hpp"

using namespace rydsim;
using testsupport::checkerboard_set;
using testsupport::set_from_rows;
using testsupport::shot_from_rows;

namespace {

// Occupation pattern whose left `split` columns carry one checkerboard
// registration and the rest the opposite one.
std::vector<std::string> split_columns(int w, int h, int split) {
    std::vector<std::string> rows(static_cast<std::size_t>(h));
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            const bool af1 = x < split;
            const bool ryd = af1 ? (x + y) % 2 == 0 : (x + y) % 2 == 1;
            rows[static_cast<std::size_t>(y)] += ryd ? '1' : '0';
        }
    return rows;
}

// Uniform af1 background with a (2r+1)-wide square of af2 at the center.
std::vector<std::string> square_inclusion(int w, int h, int r) {
    const int cx = w / 2, cy = h / 2;
    std::vector<std::string> rows(static_cast<std::size_t>(h));
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            const bool inside = std::abs(x - cx) <= r && std::abs(y - cy) <= r;
            const bool ryd = inside ? (x + y) % 2 == 1 : (x + y) % 2 == 0;
            rows[static_cast<std::size_t>(y)] += ryd ? '1' : '0';
        }
    return rows;
}

SnapshotSet random_set(int w, int h, int n_shots, unsigned seed) {
    std::mt19937 rng(seed);
    std::bernoulli_distribution coin(0.4);
    SnapshotSet set;
    set.width = w;
    set.height = h;
    for (int s = 0; s < n_shots; ++s) {
        std::vector<std::uint8_t> shot(static_cast<std::size_t>(w) * h);
        for (auto& v : shot) v = coin(rng);
        set.shots.push_back(std::move(shot));
    }
    return set;
}

}  // namespace

TEST_CASE("staggered map flips sign with sublattice parity") {
    const auto shot = shot_from_rows({"10", "00"});
    const ShotView v = make_view(2, 2, shot);
    const auto m = staggered_map(v);
    // Rydberg on the even site reads +1 there; empty sites read +1 on the
    // odd sublattice and -1 on the even one.
    CHECK(m == std::vector<double>{1.0, 1.0, 1.0, -1.0});

    const auto af2 = checkerboard_set(4, 4, false);
    const auto m2 = staggered_map(view(af2, 0));
    for (double x : m2) CHECK(x == -1.0);
}

TEST_CASE("spin-flip correction removes isolated readout errors") {
    SnapshotSet clean = checkerboard_set(6, 6, true);
    SnapshotSet noisy = clean;
    const std::size_t defect = static_cast<std::size_t>(2 + 6 * 2);
    noisy.shots[0][defect] ^= 1;

    const auto corrected = spin_flip_correct(view(noisy, 0));
    CHECK(corrected == clean.shots[0]);

    SUBCASE("correction is idempotent") {
        const SnapshotSet rnd = random_set(8, 8, 1, 9);
        const auto once = spin_flip_correct(view(rnd, 0));
        const auto twice = spin_flip_correct(make_view(8, 8, once));
        CHECK(once == twice);
    }

    SUBCASE("adjacent defects support each other and survive") {
        SnapshotSet two = clean;
        two.shots[0][static_cast<std::size_t>(2 + 6 * 2)] ^= 1;
        two.shots[0][static_cast<std::size_t>(3 + 6 * 2)] ^= 1;
        const auto kept = spin_flip_correct(view(two, 0));
        CHECK(kept == two.shots[0]);
    }

    SUBCASE("empty array is stable: diagonal neighbors already agree") {
        SnapshotSet ground;
        ground.width = ground.height = 5;
        ground.shots.push_back(std::vector<std::uint8_t>(25, 0));
        CHECK(spin_flip_correct(view(ground, 0)) == ground.shots[0]);
    }
}

TEST_CASE("domain labeling separates regions of constant staggered sign") {
    SUBCASE("two half-plane domains") {
        const SnapshotSet set = set_from_rows({split_columns(6, 6, 3)});
        const DomainLabeling lab = label_domains(view(set, 0));
        REQUIRE(lab.n_domains() == 2);
        std::vector<int> areas = lab.areas;
        std::sort(areas.begin(), areas.end());
        CHECK(areas == std::vector<int>{18, 18});
        // The two halves are opposite registrations.
        CHECK(lab.order_sign[0] * lab.order_sign[1] == -1);
        CHECK(lab.labels[0] != 0);
        CHECK(lab.labels[0] != lab.labels[5]);
    }

    SUBCASE("square inclusion in an ordered background") {
        std::vector<std::string> rows(16);
        for (int y = 0; y < 16; ++y)
            for (int x = 0; x < 16; ++x) {
                const bool inside = x >= 6 && x <= 9 && y >= 6 && y <= 9;
                rows[static_cast<std::size_t>(y)] +=
                    (inside ? (x + y) % 2 == 1 : (x + y) % 2 == 0) ? '1' : '0';
            }
        const SnapshotSet set = set_from_rows({rows});
        const DomainLabeling lab = label_domains(view(set, 0));
        REQUIRE(lab.n_domains() == 2);
        std::vector<int> areas = lab.areas;
        std::sort(areas.begin(), areas.end());
        CHECK(areas == std::vector<int>{16, 240});
    }

    SUBCASE("labels are 4-connected: diagonal contact does not merge") {
        // Fully excited 2x2 block alternates staggered sign site by site.
        const SnapshotSet set = set_from_rows({{"11", "11"}});
        const DomainLabeling lab = label_domains(view(set, 0));
        CHECK(lab.n_domains() == 4);
        CHECK(lab.areas == std::vector<int>{1, 1, 1, 1});
    }

    SUBCASE("areas always tile the lattice") {
        const SnapshotSet set = random_set(9, 7, 3, 31);
        for (int s = 0; s < set.n_shots(); ++s) {
            const DomainLabeling lab = label_domains(view(set, s));
            CHECK(std::accumulate(lab.areas.begin(), lab.areas.end(), 0) == 63);
            for (int l : lab.labels) {
                CHECK(l >= 1);
                CHECK(l <= lab.n_domains());
            }
        }
    }
}

TEST_CASE("domain statistics pool area-weighted sizes over shots") {
    SUBCASE("single shot with a 12/4 split") {
        const SnapshotSet set = set_from_rows({split_columns(4, 4, 3)});
        const DomainStatistics st = domain_statistics(set);
        REQUIRE(st.area == std::vector<int>{4, 12});
        CHECK(st.probability[0] == doctest::Approx(4.0 / 16.0).epsilon(1e-12));
        CHECK(st.probability[1] == doctest::Approx(12.0 / 16.0).epsilon(1e-12));
        CHECK(st.mean_largest == doctest::Approx(12.0));
        CHECK(st.mean_second_largest == doctest::Approx(4.0));
    }

    SUBCASE("single-domain shots contribute zero to the second largest") {
        const DomainStatistics st = domain_statistics(checkerboard_set(4, 4, true));
        CHECK(st.area == std::vector<int>{16});
        CHECK(st.probability == std::vector<double>{1.0});
        CHECK(st.mean_largest == doctest::Approx(16.0));
        CHECK(st.mean_second_largest == doctest::Approx(0.0));
    }

    SUBCASE("pooling across shots weights by area") {
        SnapshotSet pooled = checkerboard_set(4, 4, true);
        pooled.shots.push_back(shot_from_rows(split_columns(4, 4, 3)));
        const DomainStatistics st = domain_statistics(pooled);
        REQUIRE(st.area == std::vector<int>{4, 12, 16});
        CHECK(st.probability[0] == doctest::Approx(4.0 / 32.0).epsilon(1e-12));
        CHECK(st.probability[1] == doctest::Approx(12.0 / 32.0).epsilon(1e-12));
        CHECK(st.probability[2] == doctest::Approx(16.0 / 32.0).epsilon(1e-12));
        CHECK(st.mean_largest == doctest::Approx(14.0));
        CHECK(st.mean_second_largest == doctest::Approx(2.0));
        const double total =
            std::accumulate(st.probability.begin(), st.probability.end(), 0.0);
        CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
    }

    SUBCASE("duplicated shots leave the distribution unchanged") {
        SnapshotSet twice = checkerboard_set(4, 4, true);
        twice.shots.push_back(twice.shots[0]);
        const DomainStatistics st = domain_statistics(twice);
        CHECK(st.probability == std::vector<double>{1.0});
        CHECK(st.mean_largest == doctest::Approx(16.0));
    }

    SUBCASE("empty set throws") {
        CHECK_THROWS_AS(domain_statistics(SnapshotSet{}), std::invalid_argument);
    }
}

TEST_CASE("coarse graining counts occupied nearest neighbors") {
    SUBCASE("fully excited block, zero-padded edges") {
        const auto shot = shot_from_rows({"11", "11"});
        CHECK(coarse_grain(make_view(2, 2, shot)) == std::vector<int>{2, 2, 2, 2});
    }

    SUBCASE("empty lattice") {
        const auto shot = shot_from_rows({"000", "000", "000"});
        const auto c = coarse_grain(make_view(3, 3, shot));
        for (int v : c) CHECK(v == 0);
    }

    SUBCASE("interior of a perfect checkerboard saturates") {
        const SnapshotSet set = checkerboard_set(5, 5, true);
        const auto c = coarse_grain(view(set, 0));
        // Center site is empty with four excited neighbors.
        CHECK(c[2 + 5 * 1] == 4);
        // Excited center-adjacent site has four empty neighbors.
        CHECK(c[2 + 5 * 2] == 0);
    }
}

TEST_CASE("boundary classification flags order-parameter defects") {
    SUBCASE("all-ground lattice is all boundary") {
        const auto shot = shot_from_rows({"0000", "0000", "0000", "0000"});
        const auto mask = classify_boundary(make_view(4, 4, shot));
        for (auto b : mask) CHECK(b == 1);
    }

    SUBCASE("perfect order flags only the lattice edge") {
        const SnapshotSet set = checkerboard_set(6, 6, true);
        const auto mask = classify_boundary(view(set, 0));
        for (int y = 1; y < 5; ++y)
            for (int x = 1; x < 5; ++x) CHECK(mask[x + 6 * y] == 0);
        // Edge sites miss neighbors to the zero padding.
        CHECK(mask[0] == ((set.shots[0][0] == 1) ? 0 : 1));
        int edge_flags = 0;
        for (int x = 0; x < 6; ++x) edge_flags += mask[x];
        CHECK(edge_flags > 0);
    }

    SUBCASE("domain wall flags a strip around the interface") {
        const SnapshotSet set = set_from_rows({split_columns(6, 6, 3)});
        const auto mask = classify_boundary(view(set, 0));
        int flagged_near_wall = 0;
        for (int y = 1; y < 5; ++y)
            for (int x = 2; x <= 3; ++x) flagged_near_wall += mask[x + 6 * y];
        CHECK(flagged_near_wall > 0);
        // Deep interior away from the wall stays clean.
        CHECK(mask[1 + 6 * 2] == 0);
        CHECK(mask[4 + 6 * 2] == 0);
    }
}

TEST_CASE("classical energy splits interior terms into bulk and wall") {
    const double delta = angular_from_mhz(18.0);
    const double v_nn = angular_from_mhz(11.69);
    const double v_nnn = angular_from_mhz(1.46);

    SUBCASE("worked two-excitation example") {
        const SnapshotSet set = set_from_rows({{
            "0000",
            "0100",
            "0010",
            "0000",
        }});
        const EnergyBudget b = classical_energy(set, delta, v_nn, v_nnn);
        CHECK(std::abs(b.total - angular_from_mhz(37.46)) <= 1e-12 * std::abs(b.total));
        // The two excitations sit on clean order-parameter sites; the empty
        // interior sites are defects. Site terms land on the wall, the
        // diagonal pair stays in the bulk.
        CHECK(b.wall == doctest::Approx(2.0 * delta).epsilon(1e-12));
        CHECK(b.bulk == doctest::Approx(v_nnn).epsilon(1e-12));
        REQUIRE(b.per_shot_total.size() == 1);
        CHECK(b.per_shot_total[0] == doctest::Approx(b.total).epsilon(1e-15));
    }

    SUBCASE("all-ground interior pays the detuning penalty per site") {
        const auto shot = shot_from_rows({"0000", "0000", "0000", "0000"});
        SnapshotSet set;
        set.width = set.height = 4;
        set.shots.push_back(shot);
        const EnergyBudget b = classical_energy(set, delta, v_nn, v_nnn);
        CHECK(b.total == doctest::Approx(4.0 * delta).epsilon(1e-12));
        CHECK(b.bulk == doctest::Approx(0.0).scale(1.0).epsilon(1e-15));
    }

    SUBCASE("bulk + wall = total holds exactly on random sets") {
        const SnapshotSet set = random_set(7, 6, 20, 123);
        const EnergyBudget b = classical_energy(set, delta, v_nn, v_nnn);
        for (std::size_t s = 0; s < b.per_shot_total.size(); ++s)
            CHECK(b.per_shot_bulk[s] + b.per_shot_wall[s] == b.per_shot_total[s]);
        CHECK(b.bulk + b.wall == doctest::Approx(b.total).epsilon(1e-15));
        const double mean = std::accumulate(b.per_shot_total.begin(),
                                            b.per_shot_total.end(), 0.0) /
                            static_cast<double>(b.per_shot_total.size());
        CHECK(b.total == doctest::Approx(mean).epsilon(1e-12));
    }

    SUBCASE("lattices without an interior are rejected") {
        CHECK_THROWS_AS(classical_energy(checkerboard_set(2, 4, true), delta, v_nn, v_nnn),
                        std::invalid_argument);
        CHECK_THROWS_AS(classical_energy(checkerboard_set(4, 2, true), delta, v_nn, v_nnn),
                        std::invalid_argument);
        CHECK_THROWS_AS(classical_energy(SnapshotSet{}, delta, v_nn, v_nnn),
                        std::invalid_argument);
    }
}

TEST_CASE("longest excitation chain scans rows and columns") {
    CHECK(longest_rydberg_chain(make_view(4, 1, shot_from_rows({"1111"}))) == 4);
    CHECK(longest_rydberg_chain(
              make_view(3, 3, shot_from_rows({"110", "010", "001"}))) == 2);
    const auto vertical = shot_from_rows({"100", "100", "100", "100", "100"});
    CHECK(longest_rydberg_chain(make_view(3, 5, vertical)) == 5);
    // Diagonal runs do not count.
    const auto diag = shot_from_rows({"100", "010", "001"});
    CHECK(longest_rydberg_chain(make_view(3, 3, diag)) == 1);
    CHECK(longest_rydberg_chain(make_view(3, 3, shot_from_rows(
                                    {"000", "000", "000"}))) == 0);
    const SnapshotSet cb = checkerboard_set(6, 6, true);
    CHECK(longest_rydberg_chain(view(cb, 0)) == 1);
}

TEST_CASE("post-selection drops pathological shots") {
    SnapshotSet set;
    set.width = 5;
    set.height = 5;
    const auto base = checkerboard_set(5, 5, true).shots[0];
    set.shots.push_back(base);  // max chain 1
    {
        auto four = shot_from_rows({"11110", "00000", "00000", "00000", "00000"});
        set.shots.push_back(four);  // max chain exactly 4: retained
    }
    {
        auto five = shot_from_rows({"11111", "00000", "00000", "00000", "00000"});
        set.shots.push_back(five);  // max chain 5: dropped
    }

    SUBCASE("chain rule at the default threshold") {
        const PostselectResult r = postselect(set);
        CHECK(r.retained.n_shots() == 2);
        CHECK(r.n_dropped_chain == 1);
        CHECK(r.n_dropped_defects == 0);
        CHECK(r.retained_fraction == doctest::Approx(2.0 / 3.0));
        CHECK(r.retained.shots[0] == base);
    }

    SUBCASE("tighter chain threshold also drops the run of four") {
        const PostselectResult r = postselect(set, 3);
        CHECK(r.retained.n_shots() == 1);
        CHECK(r.n_dropped_chain == 2);
    }

    SUBCASE("defect budget applies after the chain rule") {
        const std::vector<int> defects = {5, 2, 0};
        const PostselectResult r = postselect(set, 4, 4, defects);
        // Shot 0 exceeds the defect budget, shot 2 the chain rule.
        CHECK(r.retained.n_shots() == 1);
        CHECK(r.n_dropped_defects == 1);
        CHECK(r.n_dropped_chain == 1);
        CHECK(r.retained.shots[0] == set.shots[1]);
    }

    SUBCASE("defect counts must match the shot count") {
        CHECK_THROWS_AS(postselect(set, 4, 4, {1, 2}), std::invalid_argument);
    }

    SUBCASE("empty set yields zero fraction") {
        SnapshotSet empty;
        empty.width = empty.height = 5;
        CHECK(postselect(empty).retained_fraction == 0.0);
    }
}

TEST_CASE("bootstrap errors behave like the sampling distribution") {
    const auto mean_stat = [](const std::vector<double>& v) {
        return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
    };

    SUBCASE("constant samples have zero error") {
        const std::vector<double> v(50, 3.25);
        const BootstrapResult r = bootstrap(v, mean_stat, 500, 1);
        CHECK(r.estimate == doctest::Approx(3.25).epsilon(1e-15));
        CHECK(r.std_error == doctest::Approx(0.0).scale(1.0).epsilon(1e-15));
    }

    SUBCASE("unit-variance sample of 400 gives SE near 0.05") {
        std::mt19937_64 rng(2024);
        std::normal_distribution<double> g(0.0, 1.0);
        std::vector<double> v(400);
        for (auto& x : v) x = g(rng);
        const BootstrapResult r = bootstrap(v, mean_stat, 1000, 7);
        CHECK(r.estimate == doctest::Approx(mean_stat(v)).epsilon(1e-12));
        CHECK(r.std_error > 0.04);
        CHECK(r.std_error < 0.06);
    }

    SUBCASE("deterministic under a fixed seed") {
        const std::vector<double> v = {1.0, 2.0, 4.0, 8.0, 16.0};
        const BootstrapResult a = bootstrap(v, mean_stat, 200, 9);
        const BootstrapResult b = bootstrap(v, mean_stat, 200, 9);
        const BootstrapResult c = bootstrap(v, mean_stat, 200, 10);
        CHECK(a.estimate == b.estimate);
        CHECK(a.std_error == b.std_error);
        CHECK(a.std_error != c.std_error);
    }

    SUBCASE("empty input throws") {
        CHECK_THROWS_AS(bootstrap({}, mean_stat), std::invalid_argument);
    }
}

TEST_CASE("radial profiles average staggered order by Manhattan distance") {
    SUBCASE("uniform opposite registration reads -1 at every distance") {
        const SnapshotSet set = checkerboard_set(16, 16, false);
        const RadialProfile p = radial_profile(set, 8, 8);
        REQUIRE(!p.distance.empty());
        CHECK(p.distance.front() == 0);
        for (double m : p.mean) CHECK(m == doctest::Approx(-1.0).epsilon(1e-15));
        CHECK(p.n_samples[0] == 1);
        // Distance 1 ring has 4 sites on one shot.
        CHECK(p.n_samples[1] == 4);
    }

    SUBCASE("square inclusion crosses from -1 to +1") {
        const SnapshotSet set = set_from_rows({square_inclusion(16, 16, 2)});
        const RadialProfile p = radial_profile(set, 8, 8);
        CHECK(p.mean[0] == doctest::Approx(-1.0));
        CHECK(p.mean[1] == doctest::Approx(-1.0));
        CHECK(p.mean[2] == doctest::Approx(-1.0));
        CHECK(p.mean[6] == doctest::Approx(1.0));
        const DomainRadius r = domain_radius(p);
        REQUIRE(r.radius.has_value());
        CHECK(*r.radius > 2.0);
        CHECK(*r.radius < 6.0);
        CHECK(r.n_crossings == 1);
    }

    SUBCASE("parity filter restricts to one sublattice") {
        SnapshotSet set;
        set.width = set.height = 8;
        set.shots.push_back(std::vector<std::uint8_t>(64, 1));  // all excited
        const RadialProfile even = radial_profile(set, 4, 4, +1);
        for (double m : even.mean) CHECK(m == doctest::Approx(1.0));
        const RadialProfile odd = radial_profile(set, 4, 4, -1);
        for (double m : odd.mean) CHECK(m == doctest::Approx(-1.0));

        // Masking the odd sublattice reproduces the parity filter.
        std::vector<std::uint8_t> mask(64, 0);
        for (int y = 0; y < 8; ++y)
            for (int x = 0; x < 8; ++x) mask[x + 8 * y] = (x + y) % 2 == 0;
        const RadialProfile masked = radial_profile(set, 4, 4, 0, mask);
        CHECK(masked.distance == even.distance);
        for (std::size_t i = 0; i < masked.mean.size(); ++i)
            CHECK(masked.mean[i] == doctest::Approx(even.mean[i]));
    }

    SUBCASE("off-center reference covers the full quadrant") {
        const SnapshotSet set = checkerboard_set(6, 6, false);
        const RadialProfile p = radial_profile(set, 0, 0);
        CHECK(p.distance.back() == 10);  // opposite corner
    }
}

TEST_CASE("domain radius interpolates the first outward sign change") {
    SUBCASE("half-step crossing") {
        RadialProfile p;
        p.distance = {2, 3};
        p.mean = {-0.5, 0.5};
        p.n_samples = {8, 8};
        const DomainRadius r = domain_radius(p);
        REQUIRE(r.radius.has_value());
        CHECK(*r.radius == doctest::Approx(2.5).epsilon(1e-12));
        CHECK(r.n_crossings == 1);
    }

    SUBCASE("asymmetric crossing lands closer to the smaller magnitude") {
        RadialProfile p;
        p.distance = {0, 1, 2, 3, 4};
        p.mean = {-1.0, -1.0, -0.2, 0.6, 1.0};
        p.n_samples = {1, 4, 8, 12, 16};
        const DomainRadius r = domain_radius(p);
        REQUIRE(r.radius.has_value());
        CHECK(*r.radius == doctest::Approx(2.25).epsilon(1e-12));
        CHECK(r.n_crossings == 1);
    }

    SUBCASE("monotone profile has no radius") {
        RadialProfile p;
        p.distance = {0, 1, 2};
        p.mean = {-1.0, -0.8, -0.1};
        p.n_samples = {1, 4, 8};
        const DomainRadius r = domain_radius(p);
        CHECK(!r.radius.has_value());
        CHECK(r.n_crossings == 0);
    }

    SUBCASE("oscillating profile reports every crossing") {
        RadialProfile p;
        p.distance = {0, 1, 2, 3};
        p.mean = {-1.0, 1.0, -1.0, 1.0};
        p.n_samples = {1, 4, 8, 12};
        const DomainRadius r = domain_radius(p);
        REQUIRE(r.radius.has_value());
        CHECK(*r.radius == doctest::Approx(0.5));
        CHECK(r.n_crossings == 3);
    }
}

TEST_CASE("wall positions track the row-resolved order interface") {
    SUBCASE("straight interface sits between the columns") {
        const SnapshotSet set = set_from_rows({split_columns(16, 8, 8)});
        const auto walls = wall_positions(set);
        REQUIRE(walls.size() == 8);
        for (const auto& w : walls) {
            REQUIRE(w.has_value());
            CHECK(*w == doctest::Approx(7.5).epsilon(1e-12));
        }
    }

    SUBCASE("zigzag interface alternates by row") {
        std::vector<std::string> rows(8);
        for (int y = 0; y < 8; ++y)
            for (int x = 0; x < 16; ++x) {
                const bool af1 = x < 8 + (y % 2);
                rows[static_cast<std::size_t>(y)] +=
                    (af1 ? (x + y) % 2 == 0 : (x + y) % 2 == 1) ? '1' : '0';
            }
        const auto walls = wall_positions(set_from_rows({rows}));
        for (int y = 0; y < 8; ++y) {
            REQUIRE(walls[static_cast<std::size_t>(y)].has_value());
            CHECK(*walls[static_cast<std::size_t>(y)] ==
                  doctest::Approx(7.5 + (y % 2)).epsilon(1e-12));
        }
    }

    SUBCASE("uniform order has no wall") {
        const auto walls = wall_positions(checkerboard_set(8, 4, true));
        for (const auto& w : walls) CHECK(!w.has_value());
    }

    SUBCASE("shot subsets select and repeat shots for resampling") {
        SnapshotSet set = set_from_rows({split_columns(16, 4, 8)});
        set.shots.push_back(shot_from_rows(split_columns(16, 4, 4)));
        const auto first = wall_positions(set, {0});
        CHECK(*first[0] == doctest::Approx(7.5));
        const auto second = wall_positions(set, {1, 1, 1});
        CHECK(*second[0] == doctest::Approx(3.5));
    }
}
