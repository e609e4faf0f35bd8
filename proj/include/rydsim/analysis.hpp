#pragma once

// Single-shot analysis pipeline: staggered-magnetization maps, spin-flip
// correction, domain labeling/statistics, coarse-graining, bulk/wall
// classical-energy split, post-selection, bootstrap errors, and the
// geometry trackers for locally prepared domains (radial profiles, domain
// radius, wall positions).

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "rydsim/snapshot.hpp"

namespace rydsim {

// m~(x,y) = (-1)^(x+y) * (2 n - 1); every value is +1 or -1.
std::vector<double> staggered_map(const ShotView& shot);

// Flips every site whose staggered sign differs from ALL of its existing
// nearest and next-nearest neighbors.  Decisions are made on the input
// array (single simultaneous pass), which makes the operation idempotent.
std::vector<std::uint8_t> spin_flip_correct(const ShotView& shot);

// Connected components of constant staggered sign under 4-connectivity.
struct DomainLabeling {
    int width = 0;
    int height = 0;
    std::vector<int> labels;      // domain id per site, 1-based; 0 = unassigned
    std::vector<int> areas;       // site count per domain, index = id - 1
    std::vector<int> order_sign;  // +1 if the domain's staggered sign is +1 (AF1-like)

    int n_domains() const { return static_cast<int>(areas.size()); }
};

DomainLabeling label_domains(const ShotView& corrected_shot);

// Area-weighted domain-size distribution pooled over shots plus the
// shot-averaged largest / second-largest areas.  Shots with a single domain
// contribute 0 to the second-largest average.
struct DomainStatistics {
    std::vector<int> area;           // distinct domain areas, ascending
    std::vector<double> probability; // area-weighted weights, sums to 1
    double mean_largest = 0.0;
    double mean_second_largest = 0.0;
};

DomainStatistics domain_statistics(const SnapshotSet& set);

// C(x,y) = sum of the 4 nearest-neighbor occupations, zero-padded at edges.
std::vector<int> coarse_grain(const ShotView& shot);

// Boundary mask: (n=1 and C!=0) or (n=0 and C!=4).
std::vector<std::uint8_t> classify_boundary(const ShotView& shot);

// Diagonal (classical) energy of raw shots with the outermost site layer
// excluded from every term, split into bulk and domain-wall contributions.
// Site terms go to the site's class; each pair term contributes half to
// each endpoint's class, so bulk + wall = total exactly.
struct EnergyBudget {
    double total = 0.0;  // shot-averaged H_cl, angular-frequency units
    double bulk = 0.0;
    double wall = 0.0;
    std::vector<double> per_shot_total;  // one H_cl entry per shot
    std::vector<double> per_shot_bulk;
    std::vector<double> per_shot_wall;
};

EnergyBudget classical_energy(const SnapshotSet& set, double delta, double v_nn,
                              double v_nnn);

// Drops shots whose longest horizontal/vertical run of 1s exceeds max_chain
// or whose metadata defect count exceeds max_defects.
struct PostselectResult {
    SnapshotSet retained;
    double retained_fraction = 0.0;
    int n_dropped_chain = 0;
    int n_dropped_defects = 0;
};

int longest_rydberg_chain(const ShotView& shot);

PostselectResult postselect(const SnapshotSet& set, int max_chain = 4,
                            int max_defects = 4,
                            const std::vector<int>& defect_counts = {});

// Nonparametric bootstrap: resample `values` with replacement, apply
// `statistic`, report the estimate on the original sample and the standard
// deviation across resamples.  Deterministic under seed.
struct BootstrapResult {
    double estimate = 0.0;
    double std_error = 0.0;
};

BootstrapResult bootstrap(
    const std::vector<double>& values,
    const std::function<double(const std::vector<double>&)>& statistic,
    int n_resamples = 1000, std::uint64_t seed = 0);

// Mean staggered magnetization at each Manhattan distance from `center`,
// averaged over shots and sites.  `parity_filter`: 0 = all sites, +1/-1 =
// restrict to that sublattice.  Sites where `site_mask` is false are
// skipped (empty mask = keep all).
struct RadialProfile {
    std::vector<int> distance;      // Manhattan distances with >=1 contributing site
    std::vector<double> mean;       // mean staggered magnetization per distance
    std::vector<long> n_samples;    // site x shot count per distance
};

RadialProfile radial_profile(const SnapshotSet& set, int center_x, int center_y,
                             int parity_filter = 0,
                             const std::vector<std::uint8_t>& site_mask = {});

// First outward zero crossing of the radial profile, linearly interpolated.
// Returns nullopt when the profile never changes sign.  n_crossings counts
// every sign change so callers can flag ambiguous profiles.
struct DomainRadius {
    std::optional<double> radius;
    int n_crossings = 0;
};

DomainRadius domain_radius(const RadialProfile& profile);

// Per-row zero crossing of the row-averaged staggered magnetization along x
// (first crossing, linearly interpolated); rows without a sign change get
// nullopt.  A non-empty shot_subset restricts the average to those shot
// indices (repeats allowed), which is what bootstrap resampling needs.
std::vector<std::optional<double>> wall_positions(
    const SnapshotSet& set, const std::vector<int>& shot_subset = {});

}  // namespace rydsim
