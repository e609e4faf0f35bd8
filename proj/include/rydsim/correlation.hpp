#pragma once

// Connected staggered correlations, structure factors, correlation-length
// fits, scaling collapse, and the time-series fit models (damped
// oscillator, power law + oscillation).

#include <optional>
#include <vector>

#include "rydsim/fitting.hpp"
#include "rydsim/snapshot.hpp"

namespace rydsim {

// Connected two-point correlator of staggered spins, averaged over shots
// and then over all site pairs with the same displacement.  The grid covers
// dx in [-(w-1), w-1], dy in [-(h-1), h-1]; G(r) = G(-r) by construction
// and G(0,0) is the mean per-site variance, in [0, 1].
struct CorrelationMap {
    int width = 0, height = 0;   // lattice dimensions
    int nx = 0, ny = 0;          // displacement grid dimensions (2w-1, 2h-1)
    std::vector<double> g;       // row-major over (dy + h-1, dx + w-1)
    std::vector<long> counts;    // site pairs per displacement

    double at(int dx, int dy) const {
        return g[static_cast<std::size_t>(dy + height - 1) * nx + (dx + width - 1)];
    }
    long count_at(int dx, int dy) const {
        return counts[static_cast<std::size_t>(dy + height - 1) * nx + (dx + width - 1)];
    }
};

CorrelationMap connected_correlation(const SnapshotSet& set);

// Cosine transform of G(r) on the DFT grid dual to the displacement grid,
// which makes the Parseval identity sum_k S(k)/N_k = G(0) exact.  Radial
// average uses bins of width dk = 2*pi/max(width, height); every mode in a
// bin counts once (multiplicity weighting), k = 0 is excluded.
struct StructureFactor {
    int width = 0, height = 0;
    int nkx = 0, nky = 0;           // dual grid dimensions (2w-1, 2h-1)
    std::vector<double> s2d;        // row-major over (my + h-1, mx + w-1)
    std::vector<double> k_radial;   // per-bin mean |k|
    std::vector<double> s_radial;   // per-bin mean S
    std::vector<long> n_modes;      // modes per bin
    double g0 = 0.0;                // G(0,0) of the input map
    double parseval_error = 0.0;    // |mean_k S2d - G(0)|
};

StructureFactor structure_factor(const CorrelationMap& map);

// Fits S(k) = S0 / (1 + xi^2 k^2)^(3/2) over the radial average (exponent 1
// with oz_exponent = true).  Internally parameterized in (S0, log xi) so xi
// stays positive; reports S0, xi, and b = pi*S0/xi^2 with delta-method
// errors.  Flags when xi falls below the k-grid resolution or exceeds the
// lattice extent.
FitResult fit_correlation_length(const StructureFactor& sf, bool oz_exponent = false);

// Same fit on bare (k, S) samples, e.g. theory-layer mode spectra.  A
// positive lattice_extent enables the xi-exceeds-extent flag.
FitResult fit_correlation_length(const std::vector<double>& k,
                                 const std::vector<double>& s,
                                 bool oz_exponent = false,
                                 double lattice_extent = 0.0);

// Rescales each slice to (k*xi, S/(b*xi^2)) and scores the collapse as the
// mean squared vertical spread between slice means after common binning in
// k*xi (bins containing fewer than two slices are skipped).
struct CollapsePoint {
    double k_xi = 0.0;
    double s_scaled = 0.0;
    int slice = 0;
};

struct CollapseResult {
    std::vector<CollapsePoint> points;
    double spread = 0.0;
    int n_bins_used = 0;
};

CollapseResult scaling_collapse(const std::vector<StructureFactor>& slices,
                                const std::vector<double>& xi,
                                const std::vector<double>& b, int n_bins = 24);

// Dominant angular frequency of a (roughly uniform) time series from an
// oversampled discrete spectrum of the mean-subtracted data; nullopt when
// the series carries no signal above the numerical noise floor.
std::optional<double> dominant_frequency(const std::vector<double>& t,
                                         const std::vector<double>& y);

// phi0 + A cos(omega t + theta0) exp(-gamma t).  Initialization takes omega
// from the spectral peak; samples with t earlier than t.front() +
// skip_window are dropped first (transient rejection).  Constant series are
// returned unconverged with an explanatory flag.  Requires >= 8 samples
// after skipping.
FitResult fit_damped_oscillator(const std::vector<double>& t,
                                const std::vector<double>& y,
                                double skip_window = 0.0);

// (c0 + c1 t)^alpha + c cos(omega t + phi).  alpha starts at 0.5, the
// power-law part is prefit alone, and the oscillation is seeded from the
// spectral peak of the prefit residual.  Requires >= 10 samples.
FitResult fit_powerlaw_plus_oscillation(const std::vector<double>& t,
                                        const std::vector<double>& y);

}  // namespace rydsim
