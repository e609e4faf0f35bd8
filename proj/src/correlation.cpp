#include "rydsim/correlation.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

namespace rydsim {

namespace {

// Staggered spins of one shot as +-1 integers.
std::vector<int> staggered_spins(const ShotView& shot) {
    std::vector<int> z(static_cast<std::size_t>(shot.width) * shot.height);
    for (int y = 0; y < shot.height; ++y)
        for (int x = 0; x < shot.width; ++x) {
            const int parity = ((x + y) & 1) ? -1 : 1;
            z[static_cast<std::size_t>(y) * shot.width + x] =
                parity * (2 * shot.at(x, y) - 1);
        }
    return z;
}

}  // namespace

CorrelationMap connected_correlation(const SnapshotSet& set) {
    if (set.n_shots() < 2)
        throw std::invalid_argument(
            "connected_correlation: need >= 2 shots for the connected part");

    const int w = set.width, h = set.height;
    const int n = w * h;

    // Shot-summed first and second moments of the staggered spins; the
    // second-moment matrix is symmetric, so only b >= a is accumulated.
    std::vector<long> s1(n, 0);
    std::vector<long> s2(static_cast<std::size_t>(n) * n, 0);
    for (int s = 0; s < set.n_shots(); ++s) {
        const auto z = staggered_spins(view(set, s));
        for (int a = 0; a < n; ++a) {
            s1[a] += z[a];
            long* row = s2.data() + static_cast<std::size_t>(a) * n;
            if (z[a] > 0)
                for (int b = a; b < n; ++b) row[b] += z[b];
            else
                for (int b = a; b < n; ++b) row[b] -= z[b];
        }
    }
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < a; ++b)
            s2[static_cast<std::size_t>(a) * n + b] =
                s2[static_cast<std::size_t>(b) * n + a];

    const double inv_shots = 1.0 / set.n_shots();
    CorrelationMap map;
    map.width = w;
    map.height = h;
    map.nx = 2 * w - 1;
    map.ny = 2 * h - 1;
    map.g.assign(static_cast<std::size_t>(map.nx) * map.ny, 0.0);
    map.counts.assign(map.g.size(), 0);

    for (int dy = -(h - 1); dy <= h - 1; ++dy) {
        for (int dx = -(w - 1); dx <= w - 1; ++dx) {
            double acc = 0.0;
            long count = 0;
            for (int y = std::max(0, -dy); y < h - std::max(0, dy); ++y) {
                for (int x = std::max(0, -dx); x < w - std::max(0, dx); ++x) {
                    const int a = y * w + x;
                    const int b = (y + dy) * w + (x + dx);
                    acc += s2[static_cast<std::size_t>(a) * n + b] * inv_shots -
                           (s1[a] * inv_shots) * (s1[b] * inv_shots);
                    ++count;
                }
            }
            const std::size_t idx =
                static_cast<std::size_t>(dy + h - 1) * map.nx + (dx + w - 1);
            map.g[idx] = acc / count;
            map.counts[idx] = count;
        }
    }
    return map;
}

StructureFactor structure_factor(const CorrelationMap& map) {
    const int w = map.width, h = map.height;
    const int nkx = 2 * w - 1, nky = 2 * h - 1;

    StructureFactor sf;
    sf.width = w;
    sf.height = h;
    sf.nkx = nkx;
    sf.nky = nky;
    sf.s2d.assign(static_cast<std::size_t>(nkx) * nky, 0.0);
    sf.g0 = map.at(0, 0);

    // Precomputed cosine tables: cos(2*pi*m*d / n) for mode m, displacement d.
    const double fx = 2.0 * std::numbers::pi / nkx;
    const double fy = 2.0 * std::numbers::pi / nky;
    std::vector<double> cx(static_cast<std::size_t>(nkx) * nkx),
        sx(static_cast<std::size_t>(nkx) * nkx);
    std::vector<double> cy(static_cast<std::size_t>(nky) * nky),
        sy(static_cast<std::size_t>(nky) * nky);
    for (int m = 0; m < nkx; ++m)
        for (int d = 0; d < nkx; ++d) {
            const double ph = fx * (m - (w - 1)) * (d - (w - 1));
            cx[static_cast<std::size_t>(m) * nkx + d] = std::cos(ph);
            sx[static_cast<std::size_t>(m) * nkx + d] = std::sin(ph);
        }
    for (int m = 0; m < nky; ++m)
        for (int d = 0; d < nky; ++d) {
            const double ph = fy * (m - (h - 1)) * (d - (h - 1));
            cy[static_cast<std::size_t>(m) * nky + d] = std::cos(ph);
            sy[static_cast<std::size_t>(m) * nky + d] = std::sin(ph);
        }

    // S(k) = sum_r G(r) cos(k . r); the sine part cancels by G(r) = G(-r)
    // but is carried through the separable row pass for exactness.
    double mode_sum = 0.0;
    for (int my = 0; my < nky; ++my) {
        // Row pass: partial transform over dx for each dy.
        std::vector<double> row_c(nky, 0.0), row_s(nky, 0.0);
        for (int mx = 0; mx < nkx; ++mx) {
            for (int dy = 0; dy < nky; ++dy) {
                double rc = 0.0, rs = 0.0;
                for (int dx = 0; dx < nkx; ++dx) {
                    const double gv = map.g[static_cast<std::size_t>(dy) * nkx + dx];
                    rc += gv * cx[static_cast<std::size_t>(mx) * nkx + dx];
                    rs += gv * sx[static_cast<std::size_t>(mx) * nkx + dx];
                }
                row_c[dy] = rc;
                row_s[dy] = rs;
            }
            double acc = 0.0;
            for (int dy = 0; dy < nky; ++dy)
                acc += row_c[dy] * cy[static_cast<std::size_t>(my) * nky + dy] -
                       row_s[dy] * sy[static_cast<std::size_t>(my) * nky + dy];
            sf.s2d[static_cast<std::size_t>(my) * nkx + mx] = acc;
            mode_sum += acc;
        }
    }
    sf.parseval_error = std::abs(mode_sum / (static_cast<double>(nkx) * nky) - sf.g0);

    // Radial average over bins of width dk = 2*pi/max(w, h), k = 0 excluded.
    const double dk = 2.0 * std::numbers::pi / std::max(w, h);
    const int max_bin = static_cast<int>(std::numbers::pi * std::numbers::sqrt2 / dk) + 2;
    std::vector<double> bin_k(max_bin, 0.0), bin_s(max_bin, 0.0);
    std::vector<long> bin_n(max_bin, 0);
    for (int my = 0; my < nky; ++my) {
        for (int mx = 0; mx < nkx; ++mx) {
            if (mx == w - 1 && my == h - 1) continue;  // k = 0
            const double kx = fx * (mx - (w - 1));
            const double ky = fy * (my - (h - 1));
            const double k = std::hypot(kx, ky);
            const int bin = static_cast<int>(k / dk);
            if (bin >= max_bin) continue;
            bin_k[bin] += k;
            bin_s[bin] += sf.s2d[static_cast<std::size_t>(my) * nkx + mx];
            ++bin_n[bin];
        }
    }
    for (int b = 0; b < max_bin; ++b) {
        if (bin_n[b] == 0) continue;
        sf.k_radial.push_back(bin_k[b] / bin_n[b]);
        sf.s_radial.push_back(bin_s[b] / bin_n[b]);
        sf.n_modes.push_back(bin_n[b]);
    }
    return sf;
}

FitResult fit_correlation_length(const StructureFactor& sf, bool oz_exponent) {
    return fit_correlation_length(sf.k_radial, sf.s_radial, oz_exponent,
                                  std::max(sf.width, sf.height));
}

FitResult fit_correlation_length(const std::vector<double>& k,
                                 const std::vector<double>& s, bool oz_exponent,
                                 double lattice_extent) {
    if (k.size() != s.size())
        throw std::invalid_argument("fit_correlation_length: k/S size mismatch");
    if (k.size() < 4)
        throw std::invalid_argument("fit_correlation_length: need >= 4 radial points");

    // Degenerate input (e.g. identical shots give an exactly zero connected
    // correlation) carries no length scale; report that instead of fitting.
    if (*std::max_element(s.begin(), s.end()) <= 0.0) {
        FitResult out;
        out.names = {"S0", "xi", "b"};
        out.params = {0.0, 0.0, 0.0};
        out.std_errors.assign(3, 0.0);
        out.covariance.assign(9, 0.0);
        out.n_points = static_cast<int>(k.size());
        out.converged = false;
        out.flags.push_back("structure factor has no positive weight");
        return out;
    }

    const double exponent = oz_exponent ? 1.0 : 1.5;
    const auto model = [exponent](double k, const std::vector<double>& p) {
        const double xi = std::exp(p[1]);
        return p[0] / std::pow(1.0 + xi * xi * k * k, exponent);
    };

    // The outer half of the zone is dominated by lattice discreteness rather
    // than the continuum line shape, so the fit uses modes below pi/2 (in
    // lattice units), keeping at least 8 bins for stability.  Bins are
    // sorted by k first; callers may pass them in any order.
    std::vector<std::size_t> order(k.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return k[a] < k[b]; });
    std::size_t n_keep = 0;
    while (n_keep < order.size() && k[order[n_keep]] <= std::numbers::pi / 2.0)
        ++n_keep;
    n_keep = std::max(n_keep, std::min<std::size_t>(8, order.size()));
    std::vector<double> k_fit(n_keep), s_fit(n_keep);
    for (std::size_t i = 0; i < n_keep; ++i) {
        k_fit[i] = k[order[i]];
        s_fit[i] = s[order[i]];
    }

    // Initial guesses: S0 from the smallest-k bin; xi from the k where S
    // first drops below S0 / 2^exponent, if that level is bracketed.
    const double s0_init = s_fit.front();
    double xi_init = 1.0;
    const double half_level = s0_init / std::pow(2.0, exponent);
    for (std::size_t i = 1; i < s_fit.size(); ++i) {
        if (s_fit[i] <= half_level && k_fit[i] > 0) {
            xi_init = 1.0 / k_fit[i];
            break;
        }
    }

    FitResult inner = fit_least_squares(k_fit, s_fit, model,
                                        {std::max(s0_init, 1e-12), std::log(xi_init)},
                                        {"S0", "log_xi"});

    const double s0 = inner.params[0];
    const double xi = std::exp(inner.params[1]);
    const double b = std::numbers::pi * s0 / (xi * xi);

    FitResult out;
    out.names = {"S0", "xi", "b"};
    out.params = {s0, xi, b};
    out.residual_norm = inner.residual_norm;
    out.converged = inner.converged;
    out.iterations = inner.iterations;
    out.n_points = inner.n_points;
    out.flags = inner.flags;

    // Delta-method covariance: rows of J are d(S0, xi, b)/d(S0, log xi).
    const double jac[3][2] = {{1.0, 0.0},
                              {0.0, xi},
                              {std::numbers::pi / (xi * xi), -2.0 * b}};
    out.covariance.assign(9, 0.0);
    out.std_errors.assign(3, 0.0);
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            double acc = 0.0;
            for (int a = 0; a < 2; ++a)
                for (int c = 0; c < 2; ++c)
                    acc += jac[i][a] * inner.covariance[static_cast<std::size_t>(a) * 2 + c] *
                           jac[j][c];
            out.covariance[static_cast<std::size_t>(i) * 3 + j] = acc;
        }
        out.std_errors[i] = std::sqrt(std::max(
            0.0, out.covariance[static_cast<std::size_t>(i) * 3 + i]));
    }

    const double k_max = *std::max_element(k.begin(), k.end());
    if (k_max > 0 && xi < 1.0 / k_max)
        out.flags.push_back("correlation length below k-grid resolution");
    if (lattice_extent > 0 && xi > lattice_extent)
        out.flags.push_back("correlation length exceeds lattice extent");
    return out;
}

CollapseResult scaling_collapse(const std::vector<StructureFactor>& slices,
                                const std::vector<double>& xi,
                                const std::vector<double>& b, int n_bins) {
    if (slices.size() < 2)
        throw std::invalid_argument("scaling_collapse: need >= 2 slices");
    if (slices.size() != xi.size() || slices.size() != b.size())
        throw std::invalid_argument("scaling_collapse: slice/fit size mismatch");
    if (n_bins < 1) throw std::invalid_argument("scaling_collapse: n_bins < 1");

    CollapseResult out;
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (std::size_t s = 0; s < slices.size(); ++s) {
        if (!(xi[s] > 0) || !(b[s] > 0))
            throw std::invalid_argument("scaling_collapse: xi and b must be positive");
        const double scale = 1.0 / (b[s] * xi[s] * xi[s]);
        for (std::size_t i = 0; i < slices[s].k_radial.size(); ++i) {
            const double kx = slices[s].k_radial[i] * xi[s];
            out.points.push_back({kx, slices[s].s_radial[i] * scale,
                                  static_cast<int>(s)});
            lo = std::min(lo, kx);
            hi = std::max(hi, kx);
        }
    }
    if (out.points.empty() || !(hi > lo)) return out;

    // Common binning in k*xi; spread = mean over usable bins of the
    // population variance of per-slice bin means.
    const double width = (hi - lo) / n_bins;
    const auto n_slices = slices.size();
    std::vector<double> sum(static_cast<std::size_t>(n_bins) * n_slices, 0.0);
    std::vector<long> cnt(sum.size(), 0);
    for (const auto& pt : out.points) {
        int bin = static_cast<int>((pt.k_xi - lo) / width);
        bin = std::clamp(bin, 0, n_bins - 1);
        const std::size_t idx = static_cast<std::size_t>(bin) * n_slices + pt.slice;
        sum[idx] += pt.s_scaled;
        ++cnt[idx];
    }
    double spread_acc = 0.0;
    for (int bin = 0; bin < n_bins; ++bin) {
        std::vector<double> means;
        for (std::size_t s = 0; s < n_slices; ++s) {
            const std::size_t idx = static_cast<std::size_t>(bin) * n_slices + s;
            if (cnt[idx] > 0) means.push_back(sum[idx] / cnt[idx]);
        }
        if (means.size() < 2) continue;
        double mean = 0.0;
        for (double m : means) mean += m / means.size();
        double var = 0.0;
        for (double m : means) var += (m - mean) * (m - mean) / means.size();
        spread_acc += var;
        ++out.n_bins_used;
    }
    out.spread = out.n_bins_used > 0 ? spread_acc / out.n_bins_used : 0.0;
    return out;
}

namespace {

struct SpectralPeak {
    double omega = 0.0;
    double amplitude = 0.0;
    double phase = 0.0;
    bool found = false;
};

// Oversampled direct spectrum of the mean-subtracted series on a frequency
// grid up to the Nyquist limit of the mean sample spacing.
SpectralPeak spectral_peak(const std::vector<double>& t, const std::vector<double>& y) {
    SpectralPeak peak;
    const std::size_t n = t.size();
    if (n < 4) return peak;

    double mean = 0.0;
    for (double v : y) mean += v / static_cast<double>(n);
    double power_total = 0.0;
    std::vector<double> yc(n);
    for (std::size_t i = 0; i < n; ++i) {
        yc[i] = y[i] - mean;
        power_total += yc[i] * yc[i];
    }
    if (power_total <= 1e-24 * static_cast<double>(n) * std::max(1.0, mean * mean))
        return peak;

    const double span = t.back() - t.front();
    if (!(span > 0)) return peak;
    const double dt = span / static_cast<double>(n - 1);
    const double omega_max = std::numbers::pi / dt;
    const int n_freq = static_cast<int>(4 * n);

    double best_power = 0.0;
    std::complex<double> best_c;
    for (int j = 1; j <= n_freq; ++j) {
        const double omega = omega_max * j / n_freq;
        std::complex<double> c{0.0, 0.0};
        for (std::size_t i = 0; i < n; ++i)
            c += yc[i] * std::polar(1.0, -omega * t[i]);
        const double p = std::norm(c);
        if (p > best_power) {
            best_power = p;
            best_c = c;
            peak.omega = omega;
        }
    }
    if (best_power <= 1e-20 * power_total * static_cast<double>(n)) return peak;
    peak.amplitude = 2.0 * std::abs(best_c) / static_cast<double>(n);
    peak.phase = std::arg(best_c);
    peak.found = true;
    return peak;
}

}  // namespace

std::optional<double> dominant_frequency(const std::vector<double>& t,
                                         const std::vector<double>& y) {
    if (t.size() != y.size()) throw std::invalid_argument("dominant_frequency: size mismatch");
    const SpectralPeak peak = spectral_peak(t, y);
    if (!peak.found) return std::nullopt;
    return peak.omega;
}

FitResult fit_damped_oscillator(const std::vector<double>& t,
                                const std::vector<double>& y, double skip_window) {
    if (t.size() != y.size())
        throw std::invalid_argument("fit_damped_oscillator: size mismatch");

    std::vector<double> tf, yf;
    const double t_min = t.empty() ? 0.0 : t.front() + skip_window;
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (t[i] >= t_min - 1e-12) {
            tf.push_back(t[i]);
            yf.push_back(y[i]);
        }
    }
    if (tf.size() < 8)
        throw std::invalid_argument(
            "fit_damped_oscillator: need >= 8 samples after transient skip");

    double mean = 0.0;
    for (double v : yf) mean += v / static_cast<double>(yf.size());

    const SpectralPeak peak = spectral_peak(tf, yf);
    if (!peak.found) {
        FitResult out;
        out.names = {"phi0", "A", "omega", "gamma", "theta0"};
        out.params = {mean, 0.0, 0.0, 0.0, 0.0};
        out.std_errors.assign(5, 0.0);
        out.covariance.assign(25, 0.0);
        out.n_points = static_cast<int>(tf.size());
        out.flags.push_back("no spectral peak above noise floor; frequency unidentifiable");
        return out;
    }

    const auto model = [](double x, const std::vector<double>& p) {
        return p[0] + p[1] * std::cos(p[2] * x + p[4]) * std::exp(-p[3] * x);
    };
    FitResult out = fit_least_squares(
        tf, yf, model, {mean, peak.amplitude, peak.omega, 0.0, peak.phase},
        {"phi0", "A", "omega", "gamma", "theta0"});

    const double span = tf.back() - tf.front();
    if (out.param("omega") * span < 2.0 * std::numbers::pi)
        out.flags.push_back("series spans less than one fitted oscillation period");
    return out;
}

FitResult fit_powerlaw_plus_oscillation(const std::vector<double>& t,
                                        const std::vector<double>& y) {
    if (t.size() != y.size())
        throw std::invalid_argument("fit_powerlaw_plus_oscillation: size mismatch");
    if (t.size() < 10)
        throw std::invalid_argument("fit_powerlaw_plus_oscillation: need >= 10 samples");

    // Power-law-only prefit with alpha pinned at the coarsening expectation
    // 0.5: (c0 + c1 t)^0.5 through the first/last samples seeds c0, c1.
    const double y0 = std::max(y.front(), 1e-6);
    const double y1 = std::max(y.back(), 1e-6);
    const double span = t.back() - t.front();
    double c0_init = y0 * y0;
    double c1_init = span > 0 ? (y1 * y1 - y0 * y0) / span : 0.0;
    if (t.front() != 0.0) c0_init = std::max(c0_init - c1_init * t.front(), 1e-6);

    const auto power_model = [](double x, const std::vector<double>& p) {
        const double base = p[0] + p[1] * x;
        if (base <= 0.0) return std::numeric_limits<double>::quiet_NaN();
        return std::pow(base, p[2]);
    };
    const FitResult prefit = fit_least_squares(
        t, y, power_model, {c0_init, c1_init, 0.5}, {"c0", "c1", "alpha"});

    // Oscillation seeded from the prefit residual spectrum.
    std::vector<double> residual(t.size());
    for (std::size_t i = 0; i < t.size(); ++i)
        residual[i] = y[i] - power_model(t[i], prefit.params);
    const SpectralPeak peak = spectral_peak(t, residual);

    const auto model = [power_model](double x, const std::vector<double>& p) {
        const std::vector<double> pw{p[0], p[1], p[2]};
        return power_model(x, pw) + p[3] * std::cos(p[4] * x + p[5]);
    };
    std::vector<double> init = {prefit.params[0], prefit.params[1], prefit.params[2],
                                peak.found ? peak.amplitude : 0.0,
                                peak.found ? peak.omega : 1.0,
                                peak.found ? peak.phase : 0.0};
    FitResult out = fit_least_squares(t, y, model, init,
                                      {"c0", "c1", "alpha", "c", "omega", "phi"});
    if (!peak.found)
        out.flags.push_back("no oscillation detected in power-law residual");
    return out;
}

}  // namespace rydsim
