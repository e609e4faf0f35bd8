#include "rydsim/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <map>
#include <stdexcept>

#include "rydsim/rng.hpp"

namespace rydsim {

namespace {

inline int stag_sign(const ShotView& shot, int x, int y) {
    const int parity = ((x + y) & 1) ? -1 : 1;
    return parity * (2 * shot.at(x, y) - 1);
}

}  // namespace

std::vector<double> staggered_map(const ShotView& shot) {
    std::vector<double> m(static_cast<std::size_t>(shot.width) * shot.height);
    for (int y = 0; y < shot.height; ++y)
        for (int x = 0; x < shot.width; ++x)
            m[static_cast<std::size_t>(y) * shot.width + x] = stag_sign(shot, x, y);
    return m;
}

std::vector<std::uint8_t> spin_flip_correct(const ShotView& shot) {
    // Neighborhood = nearest + next-nearest (the 8 surrounding sites).
    static constexpr int kDx[8] = {1, -1, 0, 0, 1, 1, -1, -1};
    static constexpr int kDy[8] = {0, 0, 1, -1, 1, -1, 1, -1};

    const int w = shot.width, h = shot.height;
    std::vector<std::uint8_t> out(shot.n, shot.n + static_cast<std::size_t>(w) * h);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const int s = stag_sign(shot, x, y);
            bool has_neighbor = false;
            bool all_opposite = true;
            for (int k = 0; k < 8; ++k) {
                const int nx = x + kDx[k], ny = y + kDy[k];
                if (nx < 0 || nx >= w || ny < 0 || ny >= h) continue;
                has_neighbor = true;
                if (stag_sign(shot, nx, ny) == s) {
                    all_opposite = false;
                    break;
                }
            }
            if (has_neighbor && all_opposite) {
                auto& v = out[static_cast<std::size_t>(y) * w + x];
                v = static_cast<std::uint8_t>(1 - v);
            }
        }
    }
    return out;
}

DomainLabeling label_domains(const ShotView& corrected_shot) {
    const int w = corrected_shot.width, h = corrected_shot.height;
    DomainLabeling out;
    out.width = w;
    out.height = h;
    out.labels.assign(static_cast<std::size_t>(w) * h, 0);

    std::vector<int> stack;
    for (int start = 0; start < w * h; ++start) {
        if (out.labels[start] != 0) continue;
        const int id = out.n_domains() + 1;
        const int sign = stag_sign(corrected_shot, start % w, start / w);
        int area = 0;
        stack.assign(1, start);
        out.labels[start] = id;
        while (!stack.empty()) {
            const int idx = stack.back();
            stack.pop_back();
            ++area;
            const int x = idx % w, y = idx / w;
            static constexpr int kDx[4] = {1, -1, 0, 0};
            static constexpr int kDy[4] = {0, 0, 1, -1};
            for (int k = 0; k < 4; ++k) {
                const int nx = x + kDx[k], ny = y + kDy[k];
                if (nx < 0 || nx >= w || ny < 0 || ny >= h) continue;
                const int nidx = ny * w + nx;
                if (out.labels[nidx] != 0) continue;
                if (stag_sign(corrected_shot, nx, ny) != sign) continue;
                out.labels[nidx] = id;
                stack.push_back(nidx);
            }
        }
        out.areas.push_back(area);
        out.order_sign.push_back(sign);
    }
    return out;
}

DomainStatistics domain_statistics(const SnapshotSet& set) {
    if (set.n_shots() == 0) throw std::invalid_argument("domain_statistics: empty snapshot set");

    std::map<int, double> weight;  // area -> accumulated area-weight
    double total_weight = 0.0;
    double sum_largest = 0.0, sum_second = 0.0;
    for (int s = 0; s < set.n_shots(); ++s) {
        const auto corrected = spin_flip_correct(view(set, s));
        const auto labeling =
            label_domains(ShotView{set.width, set.height, corrected.data()});
        std::vector<int> areas = labeling.areas;
        for (int a : areas) {
            weight[a] += a;
            total_weight += a;
        }
        std::sort(areas.begin(), areas.end(), std::greater<int>());
        sum_largest += areas.empty() ? 0 : areas[0];
        sum_second += areas.size() > 1 ? areas[1] : 0;
    }

    DomainStatistics stats;
    for (const auto& [area, wgt] : weight) {
        stats.area.push_back(area);
        stats.probability.push_back(wgt / total_weight);
    }
    stats.mean_largest = sum_largest / set.n_shots();
    stats.mean_second_largest = sum_second / set.n_shots();
    return stats;
}

std::vector<int> coarse_grain(const ShotView& shot) {
    const int w = shot.width, h = shot.height;
    std::vector<int> c(static_cast<std::size_t>(w) * h, 0);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            int sum = 0;
            if (x + 1 < w) sum += shot.at(x + 1, y);
            if (x - 1 >= 0) sum += shot.at(x - 1, y);
            if (y + 1 < h) sum += shot.at(x, y + 1);
            if (y - 1 >= 0) sum += shot.at(x, y - 1);
            c[static_cast<std::size_t>(y) * w + x] = sum;
        }
    }
    return c;
}

std::vector<std::uint8_t> classify_boundary(const ShotView& shot) {
    const auto c = coarse_grain(shot);
    std::vector<std::uint8_t> mask(c.size());
    for (int y = 0; y < shot.height; ++y) {
        for (int x = 0; x < shot.width; ++x) {
            const std::size_t idx = static_cast<std::size_t>(y) * shot.width + x;
            mask[idx] = shot.at(x, y) ? (c[idx] != 0) : (c[idx] != 4);
        }
    }
    return mask;
}

EnergyBudget classical_energy(const SnapshotSet& set, double delta, double v_nn,
                              double v_nnn) {
    const int w = set.width, h = set.height;
    if (w < 3 || h < 3)
        throw std::invalid_argument(
            "classical_energy: lattice smaller than 3x3 has no interior after edge "
            "exclusion");
    if (set.n_shots() == 0)
        throw std::invalid_argument("classical_energy: empty snapshot set");

    auto interior = [&](int x, int y) {
        return x >= 1 && x < w - 1 && y >= 1 && y < h - 1;
    };

    EnergyBudget budget;
    budget.per_shot_total.reserve(set.n_shots());
    budget.per_shot_bulk.reserve(set.n_shots());
    budget.per_shot_wall.reserve(set.n_shots());

    // Interior pair list: nearest (V_nn) and next-nearest (V_nnn), both
    // endpoints interior.  Built once; shots share geometry.
    struct Pair {
        int a, b;
        double v;
    };
    std::vector<Pair> pairs;
    static constexpr int kDx[4] = {1, 0, 1, 1};
    static constexpr int kDy[4] = {0, 1, 1, -1};
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            if (!interior(x, y)) continue;
            for (int k = 0; k < 4; ++k) {
                const int nx = x + kDx[k], ny = y + kDy[k];
                if (!interior(nx, ny)) continue;
                pairs.push_back({y * w + x, ny * w + nx, k < 2 ? v_nn : v_nnn});
            }
        }
    }

    for (int s = 0; s < set.n_shots(); ++s) {
        const ShotView shot = view(set, s);
        const auto wall_mask = classify_boundary(shot);
        double bulk = 0.0, wall = 0.0;
        for (int y = 1; y < h - 1; ++y) {
            for (int x = 1; x < w - 1; ++x) {
                const std::size_t idx = static_cast<std::size_t>(y) * w + x;
                const double term = -delta * (shot.n[idx] - 1.0);
                (wall_mask[idx] ? wall : bulk) += term;
            }
        }
        for (const auto& p : pairs) {
            if (!(shot.n[p.a] && shot.n[p.b])) continue;
            (wall_mask[p.a] ? wall : bulk) += 0.5 * p.v;
            (wall_mask[p.b] ? wall : bulk) += 0.5 * p.v;
        }
        budget.per_shot_bulk.push_back(bulk);
        budget.per_shot_wall.push_back(wall);
        budget.per_shot_total.push_back(bulk + wall);
    }

    const double n = set.n_shots();
    for (double v : budget.per_shot_total) budget.total += v / n;
    for (double v : budget.per_shot_bulk) budget.bulk += v / n;
    for (double v : budget.per_shot_wall) budget.wall += v / n;
    return budget;
}

int longest_rydberg_chain(const ShotView& shot) {
    int longest = 0;
    for (int y = 0; y < shot.height; ++y) {
        int run = 0;
        for (int x = 0; x < shot.width; ++x) {
            run = shot.at(x, y) ? run + 1 : 0;
            longest = std::max(longest, run);
        }
    }
    for (int x = 0; x < shot.width; ++x) {
        int run = 0;
        for (int y = 0; y < shot.height; ++y) {
            run = shot.at(x, y) ? run + 1 : 0;
            longest = std::max(longest, run);
        }
    }
    return longest;
}

PostselectResult postselect(const SnapshotSet& set, int max_chain, int max_defects,
                            const std::vector<int>& defect_counts) {
    if (!defect_counts.empty() &&
        defect_counts.size() != static_cast<std::size_t>(set.n_shots()))
        throw std::invalid_argument("postselect: defect_counts size mismatch");

    PostselectResult out;
    out.retained.width = set.width;
    out.retained.height = set.height;
    out.retained.meta = set.meta;
    for (int s = 0; s < set.n_shots(); ++s) {
        if (longest_rydberg_chain(view(set, s)) > max_chain) {
            ++out.n_dropped_chain;
            continue;
        }
        if (!defect_counts.empty() && defect_counts[s] > max_defects) {
            ++out.n_dropped_defects;
            continue;
        }
        out.retained.shots.push_back(set.shots[s]);
    }
    out.retained_fraction =
        set.n_shots() == 0
            ? 0.0
            : static_cast<double>(out.retained.n_shots()) / set.n_shots();
    return out;
}

BootstrapResult bootstrap(
    const std::vector<double>& values,
    const std::function<double(const std::vector<double>&)>& statistic,
    int n_resamples, std::uint64_t seed) {
    if (values.empty()) throw std::invalid_argument("bootstrap: empty input");
    if (n_resamples < 2) throw std::invalid_argument("bootstrap: need >= 2 resamples");

    BootstrapResult out;
    out.estimate = statistic(values);

    std::mt19937_64 rng(mix_seed(seed, 0xb001u));
    std::vector<double> resample(values.size());
    double sum = 0.0, sum_sq = 0.0;
    for (int r = 0; r < n_resamples; ++r) {
        for (auto& v : resample) v = values[random_index(rng, values.size())];
        const double stat = statistic(resample);
        sum += stat;
        sum_sq += stat * stat;
    }
    const double mean = sum / n_resamples;
    const double var =
        std::max(0.0, (sum_sq - n_resamples * mean * mean) / (n_resamples - 1));
    out.std_error = std::sqrt(var);
    return out;
}

RadialProfile radial_profile(const SnapshotSet& set, int center_x, int center_y,
                             int parity_filter,
                             const std::vector<std::uint8_t>& site_mask) {
    const int w = set.width, h = set.height;
    if (center_x < 0 || center_x >= w || center_y < 0 || center_y >= h)
        throw std::invalid_argument("radial_profile: center off lattice");
    if (!site_mask.empty() && site_mask.size() != static_cast<std::size_t>(w) * h)
        throw std::invalid_argument("radial_profile: site mask size mismatch");

    const int max_d = (w - 1) + (h - 1);
    std::vector<double> sum(max_d + 1, 0.0);
    std::vector<long> count(max_d + 1, 0);
    for (int s = 0; s < set.n_shots(); ++s) {
        const ShotView shot = view(set, s);
        for (int y = 0; y < h; ++y) {
            for (int x = 0; x < w; ++x) {
                if (parity_filter != 0 &&
                    (((x + y) & 1) ? -1 : 1) != parity_filter)
                    continue;
                const std::size_t idx = static_cast<std::size_t>(y) * w + x;
                if (!site_mask.empty() && !site_mask[idx]) continue;
                const int d = std::abs(x - center_x) + std::abs(y - center_y);
                sum[d] += stag_sign(shot, x, y);
                ++count[d];
            }
        }
    }

    RadialProfile profile;
    for (int d = 0; d <= max_d; ++d) {
        if (count[d] == 0) continue;
        profile.distance.push_back(d);
        profile.mean.push_back(sum[d] / count[d]);
        profile.n_samples.push_back(count[d]);
    }
    return profile;
}

DomainRadius domain_radius(const RadialProfile& profile) {
    DomainRadius out;
    for (std::size_t i = 0; i + 1 < profile.mean.size(); ++i) {
        const double a = profile.mean[i], b = profile.mean[i + 1];
        if ((a < 0 && b >= 0) || (a > 0 && b <= 0) || (a == 0 && b != 0)) {
            ++out.n_crossings;
            if (!out.radius) {
                const double da = profile.distance[i], db = profile.distance[i + 1];
                out.radius = (a == b) ? da : da + (db - da) * (0.0 - a) / (b - a);
            }
        }
    }
    return out;
}

std::vector<std::optional<double>> wall_positions(
    const SnapshotSet& set, const std::vector<int>& shot_subset) {
    const int w = set.width, h = set.height;
    std::vector<int> indices = shot_subset;
    if (indices.empty()) {
        indices.resize(set.n_shots());
        for (int s = 0; s < set.n_shots(); ++s) indices[s] = s;
    }
    std::vector<std::optional<double>> positions(h);
    for (int y = 0; y < h; ++y) {
        std::vector<double> row_mean(w, 0.0);
        for (int s : indices) {
            const ShotView shot = view(set, s);
            for (int x = 0; x < w; ++x) row_mean[x] += stag_sign(shot, x, y);
        }
        for (auto& v : row_mean) v /= std::max<std::size_t>(1, indices.size());
        for (int x = 0; x + 1 < w; ++x) {
            const double a = row_mean[x], b = row_mean[x + 1];
            if ((a < 0 && b >= 0) || (a > 0 && b <= 0) || (a == 0 && b != 0)) {
                positions[y] = (a == b) ? x : x + (0.0 - a) / (b - a);
                break;
            }
        }
    }
    return positions;
}

}  // namespace rydsim
