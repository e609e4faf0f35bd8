#include "rydsim/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <mutex>
#include <optional>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "rydsim/analysis.hpp"
#include "rydsim/correlation.hpp"
#include "rydsim/errors.hpp"
#include "rydsim/meanfield.hpp"
#include "rydsim/quantum.hpp"
#include "rydsim/rng.hpp"
#include "rydsim/snapshot.hpp"
#include "rydsim/units.hpp"

namespace rydsim {

namespace fs = std::filesystem;

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

void write_text_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out << content;
    out.flush();
    if (!out) throw IoError("failed writing " + path.string());
}

int worker_count() {
    const char* env = std::getenv("RYDSIM_WORKERS");
    if (!env) return 1;
    const int n = std::atoi(env);
    if (n < 1) return 1;
    return std::min(n, 64);
}

namespace {

// Runs fn(0..n-1) on `workers` threads; the first exception wins and is
// rethrown after the join, so partial work never leaks to the caller.
void parallel_over(int n, int workers, const std::function<void(int)>& fn) {
    if (workers <= 1 || n <= 1) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    const int n_threads = std::min(workers, n);
    std::vector<std::thread> pool;
    pool.reserve(n_threads);
    for (int t = 0; t < n_threads; ++t) {
        pool.emplace_back([&] {
            for (;;) {
                const int i = next.fetch_add(1);
                if (i >= n) return;
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!error) error = std::current_exception();
                    return;
                }
            }
        });
    }
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

std::string csv_join(const std::vector<std::string>& fields) {
    std::string line;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) line += ',';
        line += fields[i];
    }
    line += '\n';
    return line;
}

// Flags joined for a CSV cell; commas inside flags would break the table.
std::string flag_cell(const std::vector<std::string>& flags) {
    std::string cell;
    for (std::size_t i = 0; i < flags.size(); ++i) {
        if (i) cell += "; ";
        cell += flags[i];
    }
    std::replace(cell.begin(), cell.end(), ',', ';');
    return cell;
}

std::string hash_hex(std::uint64_t hash) {
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(hash));
    return buf;
}

}  // namespace

Lattice lattice_from_config(const ExperimentConfig& cfg) {
    return Lattice(cfg.lattice.width, cfg.lattice.height, cfg.lattice.spacing_um,
                   angular_from_mhz(cfg.lattice.v_nn_mhz), cfg.lattice.boundary,
                   cfg.lattice.cutoff);
}

BuiltSchedule schedule_from_config(const ExperimentConfig& cfg, const Lattice& lat,
                                   double hold_time) {
    const auto& sc = cfg.schedule;
    const double omega = angular_from_mhz(sc.omega_mhz);
    const double delta_start = angular_from_mhz(sc.delta_start_mhz);
    const double delta_end = angular_from_mhz(sc.delta_end_mhz);
    const double pin_amp = sc.pin_amplitude_mhz != 0.0
                               ? angular_from_mhz(sc.pin_amplitude_mhz)
                               : -4.0 * omega;

    BuiltSchedule built;
    if (sc.protocol == "sweep_hold") {
        SweepOptions opts;
        opts.omega_ramp = sc.omega_ramp_us;
        built.schedule = linear_sweep_and_hold(omega, delta_start, delta_end,
                                               sc.sweep_rate, hold_time, opts);
        return built;
    }

    if (sc.protocol == "local_domain") {
        std::vector<Order> target;
        if (sc.order == "af1") {
            target = uniform_order(lat, Order::af1);
        } else if (sc.order == "af2") {
            target = uniform_order(lat, Order::af2);
        } else if (sc.order == "square") {
            target = centered_square_order(lat, sc.square_half_width);
        } else {
            const int wall = sc.wall_x >= 0 ? sc.wall_x : lat.width() / 2;
            target = zigzag_order(lat, wall);
        }
        built.pattern = pin_pattern(lat, target);

        SweepOptions opts;
        opts.omega_ramp = sc.omega_ramp_us;
        opts.local_weights = built.pattern.weights;
        opts.pin_amplitude = pin_amp;
        DriveSchedule pinned = linear_sweep_and_hold(
            omega, delta_start, delta_end, sc.sweep_rate,
            sc.quench_ramp_us + hold_time, opts);
        built.quench_start = pinned.total_time() - sc.quench_ramp_us - hold_time;
        built.schedule =
            local_quench_off(pinned, built.quench_start, sc.quench_ramp_us);
        return built;
    }

    // ordered_quench: single-sublattice pinning toward AF1.
    built.pattern = pin_pattern(lat, uniform_order(lat, Order::af1));
    OrderedQuenchParams params;
    params.omega = omega;
    params.delta_start = delta_start;
    params.delta_high = angular_from_mhz(sc.delta_high_mhz);
    params.delta_final = angular_from_mhz(sc.delta_final_mhz);
    params.hold_time = hold_time;
    params.sweep_rate = sc.sweep_rate;
    params.omega_ramp = sc.omega_ramp_us;
    params.quench_ramp = sc.quench_ramp_us;
    params.settle_time = sc.settle_us;
    params.local_weights = built.pattern.weights;
    params.pin_amplitude = pin_amp;
    built.schedule = ordered_phase_quench(params, &built.warnings);
    return built;
}

namespace {

struct HoldOutcome {
    SnapshotSet snaps;
    double m_s = 0.0;
    double h_cl = 0.0;
    double h_total = 0.0;
    std::vector<std::string> warnings;
};

HoldOutcome simulate_hold(const ExperimentConfig& cfg, const Lattice& lat,
                          double hold_time, int index) {
    BuiltSchedule built = schedule_from_config(cfg, lat, hold_time);
    const DriveSchedule& schedule = built.schedule;
    const double t_end = schedule.total_time();
    const double omega_end = schedule.omega(t_end);
    const double delta_end = schedule.delta(t_end);
    const std::uint64_t hold_seed = mix_seed(cfg.seed, static_cast<std::uint64_t>(index));

    HoldOutcome out;
    out.warnings = built.warnings;

    if (cfg.engine == "exact") {
        HamiltonianAction ham(lat);
        QuantumState state = QuantumState::all_ground(lat);
        evolve(state, ham, schedule, t_end);
        out.m_s = staggered_magnetization(state);
        out.h_cl = classical_energy_expectation(state, ham, delta_end);
        out.h_total = energy_expectation(state, ham, omega_end, delta_end,
                                         schedule.local_amplitude(t_end));
        out.snaps = sample_snapshots(state, cfg.shots, hold_seed);
    } else {
        ProductState state = ProductState::all_ground(lat);
        if (cfg.schedule.protocol == "local_domain") {
            // Seeded preparation: variational minimum with the target
            // pattern pinned, then release at the quench.
            MinimizeResult minimum =
                meanfield_minimize(lat, omega_end, delta_end, built.pattern.pinned);
            state = minimum.state;
            state.set_time(built.quench_start);
        }
        meanfield_evolve(state, schedule, t_end);
        out.m_s = staggered_magnetization(state);
        out.h_cl = classical_energy(state, delta_end);
        std::vector<double> site_detuning(static_cast<std::size_t>(lat.size()));
        for (int i = 0; i < lat.size(); ++i)
            site_detuning[static_cast<std::size_t>(i)] = schedule.site_detuning(t_end, i);
        out.h_total = meanfield_energy(state, omega_end, delta_end, site_detuning);
        out.snaps = meanfield_sample(state, cfg.shots, hold_seed);
    }

    SnapshotMeta& meta = out.snaps.meta;
    meta.hold_time = hold_time;
    meta.omega = omega_end;
    meta.delta = delta_end;
    meta.v_nn = lat.v_nn();
    meta.v_nnn = lat.cutoff() == Cutoff::nearest ? 0.0 : lat.v_nn() / 8.0;
    meta.seed = hold_seed;
    meta.protocol = cfg.schedule.protocol;
    if (cfg.schedule.protocol == "local_domain" && cfg.schedule.order == "square") {
        meta.center_x = lat.width() / 2;
        meta.center_y = lat.height() / 2;
    }
    if (built.pattern.pinned_count() > 0) meta.pinned_mask = built.pattern.pinned;
    return out;
}

std::string series_gnuplot(const std::string& series_name) {
    std::string s;
    s += "set datafile separator ','\n";
    s += "set key autotitle columnhead\n";
    s += "set xlabel 'hold time (us)'\n";
    s += "set ylabel 'staggered magnetization'\n";
    s += "plot '" + series_name + "' using 1:2 with linespoints title 'm_s'\n";
    return s;
}

std::string analysis_gnuplot(const std::string& table_name) {
    std::string s;
    s += "set datafile separator ','\n";
    s += "set key autotitle columnhead\n";
    s += "set xlabel 'hold time (us)'\n";
    s += "set ylabel 'correlation length (sites)'\n";
    s += "plot '" + table_name + "' using 1:6:7 with yerrorlines title 'xi'\n";
    return s;
}

}  // namespace

SimulateResult run_simulate(const ExperimentConfig& cfg, bool gnuplot) {
    cfg.validate();
    const Lattice lat = lattice_from_config(cfg);
    const auto& holds = cfg.schedule.hold_times_us;
    const int n = static_cast<int>(holds.size());

    std::vector<HoldOutcome> outcomes(static_cast<std::size_t>(n));
    parallel_over(n, worker_count(), [&](int i) {
        outcomes[static_cast<std::size_t>(i)] = simulate_hold(cfg, lat, holds[i], i);
    });

    SimulateResult res;
    res.run_dir = fs::path(cfg.output_dir);
    std::error_code ec;
    fs::create_directories(res.run_dir, ec);
    if (ec) throw IoError("cannot create run directory " + res.run_dir.string());

    write_text_file(res.run_dir / "config.json", canonical_config_text(cfg));

    nlohmann::json manifest;
    manifest["command"] = "simulate";
    manifest["version"] = kVersion;
    manifest["config_hash"] = hash_hex(config_hash(cfg));
    manifest["engine"] = cfg.engine;
    manifest["seed"] = cfg.seed;
    manifest["n_hold_times"] = n;
    write_text_file(res.run_dir / "manifest.json", manifest.dump(2) + "\n");

    std::string series = "hold_time_us,m_s,h_cl,h_total\n";
    for (int i = 0; i < n; ++i) {
        const HoldOutcome& out = outcomes[static_cast<std::size_t>(i)];
        char name[40];
        std::snprintf(name, sizeof(name), "snapshots_%03d.txt", i);
        const fs::path snap_path = res.run_dir / name;
        write_snapshots(snap_path, out.snaps);
        res.snapshot_files.push_back(snap_path);
        series += csv_join({format_double(holds[i]), format_double(out.m_s),
                            format_double(out.h_cl), format_double(out.h_total)});
        for (const auto& w : out.warnings) {
            if (std::find(res.warnings.begin(), res.warnings.end(), w) ==
                res.warnings.end())
                res.warnings.push_back(w);
        }
    }
    res.series_csv = res.run_dir / "series.csv";
    write_text_file(res.series_csv, series);

    if (gnuplot) {
        fs::create_directories(res.run_dir / "plots", ec);
        write_text_file(res.run_dir / "plots" / "series.gp",
                        series_gnuplot("../series.csv"));
    }
    return res;
}

std::vector<fs::path> find_snapshot_files(const fs::path& dir) {
    if (!fs::is_directory(dir))
        throw IoError("not a directory: " + dir.string());
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (!entry.is_regular_file()) continue;
        const std::string name = entry.path().filename().string();
        if (name.rfind("snapshots_", 0) == 0 && entry.path().extension() == ".txt")
            files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    return files;
}

namespace {

struct FileAnalysis {
    double hold_time = 0.0;
    std::string status = "ok";
    int n_shots = 0;
    int n_retained = 0;
    double retained_fraction = 0.0;
    std::optional<FitResult> fit;
    bool has_spectrum = false;
    double parseval_error = 0.0;
    std::optional<DomainStatistics> domains;
    std::optional<EnergyBudget> energy;
    double e_total_err = 0.0;
    std::optional<RadialProfile> radial;
    std::optional<DomainRadius> radius;
    std::vector<std::optional<double>> walls;
    std::vector<double> wall_errs;
    std::vector<int> wall_found;
};

FileAnalysis analyze_file(const fs::path& file, const AnalysisConfig& options) {
    SnapshotSet set = read_snapshots(file);
    set.validate();

    FileAnalysis fa;
    fa.hold_time = set.meta.hold_time;
    fa.n_shots = set.n_shots();

    SnapshotSet kept;
    if (options.postselect) {
        PostselectResult ps = postselect(set, options.max_chain, options.max_defects);
        kept = std::move(ps.retained);
        fa.retained_fraction = ps.retained_fraction;
    } else {
        kept = set;
        fa.retained_fraction = 1.0;
    }
    fa.n_retained = kept.n_shots();
    if (fa.n_retained == 0) {
        fa.status = "empty";
        return fa;
    }

    if (fa.n_retained >= 2) {
        const CorrelationMap corr = connected_correlation(kept);
        const StructureFactor sf = structure_factor(corr);
        fa.has_spectrum = true;
        fa.parseval_error = sf.parseval_error;
        // Lattices below 5x5 leave too few radial bins to constrain the fit;
        // the table then carries Parseval diagnostics but no length.
        if (sf.k_radial.size() >= 4)
            fa.fit = fit_correlation_length(sf, options.oz_exponent);
    }

    fa.domains = domain_statistics(kept);

    if (kept.width >= 3 && kept.height >= 3) {
        fa.energy = classical_energy(kept, set.meta.delta, set.meta.v_nn,
                                     set.meta.v_nnn);
        const BootstrapResult boot = bootstrap(
            fa.energy->per_shot_total,
            [](const std::vector<double>& v) {
                double mean = 0.0;
                for (double x : v) mean += x / static_cast<double>(v.size());
                return mean;
            },
            options.bootstrap_resamples, mix_seed(set.meta.seed, 0xec01u));
        fa.e_total_err = boot.std_error;
    }

    if (options.radial) {
        const int cx = set.meta.center_x >= 0 ? set.meta.center_x : kept.width / 2;
        const int cy = set.meta.center_y >= 0 ? set.meta.center_y : kept.height / 2;
        std::vector<std::uint8_t> site_mask;
        if (!set.meta.pinned_mask.empty()) {
            site_mask.resize(set.meta.pinned_mask.size());
            for (std::size_t i = 0; i < site_mask.size(); ++i)
                site_mask[i] = set.meta.pinned_mask[i] ? 0 : 1;
        }
        fa.radial = radial_profile(kept, cx, cy, 0, site_mask);
        fa.radius = domain_radius(*fa.radial);
    }

    if (options.walls) {
        fa.walls = wall_positions(kept);
        fa.wall_errs.assign(fa.walls.size(), 0.0);
        fa.wall_found.assign(fa.walls.size(), 0);
        std::mt19937_64 rng(mix_seed(set.meta.seed, 0x3a11u));
        std::vector<std::vector<double>> samples(fa.walls.size());
        std::vector<int> idx(static_cast<std::size_t>(kept.n_shots()));
        for (int r = 0; r < options.bootstrap_resamples; ++r) {
            for (auto& v : idx)
                v = static_cast<int>(random_index(rng, static_cast<std::size_t>(kept.n_shots())));
            const auto resampled = wall_positions(kept, idx);
            for (std::size_t row = 0; row < resampled.size(); ++row)
                if (resampled[row]) samples[row].push_back(*resampled[row]);
        }
        for (std::size_t row = 0; row < samples.size(); ++row) {
            fa.wall_found[row] = static_cast<int>(samples[row].size());
            if (samples[row].size() >= 2) {
                double mean = 0.0;
                for (double v : samples[row])
                    mean += v / static_cast<double>(samples[row].size());
                double var = 0.0;
                for (double v : samples[row])
                    var += (v - mean) * (v - mean) /
                           static_cast<double>(samples[row].size() - 1);
                fa.wall_errs[row] = std::sqrt(var);
            }
        }
    }
    return fa;
}

}  // namespace

AnalyzeResult run_analyze(const std::vector<fs::path>& snapshot_files,
                          const AnalysisConfig& options, const fs::path& out_dir,
                          bool gnuplot) {
    if (snapshot_files.empty())
        throw std::invalid_argument("run_analyze: no snapshot files given");

    const int n = static_cast<int>(snapshot_files.size());
    std::vector<FileAnalysis> results(static_cast<std::size_t>(n));
    parallel_over(n, worker_count(), [&](int i) {
        results[static_cast<std::size_t>(i)] =
            analyze_file(snapshot_files[static_cast<std::size_t>(i)], options);
    });

    AnalyzeResult res;
    res.out_dir = out_dir;
    res.n_inputs = n;
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) throw IoError("cannot create analysis directory " + out_dir.string());

    std::string table =
        "hold_time_us,status,n_shots,n_retained,retained_fraction,xi,xi_err,s0,b,"
        "fit_converged,fit_flags,parseval_error,mean_largest_area,"
        "mean_second_area,e_total,e_total_err,e_bulk,e_wall\n";
    std::string radial_csv = "hold_time_us,d_manhattan,m_s,n_samples\n";
    std::string radius_csv = "hold_time_us,radius,n_crossings\n";
    std::string wall_csv = "hold_time_us,row,x,x_err,n_resamples_found\n";

    for (const FileAnalysis& fa : results) {
        std::vector<std::string> row;
        row.push_back(format_double(fa.hold_time));
        row.push_back(fa.status);
        row.push_back(std::to_string(fa.n_shots));
        row.push_back(std::to_string(fa.n_retained));
        row.push_back(format_double(fa.retained_fraction));
        if (fa.fit) {
            row.push_back(format_double(fa.fit->param("xi")));
            row.push_back(format_double(fa.fit->std_error("xi")));
            row.push_back(format_double(fa.fit->param("S0")));
            row.push_back(format_double(fa.fit->param("b")));
            row.push_back(fa.fit->converged ? "1" : "0");
            row.push_back(flag_cell(fa.fit->flags));
        } else {
            row.insert(row.end(), {"", "", "", "", "", ""});
        }
        row.push_back(fa.has_spectrum ? format_double(fa.parseval_error)
                                      : std::string());
        if (fa.domains) {
            row.push_back(format_double(fa.domains->mean_largest));
            row.push_back(format_double(fa.domains->mean_second_largest));
        } else {
            row.insert(row.end(), {"", ""});
        }
        if (fa.energy) {
            row.push_back(format_double(fa.energy->total));
            row.push_back(format_double(fa.e_total_err));
            row.push_back(format_double(fa.energy->bulk));
            row.push_back(format_double(fa.energy->wall));
        } else {
            row.insert(row.end(), {"", "", "", ""});
        }
        table += csv_join(row);

        if (fa.radial) {
            for (std::size_t i = 0; i < fa.radial->distance.size(); ++i)
                radial_csv += csv_join({format_double(fa.hold_time),
                                        std::to_string(fa.radial->distance[i]),
                                        format_double(fa.radial->mean[i]),
                                        std::to_string(fa.radial->n_samples[i])});
            radius_csv += csv_join(
                {format_double(fa.hold_time),
                 fa.radius && fa.radius->radius ? format_double(*fa.radius->radius)
                                                : std::string(),
                 std::to_string(fa.radius ? fa.radius->n_crossings : 0)});
        }
        for (std::size_t rowi = 0; rowi < fa.walls.size(); ++rowi) {
            wall_csv += csv_join(
                {format_double(fa.hold_time), std::to_string(rowi),
                 fa.walls[rowi] ? format_double(*fa.walls[rowi]) : std::string(),
                 format_double(fa.wall_errs.empty() ? 0.0 : fa.wall_errs[rowi]),
                 std::to_string(fa.wall_found.empty() ? 0 : fa.wall_found[rowi])});
        }
    }

    res.table_csv = out_dir / "analysis.csv";
    write_text_file(res.table_csv, table);
    if (options.radial) {
        write_text_file(out_dir / "radial.csv", radial_csv);
        write_text_file(out_dir / "domain_radius.csv", radius_csv);
    }
    if (options.walls) write_text_file(out_dir / "wall.csv", wall_csv);

    nlohmann::json manifest;
    manifest["command"] = "analyze";
    manifest["version"] = kVersion;
    std::vector<std::string> inputs;
    for (const auto& f : snapshot_files) inputs.push_back(f.filename().string());
    manifest["inputs"] = inputs;
    manifest["postselect"] = options.postselect;
    manifest["max_chain"] = options.max_chain;
    manifest["max_defects"] = options.max_defects;
    manifest["bootstrap_resamples"] = options.bootstrap_resamples;
    manifest["oz_exponent"] = options.oz_exponent;
    write_text_file(out_dir / "manifest.json", manifest.dump(2) + "\n");

    if (gnuplot) {
        fs::create_directories(out_dir / "plots", ec);
        write_text_file(out_dir / "plots" / "analysis.gp",
                        analysis_gnuplot("../analysis.csv"));
    }
    return res;
}

}  // namespace rydsim
