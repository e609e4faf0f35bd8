// Command-line front end: simulation runs, snapshot analysis, and the
// reduced-theory calculators, with deterministic text output.
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "rydsim/config.hpp"
#include "rydsim/errors.hpp"
#include "rydsim/pipeline.hpp"
#include "rydsim/schedule.hpp"
#include "rydsim/theory.hpp"

namespace fs = std::filesystem;
using rydsim::format_double;

namespace {

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty())
        std::cout << text;
    else
        rydsim::write_text_file(out_path, text);
}

struct SimulateArgs {
    std::string config_path;
    bool gnuplot = false;
};

void run_simulate_cmd(const SimulateArgs& args) {
    const rydsim::ExperimentConfig cfg = rydsim::load_config(args.config_path);
    const rydsim::SimulateResult res = rydsim::run_simulate(cfg, args.gnuplot);
    for (const auto& w : res.warnings) std::cerr << "warning: " << w << "\n";
    std::cout << "run directory: " << res.run_dir.string() << "\n";
    std::cout << "snapshot files: " << res.snapshot_files.size() << "\n";
    std::cout << "series: " << res.series_csv.string() << "\n";
}

struct AnalyzeArgs {
    std::string run_dir;
    std::vector<std::string> files;
    std::string out_dir;
    bool gnuplot = false;
    // Optional overrides; unset values fall back to the run config (when
    // analyzing a run directory) or the documented defaults.
    std::optional<bool> postselect;
    std::optional<int> max_chain;
    std::optional<int> max_defects;
    std::optional<int> resamples;
    bool radial = false;
    bool walls = false;
    bool oz = false;
};

void run_analyze_cmd(const AnalyzeArgs& args) {
    std::vector<fs::path> inputs;
    rydsim::AnalysisConfig options;
    fs::path out_dir;

    if (!args.run_dir.empty()) {
        const fs::path run_dir(args.run_dir);
        inputs = rydsim::find_snapshot_files(run_dir);
        const fs::path cfg_path = run_dir / "config.json";
        if (fs::exists(cfg_path))
            options = rydsim::load_config(cfg_path.string()).analysis;
        out_dir = run_dir / "analysis";
    }
    for (const auto& f : args.files) inputs.emplace_back(f);
    if (inputs.empty())
        throw rydsim::ConfigError("analyze: no snapshot files (use --run-dir or list files)");
    if (out_dir.empty()) out_dir = "analysis";
    if (!args.out_dir.empty()) out_dir = args.out_dir;

    if (args.postselect) options.postselect = *args.postselect;
    if (args.max_chain) options.max_chain = *args.max_chain;
    if (args.max_defects) options.max_defects = *args.max_defects;
    if (args.resamples) options.bootstrap_resamples = *args.resamples;
    if (args.radial) options.radial = true;
    if (args.walls) options.walls = true;
    if (args.oz) options.oz_exponent = true;

    const rydsim::AnalyzeResult res =
        rydsim::run_analyze(inputs, options, out_dir, args.gnuplot);
    std::cout << "analyzed " << res.n_inputs << " snapshot files\n";
    std::cout << "table: " << res.table_csv.string() << "\n";
}

struct LandauArgs {
    double q = 1.0;
    double lambda = 0.0;
    double phi0 = 1e-3;
    double dphi0 = 0.0;
    double t_end = 50.0;
    double dt = 0.05;
    std::string out;
};

void run_landau_cmd(const LandauArgs& args) {
    std::string text;
    try {
        const rydsim::LandauFrequencies freq =
            rydsim::landau_frequencies(args.q, args.lambda);
        text += "# omega_small_oscillation=" + format_double(freq.omega);
        text += " phi_minimum=" + format_double(freq.phi0);
        text += freq.critical ? " critical=1\n" : " critical=0\n";
    } catch (const std::invalid_argument&) {
        // No harmonic minimum for this (q, lambda); trajectory only.
    }
    const rydsim::LandauTrajectory traj = rydsim::landau_evolve(
        args.q, args.lambda, args.phi0, args.dphi0, args.t_end, args.dt);
    text += "t,phi,dphi\n";
    for (std::size_t i = 0; i < traj.t.size(); ++i)
        text += format_double(traj.t[i]) + "," + format_double(traj.phi[i]) + "," +
                format_double(traj.dphi[i]) + "\n";
    text += "# energy_drift=" + format_double(traj.energy_drift) + "\n";
    emit(text, args.out);
}

struct GaussianArgs {
    std::string preset = "disordered";
    std::string out;
};

void run_gaussian_cmd(const GaussianArgs& args) {
    const rydsim::FrequencyDoublingResult res =
        args.preset == "ordered" ? rydsim::frequency_doubling_ordered()
                                 : rydsim::frequency_doubling_disordered();
    nlohmann::json summary;
    summary["preset"] = args.preset;
    summary["omega_phi"] = res.omega_phi;
    summary["omega_xi"] = res.omega_xi;
    summary["ratio"] = res.ratio;
    summary["valid"] = res.valid;

    std::string text = "t,phi,xi\n";
    for (std::size_t i = 0; i < res.t.size(); ++i)
        text += format_double(res.t[i]) + "," + format_double(res.phi[i]) + "," +
                format_double(res.xi[i]) + "\n";

    if (args.out.empty()) {
        std::cout << "# " << summary.dump() << "\n" << text;
    } else {
        rydsim::write_text_file(args.out, text);
        std::cout << summary.dump(2) << "\n";
    }
}

struct KzmArgs {
    double tau = 1.0;
    double t0 = 1.0;
    double l0 = 1.0;
    double nu = 0.629;
    double z = 1.0;
};

void run_kzm_cmd(const KzmArgs& args) {
    rydsim::TheoryParams params;
    params.tau = args.tau;
    params.t0 = args.t0;
    params.l0 = args.l0;
    params.nu = args.nu;
    params.z = args.z;
    const rydsim::KzmScales scales = rydsim::kzm_scales(params);
    nlohmann::json out;
    out["t_kz"] = scales.t_kz;
    out["xi_kz"] = scales.xi_kz;
    std::cout << out.dump(2) << "\n";
}

struct RateArgs {
    std::vector<double> delta_over_omega;
    double reference_offset = 1.0;
    std::string out;
};

void run_rate_cmd(const RateArgs& args) {
    rydsim::TheoryParams params;
    std::string text = "delta_over_omega,coarsening_rate\n";
    for (double d : args.delta_over_omega)
        text += format_double(d) + "," +
                format_double(rydsim::coarsening_rate(d, params, args.reference_offset)) +
                "\n";
    emit(text, args.out);
}

struct ScalingArgs {
    double x_s = 4.0;
    double x_min = 0.1;
    double x_max = 10.0;
    int n = 100;
    std::string out;
};

void run_scaling_cmd(const ScalingArgs& args) {
    if (args.n < 2) throw rydsim::ConfigError("scaling-f: need at least 2 grid points");
    rydsim::TheoryParams params;
    std::string text = "x,f\n";
    for (int i = 0; i < args.n; ++i) {
        const double x = args.x_min + (args.x_max - args.x_min) * i / (args.n - 1);
        text += format_double(x) + "," +
                format_double(rydsim::scaling_function_F(x, args.x_s, params)) + "\n";
    }
    emit(text, args.out);
}

struct DumpArgs {
    std::string config_path;
    double hold_time = -1.0;
    double dt = 0.01;
    std::string out;
};

void run_dump_cmd(const DumpArgs& args) {
    const rydsim::ExperimentConfig cfg = rydsim::load_config(args.config_path);
    const rydsim::Lattice lat = rydsim::lattice_from_config(cfg);
    const double hold =
        args.hold_time >= 0.0 ? args.hold_time : cfg.schedule.hold_times_us.front();
    const rydsim::BuiltSchedule built =
        rydsim::schedule_from_config(cfg, lat, hold);
    if (args.dt <= 0.0) throw rydsim::ConfigError("schedule dump: --dt must be > 0");

    std::string text = "t_us,omega,delta,local_amplitude\n";
    const double t_end = built.schedule.total_time();
    for (double t = 0.0;; t += args.dt) {
        const double tt = std::min(t, t_end);
        text += format_double(tt) + "," + format_double(built.schedule.omega(tt)) +
                "," + format_double(built.schedule.delta(tt)) + "," +
                format_double(built.schedule.local_amplitude(tt)) + "\n";
        if (tt >= t_end) break;
    }
    emit(text, args.out);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Rydberg array dynamics: simulate, analyze snapshots, reduced theory"};
    app.require_subcommand(1);

    SimulateArgs sim;
    CLI::App* simulate = app.add_subcommand("simulate", "run a configured protocol");
    simulate->add_option("--config", sim.config_path, "JSON config file")->required();
    simulate->add_flag("--gnuplot", sim.gnuplot, "emit gnuplot scripts");
    simulate->callback([&] { run_simulate_cmd(sim); });

    AnalyzeArgs an;
    CLI::App* analyze = app.add_subcommand("analyze", "analyze snapshot files");
    analyze->add_option("--run-dir", an.run_dir, "run directory from simulate");
    analyze->add_option("files", an.files, "snapshot files");
    analyze->add_option("--out", an.out_dir, "output directory");
    analyze->add_flag("--gnuplot", an.gnuplot, "emit gnuplot scripts");
    bool no_postselect = false;
    analyze->add_flag("--no-postselect", no_postselect, "keep all shots");
    int max_chain = 0, max_defects = 0, resamples = 0;
    auto* oc = analyze->add_option("--max-chain", max_chain,
                                   "longest allowed run of consecutive excitations");
    auto* od = analyze->add_option("--max-defects", max_defects,
                                   "defect-count postselection threshold");
    auto* ors = analyze->add_option("--resamples", resamples, "bootstrap resamples");
    analyze->add_flag("--radial", an.radial, "emit radial profiles and domain radii");
    analyze->add_flag("--walls", an.walls, "emit per-row wall positions");
    analyze->add_flag("--oz", an.oz, "fit with the Ornstein-Zernike exponent");
    analyze->callback([&] {
        if (no_postselect) an.postselect = false;
        if (oc->count()) an.max_chain = max_chain;
        if (od->count()) an.max_defects = max_defects;
        if (ors->count()) an.resamples = resamples;
        run_analyze_cmd(an);
    });

    CLI::App* theory = app.add_subcommand("theory", "reduced-theory calculators");
    theory->require_subcommand(1);

    LandauArgs landau;
    CLI::App* landau_cmd = theory->add_subcommand("landau", "order-parameter trajectory");
    landau_cmd->add_option("--q", landau.q, "quadratic coefficient");
    landau_cmd->add_option("--lambda", landau.lambda, "quartic coefficient");
    landau_cmd->add_option("--phi0", landau.phi0, "initial value");
    landau_cmd->add_option("--dphi0", landau.dphi0, "initial velocity");
    landau_cmd->add_option("--t-end", landau.t_end, "trajectory length");
    landau_cmd->add_option("--dt", landau.dt, "sample spacing");
    landau_cmd->add_option("--out", landau.out, "write CSV here instead of stdout");
    landau_cmd->callback([&] { run_landau_cmd(landau); });

    GaussianArgs gauss;
    CLI::App* gauss_cmd =
        theory->add_subcommand("gaussian", "coupled mode dynamics and frequency ratio");
    gauss_cmd->add_option("--preset", gauss.preset, "disordered or ordered")
        ->check(CLI::IsMember({"disordered", "ordered"}));
    gauss_cmd->add_option("--out", gauss.out, "write trajectory CSV here");
    gauss_cmd->callback([&] { run_gaussian_cmd(gauss); });

    KzmArgs kzm;
    CLI::App* kzm_cmd = theory->add_subcommand("kzm", "sweep-rate freeze-out scales");
    kzm_cmd->add_option("--tau", kzm.tau, "sweep timescale");
    kzm_cmd->add_option("--t0", kzm.t0, "microscopic time");
    kzm_cmd->add_option("--l0", kzm.l0, "microscopic length");
    kzm_cmd->add_option("--nu", kzm.nu, "correlation-length exponent");
    kzm_cmd->add_option("--z", kzm.z, "dynamical exponent");
    kzm_cmd->callback([&] { run_kzm_cmd(kzm); });

    RateArgs rate;
    CLI::App* rate_cmd =
        theory->add_subcommand("coarsening-rate", "growth-rate vs detuning");
    rate_cmd->add_option("--delta-over-omega", rate.delta_over_omega, "detuning ratios")
        ->required();
    rate_cmd->add_option("--reference-offset", rate.reference_offset,
                         "offset normalized to rate 1");
    rate_cmd->add_option("--out", rate.out, "write CSV here instead of stdout");
    rate_cmd->callback([&] { run_rate_cmd(rate); });

    ScalingArgs scaling;
    CLI::App* scaling_cmd =
        theory->add_subcommand("scaling-f", "two-branch growth scaling function");
    scaling_cmd->add_option("--x-s", scaling.x_s, "branch switch point");
    scaling_cmd->add_option("--x-min", scaling.x_min, "grid start");
    scaling_cmd->add_option("--x-max", scaling.x_max, "grid end");
    scaling_cmd->add_option("--n", scaling.n, "grid points");
    scaling_cmd->add_option("--out", scaling.out, "write CSV here instead of stdout");
    scaling_cmd->callback([&] { run_scaling_cmd(scaling); });

    CLI::App* schedule = app.add_subcommand("schedule", "drive schedule utilities");
    schedule->require_subcommand(1);
    DumpArgs dump;
    CLI::App* dump_cmd = schedule->add_subcommand("dump", "tabulate drive waveforms");
    dump_cmd->add_option("--config", dump.config_path, "JSON config file")->required();
    dump_cmd->add_option("--hold-time", dump.hold_time,
                         "hold time (default: first configured)");
    dump_cmd->add_option("--dt", dump.dt, "sample spacing");
    dump_cmd->add_option("--out", dump.out, "write CSV here instead of stdout");
    dump_cmd->callback([&] { run_dump_cmd(dump); });

    try {
        app.parse(argc, argv);
        return 0;
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const rydsim::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const rydsim::IoError& e) {
        std::cerr << "i/o error: " << e.what() << "\n";
        return 3;
    } catch (const fs::filesystem_error& e) {
        std::cerr << "i/o error: " << e.what() << "\n";
        return 3;
    } catch (const rydsim::NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
