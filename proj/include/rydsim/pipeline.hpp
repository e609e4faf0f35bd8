#pragma once

// End-to-end runners behind the CLI: `simulate` drives an engine over the
// hold-time grid and writes snapshot sets plus an observable series;
// `analyze` chains post-selection, correlations, fits, domain statistics,
// and energy budgets over snapshot files.  All outputs are deterministic
// for a fixed config and seed (no timestamps, fixed float formatting).

#include <filesystem>
#include <string>
#include <vector>

#include "rydsim/config.hpp"
#include "rydsim/schedule.hpp"

namespace rydsim {

inline constexpr char kVersion[] = "0.1.0";

// Fixed %.12g rendering shared by every table writer.
std::string format_double(double v);

// Writes atomically enough for our purposes: truncate + write + flush;
// throws IoError on failure.
void write_text_file(const std::filesystem::path& path, const std::string& content);

// RYDSIM_WORKERS environment variable; 1 (the byte-reproducible reference
// mode) when unset or invalid.
int worker_count();

Lattice lattice_from_config(const ExperimentConfig& cfg);

struct BuiltSchedule {
    DriveSchedule schedule;
    PinPattern pattern;          // empty vectors when the protocol has no pinning
    double quench_start = -1.0;  // when the local detuning begins ramping off; <0 none
    std::vector<std::string> warnings;
};

BuiltSchedule schedule_from_config(const ExperimentConfig& cfg, const Lattice& lat,
                                   double hold_time);

struct SimulateResult {
    std::filesystem::path run_dir;
    std::vector<std::filesystem::path> snapshot_files;
    std::filesystem::path series_csv;
    std::vector<std::string> warnings;
};

SimulateResult run_simulate(const ExperimentConfig& cfg, bool gnuplot = false);

struct AnalyzeResult {
    std::filesystem::path out_dir;
    std::filesystem::path table_csv;
    int n_inputs = 0;
};

AnalyzeResult run_analyze(const std::vector<std::filesystem::path>& snapshot_files,
                          const AnalysisConfig& options,
                          const std::filesystem::path& out_dir,
                          bool gnuplot = false);

// snapshots_*.txt files under a run directory, sorted by name.
std::vector<std::filesystem::path> find_snapshot_files(
    const std::filesystem::path& dir);

}  // namespace rydsim
