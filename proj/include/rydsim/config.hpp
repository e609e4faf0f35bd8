#pragma once

// Experiment configuration: JSON file schema, validation with field-path
// diagnostics, canonical serialization, and a content hash for run
// manifests.  Frequencies in config files are plain MHz (field names carry
// the _mhz suffix); engines consume angular units, converted downstream.

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "rydsim/lattice.hpp"

namespace rydsim {

struct LatticeConfig {
    int width = 4;
    int height = 4;
    double spacing_um = 1.0;
    double v_nn_mhz = 11.69;
    Boundary boundary = Boundary::open;
    Cutoff cutoff = Cutoff::third_nearest;
};

struct ScheduleConfig {
    std::string protocol = "sweep_hold";  // sweep_hold | local_domain | ordered_quench
    double omega_mhz = 6.0;
    double delta_start_mhz = -24.0;
    double delta_end_mhz = 18.0;
    double sweep_rate = 0.477;            // (delta_end - delta_start)/(omega^2 T)
    double omega_ramp_us = 0.2;
    std::vector<double> hold_times_us = {0.0};

    // local_domain protocol
    std::string order = "square";         // af1 | af2 | square | zigzag
    int square_half_width = 2;
    int wall_x = -1;                      // -1: lattice midline
    double pin_amplitude_mhz = 0.0;       // 0: default to 4x omega, applied negative
    double quench_ramp_us = 0.05;

    // ordered_quench protocol
    double delta_high_mhz = 19.8;
    double delta_final_mhz = 12.0;
    double settle_us = 0.05;
};

struct AnalysisConfig {
    bool postselect = true;
    int max_chain = 4;
    int max_defects = 4;
    int bootstrap_resamples = 1000;
    bool radial = false;       // radial profiles + domain radius per hold time
    bool walls = false;        // per-row wall positions per hold time
    bool oz_exponent = false;  // exponent-1 structure-factor fit variant
};

struct ExperimentConfig {
    LatticeConfig lattice;
    ScheduleConfig schedule;
    AnalysisConfig analysis;
    std::string engine = "exact";  // exact | meanfield
    int shots = 200;
    std::uint64_t seed = 1;
    std::string output_dir = "run";

    // Throws ConfigError naming the offending field ("schedule.protocol: ...").
    void validate() const;
};

// Parses and validates; unknown keys are errors (typo protection).  Throws
// IoError when the file cannot be read and ConfigError on schema problems.
ExperimentConfig load_config(const std::filesystem::path& path);
ExperimentConfig parse_config(const std::string& text);

// Key-sorted JSON text; the identity for hashing and the run-directory copy.
std::string canonical_config_text(const ExperimentConfig& config);

// FNV-1a over the canonical text.
std::uint64_t config_hash(const ExperimentConfig& config);

}  // namespace rydsim
