#include "rydsim/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "rydsim/errors.hpp"
#include "rydsim/quantum.hpp"

namespace rydsim {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& field, const std::string& what) {
    throw ConfigError("config field `" + field + "`: " + what);
}

void check_known_keys(const json& obj, const std::string& scope,
                      const std::set<std::string>& known) {
    for (const auto& [key, value] : obj.items()) {
        (void)value;
        if (!known.count(key))
            fail(scope.empty() ? key : scope + "." + key, "unknown key");
    }
}

template <typename T>
void read_field(const json& obj, const std::string& scope, const char* key, T& out) {
    if (!obj.contains(key)) return;
    try {
        out = obj.at(key).get<T>();
    } catch (const json::exception& e) {
        fail(scope.empty() ? key : scope + "." + key, e.what());
    }
}

void parse_lattice(const json& obj, LatticeConfig& out) {
    check_known_keys(obj, "lattice",
                     {"width", "height", "spacing_um", "v_nn_mhz", "boundary",
                      "cutoff"});
    read_field(obj, "lattice", "width", out.width);
    read_field(obj, "lattice", "height", out.height);
    read_field(obj, "lattice", "spacing_um", out.spacing_um);
    read_field(obj, "lattice", "v_nn_mhz", out.v_nn_mhz);
    if (obj.contains("boundary")) {
        try {
            out.boundary = boundary_from_string(obj.at("boundary").get<std::string>());
        } catch (const std::exception& e) {
            fail("lattice.boundary", e.what());
        }
    }
    if (obj.contains("cutoff")) {
        try {
            out.cutoff = cutoff_from_string(obj.at("cutoff").get<std::string>());
        } catch (const std::exception& e) {
            fail("lattice.cutoff", e.what());
        }
    }
}

void parse_schedule(const json& obj, ScheduleConfig& out) {
    check_known_keys(obj, "schedule",
                     {"protocol", "omega_mhz", "delta_start_mhz", "delta_end_mhz",
                      "sweep_rate", "omega_ramp_us", "hold_times_us", "order",
                      "square_half_width", "wall_x", "pin_amplitude_mhz",
                      "quench_ramp_us", "delta_high_mhz", "delta_final_mhz",
                      "settle_us"});
    read_field(obj, "schedule", "protocol", out.protocol);
    read_field(obj, "schedule", "omega_mhz", out.omega_mhz);
    read_field(obj, "schedule", "delta_start_mhz", out.delta_start_mhz);
    read_field(obj, "schedule", "delta_end_mhz", out.delta_end_mhz);
    read_field(obj, "schedule", "sweep_rate", out.sweep_rate);
    read_field(obj, "schedule", "omega_ramp_us", out.omega_ramp_us);
    read_field(obj, "schedule", "hold_times_us", out.hold_times_us);
    read_field(obj, "schedule", "order", out.order);
    read_field(obj, "schedule", "square_half_width", out.square_half_width);
    read_field(obj, "schedule", "wall_x", out.wall_x);
    read_field(obj, "schedule", "pin_amplitude_mhz", out.pin_amplitude_mhz);
    read_field(obj, "schedule", "quench_ramp_us", out.quench_ramp_us);
    read_field(obj, "schedule", "delta_high_mhz", out.delta_high_mhz);
    read_field(obj, "schedule", "delta_final_mhz", out.delta_final_mhz);
    read_field(obj, "schedule", "settle_us", out.settle_us);
}

void parse_analysis(const json& obj, AnalysisConfig& out) {
    check_known_keys(obj, "analysis",
                     {"postselect", "max_chain", "max_defects",
                      "bootstrap_resamples", "radial", "walls", "oz_exponent"});
    read_field(obj, "analysis", "postselect", out.postselect);
    read_field(obj, "analysis", "max_chain", out.max_chain);
    read_field(obj, "analysis", "max_defects", out.max_defects);
    read_field(obj, "analysis", "bootstrap_resamples", out.bootstrap_resamples);
    read_field(obj, "analysis", "radial", out.radial);
    read_field(obj, "analysis", "walls", out.walls);
    read_field(obj, "analysis", "oz_exponent", out.oz_exponent);
}

}  // namespace

void ExperimentConfig::validate() const {
    if (lattice.width < 1 || lattice.height < 1)
        fail("lattice.width/height", "must be >= 1");
    if (!(lattice.spacing_um > 0)) fail("lattice.spacing_um", "must be positive");
    if (!(lattice.v_nn_mhz > 0)) fail("lattice.v_nn_mhz", "must be positive");

    if (engine != "exact" && engine != "meanfield")
        fail("engine", "expected \"exact\" or \"meanfield\", got \"" + engine + "\"");
    if (engine == "exact" && lattice.width * lattice.height > kMaxExactSites)
        fail("engine", "exact engine supports at most " +
                           std::to_string(kMaxExactSites) + " sites, lattice has " +
                           std::to_string(lattice.width * lattice.height));
    if (shots < 1) fail("shots", "must be >= 1");
    if (output_dir.empty()) fail("output_dir", "must not be empty");

    const auto& s = schedule;
    if (s.protocol != "sweep_hold" && s.protocol != "local_domain" &&
        s.protocol != "ordered_quench")
        fail("schedule.protocol", "unknown protocol \"" + s.protocol + "\"");
    if (!(s.omega_mhz > 0)) fail("schedule.omega_mhz", "must be positive");
    if (!(s.sweep_rate > 0)) fail("schedule.sweep_rate", "must be positive");
    if (s.omega_ramp_us < 0) fail("schedule.omega_ramp_us", "must be >= 0");
    if (s.hold_times_us.empty()) fail("schedule.hold_times_us", "must not be empty");
    for (double t : s.hold_times_us)
        if (t < 0) fail("schedule.hold_times_us", "hold times must be >= 0");
    if (!(s.delta_start_mhz < 0))
        fail("schedule.delta_start_mhz", "sweep must start at negative detuning");
    if (s.protocol != "ordered_quench" && !(s.delta_end_mhz > 0))
        fail("schedule.delta_end_mhz", "sweep must end at positive detuning");

    if (s.protocol == "local_domain") {
        if (s.order != "af1" && s.order != "af2" && s.order != "square" &&
            s.order != "zigzag")
            fail("schedule.order", "unknown order \"" + s.order + "\"");
        if (s.order == "square") {
            if (s.square_half_width < 0)
                fail("schedule.square_half_width", "must be >= 0");
            const int side = 2 * s.square_half_width + 1;
            if (side > lattice.width || side > lattice.height)
                fail("schedule.square_half_width", "square exceeds the lattice");
        }
        if (s.order == "zigzag" && s.wall_x >= 0 && s.wall_x > lattice.width)
            fail("schedule.wall_x", "wall outside the lattice");
        if (s.pin_amplitude_mhz > 0)
            fail("schedule.pin_amplitude_mhz",
                 "pin shifts are light shifts toward |g>, must be <= 0");
        if (s.quench_ramp_us < 0) fail("schedule.quench_ramp_us", "must be >= 0");
    }
    if (s.protocol == "ordered_quench") {
        if (!(s.delta_high_mhz > 0))
            fail("schedule.delta_high_mhz", "must be positive");
        if (s.delta_final_mhz > s.delta_high_mhz)
            fail("schedule.delta_final_mhz", "must not exceed delta_high_mhz");
        if (s.settle_us < 0) fail("schedule.settle_us", "must be >= 0");
        if (s.quench_ramp_us < 0) fail("schedule.quench_ramp_us", "must be >= 0");
    }

    if (analysis.max_chain < 1) fail("analysis.max_chain", "must be >= 1");
    if (analysis.max_defects < 0) fail("analysis.max_defects", "must be >= 0");
    if (analysis.bootstrap_resamples < 2)
        fail("analysis.bootstrap_resamples", "must be >= 2");
}

ExperimentConfig parse_config(const std::string& text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config parse error: ") + e.what());
    }
    if (!root.is_object()) throw ConfigError("config root must be a JSON object");

    check_known_keys(root, "",
                     {"lattice", "schedule", "analysis", "engine", "shots", "seed",
                      "output_dir"});

    ExperimentConfig cfg;
    if (root.contains("lattice")) parse_lattice(root.at("lattice"), cfg.lattice);
    if (root.contains("schedule")) parse_schedule(root.at("schedule"), cfg.schedule);
    if (root.contains("analysis")) parse_analysis(root.at("analysis"), cfg.analysis);
    read_field(root, "", "engine", cfg.engine);
    read_field(root, "", "shots", cfg.shots);
    read_field(root, "", "seed", cfg.seed);
    read_field(root, "", "output_dir", cfg.output_dir);
    cfg.validate();
    return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_config(buffer.str());
}

std::string canonical_config_text(const ExperimentConfig& config) {
    json root;
    root["lattice"] = {{"width", config.lattice.width},
                       {"height", config.lattice.height},
                       {"spacing_um", config.lattice.spacing_um},
                       {"v_nn_mhz", config.lattice.v_nn_mhz},
                       {"boundary", to_string(config.lattice.boundary)},
                       {"cutoff", to_string(config.lattice.cutoff)}};
    const auto& s = config.schedule;
    root["schedule"] = {{"protocol", s.protocol},
                        {"omega_mhz", s.omega_mhz},
                        {"delta_start_mhz", s.delta_start_mhz},
                        {"delta_end_mhz", s.delta_end_mhz},
                        {"sweep_rate", s.sweep_rate},
                        {"omega_ramp_us", s.omega_ramp_us},
                        {"hold_times_us", s.hold_times_us},
                        {"order", s.order},
                        {"square_half_width", s.square_half_width},
                        {"wall_x", s.wall_x},
                        {"pin_amplitude_mhz", s.pin_amplitude_mhz},
                        {"quench_ramp_us", s.quench_ramp_us},
                        {"delta_high_mhz", s.delta_high_mhz},
                        {"delta_final_mhz", s.delta_final_mhz},
                        {"settle_us", s.settle_us}};
    root["analysis"] = {{"postselect", config.analysis.postselect},
                        {"max_chain", config.analysis.max_chain},
                        {"max_defects", config.analysis.max_defects},
                        {"bootstrap_resamples", config.analysis.bootstrap_resamples},
                        {"radial", config.analysis.radial},
                        {"walls", config.analysis.walls},
                        {"oz_exponent", config.analysis.oz_exponent}};
    root["engine"] = config.engine;
    root["shots"] = config.shots;
    root["seed"] = config.seed;
    root["output_dir"] = config.output_dir;
    return root.dump(2) + "\n";
}

std::uint64_t config_hash(const ExperimentConfig& config) {
    const std::string text = canonical_config_text(config);
    std::uint64_t hash = 0xcbf29ce484222325ull;
    for (unsigned char c : text) {
        hash ^= c;
        hash *= 0x100000001b3ull;
    }
    return hash;
}

}  // namespace rydsim
