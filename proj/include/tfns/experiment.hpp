#pragma once

#include <cstdint>
#include <string>

namespace tfns::experiment {

struct InitialData {
    std::string kind = "taylor-green";  // taylor-green | random-bandlimited | file
    std::uint64_t seed = 1;
    int band = 2;
    double amplitude = 0.1;
    std::string path;  // kind == file
};

struct EstimatesParams {
    double p = 2.0;
    double q = 2.0;
    double gns_p = 1.5;
    int ensemble = 20;
    std::uint64_t seed = 11;
};

struct GronwallParams {
    std::string kind = "saturating";  // saturating | solver-difference
    double g = 1.0;
    int nodes = 256;
};

struct SpecfunParams {
    std::string function = "mittag_leffler";  // mittag_leffler | mainardi | gamma | mainardi_moment
    double beta = 1.0;
    double z_min = -10.0;
    double z_max = 0.0;
    int count = 21;
};

struct FracopsParams {
    std::string op = "caputo";  // caputo | rl
    std::string input;
};

struct ExperimentConfig {
    std::string experiment = "simulate";
    double alpha = 0.8;
    int dim = 2;
    int resolution = 32;
    double t_end = 1.0;
    int steps = 128;
    InitialData initial_data;
    double picard_tol = 1e-12;
    int picard_max_iters = 50;
    std::string output_dir = "out";
    int threads = 0;  // 0 keeps the runtime default
    EstimatesParams estimates;
    GronwallParams gronwall;
    SpecfunParams specfun;
    FracopsParams fracops;
};

// Parses the JSON config text; unknown or ill-typed keys raise config_error
// naming the key. See README for the schema.
ExperimentConfig parse_config(const std::string& json_text);
ExperimentConfig load_config(const std::string& path);
void validate(const ExperimentConfig& cfg);

// Runs one experiment, writing CSV diagnostics, binary snapshots, and
// manifest.json into output_dir. Deterministic for fixed config and seed.
// Throws config_error for invalid configs and the numerical error types for
// solver failures; the CLI maps these to exit codes.
void run(const ExperimentConfig& cfg);

}  // namespace tfns::experiment
