#pragma once

// Experiment configuration: a small TOML-syntax reader (sections of scalar
// and flat-array keys cover every experiment knob) plus validation into a
// typed config, rejecting unknown keys up front.

#include <cstdint>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "rpfcone/potential.hpp"
#include "rpfcone/systems.hpp"

namespace rpfcone {

using TomlScalar = std::variant<std::string, std::int64_t, double, bool>;
struct TomlValue {
    bool is_array = false;
    TomlScalar scalar;
    std::vector<TomlScalar> array;
};
using TomlTable = std::map<std::string, std::map<std::string, TomlValue>>;

TomlTable parse_toml_text(const std::string& text);

struct SystemConfig {
    std::string kind;                     // gauss | doubling | interval | full-shift | tower
    std::vector<double> symbol_weights;   // full-shift
    std::vector<double> branch_cuts;      // interval: partition points of [0,1)
    std::vector<double> branch_log_weights;
    int tower_atoms = 5;                  // tower: geometric-tails template
    double tower_q = 1.0, tower_p = 0.6931471805599453, tower_beta = 0.5;
};

struct DiscretizationConfig {
    int nodes = 64;
    long truncation_N = 10000;
    int r_max = 20;
    int k_depth = 2;
    int shift_depth = 3;
};

struct ConeConfig {
    double a = 0.0, b = 0.0, c = 0.0, eps0 = 0.1;       // tower cone
    double s = 4.0, Q = 1.0, alpha = 1.0, xi = 2.0;     // log-Holder cone
};

struct TwistConfig {
    std::string u = "zero";   // zero | constant | log-x | coordinate | first-symbol
    double coef = 1.0;        // constant value or ln-coefficient
    std::vector<double> symbol_values;  // first-symbol observable table
    double rho = 0.05;
    int k_points = 16;
    std::vector<double> z_re, z_im;  // explicit twist list (paired)
};

struct SolverConfig {
    double tol = 1e-13;
    int max_iters = 10000;
    std::string boundary = "periodic";  // periodic | truncated
    int window = 1;                     // stages per window (stage repeated)
};

struct StatisticsConfig {
    int n = 1000;
    int trials = 10000;
    std::uint64_t seed = 1;
};

struct OutputConfig {
    std::string dir;     // empty => CLI flag / env var / cwd
    std::string prefix = "report";
};

struct ExperimentConfig {
    SystemConfig system;
    DiscretizationConfig discretization;
    ConeConfig cone;
    TwistConfig twist;
    SolverConfig solver;
    StatisticsConfig statistics;
    OutputConfig output;
    std::string raw_text;  // verbatim config, hashed into the manifest
};

// Parses and validates; unknown sections/keys and module-precondition
// violations raise ValidationError before any computation.
ExperimentConfig load_config_text(const std::string& text);
ExperimentConfig load_config_file(const std::string& path);

// Instantiates the configured pieces.
std::shared_ptr<const SystemStage> make_stage(const ExperimentConfig& cfg);
Potential make_potential(const ExperimentConfig& cfg,
                         const std::shared_ptr<const Grid>& grid);

// FNV-1a over the verbatim config text.
std::uint64_t config_hash(const std::string& text);

}  // namespace rpfcone
