#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace qbm::app {

struct Diagnostic {
    int line;  // 0 when not tied to a config line
    std::string message;
};

struct ConfigError : std::runtime_error {
    int line;
    ConfigError(int l, const std::string& msg)
        : std::runtime_error("config line " + std::to_string(l) + ": " + msg), line(l) {}
};

/// Resolved experiment description. Physics is carried either in the
/// (gamma, Q, kT, omega0) parameterization or as the (lambda, A0) rates;
/// exactly one per config file.
struct ExperimentConfig {
    std::string preset = "custom";  // fig1 | fig2a | fig2b | fig3 | custom

    // physics
    double omega0 = 5.0;
    double hbar = 1.0;
    bool has_gamma_q = false;
    double gamma = 0.0;
    double q_scale = 1.0;
    double kT = 0.0;
    bool has_rates = false;
    double lambda = 0.0;
    double a0 = 0.0;
    double theta = 0.0;                  // initial mixing angle
    std::vector<double> theta_list;      // fig1 sweep
    std::vector<double> kT_over_delta;   // fig3 sweep

    // numerics
    double dt = 0.005;
    double t_end = 25.0;
    int n_traj = 500;
    std::uint64_t master_seed = 20240101;
    int record_stride = 10;
    unsigned threads = 0;

    // output
    std::string out_dir = ".";
    bool svg = false;

    double delta() const { return hbar * omega0; }
    double resolved_lambda() const;
    double resolved_a0() const;
    // gamma/kT realization of (lambda, a0) with Q = q_scale; requires a0 > 0.
    double resolved_gamma() const;
    double resolved_kT() const;
    std::string describe() const;  // one-line resolved summary for CSV comments
};

ExperimentConfig preset_config(const std::string& name);

// Parses a key-value file with [section] headers and '#' comments; unknown
// keys and malformed lines throw ConfigError with the offending line number.
ExperimentConfig parse_config_file(const std::string& path);

// Full static check; empty list iff run_experiment would start.
std::vector<Diagnostic> validate(const ExperimentConfig& cfg);

}  // namespace qbm::app
