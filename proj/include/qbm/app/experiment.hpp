#pragma once

#include <string>
#include <vector>

#include "qbm/app/config.hpp"
#include "qbm/fokker_planck.hpp"

namespace qbm::app {

struct RunOutcome {
    int exit_code = 0;  // 0 ok, 1 numerical fault, 2 config fault
    std::string report;
};

/// Runs the preset pipeline described by cfg and writes its artifacts
/// (CSV, optional SVG, divergence report) into cfg.out_dir.
RunOutcome run_experiment(const ExperimentConfig& cfg);

// --- analysis helpers shared with the verification suite ---

double linear_slope(const std::vector<double>& x, const std::vector<double>& y);

// First grid time with P1 below the threshold; t_end + dt if never reached.
double departure_time(const qbm::BlochSeries& s, double threshold);

// Exponential rate of P1+1 after t_a, fitted on ln(P1+1) over an integer
// number of 2*omega oscillation periods (returns a positive rate).
double fit_asymptotic_rate(const qbm::BlochSeries& s, double t_a, double omega0, double a0);

}  // namespace qbm::app
