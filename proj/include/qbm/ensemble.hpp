#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "qbm/fokker_planck.hpp"
#include "qbm/langevin.hpp"
#include "qbm/parallel.hpp"

namespace qbm {

struct EnsembleConfig {
    int n_traj;
    std::uint64_t master_seed;
    double dt;
    double t_end;
    int record_stride = 1;
    unsigned n_threads = 0;  // 0 -> hardware parallelism
    Scheme scheme = Scheme::ExactExponential2x2;
};

struct EnsembleStats {
    std::vector<double> t;
    std::array<std::vector<double>, 3> mean;
    std::array<std::vector<double>, 3> stderr_;
    double b1eq = 0.0;      // tail average over the final 20% of the grid
    double b1eq_err = 0.0;
};

/// Runs n_traj Brownian trajectories in parallel; per-trajectory seeds derived
/// from the master seed by counter-based mixing. Results are reduced in index
/// order, so the output is bit-reproducible for any thread count.
std::vector<TrajectoryRecord> run_trajectories(const QuantumState& psi0, const SystemOps& ops,
                                               double gamma, double kT,
                                               const EnsembleConfig& cfg);

EnsembleStats ensemble_stats(const std::vector<TrajectoryRecord>& records);

EnsembleStats run_ensemble(const QuantumState& psi0, const SystemOps& ops, double gamma,
                           double kT, const EnsembleConfig& cfg);

/// Correlation defects testing the factorization assumptions:
/// <<xi b_i>> - <<xi>><<b_i>> and <<xi^2 b_i>> - <<xi^2>><<b_i>>.
struct FactorizationReport {
    std::vector<double> t;
    std::array<std::vector<double>, 3> first_order;    // per component
    std::array<std::vector<double>, 3> second_order;
    std::array<std::vector<double>, 3> first_order_stderr;
    std::array<std::vector<double>, 3> second_order_stderr;
    double max_first_order = 0.0;
    double max_second_order = 0.0;
};

FactorizationReport factorization_diagnostic(const std::vector<TrajectoryRecord>& records);

struct DivergenceReport {
    std::array<double, 3> max_abs_dev{};       // max |ensemble - FPE| per component
    std::array<double, 3> max_sigma_dev{};     // same in units of stderr
    std::array<double, 3> frac_within_3se{};   // fraction of grid points within 3 stderr
    double first_p1_crossing = -1.0;           // first t with |dP1| > 3 stderr, -1 if none
    double ensemble_b1eq = 0.0;
    double ensemble_b1eq_err = 0.0;
    double fpe_p1_end = 0.0;
    std::string summary() const;
};

/// Propagates the same initial state through the transport equation and the
/// trajectory ensemble and reports where they diverge.
DivergenceReport compare_lle_fpe(const QuantumState& psi0, const SystemOps& ops,
                                 const TwoLevelParams& params, double gamma, double kT,
                                 const EnsembleConfig& cfg);

}  // namespace qbm
