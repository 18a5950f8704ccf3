#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "qbm/environment.hpp"
#include "qbm/quantum.hpp"

namespace qbm {

enum class Scheme { ExactExponential2x2, RenormalizedRK4 };

struct LangevinConfig {
    double dt;            // must equal the noise grid step s
    double t_end;
    Scheme scheme = Scheme::ExactExponential2x2;
    bool include_w0 = false;   // retain the W0 term for sampled kernels
    int record_stride = 1;     // record every k-th step (step 0 always recorded)
};

struct TrajectoryRecord {
    std::vector<double> t;
    std::vector<BlochVector> bloch;  // filled for N = 2
    std::vector<Matrix> rho;         // filled for N > 2
    std::vector<double> xi;          // noise value active at each recorded time
    std::uint64_t seed = 0;
};

// One step of the stochastic Schroedinger-Langevin flow: psi' = exp(-i H_eff dt/hbar) psi
// with H_eff = H0 - x (xi + f), friction f frozen at step start.
QuantumState sle_step(const QuantumState& psi, double xi, double dt, const SystemOps& ops,
                      double friction, Scheme scheme = Scheme::ExactExponential2x2);

// Liouville-Langevin step, rho' = U rho U^dagger with the same effective Hamiltonian.
Matrix lle_step(const Matrix& rho, double xi, double dt, const SystemOps& ops, double friction);

struct BlochRhsParams {
    double q_scale;
    double hbar;
    double omega0;
    double a0;
};

// Right-hand side of the two-level Langevin flow in Bloch form.
BlochVector bloch_sle_rhs(const BlochVector& b, double xi, const BlochRhsParams& p);

/// Propagates one Brownian trajectory of a two-level system under Ohmic friction.
TrajectoryRecord run_trajectory(const QuantumState& psi0, const SystemOps& ops, double gamma,
                                NoiseProcess env, const LangevinConfig& cfg);

/// General N-level path with a sampled memory kernel (non-Markovian friction).
TrajectoryRecord run_trajectory_kernel(const QuantumState& psi0, const SystemOps& ops,
                                       const MemoryKernel& kernel, NoiseProcess env,
                                       const LangevinConfig& cfg);

}  // namespace qbm
