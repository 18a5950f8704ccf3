#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "qbm/environment.hpp"
#include "qbm/quantum.hpp"

namespace qbm {

/// Finite set of classical oscillators discretizing the environment.
/// Frequencies sit on a uniform midpoint grid over (0, omega_max]; the weights
/// are folded into the couplings, c_i = sqrt(2 J(w_i) w_i dw / pi) for m_i = 1,
/// so that Gamma(t) = sum_i c_i^2 cos(w_i t) / (m_i w_i^2).
struct BathOscillator {
    double omega;
    double mass;
    double coupling;
    double q;
    double p;
};

struct BathRealization {
    std::vector<BathOscillator> osc;
    double domega = 0.0;                                  // grid spacing / weight
    std::vector<std::pair<double, double>> initial;       // (q_i(0), p_i(0))

    double omega_max() const;
    double recurrence_time() const;                       // 2 pi / domega
    double energy() const;                                // sum of oscillator energies
};

BathRealization sample_thermal_bath(const SpectralDensity& j, int n_osc, double kT,
                                    std::uint64_t seed);

// J reconstructed from the discretization, for validation against the target.
double reconstruct_spectral_density(const BathRealization& bath, double omega);

// Memory kernel implied by the discrete bath: sum_i c_i^2 cos(w_i t)/(m_i w_i^2).
double bath_kernel(const BathRealization& bath, double t);

// Instantaneous bath force on the quantum system, -sum_i c_i q_i(t).
double bath_force(const BathRealization& bath);

// Free-evolution part of the force, from the retained initial conditions.
double bath_xi(const BathRealization& bath, double t);

struct CoupledState {
    QuantumState psi;
    BathRealization bath;
    double t = 0.0;
    double s_cl = 0.0;  // accumulated classical action (diagnostic)
};

/// One Strang step: half quantum / full classical leapfrog / half quantum.
/// test_mode_x, when set, freezes <x> at the given value for the classical force.
CoupledState step_coupled(CoupledState state, const SystemOps& ops, double dt,
                          const double* test_mode_x = nullptr);

// Splits the instantaneous bath force into (xi, f): xi from the free evolution
// of the initial conditions, f the backreaction remainder.
std::pair<double, double> effective_force(const CoupledState& state);

double total_energy(const CoupledState& state, const SystemOps& ops);

}  // namespace qbm
