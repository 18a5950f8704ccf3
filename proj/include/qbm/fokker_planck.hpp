#pragma once

#include <vector>

#include "qbm/quantum.hpp"

namespace qbm {

struct FpeConfig {
    double dt;
    double t_end;
    int record_stride = 1;
};

struct BlochSeries {
    std::vector<double> t;
    std::vector<BlochVector> p;
};

// Right-hand side of the nonlinear average-density-matrix transport equation:
// i hbar drho = [H0 - i x (gamma/hbar) Tr([x,H0] rho), rho] - (i gamma kT/hbar) [x,[x,rho]]
Matrix fpe_rhs(const Matrix& rho_av, const SystemOps& ops, double gamma, double kT);

// Two-level Bloch form of the same equation.
BlochVector bloch_fpe_rhs(const BlochVector& p, double omega0, double lambda, double a0);

struct PfrResult {
    BlochSeries series;
    bool entered_asymptotic = false;
    double t_a = 0.0;  // first time with P1 < -1+eps and |P2| < eps
    double a = 0.0;    // P3(t_a)
};

inline constexpr double kAsymptoticEps = 0.02;

// Zero-temperature (lambda = 0) dissipative flow.
PfrResult pfr_flow(const BlochVector& p0, double omega0, double a0, const FpeConfig& cfg);

// RK4 propagation of the Bloch-form transport equation.
BlochSeries solve_fpe_bloch(const BlochVector& p0, double omega0, double lambda, double a0,
                            const FpeConfig& cfg);

struct AveragedState {
    Matrix rho_av;
    double t;
};

// Matrix-form propagation for general small N.
std::vector<AveragedState> solve_fpe(const Matrix& rho0, const SystemOps& ops, double gamma,
                                     double kT, const FpeConfig& cfg);

}  // namespace qbm
