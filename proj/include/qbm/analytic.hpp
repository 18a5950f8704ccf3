#pragma once

#include "qbm/quantum.hpp"

namespace qbm {

// High-temperature (A0 ~ 0, lambda > 0) solution for an eigenstate start:
// P(t) = e^{-2 lambda t} ((-1)^{sigma+1}, 0, 0), sigma in {0, 1}.
BlochVector stationary_solution(int sigma, double lambda, double t);

// Solution for the equal superposition start (theta = pi/4), lambda < omega0:
// P(t) = e^{-lambda t} (0, -(w0/w) sin wt, cos wt + (lambda/w) sin wt), w = sqrt(w0^2-l^2).
BlochVector nonstationary_solution(double omega0, double lambda, double t);

// Zero-temperature asymptotic approach to the ground state for t >= t_a,
// with w = sqrt(w0^2 - A0^2/4) and sin(phi) = w/w0.
BlochVector asymptotic_decay(double a, double t_a, double omega0, double a0, double t);

struct EquilibriumCurves {
    double f1;  // -A0 / (2 lambda + A0)
    double f2;  // -A0 / (4 lambda + A0)
};

EquilibriumCurves equilibrium_curves(double lambda, double a0);

}  // namespace qbm
