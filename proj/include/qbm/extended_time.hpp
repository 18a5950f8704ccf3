#pragma once

#include <Eigen/Dense>

#include "qbm/bath.hpp"
#include "qbm/quantum.hpp"

namespace qbm {

/// Classical phase space extended by the pair (q0 = c t, p0 = -E/c).
struct ExtendedPhasePoint {
    Eigen::VectorXd q;
    Eigen::VectorXd p;
    double q0 = 0.0;
    double p0 = 0.0;
};

/// Gaussian time wave-packet, a coherent state labeled by
/// z = (Omega tau - i eps / (hbar Omega)) / sqrt(2).
struct TimeWavePacket {
    double tau = 0.0;    // time centroid
    double eps = 0.0;    // energy
    double omega_width;  // width parameter Omega (inverse time)
    double hbar = 1.0;

    Complex label() const;

    // wave function chi_z(T) up to a global phase
    Complex wave(double t_coord) const;
};

// <chi_z | chi_w> for coherent-state labels.
Complex coherent_overlap(Complex z, Complex w);

// <chi_z| Pi |chi_z> = -eps/c by Simpson quadrature over the explicit Gaussian.
double pi_expectation_quadrature(const TimeWavePacket& chi, double c_light);

/// Symplectic-form coefficients on the (tau, eps) manifold, by finite
/// differences of the coherent-state overlap: omega_jk = 2 hbar Im<d_j chi|d_k chi>.
/// scale_tau/scale_eps rescale the coordinates (x1, x2) = (scale_tau*tau, scale_eps*eps).
Eigen::Matrix2d symplectic_form_coeffs(const TimeWavePacket& base, double scale_tau = 1.0,
                                       double scale_eps = 1.0);

struct ExtendedState {
    ExtendedPhasePoint phase;
    QuantumState psi;
    TimeWavePacket chi;
    double u = 0.0;         // universal time
    double s_cl = 0.0;
};

/// One universal-time step of the extended flow for an oscillator-bath
/// classical subsystem. (q,p) and psi follow the same Strang splitting as the
/// microscopic coupled integrator; q0 advances by c du; tau drifts at unit rate
/// (analytic, d_u tau = 1); eps is constant for couplings without explicit tau
/// dependence (the only case supported).
ExtendedState extended_flow_step(ExtendedState state, const BathRealization& bath_template,
                                 const SystemOps& ops, double c_light, double du);

struct BrokenSymmetryResult {
    double omega_zeta_p;   // expected -1
    double zeta_rate;      // fitted d(zeta)/du, expected c
    double p_drift;        // max |p(u) - p(0)|, expected 0
};

/// Checks the broken-symmetry structure for the time-translation generator Pi:
/// zeta = c (tau - tau0), p = <Pi> = -eps/c along an integrated flow.
BrokenSymmetryResult broken_symmetry_check(const TimeWavePacket& chi0, double c_light,
                                           double du, int n_steps);

}  // namespace qbm
