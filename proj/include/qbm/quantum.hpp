#pragma once

#include <complex>
#include <stdexcept>
#include <Eigen/Dense>

namespace qbm {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

// Basis convention for two-level systems: |1> = (1,0)^T, |0> = (0,1)^T.

struct ContractViolation : std::logic_error {
    using std::logic_error::logic_error;
};

/// Normalized complex amplitude vector over N levels.
struct QuantumState {
    Vector amplitudes;

    QuantumState() = default;
    explicit QuantumState(Vector amps);

    int dim() const { return static_cast<int>(amplitudes.size()); }
    double norm() const { return amplitudes.norm(); }
    void normalize();
    Matrix density() const;  // |psi><psi|
};

/// Bloch (polarization) vector of a two-level density matrix.
struct BlochVector {
    double b1 = 0.0;
    double b2 = 0.0;
    double b3 = 0.0;

    double norm() const { return std::sqrt(b1 * b1 + b2 * b2 + b3 * b3); }
};

struct TwoLevelParams {
    double omega0;       // level splitting in angular frequency
    double q_scale;      // coupling length Q
    double hbar = 1.0;

    double delta() const { return hbar * omega0; }
    void validate() const;
};

/// The operator pair (H0, x) for a small N-level system.
struct SystemOps {
    Matrix h0;  // energy units
    Matrix x;   // length units
    double hbar = 1.0;

    int dim() const { return static_cast<int>(h0.rows()); }
};

bool is_hermitian(const Matrix& m, double tol = 1e-12);
void check_density_matrix(const Matrix& rho, double tol = 1e-10);

BlochVector bloch_from_density(const Matrix& rho);
Matrix density_from_bloch(const BlochVector& b);
QuantumState state_from_mixing_angle(double theta);  // cos(theta)|1> + i sin(theta)|0>

double expectation(const Matrix& op, const Matrix& rho);

// H0 = (Delta/2)(|1><1| - |0><0|),  x = Q i(|0><1| - |1><0|)
SystemOps two_level_operators(const TwoLevelParams& p);

// U = exp(-i H dt / hbar) for Hermitian H: closed-form Pauli decomposition for
// 2x2, scaling-and-squaring for larger N.
Matrix unitary_propagator(const Matrix& h, double dt, double hbar);

}  // namespace qbm
