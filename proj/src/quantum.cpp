#include "qbm/quantum.hpp"

#include <cmath>
#include <unsupported/Eigen/MatrixFunctions>

namespace qbm {

QuantumState::QuantumState(Vector amps) : amplitudes(std::move(amps)) {
    if (dim() < 2) throw ContractViolation("QuantumState: dimension must be >= 2");
    normalize();
}

void QuantumState::normalize() {
    const double n = amplitudes.norm();
    if (n <= 0.0 || !std::isfinite(n))
        throw ContractViolation("QuantumState: cannot normalize zero/non-finite vector");
    amplitudes /= n;
}

Matrix QuantumState::density() const {
    return amplitudes * amplitudes.adjoint();
}

bool is_hermitian(const Matrix& m, double tol) {
    if (m.rows() != m.cols()) return false;
    return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

void check_density_matrix(const Matrix& rho, double tol) {
    if (!is_hermitian(rho, tol))
        throw ContractViolation("density matrix is not Hermitian");
    if (std::abs(rho.trace().real() - 1.0) > tol || std::abs(rho.trace().imag()) > tol)
        throw ContractViolation("density matrix trace is not 1");
}

BlochVector bloch_from_density(const Matrix& rho) {
    if (rho.rows() != 2 || rho.cols() != 2)
        throw ContractViolation("bloch_from_density: expected a 2x2 matrix");
    check_density_matrix(rho);
    // rho = (1/2)[[1+b1, b2-i b3],[b2+i b3, 1-b1]]
    BlochVector b;
    b.b1 = (rho(0, 0) - rho(1, 1)).real();
    b.b2 = 2.0 * rho(0, 1).real();
    b.b3 = -2.0 * rho(0, 1).imag();
    return b;
}

Matrix density_from_bloch(const BlochVector& b) {
    if (b.norm() > 1.0 + 1e-10)
        throw std::domain_error("density_from_bloch: |b| > 1");
    Matrix rho(2, 2);
    rho(0, 0) = 0.5 * (1.0 + b.b1);
    rho(1, 1) = 0.5 * (1.0 - b.b1);
    rho(0, 1) = 0.5 * Complex(b.b2, -b.b3);
    rho(1, 0) = 0.5 * Complex(b.b2, b.b3);
    return rho;
}

QuantumState state_from_mixing_angle(double theta) {
    Vector amps(2);
    amps(0) = std::cos(theta);
    amps(1) = Complex(0.0, std::sin(theta));
    return QuantumState(amps);
}

double expectation(const Matrix& op, const Matrix& rho) {
    if (op.rows() != rho.rows() || op.cols() != rho.cols())
        throw ContractViolation("expectation: dimension mismatch");
    const Complex tr = (op * rho).trace();
    return tr.real();
}

void TwoLevelParams::validate() const {
    if (!(omega0 > 0.0) || !(q_scale > 0.0) || !(hbar > 0.0))
        throw std::domain_error("TwoLevelParams: all parameters must be positive");
}

SystemOps two_level_operators(const TwoLevelParams& p) {
    p.validate();
    SystemOps ops;
    ops.hbar = p.hbar;
    ops.h0 = Matrix::Zero(2, 2);
    ops.h0(0, 0) = 0.5 * p.delta();
    ops.h0(1, 1) = -0.5 * p.delta();
    ops.x = Matrix::Zero(2, 2);
    // Q i(|0><1| - |1><0|) = Q sigma_y in this basis
    ops.x(0, 1) = Complex(0.0, -p.q_scale);
    ops.x(1, 0) = Complex(0.0, p.q_scale);
    return ops;
}

Matrix unitary_propagator(const Matrix& h, double dt, double hbar) {
    if (h.rows() != h.cols())
        throw ContractViolation("unitary_propagator: square matrix required");
    if (h.rows() == 2) {
        const double a0 = 0.5 * (h(0, 0) + h(1, 1)).real();
        const double az = 0.5 * (h(0, 0) - h(1, 1)).real();
        const double ax = h(0, 1).real();
        const double ay = -h(0, 1).imag();
        const double a = std::sqrt(ax * ax + ay * ay + az * az);
        const double phi = a * dt / hbar;
        const double c = std::cos(phi);
        const double s = (a > 0.0) ? std::sin(phi) / a : 0.0;
        const Complex phase = std::exp(Complex(0.0, -a0 * dt / hbar));
        Matrix u(2, 2);
        u(0, 0) = phase * Complex(c, -s * az);
        u(0, 1) = phase * Complex(-s * ay, -s * ax);
        u(1, 0) = phase * Complex(s * ay, -s * ax);
        u(1, 1) = phase * Complex(c, s * az);
        return u;
    }
    const Matrix gen = Complex(0.0, -dt / hbar) * h;
    return gen.exp();
}

}  // namespace qbm
