#include "qbm/extended_time.hpp"

#include <cmath>
#include <stdexcept>

namespace qbm {

Complex TimeWavePacket::label() const {
    return Complex(omega_width * tau, -eps / (hbar * omega_width)) / std::sqrt(2.0);
}

Complex TimeWavePacket::wave(double t_coord) const {
    const double norm = std::sqrt(omega_width / std::sqrt(M_PI));
    const double d = t_coord - tau;
    const double envelope = std::exp(-0.5 * omega_width * omega_width * d * d);
    return norm * envelope * std::exp(Complex(0.0, -eps * t_coord / hbar));
}

Complex coherent_overlap(Complex z, Complex w) {
    return std::exp(std::conj(z) * w - 0.5 * std::norm(z) - 0.5 * std::norm(w));
}

double pi_expectation_quadrature(const TimeWavePacket& chi, double c_light) {
    // Simpson over tau +/- 10/Omega; Pi chi = (-i hbar / c) d(chi)/dT analytically
    const double half_width = 10.0 / chi.omega_width;
    const std::size_t n = 2000;
    const double h = 2.0 * half_width / static_cast<double>(n);
    auto integrand = [&](double t_coord) {
        const Complex val = chi.wave(t_coord);
        const double d = t_coord - chi.tau;
        // d(chi)/dT = (-Omega^2 (T - tau) - i eps/hbar) chi
        const Complex dval =
            (Complex(-chi.omega_width * chi.omega_width * d, -chi.eps / chi.hbar)) * val;
        return std::conj(val) * Complex(0.0, -chi.hbar / c_light) * dval;
    };
    Complex sum = integrand(chi.tau - half_width) + integrand(chi.tau + half_width);
    for (std::size_t k = 1; k < n; ++k) {
        const double t_coord = chi.tau - half_width + static_cast<double>(k) * h;
        sum += integrand(t_coord) * (k % 2 == 1 ? 4.0 : 2.0);
    }
    return (sum * h / 3.0).real();
}

Eigen::Matrix2d symplectic_form_coeffs(const TimeWavePacket& base, double scale_tau,
                                       double scale_eps) {
    if (scale_tau == 0.0 || scale_eps == 0.0)
        throw std::runtime_error("symplectic_form_coeffs: degenerate coordinate scales");

    // steps in the rescaled coordinates (x1, x2) = (scale_tau*tau, scale_eps*eps)
    const double h1 = 1e-4 * scale_tau / base.omega_width;
    const double h2 = 1e-4 * scale_eps * base.hbar * base.omega_width;

    auto packet_at = [&](double x1, double x2) {
        TimeWavePacket p = base;
        p.tau = x1 / scale_tau;
        p.eps = x2 / scale_eps;
        return p.label();
    };
    const double x1 = scale_tau * base.tau;
    const double x2 = scale_eps * base.eps;

    auto braket = [&](int j, int k) {
        const double hj = (j == 0) ? h1 : h2;
        const double hk = (k == 0) ? h1 : h2;
        auto shift = [&](int dir, double s) {
            return packet_at(x1 + (dir == 0 ? s : 0.0), x2 + (dir == 1 ? s : 0.0));
        };
        // <d_j chi | d_k chi> by a centered 4-point stencil on the overlap
        const Complex pp = coherent_overlap(shift(j, hj), shift(k, hk));
        const Complex pm = coherent_overlap(shift(j, hj), shift(k, -hk));
        const Complex mp = coherent_overlap(shift(j, -hj), shift(k, hk));
        const Complex mm = coherent_overlap(shift(j, -hj), shift(k, -hk));
        return (pp - pm - mp + mm) / (4.0 * hj * hk);
    };

    Eigen::Matrix2d w = Eigen::Matrix2d::Zero();
    const double w01 = 2.0 * base.hbar * braket(0, 1).imag();
    w(0, 1) = w01;
    w(1, 0) = -w01;  // antisymmetric by construction
    return w;
}

ExtendedState extended_flow_step(ExtendedState state, const BathRealization& bath_template,
                                 const SystemOps& ops, double c_light, double du) {
    const std::size_t n = bath_template.osc.size();
    if (static_cast<std::size_t>(state.phase.q.size()) != n ||
        static_cast<std::size_t>(state.phase.p.size()) != n)
        throw ContractViolation("extended_flow_step: phase-space dimension mismatch");

    auto field = [&] {
        double b = 0.0;
        for (std::size_t i = 0; i < n; ++i) b += bath_template.osc[i].coupling * state.phase.q(i);
        return b;
    };
    auto lagrangian = [&] {
        double l = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const auto& o = bath_template.osc[i];
            const double kin = state.phase.p(i) * state.phase.p(i) / (2.0 * o.mass);
            const double pot = 0.5 * o.mass * o.omega * o.omega * state.phase.q(i) * state.phase.q(i);
            l += kin - pot;
        }
        return l;
    };

    const double l_before = lagrangian();

    // same Strang splitting as the microscopic coupled integrator
    Matrix u_half = unitary_propagator(ops.h0 + field() * ops.x, 0.5 * du, ops.hbar);
    state.psi.amplitudes = u_half * state.psi.amplitudes;

    const double xq = expectation(ops.x, state.psi.density());
    for (std::size_t i = 0; i < n; ++i) {
        const auto& o = bath_template.osc[i];
        const double k = o.mass * o.omega * o.omega;
        state.phase.p(i) += 0.5 * du * (-k * state.phase.q(i) - o.coupling * xq);
        state.phase.q(i) += du * state.phase.p(i) / o.mass;
        state.phase.p(i) += 0.5 * du * (-k * state.phase.q(i) - o.coupling * xq);
    }

    u_half = unitary_propagator(ops.h0 + field() * ops.x, 0.5 * du, ops.hbar);
    state.psi.amplitudes = u_half * state.psi.amplitudes;

    state.s_cl += 0.5 * (l_before + lagrangian()) * du;

    // extended pair: d_u q0 = c exactly; p0 constant (no explicit q0 dependence)
    state.phase.q0 += c_light * du;

    // time wave-packet: d_u tau = 1 analytic, eps constant (no explicit tau coupling)
    state.chi.tau += du;
    state.u += du;
    return state;
}

BrokenSymmetryResult broken_symmetry_check(const TimeWavePacket& chi0, double c_light,
                                           double du, int n_steps) {
    BrokenSymmetryResult res{};

    // omega_zeta_p = -d<Pi>/dp with p parameterizing the critical family (eps = -c p)
    const double p0 = -chi0.eps / c_light;
    const double hp = 1e-5 * std::max(1.0, std::abs(p0));
    auto pi_at = [&](double p_val) {
        TimeWavePacket chi = chi0;
        chi.eps = -c_light * p_val;
        return pi_expectation_quadrature(chi, c_light);
    };
    res.omega_zeta_p = -(pi_at(p0 + hp) - pi_at(p0 - hp)) / (2.0 * hp);

    // integrate the trivial flow and track zeta = c (tau - tau0), p = <Pi>
    TimeWavePacket chi = chi0;
    double max_drift = 0.0;
    const double p_start = pi_expectation_quadrature(chi, c_light);
    for (int k = 0; k < n_steps; ++k) {
        chi.tau += du;
        max_drift = std::max(max_drift,
                             std::abs(pi_expectation_quadrature(chi, c_light) - p_start));
    }
    res.p_drift = max_drift;
    res.zeta_rate = c_light * (chi.tau - chi0.tau) / (du * static_cast<double>(n_steps));
    return res;
}

}  // namespace qbm
