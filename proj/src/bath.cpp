#include "qbm/bath.hpp"

#include <cmath>

namespace qbm {

double BathRealization::omega_max() const {
    return osc.empty() ? 0.0 : osc.back().omega + 0.5 * domega;
}

double BathRealization::recurrence_time() const {
    return domega > 0.0 ? 2.0 * M_PI / domega : 0.0;
}

double BathRealization::energy() const {
    double e = 0.0;
    for (const auto& o : osc)
        e += (o.p * o.p + o.mass * o.mass * o.omega * o.omega * o.q * o.q) / (2.0 * o.mass);
    return e;
}

BathRealization sample_thermal_bath(const SpectralDensity& j, int n_osc, double kT,
                                    std::uint64_t seed) {
    if (n_osc < 2) throw std::domain_error("sample_thermal_bath: n_osc >= 2 required");
    if (kT < 0.0) throw std::domain_error("sample_thermal_bath: kT >= 0 required");

    BathRealization bath;
    bath.domega = j.cutoff() / static_cast<double>(n_osc);
    bath.osc.reserve(n_osc);
    bath.initial.reserve(n_osc);
    GaussianRng rng(seed);
    for (int i = 0; i < n_osc; ++i) {
        BathOscillator o;
        o.omega = (static_cast<double>(i) + 0.5) * bath.domega;  // midpoint grid
        o.mass = 1.0;
        o.coupling = std::sqrt(2.0 * j(o.omega) * o.omega * bath.domega / M_PI);
        if (kT > 0.0) {
            // classical Boltzmann: <q^2> = kT/(m w^2), <p^2> = m kT
            o.q = std::sqrt(kT / (o.mass * o.omega * o.omega)) * rng.normal();
            o.p = std::sqrt(o.mass * kT) * rng.normal();
        } else {
            o.q = 0.0;
            o.p = 0.0;
        }
        bath.initial.emplace_back(o.q, o.p);
        bath.osc.push_back(o);
    }
    return bath;
}

double reconstruct_spectral_density(const BathRealization& bath, double omega) {
    // Nearest-oscillator bin: J(w_i) = pi c_i^2 / (2 m_i w_i dw)
    if (bath.osc.empty() || omega < 0.0 || omega > bath.omega_max()) return 0.0;
    std::size_t i = static_cast<std::size_t>(omega / bath.domega);
    if (i >= bath.osc.size()) i = bath.osc.size() - 1;
    const auto& o = bath.osc[i];
    return M_PI * o.coupling * o.coupling / (2.0 * o.mass * o.omega * bath.domega);
}

double bath_kernel(const BathRealization& bath, double t) {
    double g = 0.0;
    for (const auto& o : bath.osc)
        g += o.coupling * o.coupling * std::cos(o.omega * t) / (o.mass * o.omega * o.omega);
    return g;
}

double bath_force(const BathRealization& bath) {
    double f = 0.0;
    for (const auto& o : bath.osc) f -= o.coupling * o.q;
    return f;
}

double bath_xi(const BathRealization& bath, double t) {
    double xi = 0.0;
    for (std::size_t i = 0; i < bath.osc.size(); ++i) {
        const auto& o = bath.osc[i];
        const auto& [q0, p0] = bath.initial[i];
        const double qdot0 = p0 / o.mass;
        xi -= o.coupling * (q0 * std::cos(o.omega * t) + qdot0 / o.omega * std::sin(o.omega * t));
    }
    return xi;
}

namespace {

double classical_lagrangian(const BathRealization& bath) {
    double l = 0.0;
    for (const auto& o : bath.osc) {
        const double kin = o.p * o.p / (2.0 * o.mass);
        const double pot = 0.5 * o.mass * o.omega * o.omega * o.q * o.q;
        l += kin - pot;  // p qdot - H = 2 kin - (kin + pot)
    }
    return l;
}

}  // namespace

CoupledState step_coupled(CoupledState state, const SystemOps& ops, double dt,
                          const double* test_mode_x) {
    const double wmax = state.bath.omega_max();
    const double hnorm = ops.h0.cwiseAbs().maxCoeff() / ops.hbar;
    if (dt * wmax >= 0.1 || dt * 2.0 * hnorm >= 0.1)
        throw ContractViolation("step_coupled: dt too large for bath/system frequencies");

    const double l_before = classical_lagrangian(state.bath);

    // half quantum step under H0 + x * B(q)
    double field = bath_force(state.bath);
    Matrix u = unitary_propagator(ops.h0 - field * ops.x, 0.5 * dt, ops.hbar);
    state.psi.amplitudes = u * state.psi.amplitudes;

    // full classical leapfrog; <x> frozen over the step
    const Matrix rho = state.psi.density();
    const double xq = test_mode_x ? *test_mode_x : expectation(ops.x, rho);
    for (auto& o : state.bath.osc) {
        const double k = o.mass * o.omega * o.omega;
        o.p += 0.5 * dt * (-k * o.q - o.coupling * xq);
        o.q += dt * o.p / o.mass;
        o.p += 0.5 * dt * (-k * o.q - o.coupling * xq);
    }

    // half quantum step with the updated bath field
    field = bath_force(state.bath);
    u = unitary_propagator(ops.h0 - field * ops.x, 0.5 * dt, ops.hbar);
    state.psi.amplitudes = u * state.psi.amplitudes;

    const double l_after = classical_lagrangian(state.bath);
    state.s_cl += 0.5 * (l_before + l_after) * dt;
    state.t += dt;
    return state;
}

std::pair<double, double> effective_force(const CoupledState& state) {
    const double total = bath_force(state.bath);
    const double xi = bath_xi(state.bath, state.t);
    return {xi, total - xi};
}

double total_energy(const CoupledState& state, const SystemOps& ops) {
    const Matrix rho = state.psi.density();
    const double field = bath_force(state.bath);
    // interaction: <x> * sum c_i q_i = -<x> * bath_force
    return state.bath.energy() + expectation(ops.h0, rho) - field * expectation(ops.x, rho);
}

}  // namespace qbm
