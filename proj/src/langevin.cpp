#include "qbm/langevin.hpp"

#include <cmath>

namespace qbm {

namespace {

Matrix effective_hamiltonian(const SystemOps& ops, double xi, double friction) {
    return ops.h0 - (xi + friction) * ops.x;
}

Vector rk4_renormalized(const Vector& psi, const Matrix& h, double dt, double hbar) {
    const Complex c = Complex(0.0, -1.0) / hbar;
    const Vector k1 = c * (h * psi);
    const Vector k2 = c * (h * (psi + 0.5 * dt * k1));
    const Vector k3 = c * (h * (psi + 0.5 * dt * k2));
    const Vector k4 = c * (h * (psi + dt * k3));
    Vector out = psi + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    out /= out.norm();
    return out;
}

}  // namespace

QuantumState sle_step(const QuantumState& psi, double xi, double dt, const SystemOps& ops,
                      double friction, Scheme scheme) {
    if (!std::isfinite(xi) || !std::isfinite(friction))
        throw std::runtime_error("sle_step: non-finite noise or friction");
    const Matrix h = effective_hamiltonian(ops, xi, friction);
    QuantumState out = psi;
    if (scheme == Scheme::RenormalizedRK4)
        out.amplitudes = rk4_renormalized(psi.amplitudes, h, dt, ops.hbar);
    else
        out.amplitudes = unitary_propagator(h, dt, ops.hbar) * psi.amplitudes;
    return out;
}

Matrix lle_step(const Matrix& rho, double xi, double dt, const SystemOps& ops, double friction) {
    if (!std::isfinite(xi) || !std::isfinite(friction))
        throw std::runtime_error("lle_step: non-finite noise or friction");
    const Matrix u = unitary_propagator(effective_hamiltonian(ops, xi, friction), dt, ops.hbar);
    return u * rho * u.adjoint();
}

BlochVector bloch_sle_rhs(const BlochVector& b, double xi, const BlochRhsParams& p) {
    const double g = 2.0 * p.q_scale * xi / p.hbar;
    BlochVector d;
    d.b1 = g * b.b2 - p.a0 * b.b2 * b.b2;
    d.b2 = -p.omega0 * b.b3 - g * b.b1 + p.a0 * b.b1 * b.b2;
    d.b3 = p.omega0 * b.b2;
    return d;
}

namespace {

TrajectoryRecord propagate(const QuantumState& psi0, const SystemOps& ops, NoiseProcess env,
                           const LangevinConfig& cfg, double gamma, const MemoryKernel* kernel,
                           bool include_w0) {
    if (std::abs(cfg.dt - env.step()) > 1e-15)
        throw ContractViolation("run_trajectory: cfg.dt must equal the noise grid step");
    if (!(cfg.dt > 0.0) || !(cfg.t_end > 0.0))
        throw std::domain_error("run_trajectory: dt and t_end must be positive");

    const std::size_t n_steps = static_cast<std::size_t>(std::llround(cfg.t_end / cfg.dt));
    const int stride = cfg.record_stride < 1 ? 1 : cfg.record_stride;

    TrajectoryRecord rec;
    rec.seed = env.seed();
    rec.t.reserve(n_steps / stride + 2);
    rec.bloch.reserve(n_steps / stride + 2);
    rec.xi.reserve(n_steps / stride + 2);

    QuantumState psi = psi0;
    FrictionState fstate;
    const double q0 = (kernel != nullptr) ? expectation(ops.x, psi.density()) : 0.0;
    if (kernel) {
        fstate.kernel = *kernel;
        fstate.push(-cfg.dt, q0);  // ghost node so centered differences give Qdot(0) = 0
        fstate.push(0.0, q0);
    }

    double xi = env.next();
    const bool two_level = ops.dim() == 2;
    rec.t.push_back(0.0);
    if (two_level)
        rec.bloch.push_back(bloch_from_density(psi.density()));
    else
        rec.rho.push_back(psi.density());
    rec.xi.push_back(xi);

    for (std::size_t k = 0; k < n_steps; ++k) {
        const double t = static_cast<double>(k) * cfg.dt;
        const Matrix rho = psi.density();
        double f;
        if (kernel) {
            const double qt = expectation(ops.x, rho);
            if (fstate.history.back().first < t) fstate.push(t, qt);
            f = friction_force(fstate, t);
            // W0 = x * w0_correction enters H with sign opposite to the -x(xi+f) pair
            if (include_w0) f -= w0_correction(*kernel, qt, q0, t);
        } else {
            f = ohmic_friction(gamma, ops, rho);
        }
        psi = sle_step(psi, xi, cfg.dt, ops, f, cfg.scheme);
        xi = env.next();  // noise active at t_next; recorded alongside b(t_next)

        const double t_next = static_cast<double>(k + 1) * cfg.dt;
        if ((k + 1) % static_cast<std::size_t>(stride) == 0 || k + 1 == n_steps) {
            rec.t.push_back(t_next);
            if (two_level)
                rec.bloch.push_back(bloch_from_density(psi.density()));
            else
                rec.rho.push_back(psi.density());
            rec.xi.push_back(xi);
        }
    }
    return rec;
}

}  // namespace

TrajectoryRecord run_trajectory(const QuantumState& psi0, const SystemOps& ops, double gamma,
                                NoiseProcess env, const LangevinConfig& cfg) {
    return propagate(psi0, ops, std::move(env), cfg, gamma, nullptr, false);
}

TrajectoryRecord run_trajectory_kernel(const QuantumState& psi0, const SystemOps& ops,
                                       const MemoryKernel& kernel, NoiseProcess env,
                                       const LangevinConfig& cfg) {
    return propagate(psi0, ops, std::move(env), cfg, 0.0, &kernel, cfg.include_w0);
}

}  // namespace qbm
