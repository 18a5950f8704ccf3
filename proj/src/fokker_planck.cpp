#include "qbm/fokker_planck.hpp"

#include <cmath>
#include <functional>
#include <stdexcept>

#include "qbm/environment.hpp"

namespace qbm {

namespace {

void check_step(double dt, double rate_scale) {
    if (!(dt > 0.0) || dt * rate_scale >= 0.05)
        throw std::domain_error("FpeConfig: dt * max(omega0, 2 lambda, A0) must be < 0.05");
}

BlochVector axpy(const BlochVector& p, const BlochVector& d, double h) {
    return {p.b1 + h * d.b1, p.b2 + h * d.b2, p.b3 + h * d.b3};
}

template <typename Rhs>
BlochSeries integrate_bloch(const BlochVector& p0, const FpeConfig& cfg, Rhs rhs,
                            const std::function<void(std::size_t, const BlochVector&)>& observe) {
    const std::size_t n_steps = static_cast<std::size_t>(std::llround(cfg.t_end / cfg.dt));
    const int stride = cfg.record_stride < 1 ? 1 : cfg.record_stride;

    BlochSeries out;
    out.t.reserve(n_steps / stride + 2);
    out.p.reserve(n_steps / stride + 2);
    out.t.push_back(0.0);
    out.p.push_back(p0);
    if (observe) observe(0, p0);

    BlochVector p = p0;
    for (std::size_t k = 0; k < n_steps; ++k) {
        const BlochVector k1 = rhs(p);
        const BlochVector k2 = rhs(axpy(p, k1, 0.5 * cfg.dt));
        const BlochVector k3 = rhs(axpy(p, k2, 0.5 * cfg.dt));
        const BlochVector k4 = rhs(axpy(p, k3, cfg.dt));
        p.b1 += cfg.dt / 6.0 * (k1.b1 + 2.0 * k2.b1 + 2.0 * k3.b1 + k4.b1);
        p.b2 += cfg.dt / 6.0 * (k1.b2 + 2.0 * k2.b2 + 2.0 * k3.b2 + k4.b2);
        p.b3 += cfg.dt / 6.0 * (k1.b3 + 2.0 * k2.b3 + 2.0 * k3.b3 + k4.b3);
        if (p.norm() > 1.0 + 1e-8)
            throw std::runtime_error("bloch integrator fault: |P| exceeded 1");
        if (observe) observe(k + 1, p);
        if ((k + 1) % static_cast<std::size_t>(stride) == 0 || k + 1 == n_steps) {
            out.t.push_back(static_cast<double>(k + 1) * cfg.dt);
            out.p.push_back(p);
        }
    }
    return out;
}

}  // namespace

Matrix fpe_rhs(const Matrix& rho_av, const SystemOps& ops, double gamma, double kT) {
    if (rho_av.rows() != ops.h0.rows() || rho_av.cols() != ops.h0.cols())
        throw ContractViolation("fpe_rhs: dimension mismatch");
    // -i x (gamma/hbar) Tr([x,H0] rho) is x times the (real) friction scalar
    const double f = ohmic_friction(gamma, ops, rho_av);
    const Matrix h = ops.h0 - f * ops.x;
    const Matrix bracket = h * rho_av - rho_av * h;
    const Matrix xc = ops.x * rho_av - rho_av * ops.x;
    const Matrix double_comm = ops.x * xc - xc * ops.x;
    const Matrix rhs = bracket - Complex(0.0, 1.0) * (gamma * kT / ops.hbar) * double_comm;
    return rhs / Complex(0.0, ops.hbar);
}

BlochVector bloch_fpe_rhs(const BlochVector& p, double omega0, double lambda, double a0) {
    // loose bound only: RK4 stage points leave the unit ball by O(dt |rhs|)
    if (p.norm() > 1.05)
        throw ContractViolation("bloch_fpe_rhs: |P| > 1");
    BlochVector d;
    d.b1 = -2.0 * lambda * p.b1 - a0 * p.b2 * p.b2;
    d.b2 = -omega0 * p.b3 - 2.0 * lambda * p.b2 + a0 * p.b1 * p.b2;
    d.b3 = omega0 * p.b2;
    return d;
}

PfrResult pfr_flow(const BlochVector& p0, double omega0, double a0, const FpeConfig& cfg) {
    if (a0 < 0.0) throw std::domain_error("pfr_flow: A0 >= 0 required");
    check_step(cfg.dt, std::max(omega0, a0));
    PfrResult res;
    auto observe = [&](std::size_t k, const BlochVector& p) {
        if (!res.entered_asymptotic && p.b1 < -1.0 + kAsymptoticEps &&
            std::abs(p.b2) < kAsymptoticEps) {
            res.entered_asymptotic = true;
            res.t_a = static_cast<double>(k) * cfg.dt;
            res.a = p.b3;
        }
    };
    res.series = integrate_bloch(
        p0, cfg, [&](const BlochVector& p) { return bloch_fpe_rhs(p, omega0, 0.0, a0); },
        observe);
    return res;
}

BlochSeries solve_fpe_bloch(const BlochVector& p0, double omega0, double lambda, double a0,
                            const FpeConfig& cfg) {
    check_step(cfg.dt, std::max({omega0, 2.0 * lambda, a0}));
    return integrate_bloch(
        p0, cfg, [&](const BlochVector& p) { return bloch_fpe_rhs(p, omega0, lambda, a0); },
        nullptr);
}

std::vector<AveragedState> solve_fpe(const Matrix& rho0, const SystemOps& ops, double gamma,
                                     double kT, const FpeConfig& cfg) {
    check_density_matrix(rho0);
    const double xmax = ops.x.cwiseAbs().maxCoeff();
    const double lambda = 2.0 * gamma * xmax * xmax * kT / (ops.hbar * ops.hbar);
    const double omega_scale = 2.0 * ops.h0.cwiseAbs().maxCoeff() / ops.hbar;
    check_step(cfg.dt, std::max(omega_scale, 2.0 * lambda));

    const std::size_t n_steps = static_cast<std::size_t>(std::llround(cfg.t_end / cfg.dt));
    const int stride = cfg.record_stride < 1 ? 1 : cfg.record_stride;

    std::vector<AveragedState> out;
    out.push_back({rho0, 0.0});
    Matrix rho = rho0;
    for (std::size_t k = 0; k < n_steps; ++k) {
        const Matrix k1 = fpe_rhs(rho, ops, gamma, kT);
        const Matrix k2 = fpe_rhs(rho + 0.5 * cfg.dt * k1, ops, gamma, kT);
        const Matrix k3 = fpe_rhs(rho + 0.5 * cfg.dt * k2, ops, gamma, kT);
        const Matrix k4 = fpe_rhs(rho + cfg.dt * k3, ops, gamma, kT);
        rho += cfg.dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        if ((k + 1) % static_cast<std::size_t>(stride) == 0 || k + 1 == n_steps)
            out.push_back({rho, static_cast<double>(k + 1) * cfg.dt});
    }
    return out;
}

}  // namespace qbm
