#include "qbm/analytic.hpp"

#include <cmath>
#include <stdexcept>

namespace qbm {

BlochVector stationary_solution(int sigma, double lambda, double t) {
    if (sigma != 0 && sigma != 1)
        throw std::domain_error("stationary_solution: sigma must be 0 or 1");
    if (t < 0.0) throw std::domain_error("stationary_solution: t >= 0 required");
    const double sign = (sigma == 1) ? 1.0 : -1.0;
    return {sign * std::exp(-2.0 * lambda * t), 0.0, 0.0};
}

BlochVector nonstationary_solution(double omega0, double lambda, double t) {
    if (!(lambda < omega0))
        throw std::domain_error("nonstationary_solution: underdamped branch needs lambda < omega0");
    const double w = std::sqrt(omega0 * omega0 - lambda * lambda);
    const double e = std::exp(-lambda * t);
    const double s = std::sin(w * t);
    const double c = std::cos(w * t);
    return {0.0, -e * omega0 / w * s, e * (c + lambda / w * s)};
}

BlochVector asymptotic_decay(double a, double t_a, double omega0, double a0, double t) {
    if (t < t_a) throw std::domain_error("asymptotic_decay: t >= t_a required");
    if (!(a0 < 2.0 * omega0))
        throw std::domain_error("asymptotic_decay: A0 < 2 omega0 required");
    const double w = std::sqrt(omega0 * omega0 - 0.25 * a0 * a0);
    const double sin_phi = w / omega0;
    const double cos_phi = 0.5 * a0 / omega0;  // phi in (0, pi/2]
    const double dt = t - t_a;
    const double e_half = std::exp(-0.5 * a0 * dt);
    BlochVector p;
    p.b1 = -1.0 + a * a * e_half * e_half *
                      (1.0 - cos_phi * std::cos(2.0 * w * dt + std::acos(cos_phi))) /
                      (2.0 * sin_phi * sin_phi);
    p.b2 = -a * e_half * std::sin(w * dt) / sin_phi;
    p.b3 = a * e_half * (std::cos(w * dt) + 0.5 * a0 / w * std::sin(w * dt));
    return p;
}

EquilibriumCurves equilibrium_curves(double lambda, double a0) {
    if (lambda < 0.0 || a0 < 0.0)
        throw std::domain_error("equilibrium_curves: rates must be >= 0");
    if (lambda == 0.0 && a0 == 0.0)
        throw std::domain_error("equilibrium_curves: lambda and A0 cannot both be 0");
    return {-a0 / (2.0 * lambda + a0), -a0 / (4.0 * lambda + a0)};
}

}  // namespace qbm
