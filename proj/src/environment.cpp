#include "qbm/environment.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace qbm {

namespace {

double interp_linear(const std::vector<double>& xs, const std::vector<double>& ys, double x) {
    if (x <= xs.front()) return ys.front();
    if (x >= xs.back()) return ys.back();
    const auto it = std::upper_bound(xs.begin(), xs.end(), x);
    const std::size_t i = static_cast<std::size_t>(it - xs.begin());
    const double w = (x - xs[i - 1]) / (xs[i] - xs[i - 1]);
    return ys[i - 1] * (1.0 - w) + ys[i] * w;
}

}  // namespace

SpectralDensity SpectralDensity::ohmic(double gamma, double cutoff) {
    if (gamma < 0.0 || !(cutoff > 0.0))
        throw std::domain_error("SpectralDensity::ohmic: gamma >= 0 and cutoff > 0 required");
    SpectralDensity j;
    j.kind_ = Kind::Ohmic;
    j.gamma_ = gamma;
    j.cutoff_ = cutoff;
    return j;
}

SpectralDensity SpectralDensity::electromagnetic(double charge, std::vector<double> omega_grid,
                                                 std::vector<double> u_values, double kT) {
    if (!(kT > 0.0)) throw std::domain_error("SpectralDensity::electromagnetic: kT > 0 required");
    if (omega_grid.size() != u_values.size() || omega_grid.size() < 2)
        throw std::domain_error("SpectralDensity::electromagnetic: bad u_omega table");
    SpectralDensity j;
    j.kind_ = Kind::Electromagnetic;
    j.em_prefactor_ = 2.0 * M_PI * M_PI * charge * charge / (3.0 * kT);
    j.grid_ = std::move(omega_grid);
    j.values_ = std::move(u_values);
    j.cutoff_ = j.grid_.back();
    return j;
}

SpectralDensity SpectralDensity::tabulated(std::vector<double> omega_grid,
                                           std::vector<double> j_values) {
    if (omega_grid.size() != j_values.size() || omega_grid.size() < 2)
        throw std::domain_error("SpectralDensity::tabulated: need >= 2 samples");
    if (!std::is_sorted(omega_grid.begin(), omega_grid.end()))
        throw std::domain_error("SpectralDensity::tabulated: omega grid must be sorted");
    for (double v : j_values)
        if (v < 0.0) throw std::domain_error("SpectralDensity::tabulated: J must be >= 0");
    SpectralDensity j;
    j.kind_ = Kind::Tabulated;
    j.grid_ = std::move(omega_grid);
    j.values_ = std::move(j_values);
    j.cutoff_ = j.grid_.back();
    return j;
}

SpectralDensity SpectralDensity::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("SpectralDensity::from_file: cannot open " + path);
    std::vector<double> w, j;
    std::string line;
    while (std::getline(in, line)) {
        const auto pos = line.find_first_not_of(" \t");
        if (pos == std::string::npos || line[pos] == '#') continue;
        std::istringstream ls(line);
        double a, b;
        if (!(ls >> a >> b))
            throw std::runtime_error("SpectralDensity::from_file: malformed line: " + line);
        w.push_back(a);
        j.push_back(b);
    }
    return tabulated(std::move(w), std::move(j));
}

double SpectralDensity::operator()(double omega) const {
    if (omega < 0.0 || omega > cutoff_) return 0.0;
    switch (kind_) {
        case Kind::Ohmic:
            return gamma_ * omega;
        case Kind::Electromagnetic:
            return em_prefactor_ * omega * interp_linear(grid_, values_, omega);
        case Kind::Tabulated:
            return interp_linear(grid_, values_, omega);
    }
    return 0.0;
}

MemoryKernel MemoryKernel::delta(double gamma) {
    MemoryKernel k;
    k.kind = Kind::Delta;
    k.gamma = gamma;
    return k;
}

MemoryKernel MemoryKernel::sampled(std::vector<double> t, std::vector<double> g) {
    if (t.size() != g.size() || t.size() < 2)
        throw std::domain_error("MemoryKernel::sampled: need >= 2 samples");
    if (!std::is_sorted(t.begin(), t.end()) || t.front() < 0.0)
        throw std::domain_error("MemoryKernel::sampled: t grid must be sorted and nonnegative");
    MemoryKernel k;
    k.kind = Kind::Sampled;
    k.t_grid = std::move(t);
    k.values = std::move(g);
    return k;
}

double MemoryKernel::at(double t) const {
    if (kind == Kind::Delta)
        throw ContractViolation("MemoryKernel::at: Delta kernel has no pointwise values");
    return interp_linear(t_grid, values, std::abs(t));  // Gamma is even
}

double MemoryKernel::at_zero() const {
    if (kind == Kind::Delta)
        throw ContractViolation("MemoryKernel::at_zero: Delta kernel is singular at 0");
    return values.front();
}

MemoryKernel kernel_from_spectral_density(const SpectralDensity& j,
                                          const std::vector<double>& t_grid) {
    if (t_grid.empty() || !std::is_sorted(t_grid.begin(), t_grid.end()))
        throw std::domain_error("kernel_from_spectral_density: t grid must be sorted");
    const double wmax = j.cutoff();
    if (!(wmax > 0.0) || !std::isfinite(wmax))
        throw std::domain_error("kernel_from_spectral_density: finite cutoff required");

    // J(w)/w must be regular at 0 (requires J(0)=0 behavior).
    const double w_eps = wmax * 1e-9;
    const double lim0 = j(w_eps) / w_eps;
    const double lim1 = j(2.0 * w_eps) / (2.0 * w_eps);
    // a 1/w divergence shows up as lim0 ~ 2 lim1 at halved frequency
    if (!std::isfinite(lim0) || (lim1 > 0.0 && lim0 > 1.5 * lim1))
        throw std::domain_error("kernel_from_spectral_density: J(w)/w not integrable at 0");

    // Simpson node count: resolve the cos(w t) oscillation at the largest t.
    const double t_max = std::max(std::abs(t_grid.front()), std::abs(t_grid.back()));
    const double cycles = wmax * t_max / (2.0 * M_PI);
    std::size_t n = std::max<std::size_t>(2000, static_cast<std::size_t>(cycles * 64.0));
    if (n % 2 == 1) ++n;
    const double h = wmax / static_cast<double>(n);

    std::vector<double> integrand(n + 1);
    std::vector<double> gvals;
    gvals.reserve(t_grid.size());
    for (double t : t_grid) {
        integrand[0] = lim0;  // w -> 0 limit of J(w) cos(w t)/w
        for (std::size_t k = 1; k <= n; ++k) {
            const double w = static_cast<double>(k) * h;
            integrand[k] = j(w) * std::cos(w * t) / w;
        }
        double sum = integrand[0] + integrand[n];
        for (std::size_t k = 1; k < n; ++k) sum += integrand[k] * (k % 2 == 1 ? 4.0 : 2.0);
        gvals.push_back((2.0 / M_PI) * sum * h / 3.0);
    }
    std::vector<double> abs_t(t_grid);
    return MemoryKernel::sampled(std::move(abs_t), std::move(gvals));
}

NoiseProcess::NoiseProcess(double step, double kT, double gamma, std::uint64_t seed)
    : step_(step), kT_(kT), gamma_(gamma), seed_(seed), rng_(seed) {
    if (!(step > 0.0)) throw std::domain_error("NoiseProcess: step must be > 0");
    if (kT < 0.0 || gamma < 0.0)
        throw std::domain_error("NoiseProcess: kT and gamma must be >= 0");
    sigma_ = std::sqrt(2.0 * kT_ * gamma_ / step_);
}

double NoiseProcess::variance() const { return sigma_ * sigma_; }

double NoiseProcess::next() {
    if (sigma_ == 0.0) return 0.0;
    return sigma_ * rng_.normal();
}

std::vector<double> sample_noise(NoiseProcess& p, std::size_t n_steps) {
    std::vector<double> xs(n_steps);
    for (auto& x : xs) x = p.next();
    return xs;
}

double friction_force(const FrictionState& state, double t) {
    const auto& h = state.history;
    if (h.size() < 2)
        throw ContractViolation("friction_force: insufficient Q history");
    if (t > h.back().first + 1e-12)
        throw ContractViolation("friction_force: history does not cover t");

    // Centered-difference Q-dot on the history nodes.
    const std::size_t n = h.size();
    std::vector<double> qdot(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t lo = (i == 0) ? 0 : i - 1;
        const std::size_t hi = (i + 1 == n) ? n - 1 : i + 1;
        qdot[i] = (h[hi].second - h[lo].second) / (h[hi].first - h[lo].first);
    }

    if (state.kernel.kind == MemoryKernel::Kind::Delta) {
        // Gamma = 2 gamma delta; half the delta mass lies inside [0, t].
        return -state.kernel.gamma * qdot[n - 1];
    }

    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        if (h[i].first > t) break;
        const double t0 = h[i].first, t1 = std::min(h[i + 1].first, t);
        const double g0 = state.kernel.at(t - t0) * qdot[i];
        const double g1 = state.kernel.at(t - t1) * qdot[i + 1];
        acc += 0.5 * (g0 + g1) * (t1 - t0);
    }
    return -acc;
}

double ohmic_friction(double gamma, const SystemOps& ops, const Matrix& rho) {
    const Matrix comm = ops.x * ops.h0 - ops.h0 * ops.x;
    const Complex tr = (comm * rho).trace();
    return (Complex(0.0, 1.0) / ops.hbar * gamma * tr).real();
}

double w0_correction(const MemoryKernel& kernel, double q_t, double q_0, double t) {
    if (kernel.kind == MemoryKernel::Kind::Delta) return 0.0;
    return -(q_t * kernel.at_zero() - q_0 * kernel.at(t));
}

TransitionRates transition_rates(const TwoLevelParams& p, double gamma, double kT) {
    p.validate();
    if (gamma < 0.0 || kT < 0.0)
        throw std::domain_error("transition_rates: gamma and kT must be >= 0");
    const double q2 = p.q_scale * p.q_scale;
    const double h2 = p.hbar * p.hbar;
    return {2.0 * gamma * q2 * kT / h2, 2.0 * gamma * q2 * p.delta() / h2};
}

}  // namespace qbm
