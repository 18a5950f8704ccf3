#pragma once

#include <cstdint>
#include <deque>
#include <string>
#include <utility>
#include <vector>

#include "qbm/quantum.hpp"
#include "qbm/rng.hpp"

namespace qbm {

/// Spectral density J(omega) of the environment on [0, cutoff].
/// Ohmic: J = gamma * omega.  Electromagnetic: J = 2 pi^2 e^2 omega u(omega) / (3 kB T)
/// with u(omega) tabulated.  Tabulated: linear interpolation of (omega, J) samples.
class SpectralDensity {
public:
    enum class Kind { Ohmic, Electromagnetic, Tabulated };

    static SpectralDensity ohmic(double gamma, double cutoff);
    static SpectralDensity electromagnetic(double charge, std::vector<double> omega_grid,
                                           std::vector<double> u_values, double kT);
    static SpectralDensity tabulated(std::vector<double> omega_grid, std::vector<double> j_values);
    // Two-column text (omega, J), '#' comment lines.
    static SpectralDensity from_file(const std::string& path);

    double operator()(double omega) const;
    double cutoff() const { return cutoff_; }
    Kind kind() const { return kind_; }
    double ohmic_gamma() const { return gamma_; }

private:
    SpectralDensity() = default;

    Kind kind_ = Kind::Ohmic;
    double gamma_ = 0.0;
    double cutoff_ = 0.0;
    double em_prefactor_ = 0.0;  // 2 pi^2 e^2 / (3 kB T)
    std::vector<double> grid_;
    std::vector<double> values_;
};

/// Memory kernel Gamma(t).  Delta: Gamma(t) = 2 gamma delta(t).
/// Sampled: even function tabulated on a nonnegative t grid.
struct MemoryKernel {
    enum class Kind { Delta, Sampled };

    Kind kind = Kind::Delta;
    double gamma = 0.0;             // Delta weight is 2*gamma
    std::vector<double> t_grid;     // Sampled only, t >= 0, sorted
    std::vector<double> values;

    static MemoryKernel delta(double gamma);
    static MemoryKernel sampled(std::vector<double> t, std::vector<double> g);

    double at(double t) const;      // Sampled: linear interpolation of |t|
    double at_zero() const;
};

// Gamma(t) = (2/pi) \int_0^cutoff J(w) cos(w t)/w dw by composite Simpson.
MemoryKernel kernel_from_spectral_density(const SpectralDensity& j,
                                          const std::vector<double>& t_grid);

/// Discrete-grid thermal noise: i.i.d. Gaussians of variance 2 kB T gamma / s,
/// piecewise constant over each grid step of width s.
class NoiseProcess {
public:
    NoiseProcess(double step, double kT, double gamma, std::uint64_t seed);

    double step() const { return step_; }
    double temperature() const { return kT_; }
    double gamma() const { return gamma_; }
    double variance() const;
    std::uint64_t seed() const { return seed_; }

    double next();

private:
    double step_;
    double kT_;
    double gamma_;
    std::uint64_t seed_;
    double sigma_;
    GaussianRng rng_;
};

std::vector<double> sample_noise(NoiseProcess& p, std::size_t n_steps);

/// History of Q(t) = <x> for the friction convolution with a sampled kernel.
struct FrictionState {
    MemoryKernel kernel;
    std::deque<std::pair<double, double>> history;  // (t, Q), ascending t

    void push(double t, double q) { history.emplace_back(t, q); }
};

// f(t) = -\int_0^t Gamma(t-t') dQ/dt' dt' (trapezoid, centered-difference Q-dot).
// Delta kernel: requires at least two history points for the Q-dot estimate.
double friction_force(const FrictionState& state, double t);

// Exact Ohmic friction from a density matrix: (i/hbar) gamma Tr([x, H0] rho).
double ohmic_friction(double gamma, const SystemOps& ops, const Matrix& rho);

// W0 scalar: -(Q_t Gamma(0) - Q_0 Gamma(t)); zero for the Delta kernel.
double w0_correction(const MemoryKernel& kernel, double q_t, double q_0, double t);

struct TransitionRates {
    double lambda;  // noise-induced transition rate, 2 gamma Q^2 kB T / hbar^2
    double a0;      // friction rate, 2 gamma Q^2 Delta / hbar^2
};

TransitionRates transition_rates(const TwoLevelParams& p, double gamma, double kT);

}  // namespace qbm
