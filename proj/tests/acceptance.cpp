// Acceptance gate: one line of output per criterion, PASS/FAIL, exit code 0
// only if every criterion passes.
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "qbm/analytic.hpp"
#include "qbm/app/config.hpp"
#include "qbm/app/experiment.hpp"
#include "qbm/bath.hpp"
#include "qbm/ensemble.hpp"
#include "qbm/extended_time.hpp"
#include "qbm/fokker_planck.hpp"
#include "qbm/langevin.hpp"
#include "qbm/rng.hpp"

using namespace qbm;

namespace {

int g_failures = 0;

void report(int criterion, bool pass, const std::string& detail) {
    std::printf("%s criterion %d: %s\n", pass ? "PASS" : "FAIL", criterion, detail.c_str());
    if (!pass) ++g_failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

const TwoLevelParams kParams{5.0, 1.0, 1.0};

BlochVector bloch_of_theta(double theta) {
    return {std::cos(2.0 * theta), 0.0, std::sin(2.0 * theta)};
}

// ---------------------------------------------------------------------------

void criterion_1() {
    const auto t0 = std::chrono::steady_clock::now();
    double max_err = 0.0;
    for (double lambda : {0.1 * kParams.omega0, 0.5 * kParams.omega0}) {
        FpeConfig cfg{0.001, 10.0 / lambda, 10};
        for (int sigma : {0, 1}) {
            const double s = (sigma == 1) ? 1.0 : -1.0;
            const auto sol = solve_fpe_bloch({s, 0.0, 0.0}, kParams.omega0, lambda, 0.0, cfg);
            for (std::size_t k = 0; k < sol.t.size(); ++k) {
                const auto ref = stationary_solution(sigma, lambda, sol.t[k]);
                max_err = std::max({max_err, std::abs(sol.p[k].b1 - ref.b1),
                                    std::abs(sol.p[k].b2 - ref.b2), std::abs(sol.p[k].b3 - ref.b3)});
            }
        }
        const auto osc = solve_fpe_bloch({0.0, 0.0, 1.0}, kParams.omega0, lambda, 0.0, cfg);
        for (std::size_t k = 0; k < osc.t.size(); ++k) {
            const auto ref = nonstationary_solution(kParams.omega0, lambda, osc.t[k]);
            max_err = std::max({max_err, std::abs(osc.p[k].b1 - ref.b1),
                                std::abs(osc.p[k].b2 - ref.b2), std::abs(osc.p[k].b3 - ref.b3)});
        }
    }
    const double dt_wall = seconds_since(t0);
    std::ostringstream os;
    os << "transport solver vs closed forms, max err " << max_err << " (< 1e-6), " << dt_wall
       << " s (< 1)";
    report(1, max_err < 1e-6 && dt_wall < 1.0, os.str());
}

void criterion_2() {
    const auto t0 = std::chrono::steady_clock::now();
    // A0 = 2e-4 * omega0 = 1e-3, kT = 4 Delta = 20 -> lambda = 4e-3
    const double gamma = 1e-4, kT = 4.0 * kParams.delta();
    const double lambda = 2.0 * gamma * kT;
    const SystemOps ops = two_level_operators(kParams);
    EnsembleConfig cfg{2000, 20240101, 0.005, 25.0, 10, 0};
    const auto stats = run_ensemble(state_from_mixing_angle(M_PI / 4.0), ops, gamma, kT, cfg);

    std::size_t inside2 = 0, inside3 = 0;
    const std::size_t n = stats.t.size();
    for (std::size_t k = 0; k < n; ++k) {
        const auto ref = nonstationary_solution(kParams.omega0, lambda, stats.t[k]);
        if (std::abs(stats.mean[1][k] - ref.b2) <= 3.0 * stats.stderr_[1][k]) ++inside2;
        if (std::abs(stats.mean[2][k] - ref.b3) <= 3.0 * stats.stderr_[2][k]) ++inside3;
    }
    const double frac2 = static_cast<double>(inside2) / static_cast<double>(n);
    const double frac3 = static_cast<double>(inside3) / static_cast<double>(n);
    const double dt_wall = seconds_since(t0);
    std::ostringstream os;
    os << "2000-trajectory mean vs weak-coupling closed form, b2 within 3 sigma at "
       << 100.0 * frac2 << "%, b3 at " << 100.0 * frac3 << "% of grid points (>= 95%), "
       << dt_wall << " s (< 60)";
    report(2, frac2 >= 0.95 && frac3 >= 0.95 && dt_wall < 60.0, os.str());
}

void criterion_3() {
    const double a0 = 1.0;
    FpeConfig cfg{0.002, 35.0, 5};
    std::vector<double> departures;
    double worst_rate_err = 0.0;
    bool all_entered = true;
    for (double theta : {M_PI / 4.0, M_PI / 12.0, M_PI / 50.0}) {
        const auto res = pfr_flow(bloch_of_theta(theta), kParams.omega0, a0, cfg);
        departures.push_back(app::departure_time(res.series, -0.5));
        if (!res.entered_asymptotic) {
            all_entered = false;
            continue;
        }
        const double rate = app::fit_asymptotic_rate(res.series, res.t_a, kParams.omega0, a0);
        worst_rate_err = std::max(worst_rate_err, std::abs(rate - a0) / a0);
    }
    const bool ordered = departures[0] < departures[1] && departures[1] < departures[2];
    std::ostringstream os;
    os << "dwell ordering t(pi/4)=" << departures[0] << " < t(pi/12)=" << departures[1]
       << " < t(pi/50)=" << departures[2] << ", asymptotic rate within " << 100.0 * worst_rate_err
       << "% of A0 (< 5%)";
    report(3, ordered && all_entered && worst_rate_err < 0.05, os.str());
}

void criterion_4() {
    const double gamma = 0.1, kT = 2.0 * kParams.delta();  // lambda = 2, A0 = 1
    const SystemOps ops = two_level_operators(kParams);
    EnsembleConfig cfg{2000, 20240101, 0.005, 10.0, 4, 0};
    const auto dr = compare_lle_fpe(state_from_mixing_angle(M_PI / 4.0), ops, kParams, gamma, kT,
                                    cfg);
    const bool transverse_ok = dr.frac_within_3se[1] >= 0.95 && dr.frac_within_3se[2] >= 0.95;
    const bool p1_split = std::abs(dr.fpe_p1_end) < 0.02 &&
                          dr.ensemble_b1eq < -3.0 * dr.ensemble_b1eq_err;
    std::ostringstream os;
    os << "P2/P3 within 3 sigma of FPE at " << 100.0 * dr.frac_within_3se[1] << "%/"
       << 100.0 * dr.frac_within_3se[2] << "% of grid points (>= 95%), FPE P1(t_end) = "
       << dr.fpe_p1_end << " (|.| < 0.02), ensemble b1eq = " << dr.ensemble_b1eq << " +- "
       << dr.ensemble_b1eq_err << " (negative by > 3 sigma)";
    report(4, transverse_ok && p1_split, os.str());
}

void criterion_5() {
    const SystemOps ops = two_level_operators(kParams);
    const std::vector<double> ratios{0.02, 0.5, 1.0, 2.0, 4.0};
    std::vector<double> b1eq;
    double rms_f1 = 0.0, rms_f2 = 0.0;
    for (std::size_t i = 0; i < ratios.size(); ++i) {
        const double kT = ratios[i] * kParams.delta();
        EnsembleConfig cfg{1000, 20240101 + i, 0.005, 30.0, 20, 0};
        const auto stats = run_ensemble(state_from_mixing_angle(M_PI / 4.0), ops, 0.1, kT, cfg);
        b1eq.push_back(stats.b1eq);
        const auto curves = equilibrium_curves(ratios[i], 1.0);  // lambda/A0 = kT/Delta
        rms_f1 += (stats.b1eq - curves.f1) * (stats.b1eq - curves.f1);
        rms_f2 += (stats.b1eq - curves.f2) * (stats.b1eq - curves.f2);
    }
    rms_f1 = std::sqrt(rms_f1 / static_cast<double>(ratios.size()));
    rms_f2 = std::sqrt(rms_f2 / static_cast<double>(ratios.size()));
    bool monotone = true;
    for (std::size_t i = 1; i < b1eq.size(); ++i) monotone = monotone && b1eq[i] > b1eq[i - 1];
    std::ostringstream os;
    os << "b1eq(kT/Delta) = {";
    for (std::size_t i = 0; i < b1eq.size(); ++i) os << (i ? ", " : "") << b1eq[i];
    os << "} monotone, b1eq(0.02) < -0.8, |b1eq(4)| < 0.15; rms residual vs f1 = " << rms_f1
       << ", vs f2 = " << rms_f2;
    report(5, monotone && b1eq.front() < -0.8 && std::abs(b1eq.back()) < 0.15, os.str());
}

void criterion_6() {
    const SystemOps ops = two_level_operators(kParams);
    const double dt = 0.005, gamma = 0.1, kT = 10.0;
    const int n_steps = 10000;

    // stochastic state-vector path: quantum norm and Bloch norm
    NoiseProcess env_a(dt, kT, gamma, 12345);
    QuantumState psi = state_from_mixing_angle(M_PI / 4.0);
    double norm_dev = 0.0, bloch_dev = 0.0;
    for (int k = 0; k < n_steps; ++k) {
        const double f = ohmic_friction(gamma, ops, psi.density());
        psi = sle_step(psi, env_a.next(), dt, ops, f);
        norm_dev = std::max(norm_dev, std::abs(psi.norm() - 1.0));
        bloch_dev = std::max(bloch_dev, std::abs(bloch_from_density(psi.density()).norm() - 1.0));
    }

    // density-matrix path: trace, Hermiticity, purity
    NoiseProcess env_b(dt, kT, gamma, 12345);
    Matrix rho = state_from_mixing_angle(M_PI / 4.0).density();
    double trace_dev = 0.0, herm_dev = 0.0, purity_dev = 0.0;
    for (int k = 0; k < n_steps; ++k) {
        const double f = ohmic_friction(gamma, ops, rho);
        rho = lle_step(rho, env_b.next(), dt, ops, f);
        trace_dev = std::max(trace_dev, std::abs(rho.trace().real() - 1.0));
        herm_dev = std::max(herm_dev, (rho - Matrix(rho.adjoint())).cwiseAbs().maxCoeff());
        purity_dev = std::max(purity_dev, std::abs((rho * rho).trace().real() - 1.0));
    }

    std::ostringstream os;
    os << "10^4-step conservation: |psi| dev " << norm_dev << " (< 1e-10), Bloch " << bloch_dev
       << " (< 1e-8), trace " << trace_dev << " (< 1e-10), Hermiticity " << herm_dev
       << " (< 1e-12), purity " << purity_dev << " (< 1e-8)";
    report(6, norm_dev < 1e-10 && bloch_dev < 1e-8 && trace_dev < 1e-10 && herm_dev < 1e-12 &&
              purity_dev < 1e-8, os.str());
}

void criterion_7() {
    const auto t0 = std::chrono::steady_clock::now();
    const double gamma_n = 0.1, kT_n = 1.0, s = 0.01;

    // (a) grid noise: variance 2 kT gamma / s, no serial correlation
    const std::size_t m = 20000;
    NoiseProcess p(s, kT_n, gamma_n, 5150);
    const auto xs = sample_noise(p, m);
    const double target = 2.0 * kT_n * gamma_n / s;
    double mean = 0.0;
    for (double x : xs) mean += x;
    mean /= static_cast<double>(m);
    double var = 0.0, lag1 = 0.0;
    for (double x : xs) var += (x - mean) * (x - mean);
    var /= static_cast<double>(m - 1);
    for (std::size_t k = 0; k + 1 < m; ++k) lag1 += (xs[k] - mean) * (xs[k + 1] - mean);
    lag1 /= static_cast<double>(m - 1);
    const double se_var = target * std::sqrt(2.0 / static_cast<double>(m));
    const double se_lag = target / std::sqrt(static_cast<double>(m));
    const bool grid_ok =
        std::abs(var - target) <= 5.0 * se_var && std::abs(lag1) <= 5.0 * se_lag;

    // (b) microscopic bath noise autocorrelation vs kT * Gamma(t)
    const auto j = SpectralDensity::ohmic(gamma_n, 20.0);
    const std::vector<double> lags{0.0, 0.1, 0.3, 0.7};
    const int m_real = 2000, n_osc = 100;
    std::vector<double> acc(lags.size(), 0.0), acc2(lags.size(), 0.0);
    for (int r = 0; r < m_real; ++r) {
        const auto bath = sample_thermal_bath(j, n_osc, kT_n, mix_seed(777, r));
        const double xi0 = bath_xi(bath, 0.0);
        for (std::size_t li = 0; li < lags.size(); ++li) {
            const double prod = xi0 * bath_xi(bath, lags[li]);
            acc[li] += prod;
            acc2[li] += prod * prod;
        }
    }
    const auto bath0 = sample_thermal_bath(j, n_osc, kT_n, 0);
    bool fdt_ok = true;
    double worst_fdt_sigma = 0.0;
    for (std::size_t li = 0; li < lags.size(); ++li) {
        const double est = acc[li] / m_real;
        const double se = std::sqrt((acc2[li] / m_real - est * est) / m_real);
        const double ref = kT_n * bath_kernel(bath0, lags[li]);
        const double sig = std::abs(est - ref) / se;
        worst_fdt_sigma = std::max(worst_fdt_sigma, sig);
        fdt_ok = fdt_ok && sig <= 5.0;
    }

    // (c) microscopic two-level ensemble vs sampled-kernel Langevin ensemble.
    // The discrete bath carries no potential counterterm, so its backreaction
    // includes the elastic boundary pair; the Langevin reference keeps the
    // matching W0 term.
    const double gamma_c = 0.01, kT_c = 5.0, wc = 25.0, dt = 0.002, t_end = 4.0;
    const int stride = 50, micro_real = 200, micro_osc = 200;
    const auto jc = SpectralDensity::ohmic(gamma_c, wc);
    const SystemOps ops = two_level_operators(kParams);

    const std::size_t n_steps = static_cast<std::size_t>(std::llround(t_end / dt));
    const std::size_t n_rec = n_steps / stride + 1;
    std::array<std::vector<double>, 3> msum{}, msum2{};
    for (auto& v : msum) v.assign(n_rec, 0.0);
    for (auto& v : msum2) v.assign(n_rec, 0.0);
    for (int r = 0; r < micro_real; ++r) {
        CoupledState st;
        st.bath = sample_thermal_bath(jc, micro_osc, kT_c, mix_seed(31337, r));
        st.psi = state_from_mixing_angle(M_PI / 4.0);
        std::size_t rec = 0;
        auto record = [&](const CoupledState& cs) {
            const auto b = bloch_from_density(cs.psi.density());
            const double bs[3] = {b.b1, b.b2, b.b3};
            for (int c = 0; c < 3; ++c) {
                msum[c][rec] += bs[c];
                msum2[c][rec] += bs[c] * bs[c];
            }
            ++rec;
        };
        record(st);
        for (std::size_t k = 0; k < n_steps; ++k) {
            st = step_coupled(st, ops, dt);
            if ((k + 1) % stride == 0) record(st);
        }
    }

    std::vector<double> t_kernel;
    for (std::size_t k = 0; k <= n_steps; ++k) t_kernel.push_back(static_cast<double>(k) * dt);
    const auto kernel = kernel_from_spectral_density(jc, t_kernel);
    LangevinConfig lcfg{dt, t_end, Scheme::ExactExponential2x2, true, stride};
    const int lang_traj = 400;
    std::array<std::vector<double>, 3> lsum{}, lsum2{};
    for (auto& v : lsum) v.assign(n_rec, 0.0);
    for (auto& v : lsum2) v.assign(n_rec, 0.0);
    for (int r = 0; r < lang_traj; ++r) {
        NoiseProcess env(dt, kT_c, gamma_c, mix_seed(424242, r));
        const auto rec = run_trajectory_kernel(state_from_mixing_angle(M_PI / 4.0), ops, kernel,
                                               std::move(env), lcfg);
        for (std::size_t k = 0; k < n_rec; ++k) {
            const double bs[3] = {rec.bloch[k].b1, rec.bloch[k].b2, rec.bloch[k].b3};
            for (int c = 0; c < 3; ++c) {
                lsum[c][k] += bs[c];
                lsum2[c][k] += bs[c] * bs[c];
            }
        }
    }

    // the two noise models only share statistics beyond the bath memory time
    // 1/wc, so the comparison starts a few correlation times in
    const double t_compare_from = 10.0 / wc;
    double worst_combined = 0.0;
    for (int c = 0; c < 3; ++c)
        for (std::size_t k = 0; k < n_rec; ++k) {
            if (static_cast<double>(k * stride) * dt < t_compare_from) continue;
            const double mm = msum[c][k] / micro_real;
            const double mv = std::max(0.0, msum2[c][k] / micro_real - mm * mm);
            const double lm = lsum[c][k] / lang_traj;
            const double lv = std::max(0.0, lsum2[c][k] / lang_traj - lm * lm);
            const double se = std::sqrt(mv / micro_real + lv / lang_traj);
            if (se > 0.0)
                worst_combined = std::max(worst_combined, std::abs(mm - lm) / se);
        }
    const bool micro_ok = worst_combined <= 3.0;
    const double dt_wall = seconds_since(t0);

    std::ostringstream os;
    os << "grid-noise variance " << var << " vs " << target << ", lag-1 " << lag1
       << "; bath noise autocorr within " << worst_fdt_sigma
       << " SE of kT*Gamma (<= 5); microscopic vs Langevin ensemble within " << worst_combined
       << " combined sigma (<= 3, t >= " << t_compare_from << "); " << dt_wall
       << " s (< 300)";
    report(7, grid_ok && fdt_ok && micro_ok && dt_wall < 300.0, os.str());
}

void criterion_8() {
    TimeWavePacket chi{0.2, 0.9, 2.0, 1.0};
    const Eigen::Matrix2d w = symplectic_form_coeffs(chi);
    const bool sym_ok = std::abs(w(1, 0) - 1.0) < 1e-6 && std::abs(w(0, 1) + 1.0) < 1e-6;

    const double c = 2.0;
    const auto bs = broken_symmetry_check(chi, c, 0.01, 1000);
    const bool broken_ok = std::abs(bs.omega_zeta_p + 1.0) < 1e-6 && bs.p_drift < 1e-8 &&
                           std::abs(bs.zeta_rate - c) < 1e-8;

    // extended flow: d_u tau = 1 exactly, and reduction to the coupled flow
    const auto j = SpectralDensity::ohmic(0.05, 10.0);
    const auto bath = sample_thermal_bath(j, 8, 1.0, 2718);
    CoupledState micro;
    micro.bath = bath;
    micro.psi = state_from_mixing_angle(M_PI / 4.0);
    ExtendedState ext;
    const auto n = static_cast<Eigen::Index>(bath.osc.size());
    ext.phase.q.resize(n);
    ext.phase.p.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        ext.phase.q(i) = bath.osc[i].q;
        ext.phase.p(i) = bath.osc[i].p;
    }
    ext.psi = micro.psi;
    ext.chi = chi;
    const SystemOps ops = two_level_operators(kParams);
    const double du = 0.005;
    for (int k = 0; k < 400; ++k) {
        micro = step_coupled(micro, ops, du);
        ext = extended_flow_step(ext, bath, ops, c, du);
    }
    double reduce_dev = (ext.psi.amplitudes - micro.psi.amplitudes).cwiseAbs().maxCoeff();
    for (Eigen::Index i = 0; i < n; ++i) {
        reduce_dev = std::max(reduce_dev, std::abs(ext.phase.q(i) - micro.bath.osc[i].q));
        reduce_dev = std::max(reduce_dev, std::abs(ext.phase.p(i) - micro.bath.osc[i].p));
    }
    const double tau_dev = std::abs((ext.chi.tau - chi.tau) - ext.u);
    const bool flow_ok = tau_dev < 1e-8 && reduce_dev < 1e-10;

    std::ostringstream os;
    os << "omega_eps_tau = " << w(1, 0) << ", omega_zeta_p = " << bs.omega_zeta_p
       << " (within 1e-6); d_u tau dev " << tau_dev << ", <Pi> drift " << bs.p_drift
       << " (< 1e-8); extended flow reduction dev " << reduce_dev << " (< 1e-10)";
    report(8, sym_ok && broken_ok && flow_ok, os.str());
}

void criterion_9() {
    namespace fs = std::filesystem;
    auto cfg = app::preset_config("fig2a");
    cfg.n_traj = 50;
    cfg.t_end = 2.0;
    cfg.record_stride = 10;
    cfg.svg = false;

    auto run_into = [&](const std::string& dir) {
        fs::remove_all(dir);
        fs::create_directories(dir);
        auto c = cfg;
        c.out_dir = dir;
        (void)app::run_experiment(c);  // exit code irrelevant: only byte identity matters
    };
    run_into("acceptance_rerun_a");
    run_into("acceptance_rerun_b");

    auto slurp = [](const fs::path& p) {
        std::ifstream in(p, std::ios::binary);
        std::ostringstream os;
        os << in.rdbuf();
        return os.str();
    };
    bool identical = true;
    int n_files = 0;
    for (const auto& entry : fs::directory_iterator("acceptance_rerun_a")) {
        if (entry.path().extension() != ".csv") continue;
        ++n_files;
        const fs::path other = fs::path("acceptance_rerun_b") / entry.path().filename();
        identical = identical && fs::exists(other) && slurp(entry.path()) == slurp(other);
    }
    std::ostringstream os;
    os << "preset re-run with the same master seed: " << n_files
       << " CSV file(s) byte-identical across runs";
    report(9, identical && n_files > 0, os.str());
}

}  // namespace

int main() {
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    criterion_9();
    return g_failures == 0 ? 0 : 1;
}
