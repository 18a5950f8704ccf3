#include "qbm/ensemble.hpp"

#include <cmath>
#include <mutex>
#include <sstream>
#include <stdexcept>

#include "qbm/rng.hpp"

namespace qbm {

namespace {

double component(const BlochVector& b, int i) {
    return i == 0 ? b.b1 : (i == 1 ? b.b2 : b.b3);
}

}  // namespace

std::vector<TrajectoryRecord> run_trajectories(const QuantumState& psi0, const SystemOps& ops,
                                               double gamma, double kT,
                                               const EnsembleConfig& cfg) {
    if (cfg.n_traj < 1) throw std::domain_error("run_trajectories: n_traj >= 1 required");
    LangevinConfig lcfg;
    lcfg.dt = cfg.dt;
    lcfg.t_end = cfg.t_end;
    lcfg.scheme = cfg.scheme;
    lcfg.record_stride = cfg.record_stride;

    std::vector<TrajectoryRecord> records(cfg.n_traj);
    const unsigned threads = cfg.n_threads == 0 ? default_thread_count() : cfg.n_threads;
    std::string failure;
    std::mutex fail_mutex;
    parallel_for(static_cast<std::size_t>(cfg.n_traj), threads, [&](std::size_t i) {
        const std::uint64_t seed = mix_seed(cfg.master_seed, i);
        try {
            NoiseProcess env(cfg.dt, kT, gamma, seed);
            records[i] = run_trajectory(psi0, ops, gamma, std::move(env), lcfg);
        } catch (const std::exception& e) {
            std::lock_guard<std::mutex> lock(fail_mutex);
            if (failure.empty())
                failure = "trajectory with seed " + std::to_string(seed) + " failed: " + e.what();
        }
    });
    if (!failure.empty()) throw std::runtime_error(failure);
    return records;
}

EnsembleStats ensemble_stats(const std::vector<TrajectoryRecord>& records) {
    if (records.empty()) throw std::domain_error("ensemble_stats: no records");
    const std::size_t n_t = records.front().t.size();
    const double n = static_cast<double>(records.size());

    EnsembleStats stats;
    stats.t = records.front().t;
    for (int c = 0; c < 3; ++c) {
        stats.mean[c].assign(n_t, 0.0);
        stats.stderr_[c].assign(n_t, 0.0);
    }

    // fixed index-order accumulation keeps results independent of thread count
    std::array<std::vector<double>, 3> sum{}, sumsq{};
    for (int c = 0; c < 3; ++c) {
        sum[c].assign(n_t, 0.0);
        sumsq[c].assign(n_t, 0.0);
    }
    for (const auto& rec : records) {
        if (rec.t.size() != n_t)
            throw ContractViolation("ensemble_stats: inconsistent record grids");
        for (std::size_t j = 0; j < n_t; ++j) {
            for (int c = 0; c < 3; ++c) {
                const double v = component(rec.bloch[j], c);
                sum[c][j] += v;
                sumsq[c][j] += v * v;
            }
        }
    }
    for (std::size_t j = 0; j < n_t; ++j) {
        for (int c = 0; c < 3; ++c) {
            const double m = sum[c][j] / n;
            stats.mean[c][j] = m;
            if (records.size() > 1) {
                const double var = std::max(0.0, (sumsq[c][j] - n * m * m) / (n - 1.0));
                stats.stderr_[c][j] = std::sqrt(var / n);
            }
        }
    }

    // equilibrium estimate from the final 20% of the grid
    const std::size_t tail_start = n_t - std::max<std::size_t>(1, n_t / 5);
    double acc = 0.0, acc_err = 0.0;
    for (std::size_t j = tail_start; j < n_t; ++j) {
        acc += stats.mean[0][j];
        acc_err += stats.stderr_[0][j];
    }
    const double tail_n = static_cast<double>(n_t - tail_start);
    stats.b1eq = acc / tail_n;
    // conservative: time samples in the tail are correlated, so average the
    // pointwise stderr instead of dividing by sqrt(tail_n)
    stats.b1eq_err = acc_err / tail_n;
    return stats;
}

EnsembleStats run_ensemble(const QuantumState& psi0, const SystemOps& ops, double gamma,
                           double kT, const EnsembleConfig& cfg) {
    return ensemble_stats(run_trajectories(psi0, ops, gamma, kT, cfg));
}

FactorizationReport factorization_diagnostic(const std::vector<TrajectoryRecord>& records) {
    if (records.empty()) throw std::domain_error("factorization_diagnostic: no records");
    const std::size_t n_t = records.front().t.size();
    const double n = static_cast<double>(records.size());

    FactorizationReport rep;
    rep.t = records.front().t;

    std::vector<double> sx(n_t, 0.0), sx2(n_t, 0.0);
    std::array<std::vector<double>, 3> sb{}, sxb{}, sx2b{}, sxb_sq{}, sx2b_sq{};
    for (int c = 0; c < 3; ++c) {
        sb[c].assign(n_t, 0.0);
        sxb[c].assign(n_t, 0.0);
        sx2b[c].assign(n_t, 0.0);
        sxb_sq[c].assign(n_t, 0.0);
        sx2b_sq[c].assign(n_t, 0.0);
    }
    for (const auto& rec : records) {
        for (std::size_t j = 0; j < n_t; ++j) {
            const double xi = rec.xi[j];
            sx[j] += xi;
            sx2[j] += xi * xi;
            for (int c = 0; c < 3; ++c) {
                const double b = component(rec.bloch[j], c);
                sb[c][j] += b;
                sxb[c][j] += xi * b;
                sx2b[c][j] += xi * xi * b;
                sxb_sq[c][j] += xi * b * xi * b;
                sx2b_sq[c][j] += xi * xi * b * xi * xi * b;
            }
        }
    }
    for (int c = 0; c < 3; ++c) {
        rep.first_order[c].assign(n_t, 0.0);
        rep.second_order[c].assign(n_t, 0.0);
        rep.first_order_stderr[c].assign(n_t, 0.0);
        rep.second_order_stderr[c].assign(n_t, 0.0);
    }
    for (std::size_t j = 0; j < n_t; ++j) {
        const double mx = sx[j] / n;
        const double mx2 = sx2[j] / n;
        for (int c = 0; c < 3; ++c) {
            const double mb = sb[c][j] / n;
            const double mxb = sxb[c][j] / n;
            const double mx2b = sx2b[c][j] / n;
            rep.first_order[c][j] = mxb - mx * mb;
            rep.second_order[c][j] = mx2b - mx2 * mb;
            if (records.size() > 1) {
                const double v1 = std::max(0.0, (sxb_sq[c][j] / n - mxb * mxb) / (n - 1.0));
                const double v2 = std::max(0.0, (sx2b_sq[c][j] / n - mx2b * mx2b) / (n - 1.0));
                rep.first_order_stderr[c][j] = std::sqrt(v1);
                rep.second_order_stderr[c][j] = std::sqrt(v2);
            }
            rep.max_first_order = std::max(rep.max_first_order, std::abs(rep.first_order[c][j]));
            rep.max_second_order =
                std::max(rep.max_second_order, std::abs(rep.second_order[c][j]));
        }
    }
    return rep;
}

DivergenceReport compare_lle_fpe(const QuantumState& psi0, const SystemOps& ops,
                                 const TwoLevelParams& params, double gamma, double kT,
                                 const EnsembleConfig& cfg) {
    const auto rates = transition_rates(params, gamma, kT);

    FpeConfig fcfg;
    fcfg.dt = cfg.dt;
    fcfg.t_end = cfg.t_end;
    fcfg.record_stride = cfg.record_stride;
    const BlochVector p0 = bloch_from_density(psi0.density());
    const BlochSeries fpe = solve_fpe_bloch(p0, params.omega0, rates.lambda, rates.a0, fcfg);

    const EnsembleStats stats = run_ensemble(psi0, ops, gamma, kT, cfg);
    if (fpe.t.size() != stats.t.size())
        throw ContractViolation("compare_lle_fpe: grid mismatch between propagators");

    DivergenceReport rep;
    rep.ensemble_b1eq = stats.b1eq;
    rep.ensemble_b1eq_err = stats.b1eq_err;
    rep.fpe_p1_end = fpe.p.back().b1;
    std::array<std::size_t, 3> inside{};
    for (std::size_t j = 0; j < fpe.t.size(); ++j) {
        for (int c = 0; c < 3; ++c) {
            const double dev = std::abs(stats.mean[c][j] - component(fpe.p[j], c));
            rep.max_abs_dev[c] = std::max(rep.max_abs_dev[c], dev);
            const double se = stats.stderr_[c][j];
            if (se > 0.0)
                rep.max_sigma_dev[c] = std::max(rep.max_sigma_dev[c], dev / se);
            if (dev <= 3.0 * se || se == 0.0) ++inside[c];
            if (c == 0 && rep.first_p1_crossing < 0.0 && se > 0.0 && dev > 3.0 * se)
                rep.first_p1_crossing = fpe.t[j];
        }
    }
    for (int c = 0; c < 3; ++c)
        rep.frac_within_3se[c] =
            static_cast<double>(inside[c]) / static_cast<double>(fpe.t.size());
    return rep;
}

std::string DivergenceReport::summary() const {
    std::ostringstream os;
    os << "component max |ensemble - FPE| (and in stderr units):\n";
    const char* names[3] = {"P1", "P2", "P3"};
    for (int c = 0; c < 3; ++c)
        os << "  " << names[c] << ": " << max_abs_dev[c] << " (" << max_sigma_dev[c]
           << " sigma, " << 100.0 * frac_within_3se[c] << "% of points within 3 stderr)\n";
    if (first_p1_crossing >= 0.0)
        os << "first |dP1| > 3 stderr at t = " << first_p1_crossing << "\n";
    else
        os << "no 3-stderr P1 divergence on the grid\n";
    os << "ensemble b1eq = " << ensemble_b1eq << " +/- " << ensemble_b1eq_err
       << ", FPE P1(t_end) = " << fpe_p1_end << "\n";
    return os.str();
}

}  // namespace qbm
