#include "qbm/app/experiment.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "qbm/analytic.hpp"
#include "qbm/app/svg.hpp"
#include "qbm/csv.hpp"
#include "qbm/ensemble.hpp"

namespace qbm::app {

using qbm::BlochSeries;
using qbm::BlochVector;

double linear_slope(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = static_cast<double>(x.size());
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

double departure_time(const BlochSeries& s, double threshold) {
    for (std::size_t i = 0; i < s.t.size(); ++i)
        if (s.p[i].b1 < threshold) return s.t[i];
    return s.t.back() + (s.t.size() > 1 ? s.t[1] - s.t[0] : 0.0);
}

double fit_asymptotic_rate(const BlochSeries& s, double t_a, double omega0, double a0) {
    const double w = std::sqrt(omega0 * omega0 - 0.25 * a0 * a0);
    const double period = M_PI / w;  // of the cos(2 w t) modulation
    const double start = t_a + 1.0;
    const double avail = s.t.back() - start;
    const int n_periods = static_cast<int>(std::floor(avail / period));
    if (n_periods < 3)
        throw std::runtime_error("fit_asymptotic_rate: window too short after t_a");
    const double stop = start + std::min(n_periods, 20) * period;

    std::vector<double> ts, ys;
    for (std::size_t i = 0; i < s.t.size(); ++i) {
        if (s.t[i] < start || s.t[i] > stop) continue;
        const double v = s.p[i].b1 + 1.0;
        if (v <= 0.0) continue;  // roundoff at the ground state
        ts.push_back(s.t[i]);
        ys.push_back(std::log(v));
    }
    if (ts.size() < 16)
        throw std::runtime_error("fit_asymptotic_rate: too few samples in fit window");
    return -linear_slope(ts, ys);
}

namespace {

namespace fs = std::filesystem;

struct ReportSink {
    std::ostringstream os;
    bool all_pass = true;

    void check(bool ok, const std::string& what) {
        os << (ok ? "PASS " : "FAIL ") << what << "\n";
        if (!ok) all_pass = false;
    }
    void note(const std::string& what) { os << what << "\n"; }
};

std::string out_path(const ExperimentConfig& cfg, const std::string& name) {
    fs::create_directories(cfg.out_dir);
    return (fs::path(cfg.out_dir) / name).string();
}

qbm::EnsembleConfig ensemble_config(const ExperimentConfig& cfg) {
    qbm::EnsembleConfig ec;
    ec.n_traj = cfg.n_traj;
    ec.master_seed = cfg.master_seed;
    ec.dt = cfg.dt;
    ec.t_end = cfg.t_end;
    ec.record_stride = cfg.record_stride;
    ec.n_threads = cfg.threads;
    return ec;
}

void run_fig1(const ExperimentConfig& cfg, ReportSink& rep) {
    const double a0 = cfg.resolved_a0();
    qbm::FpeConfig fcfg{cfg.dt, cfg.t_end, cfg.record_stride};

    std::vector<double> thetas = cfg.theta_list;
    if (thetas.empty()) thetas = {cfg.theta};
    std::vector<qbm::PfrResult> results;
    for (double th : thetas) {
        const BlochVector b0{std::cos(2.0 * th), 0.0, std::sin(2.0 * th)};
        results.push_back(qbm::pfr_flow(b0, cfg.omega0, a0, fcfg));
    }

    qbm::CsvWriter csv(out_path(cfg, "fig1.csv"));
    csv.comment(cfg.describe());
    std::vector<std::string> names{"t"};
    for (double th : thetas) {
        std::ostringstream n;
        n << "P1_theta=" << th;
        names.push_back(n.str());
    }
    csv.header(names);
    const auto& grid = results.front().series.t;
    for (std::size_t j = 0; j < grid.size(); ++j) {
        std::vector<double> row{grid[j]};
        for (const auto& r : results) row.push_back(r.series.p[j].b1);
        csv.row(row);
    }

    // dwell ordering: smaller theta leaves P1 ~ +1 later
    std::vector<double> departures;
    for (const auto& r : results) departures.push_back(departure_time(r.series, 0.5));
    bool ordered = true;
    for (std::size_t i = 0; i + 1 < departures.size(); ++i)
        if (thetas[i] > thetas[i + 1] && departures[i] > departures[i + 1]) ordered = false;
    rep.check(ordered, "fig1: dwell-time ordering (smaller theta departs later)");

    for (std::size_t i = 0; i < results.size(); ++i) {
        if (!results[i].entered_asymptotic) {
            rep.note("fig1: theta=" + std::to_string(thetas[i]) +
                     " did not reach the asymptotic region in the run window");
            continue;
        }
        const double rate = fit_asymptotic_rate(results[i].series, results[i].t_a, cfg.omega0, a0);
        std::ostringstream what;
        what << "fig1: theta=" << thetas[i] << " asymptotic rate " << rate << " vs A0=" << a0
             << " (within 5%)";
        rep.check(std::abs(rate - a0) <= 0.05 * a0, what.str());
    }

    if (cfg.svg) {
        std::vector<SvgSeries> series;
        for (std::size_t i = 0; i < results.size(); ++i) {
            SvgSeries s;
            std::ostringstream n;
            n << "theta=" << thetas[i];
            s.name = n.str();
            s.x = results[i].series.t;
            for (const auto& p : results[i].series.p) s.y.push_back(p.b1);
            series.push_back(std::move(s));
        }
        write_svg_lines(out_path(cfg, "fig1.svg"), "P1(t), zero-temperature flow", series);
    }
}

void run_fig2(const ExperimentConfig& cfg, ReportSink& rep, const std::string& stem) {
    const qbm::TwoLevelParams params{cfg.omega0, cfg.q_scale, cfg.hbar};
    const auto ops = qbm::two_level_operators(params);
    const auto psi0 = qbm::state_from_mixing_angle(cfg.theta);
    const double gamma = cfg.resolved_gamma();
    const double kT = cfg.resolved_kT();

    const auto ec = ensemble_config(cfg);
    const auto stats = qbm::run_ensemble(psi0, ops, gamma, kT, ec);
    qbm::FpeConfig fcfg{cfg.dt, cfg.t_end, cfg.record_stride};
    const auto rates = qbm::transition_rates(params, gamma, kT);
    const auto fpe = qbm::solve_fpe_bloch(qbm::bloch_from_density(psi0.density()), cfg.omega0,
                                          rates.lambda, rates.a0, fcfg);

    qbm::CsvWriter csv(out_path(cfg, stem + ".csv"));
    csv.comment(cfg.describe());
    csv.header({"t", "P1", "P2", "P3", "mean_b1", "mean_b2", "mean_b3", "stderr_b1", "stderr_b2",
                "stderr_b3"});
    for (std::size_t j = 0; j < stats.t.size(); ++j)
        csv.row({stats.t[j], fpe.p[j].b1, fpe.p[j].b2, fpe.p[j].b3, stats.mean[0][j],
                 stats.mean[1][j], stats.mean[2][j], stats.stderr_[0][j], stats.stderr_[1][j],
                 stats.stderr_[2][j]});

    // divergence structure
    std::array<std::size_t, 3> within{};
    std::size_t n_pts = stats.t.size();
    for (std::size_t j = 0; j < n_pts; ++j) {
        const double p[3] = {fpe.p[j].b1, fpe.p[j].b2, fpe.p[j].b3};
        for (int c = 0; c < 3; ++c) {
            const double dev = std::abs(stats.mean[c][j] - p[c]);
            if (stats.stderr_[c][j] == 0.0 || dev <= 3.0 * stats.stderr_[c][j]) ++within[c];
        }
    }
    std::ostringstream w2, w3;
    w2 << stem << ": ensemble P2 within 3 stderr of FPE at "
       << 100.0 * within[1] / n_pts << "% of grid points (>= 95% required)";
    w3 << stem << ": ensemble P3 within 3 stderr of FPE at "
       << 100.0 * within[2] / n_pts << "% of grid points (>= 95% required)";
    rep.check(within[1] >= static_cast<std::size_t>(0.95 * n_pts), w2.str());
    rep.check(within[2] >= static_cast<std::size_t>(0.95 * n_pts), w3.str());
    {
        std::ostringstream os;
        os << stem << ": ensemble b1eq = " << stats.b1eq << " +/- " << stats.b1eq_err
           << ", FPE P1(t_end) = " << fpe.p.back().b1;
        rep.note(os.str());
    }

    std::ofstream divergence(out_path(cfg, stem + "_divergence.txt"));
    qbm::DivergenceReport dr;
    dr.ensemble_b1eq = stats.b1eq;
    dr.ensemble_b1eq_err = stats.b1eq_err;
    dr.fpe_p1_end = fpe.p.back().b1;
    for (std::size_t j = 0; j < n_pts; ++j) {
        const double p[3] = {fpe.p[j].b1, fpe.p[j].b2, fpe.p[j].b3};
        for (int c = 0; c < 3; ++c) {
            const double dev = std::abs(stats.mean[c][j] - p[c]);
            dr.max_abs_dev[c] = std::max(dr.max_abs_dev[c], dev);
            if (stats.stderr_[c][j] > 0.0) {
                dr.max_sigma_dev[c] = std::max(dr.max_sigma_dev[c], dev / stats.stderr_[c][j]);
                if (c == 0 && dr.first_p1_crossing < 0.0 && dev > 3.0 * stats.stderr_[c][j])
                    dr.first_p1_crossing = stats.t[j];
            }
        }
    }
    for (int c = 0; c < 3; ++c)
        dr.frac_within_3se[c] = static_cast<double>(within[c]) / static_cast<double>(n_pts);
    divergence << dr.summary();

    if (cfg.svg) {
        std::vector<SvgSeries> series(2);
        series[0].name = "FPE P1";
        series[1].name = "ensemble b1";
        series[0].x = series[1].x = stats.t;
        for (std::size_t j = 0; j < n_pts; ++j) {
            series[0].y.push_back(fpe.p[j].b1);
            series[1].y.push_back(stats.mean[0][j]);
        }
        write_svg_lines(out_path(cfg, stem + ".svg"), stem + ": P1 vs ensemble mean", series);
    }
}

void run_fig3(const ExperimentConfig& cfg, ReportSink& rep) {
    const qbm::TwoLevelParams params{cfg.omega0, cfg.q_scale, cfg.hbar};
    const auto ops = qbm::two_level_operators(params);
    const auto psi0 = qbm::state_from_mixing_angle(cfg.theta);
    const double gamma = cfg.resolved_gamma();

    qbm::CsvWriter csv(out_path(cfg, "fig3.csv"));
    csv.comment(cfg.describe());
    csv.header({"kT_over_delta", "b1eq", "b1eq_err", "f1", "f2", "resid_f1", "resid_f2"});

    std::vector<double> ratios = cfg.kT_over_delta;
    std::vector<double> b1eqs, b1errs;
    auto ec = ensemble_config(cfg);
    for (std::size_t i = 0; i < ratios.size(); ++i) {
        const double kT = ratios[i] * cfg.delta();
        ec.master_seed = cfg.master_seed + i;  // independent sweeps, still reproducible
        const auto stats = qbm::run_ensemble(psi0, ops, gamma, kT, ec);
        const auto rates = qbm::transition_rates(params, gamma, kT);
        const auto curves = qbm::equilibrium_curves(rates.lambda, rates.a0);
        b1eqs.push_back(stats.b1eq);
        b1errs.push_back(stats.b1eq_err);
        csv.row({ratios[i], stats.b1eq, stats.b1eq_err, curves.f1, curves.f2,
                 stats.b1eq - curves.f1, stats.b1eq - curves.f2});
    }

    bool monotone = true;
    for (std::size_t i = 0; i + 1 < b1eqs.size(); ++i)
        if (b1eqs[i + 1] <= b1eqs[i]) monotone = false;
    rep.check(monotone, "fig3: b1eq(T) monotone increasing over the sweep");

    if (cfg.svg) {
        std::vector<SvgSeries> series(3);
        series[0].name = "b1eq";
        series[1].name = "f1";
        series[2].name = "f2";
        for (std::size_t i = 0; i < ratios.size(); ++i) {
            const auto rates =
                qbm::transition_rates(params, gamma, ratios[i] * cfg.delta());
            const auto curves = qbm::equilibrium_curves(rates.lambda, rates.a0);
            for (auto& s : series) s.x.push_back(ratios[i]);
            series[0].y.push_back(b1eqs[i]);
            series[1].y.push_back(curves.f1);
            series[2].y.push_back(curves.f2);
        }
        write_svg_lines(out_path(cfg, "fig3.svg"), "b1eq vs kT/Delta", series);
    }
}

void run_custom(const ExperimentConfig& cfg, ReportSink& rep) {
    qbm::FpeConfig fcfg{cfg.dt, cfg.t_end, cfg.record_stride};
    const BlochVector b0{std::cos(2.0 * cfg.theta), 0.0, std::sin(2.0 * cfg.theta)};
    const auto fpe =
        qbm::solve_fpe_bloch(b0, cfg.omega0, cfg.resolved_lambda(), cfg.resolved_a0(), fcfg);

    const bool ensemble_possible = cfg.resolved_a0() > 0.0 || cfg.resolved_lambda() == 0.0;
    if (ensemble_possible && cfg.n_traj > 0) {
        run_fig2(cfg, rep, "custom");
        return;
    }
    qbm::CsvWriter csv(out_path(cfg, "custom.csv"));
    csv.comment(cfg.describe());
    csv.header({"t", "P1", "P2", "P3"});
    for (std::size_t j = 0; j < fpe.t.size(); ++j)
        csv.row({fpe.t[j], fpe.p[j].b1, fpe.p[j].b2, fpe.p[j].b3});
    rep.note("custom: transport-equation run only (no (gamma,kT) realization of the rates)");
}

}  // namespace

RunOutcome run_experiment(const ExperimentConfig& cfg) {
    RunOutcome out;
    const auto diags = validate(cfg);
    if (!diags.empty()) {
        std::ostringstream os;
        for (const auto& d : diags) os << "config error: " << d.message << "\n";
        out.exit_code = 2;
        out.report = os.str();
        return out;
    }
    ReportSink rep;
    try {
        if (cfg.preset == "fig1") run_fig1(cfg, rep);
        else if (cfg.preset == "fig2a") run_fig2(cfg, rep, "fig2a");
        else if (cfg.preset == "fig2b") run_fig2(cfg, rep, "fig2b");
        else if (cfg.preset == "fig3") run_fig3(cfg, rep);
        else run_custom(cfg, rep);
    } catch (const std::exception& e) {
        out.exit_code = 1;
        out.report = rep.os.str() + "numerical fault: " + e.what() + "\n";
        return out;
    }
    out.exit_code = rep.all_pass ? 0 : 1;
    out.report = rep.os.str();
    return out;
}

}  // namespace qbm::app
