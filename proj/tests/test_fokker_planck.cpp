#include <doctest.h>

#include <cmath>
#include <random>

#include "qbm/analytic.hpp"
#include "qbm/fokker_planck.hpp"

using namespace qbm;

namespace {

const TwoLevelParams kParams{5.0, 1.0, 1.0};

BlochVector random_bloch(std::mt19937_64& eng) {
    std::uniform_real_distribution<double> u(-0.577, 0.577);
    return {u(eng), u(eng), u(eng)};
}

}  // namespace

TEST_CASE("fpe_rhs is traceless and Hermiticity-preserving") {
    const SystemOps ops = two_level_operators(kParams);
    std::mt19937_64 eng(37);
    for (int rep = 0; rep < 50; ++rep) {
        const Matrix rho = density_from_bloch(random_bloch(eng));
        const Matrix d = fpe_rhs(rho, ops, 0.1, 2.0);
        CHECK(std::abs(d.trace().real()) < 1e-14);
        CHECK(std::abs(d.trace().imag()) < 1e-14);
        CHECK(is_hermitian(d, 1e-14));
    }
    // maximally mixed state is a fixed point
    const Matrix zero = fpe_rhs(0.5 * Matrix::Identity(2, 2), ops, 0.1, 2.0);
    CHECK(zero.cwiseAbs().maxCoeff() < 1e-15);
    CHECK_THROWS_AS(fpe_rhs(Matrix::Identity(3, 3) / 3.0, ops, 0.1, 2.0), ContractViolation);
}

TEST_CASE("fpe_rhs matches bloch_fpe_rhs under the Bloch map") {
    const SystemOps ops = two_level_operators(kParams);
    const double gamma = 0.1, kT = 2.0;
    const double lambda = 2.0 * gamma * kT;           // Q = hbar = 1
    const double a0 = 2.0 * gamma * kParams.delta();  // = 1
    std::mt19937_64 eng(41);
    for (int rep = 0; rep < 50; ++rep) {
        const BlochVector p = random_bloch(eng);
        const Matrix d = fpe_rhs(density_from_bloch(p), ops, gamma, kT);
        const BlochVector dp = bloch_fpe_rhs(p, kParams.omega0, lambda, a0);
        // the Bloch map is linear, so it sends d(rho)/dt to d(P)/dt
        CHECK(std::abs((d(0, 0) - d(1, 1)).real() - dp.b1) < 1e-12);
        CHECK(std::abs(2.0 * d(0, 1).real() - dp.b2) < 1e-12);
        CHECK(std::abs(-2.0 * d(0, 1).imag() - dp.b3) < 1e-12);
    }
}

TEST_CASE("bloch_fpe_rhs component equations and contraction") {
    const auto d = bloch_fpe_rhs({0.0, 0.0, 1.0}, 7.0, 0.0, 0.0);
    CHECK(d.b1 == 0.0);
    CHECK(d.b2 == doctest::Approx(-7.0));
    CHECK(d.b3 == 0.0);

    for (double s : {1.0, -1.0}) {
        const auto dd = bloch_fpe_rhs({s, 0.0, 0.0}, 5.0, 0.0, 1.0);
        CHECK(dd.b1 == 0.0);
        CHECK(dd.b2 == 0.0);
        CHECK(dd.b3 == 0.0);
    }

    // d|P|^2/dt = -4 lambda (P1^2 + P2^2) at any A0 (the A0 terms cancel)
    std::mt19937_64 eng(43);
    for (int rep = 0; rep < 100; ++rep) {
        const BlochVector p = random_bloch(eng);
        const double lambda = 0.8, a0 = 1.3;
        const auto dp = bloch_fpe_rhs(p, 5.0, lambda, a0);
        const double growth = 2.0 * (p.b1 * dp.b1 + p.b2 * dp.b2 + p.b3 * dp.b3);
        CHECK(growth ==
              doctest::Approx(-4.0 * lambda * (p.b1 * p.b1 + p.b2 * p.b2)).epsilon(1e-10));
        CHECK(growth <= 1e-12);
    }
}

TEST_CASE("pfr_flow: stationary points stay put") {
    FpeConfig cfg{0.005, 5.0, 10};
    for (double s : {-1.0, 1.0}) {
        const auto res = pfr_flow({s, 0.0, 0.0}, 5.0, 1.0, cfg);
        for (const auto& p : res.series.p) {
            CHECK(std::abs(p.b1 - s) < 1e-12);
            CHECK(std::abs(p.b2) < 1e-12);
            CHECK(std::abs(p.b3) < 1e-12);
        }
    }
}

TEST_CASE("pfr_flow: dwell ordering and asymptotic-entry detection") {
    FpeConfig cfg{0.002, 25.0, 5};
    const double w0 = 5.0, a0 = 1.0;

    auto depart = [&](const PfrResult& r) {
        for (std::size_t k = 0; k < r.series.t.size(); ++k)
            if (r.series.p[k].b1 < 0.5) return r.series.t[k];
        return r.series.t.back();
    };

    const auto quarter = pfr_flow({std::cos(M_PI / 2.0), 0.0, std::sin(M_PI / 2.0)}, w0, a0, cfg);
    const auto twelfth = pfr_flow({std::cos(M_PI / 6.0), 0.0, std::sin(M_PI / 6.0)}, w0, a0, cfg);
    CHECK(depart(twelfth) > depart(quarter));

    REQUIRE(quarter.entered_asymptotic);
    CHECK(quarter.t_a > 0.0);
    CHECK(quarter.series.p.back().b1 < -0.99);
    // at entry, P1 < -1 + eps and P3 = a parameterizes the residual oscillation
    CHECK(std::abs(quarter.a) < std::sqrt(2.0 * kAsymptoticEps) + 0.05);
}

TEST_CASE("pfr_flow rejects invalid input") {
    FpeConfig cfg{0.002, 1.0, 1};
    CHECK_THROWS_AS(pfr_flow({0.0, 0.0, 1.0}, 5.0, -1.0, cfg), std::domain_error);
    FpeConfig coarse{0.02, 1.0, 1};
    CHECK_THROWS_AS(pfr_flow({0.0, 0.0, 1.0}, 5.0, 1.0, coarse), std::domain_error);
}

TEST_CASE("solve_fpe_bloch reproduces the A0 = 0 closed forms") {
    const double w0 = 5.0, lambda = 0.5;
    FpeConfig cfg{0.001, 8.0, 10};

    const auto decay = solve_fpe_bloch({1.0, 0.0, 0.0}, w0, lambda, 0.0, cfg);
    double max_err = 0.0;
    for (std::size_t k = 0; k < decay.t.size(); ++k) {
        const auto ref = stationary_solution(1, lambda, decay.t[k]);
        max_err = std::max(max_err, std::abs(decay.p[k].b1 - ref.b1));
    }
    CHECK(max_err < 1e-6);

    const auto osc = solve_fpe_bloch({0.0, 0.0, 1.0}, w0, lambda, 0.0, cfg);
    max_err = 0.0;
    for (std::size_t k = 0; k < osc.t.size(); ++k) {
        const auto ref = nonstationary_solution(w0, lambda, osc.t[k]);
        max_err = std::max({max_err, std::abs(osc.p[k].b1 - ref.b1),
                            std::abs(osc.p[k].b2 - ref.b2), std::abs(osc.p[k].b3 - ref.b3)});
    }
    CHECK(max_err < 1e-6);
}

TEST_CASE("solve_fpe_bloch decoheres at positive temperature") {
    FpeConfig cfg{0.002, 12.0, 20};
    const auto s = solve_fpe_bloch({0.0, 0.0, 1.0}, 5.0, 1.0, 0.5, cfg);
    // |P| non-increasing and asymptotically ~ 0
    for (std::size_t k = 1; k < s.p.size(); ++k)
        CHECK(s.p[k].norm() <= s.p[k - 1].norm() + 1e-12);
    CHECK(s.p.back().norm() < 0.01);
}

TEST_CASE("solve_fpe (matrix form) tracks the Bloch-form trajectory") {
    const SystemOps ops = two_level_operators(kParams);
    const double gamma = 0.1, kT = 1.0;  // lambda = 0.2, A0 = 1
    FpeConfig cfg{0.005, 5.0, 1};        // 10^3 steps

    const BlochVector p0{0.0, 0.0, 1.0};
    const auto bloch = solve_fpe_bloch(p0, kParams.omega0, 0.2, 1.0, cfg);
    const auto matrix = solve_fpe(density_from_bloch(p0), ops, gamma, kT, cfg);
    REQUIRE(matrix.size() == bloch.t.size());
    double max_dev = 0.0;
    for (std::size_t k = 0; k < matrix.size(); ++k) {
        const auto b = bloch_from_density(matrix[k].rho_av);
        max_dev = std::max({max_dev, std::abs(b.b1 - bloch.p[k].b1),
                            std::abs(b.b2 - bloch.p[k].b2), std::abs(b.b3 - bloch.p[k].b3)});
    }
    CHECK(max_dev < 1e-10);
}

TEST_CASE("solve_fpe_bloch converges at order 4") {
    const double w0 = 5.0, lambda = 0.5, a0 = 1.0, t_end = 1.0;
    auto endpoint = [&](double dt) {
        FpeConfig cfg{dt, t_end, 1 << 20};  // record only the endpoint
        return solve_fpe_bloch({0.0, 0.0, 1.0}, w0, lambda, a0, cfg).p.back();
    };
    const auto a = endpoint(0.004);
    const auto b = endpoint(0.002);
    const auto c = endpoint(0.001);
    const double d1 = std::sqrt((a.b1 - b.b1) * (a.b1 - b.b1) + (a.b2 - b.b2) * (a.b2 - b.b2) +
                                (a.b3 - b.b3) * (a.b3 - b.b3));
    const double d2 = std::sqrt((b.b1 - c.b1) * (b.b1 - c.b1) + (b.b2 - c.b2) * (b.b2 - c.b2) +
                                (b.b3 - c.b3) * (b.b3 - c.b3));
    const double order = std::log2(d1 / d2);
    CHECK(order > 3.5);
    CHECK(order < 4.5);
}
