#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "fbmsde/analysis.hpp"
#include "fbmsde/error.hpp"
#include "fbmsde/schemes.hpp"
#include "oracles.hpp"

using namespace fbmsde;

namespace {

FbmPath sample_path(std::size_t n, std::uint64_t id, double h = 0.75) {
    RngStream rng(4242, id);
    return CirculantSampler(n, Hurst(h)).sample(rng);
}

/// Covariance of the linear-interpolation errors of fBm at times s and t on a
/// grid of spacing dt, from the covariance function alone.
double interp_error_cov_oracle(double s, double t, double dt, double h) {
    const double i = std::floor(s / dt), j = std::floor(t / dt);
    const double si0 = i * dt, si1 = std::min(1.0, (i + 1) * dt), tj0 = j * dt, tj1 = std::min(1.0, (j + 1) * dt);
    const double us = (s - si0) / dt, ut = (t - tj0) / dt;
    const double xs[3] = {s, si0, si1}, cx[3] = {1.0, -(1 - us), -us};
    const double ys[3] = {t, tj0, tj1}, cy[3] = {1.0, -(1 - ut), -ut};
    double v = 0.0;
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) v += cx[a] * cy[b] * oracle::fbm_cov(xs[a], ys[b], h);
    return v;
}

}  // namespace

TEST_CASE("zeta on (-2, 0) against two independent evaluators") {
    CHECK(std::abs(zeta_negative(-1.0) + 1.0 / 12.0) <= 1e-10);
    CHECK(zeta_negative(-1.5) == doctest::Approx(-0.02548520189).epsilon(1e-9));
    CHECK(zeta_negative(-1.2) == doctest::Approx(-0.0548).epsilon(1e-3));
    for (int k = 1; k <= 19; ++k) {
        const double s = -0.1 * k;
        CAPTURE(s);
        CHECK(std::abs(zeta_negative(s) - oracle::zeta_borwein_eta(s)) <= 1e-10);
        CHECK(std::abs(zeta_negative(s) - oracle::zeta_euler_maclaurin(s)) <= 1e-10);
    }
    CHECK_THROWS_AS(zeta_negative(0.0), DomainError);
    CHECK_THROWS_AS(zeta_negative(-2.0), DomainError);
    CHECK_THROWS_AS(zeta_negative(0.5), DomainError);
}

TEST_CASE("zeta for s > 1") {
    CHECK(zeta_dirichlet(2.0) == doctest::Approx(std::numbers::pi * std::numbers::pi / 6).epsilon(1e-13));
    CHECK(zeta_dirichlet(4.0) == doctest::Approx(std::pow(std::numbers::pi, 4) / 90).epsilon(1e-13));
    for (double s : {1.1, 1.5, 2.5, 2.9}) CHECK(std::abs(zeta_dirichlet(s) - oracle::zeta_euler_maclaurin(s)) <= 1e-11);
}

TEST_CASE("constants") {
    const auto c = constants_for(Hurst(0.75));
    CHECK(c.kappa == doctest::Approx(0.375));
    CHECK(c.beta == doctest::Approx(0.159641).epsilon(1e-5));
    CHECK(c.k2 == doctest::Approx(0.4 - 0.8 / 7.0 - 0.25).epsilon(1e-14));
    CHECK(c.k2 == doctest::Approx(0.0357143).epsilon(1e-6));
    for (double h : {0.55, 0.6, 0.75, 0.9, 0.95}) {
        const auto k = constants_for(Hurst(h));
        CHECK(k.beta * k.beta == doctest::Approx(std::abs(k.zeta_neg2H)).epsilon(1e-14));
        CHECK(k.kappa > 0.0);
        CHECK(k.kappa < 1.0);
    }
    CHECK_THROWS_AS(constants_for(Hurst(0.5)), DomainError);
}

TEST_CASE("k1 kernel") {
    for (double h : {0.6, 0.75, 0.9}) {
        for (long long k = 1; k <= 8; ++k) CHECK(std::abs(k1_kernel(k, Hurst(h)) - oracle::k1_plain(k, h)) <= 1e-12);
    }
    CHECK_THROWS_AS(k1_kernel(0, Hurst(0.75)), DomainError);
}

TEST_CASE("k1 kernel decays like k^(2H-4)") {
    // The leading k^{2H-2} and k^{2H-3} Taylor terms cancel exactly.
    for (double h : {0.6, 0.75, 0.9}) {
        std::vector<double> ks, vs;
        for (int e = 5; e <= 12; ++e) {
            ks.push_back(std::ldexp(1.0, e));
            vs.push_back(std::abs(k1_kernel(1LL << e, Hurst(h))));
        }
        CHECK(oracle::loglog_slope(ks, vs) == doctest::Approx(2 * h - 4).epsilon(1e-3));
    }
}

TEST_CASE("c0 closed form equals the kernel sum") {
    for (double h : {0.55, 0.6, 0.75, 0.9, 0.95}) {
        for (long long r = 1; r <= 100; ++r) REQUIRE(std::abs(c0_sequence(r, Hurst(h)) - c0_kernel_sum(r, Hurst(h))) <= 1e-9);
    }
}

TEST_CASE("c0 converges to -zeta(-2H)") {
    for (double h : {0.6, 0.75, 0.9}) {
        const double target = -zeta_negative(-2 * h);
        double prev = 1e300;
        for (long long r : {10LL, 100LL, 1000LL, 10000LL}) {
            const double gap = std::abs(c0_sequence(r, Hurst(h)) - target);
            CHECK(gap < prev);
            prev = gap;
        }
        CHECK(prev <= 1e-3);
    }
}

TEST_CASE("odd power series") {
    // Direct sum to N plus an Euler-Maclaurin tail.
    auto direct = [](double s) {
        const int N = 2000;
        long double sum = 0.0L;
        for (int j = N; j >= 1; --j) sum += std::pow(2.0L * j + 1.0L, -static_cast<long double>(s));
        const double f = std::pow(2.0 * N + 1, -s), fp = -2 * s * std::pow(2.0 * N + 1, -s - 1);
        const double tail = std::pow(2.0 * N + 1, 1 - s) / (2 * (s - 1)) - f / 2 - fp / 12;
        return static_cast<double>(sum) + tail;
    };
    for (double h : {0.6, 0.75, 0.9}) {
        const double s = 2 * h + 1;
        CHECK(std::abs(odd_power_series(Hurst(h)) - direct(s)) <= 1e-12);
        CHECK(std::abs(odd_power_series(Hurst(h)) - ((1 - std::pow(2.0, -s)) * oracle::zeta_euler_maclaurin(s) - 1)) <=
              1e-12);
    }
    CHECK(odd_power_series(Hurst(0.75)) == doctest::Approx(0.10434357313155066).epsilon(1e-13));
    double prev = 1e300;
    for (double h = 0.55; h < 1.0; h += 0.05) {
        const double v = odd_power_series(Hurst(h));
        CHECK(v < prev);
        prev = v;
    }
    const double c1 = lower_bound_constant(Hurst(0.75), 1.0), c4 = lower_bound_constant(Hurst(0.75), 4.0);
    CHECK(c4 == doctest::Approx(c1 / 2).epsilon(1e-14));
    CHECK(c1 == doctest::Approx(std::sqrt(odd_power_series(Hurst(0.75)) / (2 * std::pow(std::numbers::pi, 3.5)))));
    CHECK_THROWS_AS(lower_bound_constant(Hurst(0.75), 0.0), DomainError);
}

TEST_CASE("theta cross covariance dual forms") {
    RngStream rng(8, 8);
    for (int probe = 0; probe < 10000; ++probe) {
        const std::size_t n = 1 + rng.next_u64() % 64;
        const std::size_t i = rng.next_u64() % n, j = rng.next_u64() % n;
        const double h = 0.5 + 0.49 * rng.uniform();
        const double s1 = (i + rng.uniform()) / n, s2 = (j + rng.uniform()) / n;
        REQUIRE(std::abs(theta_cross_cov(i, j, s1, s2, n, Hurst(h)) - oracle::theta_from_covariance(i, j, s1, s2, n, h)) <=
                1e-12);
        REQUIRE(std::abs(theta_cross_cov(i, j, s1, s2, n, Hurst(h)) - theta_cross_cov(j, i, s2, s1, n, Hurst(h))) <= 1e-15);
    }
    for (std::size_t n : {1u, 8u, 100u}) {
        const double tj = 3.0 / 100 * (n == 100);
        const std::size_t j = (n == 100) ? 3 : 0;
        CHECK(theta_cross_cov(j, j, tj, tj, n, Hurst(0.7)) == doctest::Approx(0.25 * std::pow(1.0 / n, 1.4)).epsilon(1e-12));
    }
}

TEST_CASE("cell integrals of theta reproduce the kernels") {
    const double h = 0.75;
    const std::size_t n = 16;
    const double scale = std::pow(1.0 / n, 2 * h + 2);
    for (std::size_t lag : {1u, 2u, 5u}) {
        const std::size_t i = 3 + lag, j = 3;
        const double cell = oracle::integrate_2d(
            [&](double s1, double s2) { return oracle::theta_from_covariance(i, j, s1, s2, n, h); }, double(i) / n,
            double(i + 1) / n, double(j) / n, double(j + 1) / n, 4, 16);
        CHECK(cell == doctest::Approx(k1_kernel(lag, Hurst(h)) * scale).epsilon(1e-8));
    }
    const double diag = oracle::integrate_2d(
        [&](double s1, double s2) { return oracle::theta_from_covariance(2, 2, s1, s2, n, h); }, 2.0 / n, 3.0 / n, 2.0 / n,
        3.0 / n, 16, 16);
    CHECK(diag == doctest::Approx(k2_constant(Hurst(h)) * scale).epsilon(1e-6));
}

TEST_CASE("interpolation error covariance") {
    RngStream rng(3, 3);
    for (int probe = 0; probe < 2000; ++probe) {
        const long long k = static_cast<long long>(rng.next_u64() % 6);
        const double h = 0.5 + 0.45 * rng.uniform();
        const double u1 = rng.uniform(), u2 = rng.uniform();
        const double L = double(k + 1);
        const double expected = std::pow(L, 2 * h) * interp_error_cov_oracle(u1 / L, (k + u2) / L, 1.0 / L, h);
        REQUIRE(std::abs(interp_error_covariance(k, u1, u2, Hurst(h)) - expected) <= 1e-12);
    }
    CHECK(interp_error_covariance(0, 0.0, 0.5, Hurst(0.7)) == 0.0);
    CHECK(interp_error_covariance(3, 0.4, 1.0, Hurst(0.7)) == doctest::Approx(0.0).scale(1.0));
}

TEST_CASE("exact weighted interpolation error") {
    CHECK(exact_weighted_interp_error([](double) { return 0.0; }, 16, Hurst(0.75)) == 0.0);
    CHECK(exact_weighted_interp_error([](double) { return 1.0; }, 1, Hurst(0.5)) == doctest::Approx(1.0 / 12).epsilon(1e-12));
    // Brownian bridges on n cells: n * (1/12) * (1/n)^3.
    CHECK(exact_weighted_interp_error([](double) { return 1.0; }, 8, Hurst(0.5)) ==
          doctest::Approx(1.0 / (12.0 * 64)).epsilon(1e-12));
    CHECK_THROWS_AS(exact_weighted_interp_error([](double) { return 1.0; }, 0, Hurst(0.75)), DomainError);
}

TEST_CASE("exact weighted interpolation error against brute-force integration") {
    const double h = 0.75;
    const std::size_t n = 2;
    auto rho = [](double t) { return std::exp(1 - t); };
    double brute = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            brute += oracle::integrate_2d(
                [&](double s, double t) { return rho(s) * rho(t) * interp_error_cov_oracle(s, t, 1.0 / n, h); },
                double(i) / n, double(i + 1) / n, double(j) / n, double(j + 1) / n, i == j ? 48 : 8, 16);
    CHECK(exact_weighted_interp_error(rho, n, Hurst(h)) == doctest::Approx(brute).epsilon(1e-6));
}

TEST_CASE("quadrature saturation under q -> q + 2") {
    auto rho = [](double t) { return std::exp(1 - t); };
    for (double h : {0.6, 0.75, 0.9}) {
        for (std::size_t n : {1u, 4u, 16u, 64u}) {
            const double a = exact_weighted_interp_error(rho, n, Hurst(h), 8);
            const double b = exact_weighted_interp_error(rho, n, Hurst(h), 10);
            CHECK(std::abs(a - b) <= 1e-10);
        }
    }
}

TEST_CASE("scaled interpolation error approaches the zeta limit") {
    const double h = 0.75;
    auto rho = [](double t) { return std::exp(1 - t); };
    const double limit = std::abs(zeta_negative(-2 * h)) * (std::exp(2.0) - 1) / 2;
    double prev = 1e300;
    for (std::size_t n : {32u, 64u, 128u, 256u}) {
        const double scaled = std::pow(double(n), 2 * h + 1) * exact_weighted_interp_error(rho, n, Hurst(h));
        const double gap = std::abs(scaled / limit - 1);
        CHECK(gap < prev);
        prev = gap;
    }
    CHECK(prev <= 0.05);
}

TEST_CASE("weight path examples") {
    SUBCASE("degenerate problems have zero weight") {
        const auto p = SdeProblem::make(0.75, 0.1, "2+sin(x)", "2+sin(x)");
        const auto path = sample_path(256, 1);
        const auto traj = wong_zakai_solve(p, path, 8, true).trajectory;
        for (double y : weight_path(p, path, traj).y_values) CHECK(y == 0.0);
    }
    SUBCASE("langevin weight is deterministic") {
        const double l = 1.0;
        const auto p = SdeProblem::make(0.75, 0.1, "l*x", "1", {{"l", l}});
        const auto path = sample_path(256, 2);
        const auto traj = wong_zakai_solve(p, path, 8, true).trajectory;
        const auto w = weight_path(p, path, traj);
        REQUIRE(w.y_values.size() == 257);
        for (std::size_t k = 0; k <= 256; ++k)
            CHECK(w.y_values[k] == doctest::Approx(l * std::exp(l * (1 - k / 256.0))).epsilon(1e-12));
    }
    SUBCASE("stochastic and Riemann forms agree") {
        const auto p = SdeProblem::make(0.75, 0.1, "1", "2+sin(x)");
        double sq = 0.0;
        std::size_t count = 0;
        for (std::uint64_t id = 0; id < 20; ++id) {
            const auto path = sample_path(4096, 10 + id);
            const auto traj = wong_zakai_solve(p, path, 8, true).trajectory;
            const auto r = weight_path(p, path, traj), s = weight_path_stochastic(p, path, traj);
            for (std::size_t k = 0; k < r.y_values.size(); ++k) {
                const double d = std::abs(r.y_values[k]) - std::abs(s.y_values[k]);
                sq += d * d;
                ++count;
            }
            CHECK(r.y_values[0] * s.y_values[0] <= 0.0);
        }
        CHECK(std::sqrt(sq / count) <= 1e-3);
    }
}

TEST_CASE("weight process Hoelder exponent") {
    const double h = 0.75;
    const auto p = SdeProblem::make(h, 0.1, "1", "2+sin(x)");
    const std::size_t n = 1024, paths = 300;
    const std::vector<std::size_t> lags{1, 2, 4, 8, 16, 32, 64};
    std::vector<double> msd(lags.size(), 0.0);
    for (std::uint64_t id = 0; id < paths; ++id) {
        const auto path = sample_path(n, 500 + id, h);
        const auto y = weight_path(p, path, wong_zakai_solve(p, path, 8, true).trajectory).y_values;
        for (std::size_t l = 0; l < lags.size(); ++l) {
            double acc = 0.0;
            for (std::size_t k = 0; k + lags[l] <= n; ++k) acc += std::pow(y[k + lags[l]] - y[k], 2);
            msd[l] += acc / double(n + 1 - lags[l]);
        }
    }
    std::vector<double> deltas;
    for (auto l : lags) deltas.push_back(double(l) / n);
    CHECK(oracle::loglog_slope(deltas, msd) >= 2 * h - 0.2);
}

TEST_CASE("malliavin derivative") {
    const double l = 0.8;
    const auto p = SdeProblem::make(0.75, 0.1, "l*x", "1", {{"l", l}});
    const auto path = sample_path(128, 3);
    const auto traj = wong_zakai_solve(p, path, 8, true).trajectory;
    const TimeGrid g(128);
    CHECK(malliavin_derivative(p, g, traj, 0.7, 0.3) == 0.0);
    for (double s : {0.0, 0.25, 0.5}) {
        for (double t : {0.5, 0.75, 1.0}) {
            if (s > t) continue;
            CHECK(malliavin_derivative(p, g, traj, s, t) == doctest::Approx(std::exp(l * (t - s))).epsilon(1e-12));
        }
    }
    const auto q = SdeProblem::make(0.75, 0.1, "1", "2+sin(x)");
    const auto tq = wong_zakai_solve(q, path, 8, true).trajectory;
    CHECK(malliavin_derivative(q, g, tq, 0.5, 0.5) == doctest::Approx(2 + std::sin(tq[64])).epsilon(1e-14));
}

TEST_CASE("weight integrals and the predicted constant") {
    WeightMcConfig cfg;
    cfg.paths = 50;
    cfg.fine_n = 512;
    SUBCASE("langevin") {
        const auto p = SdeProblem::make(0.75, 0.1, "l*x", "1", {{"l", 1.0}});
        const auto ms = mean_square_weight_integral(p, cfg);
        CHECK(ms.value == doctest::Approx((std::exp(2.0) - 1) / 2).epsilon(1e-5));
        CHECK(ms.std_error <= 1e-12);
        const auto nd = nd_condition_estimate(p, cfg);
        CHECK(nd.value == doctest::Approx(std::exp(1.0) - 1).epsilon(1e-5));
        CHECK(predicted_asymptotic_error(p, cfg) == doctest::Approx(0.285328).epsilon(1e-4));
        const auto p6 = SdeProblem::make(0.6, 0.1, "l*x", "1", {{"l", 1.0}});
        CHECK(predicted_asymptotic_error(p6, cfg) == doctest::Approx(0.4184).epsilon(1e-3));
    }
    SUBCASE("mean-square weight vanishes exactly for degenerate problems") {
        const std::vector<std::pair<const char*, const char*>> corpus{
            {"2+sin(x)", "2+sin(x)"}, {"0", "2+sin(x)"}, {"3", "3"}, {"1", "2+sin(x)"}, {"l*x", "1"}, {"sin(x)", "2+cos(x)"}};
        for (const auto& [a, s] : corpus) {
            CAPTURE(a);
            CAPTURE(s);
            const auto p = SdeProblem::make(0.75, 0.1, a, s, {{"l", 1.0}});
            const bool degenerate = degeneracy_check(p).status == Degeneracy::degenerate;
            const auto ms = mean_square_weight_integral(p, cfg);
            CHECK((ms.value == 0.0) == degenerate);
            if (degenerate) {
                CHECK(ms.std_error == 0.0);
                CHECK(nd_condition_estimate(p, cfg).value == 0.0);
                CHECK(predicted_asymptotic_error(p, cfg) == 0.0);
            }
        }
    }
    SUBCASE("condition ND holds at three sigma for a non-degenerate problem") {
        const auto p = SdeProblem::make(0.75, 0.1, "1", "2+sin(x)");
        const auto nd = nd_condition_estimate(p, cfg);
        CHECK(nd.value - 3 * nd.std_error > 0.0);
    }
}
