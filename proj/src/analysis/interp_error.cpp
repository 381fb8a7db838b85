#include <algorithm>
#include <cmath>
#include <numbers>

#include "fbmsde/analysis.hpp"
#include "fbmsde/error.hpp"
#include "fbmsde/quadrature.hpp"
#include "fbmsde/simd/kernels.hpp"

namespace fbmsde {

namespace {

using ld = long double;

/// Cov(B_a - B_b, B_c - B_d).
ld increment_pair_cov(ld a, ld b, ld c, ld d, ld p) {
    auto f = [p](ld x) { return x == 0.0L ? 0.0L : std::pow(std::abs(x), p); };
    return 0.5L * (f(a - d) + f(b - c) - f(a - c) - f(b - d));
}

/// Nodes and weights on [0, 1] after u = x - sin(2 pi x)/(2 pi), which
/// vanishes to second order at both ends and tames endpoint kinks.
GaussRule clustered_rule(int q) {
    GaussRule rule = gauss_legendre_unit(q);
    const double two_pi = 2.0 * std::numbers::pi;
    for (std::size_t a = 0; a < rule.nodes.size(); ++a) {
        const double x = rule.nodes[a];
        rule.nodes[a] = x - std::sin(two_pi * x) / two_pi;
        rule.weights[a] *= 1.0 - std::cos(two_pi * x);
    }
    return rule;
}

}  // namespace

double interp_error_covariance(long long k, double u1, double u2, Hurst h) {
    const ld p = h.two_h();
    const ld kk = static_cast<ld>(k);
    const ld v1 = u1, v2 = u2;
    // e = (B_{u1} - B_0) - u1 (B_1 - B_0) on cell [0, 1]; e' likewise on [k, k+1].
    const ld xx = increment_pair_cov(v1, 0, kk + v2, kk, p);
    const ld xy = increment_pair_cov(v1, 0, kk + 1, kk, p);
    const ld yx = increment_pair_cov(1, 0, kk + v2, kk, p);
    const ld yy = increment_pair_cov(1, 0, kk + 1, kk, p);
    return static_cast<double>(xx - v2 * xy - v1 * yx + v1 * v2 * yy);
}

double exact_weighted_interp_error(const std::function<double(double)>& rho, std::size_t n, Hurst h, int q) {
    if (n == 0) throw DomainError("exact_weighted_interp_error requires n >= 1");
    if (q < 2) throw DomainError("exact_weighted_interp_error requires q >= 2");
    const double dt = 1.0 / static_cast<double>(n);

    // Lags 0 and 1 carry |.|^{2H} kinks on cell edges and corners; they get a
    // clustered high-order rule. Farther lags are analytic in each cell.
    const GaussRule smooth = gauss_legendre_unit(q);
    const GaussRule near = clustered_rule(std::max(4 * q, 32));

    // U[a][i] = w_a rho(t_i + u_a dt).
    auto tabulate = [&](const GaussRule& rule) {
        std::vector<std::vector<double>> U(rule.nodes.size(), std::vector<double>(n));
        for (std::size_t a = 0; a < rule.nodes.size(); ++a) {
            for (std::size_t i = 0; i < n; ++i) {
                U[a][i] = rule.weights[a] * rho((static_cast<double>(i) + rule.nodes[a]) * dt);
            }
        }
        return U;
    };
    const auto Us = tabulate(smooth);
    const auto Un = tabulate(near);

    // Diagonal cells: the triangle u2 < u1 via (u1, u2) = (x, x y), doubled.
    const std::size_t qn = near.nodes.size();
    double diagonal = 0.0;
    std::vector<double> V(n);
    for (std::size_t a = 0; a < qn; ++a) {
        const double x = near.nodes[a];
        for (std::size_t b = 0; b < qn; ++b) {
            const double u2 = x * near.nodes[b];
            for (std::size_t i = 0; i < n; ++i) V[i] = rho((static_cast<double>(i) + u2) * dt);
            const double kernel = interp_error_covariance(0, x, u2, h) * near.weights[b] * x;
            diagonal += kernel * simd::dot(Un[a], V);
        }
    }
    diagonal *= 2.0;

    // Off-diagonal cells depend on the pair only through the lag.
    auto lag_sum = [&](std::size_t k, const GaussRule& rule, const std::vector<std::vector<double>>& U) {
        const std::size_t m = rule.nodes.size();
        const std::size_t len = n - k;
        double lag = 0.0;
        for (std::size_t a = 0; a < m; ++a) {
            const std::span<const double> left(U[a].data(), len);
            for (std::size_t b = 0; b < m; ++b) {
                const double kernel =
                    interp_error_covariance(static_cast<long long>(k), rule.nodes[a], rule.nodes[b], h);
                lag += kernel * simd::dot(left, std::span<const double>(U[b].data() + k, len));
            }
        }
        return lag;
    };
    double off = 0.0;
    for (std::size_t k = n - 1; k >= 2; --k) off += lag_sum(k, smooth, Us);
    if (n > 1) off += lag_sum(1, near, Un);

    return std::pow(dt, h.two_h() + 2.0) * (diagonal + 2.0 * off);
}

}  // namespace fbmsde
