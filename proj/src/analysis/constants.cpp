#include <cmath>
#include <numbers>

#include "fbmsde/analysis.hpp"
#include "fbmsde/error.hpp"

namespace fbmsde {

namespace {

using ld = long double;

/// Lags at or above this use the asymptotic series for K1.
constexpr long long kSeriesLag = 20;

ld powl_abs(ld x, ld p) { return x == 0.0L ? 0.0L : std::pow(std::abs(x), p); }

/// (r+1)^p - r^p without forming the two large powers.
ld forward_difference(ld r, ld p) { return std::pow(r, p) * std::expm1(p * std::log1p(1.0L / r)); }

ld k1_direct(ld k, ld two_h) {
    const ld p0 = two_h, p1 = two_h + 1.0L, p2 = two_h + 2.0L;
    return -0.125L * (2.0L * powl_abs(k, p0) + powl_abs(k + 1, p0) + powl_abs(k - 1, p0)) +
           (powl_abs(k + 1, p1) - powl_abs(k - 1, p1)) / (2.0L * p1) +
           (2.0L * powl_abs(k, p2) - powl_abs(k + 1, p2) - powl_abs(k - 1, p2)) / (2.0L * p1 * p2);
}

/// sum over even m >= 4 of binom(2H, m) (1/(m+2) - 1/4) k^{2H-m}.
ld k1_series(ld k, ld two_h) {
    // binom(2H, m) built incrementally.
    ld binom = 1.0L;
    for (int j = 0; j < 4; ++j) binom *= (two_h - j) / (j + 1);
    ld kpow = std::pow(k, two_h - 4.0L);
    const ld inv_k2 = 1.0L / (k * k);
    ld sum = 0.0L;
    for (int m = 4; m < 80; m += 2) {
        const ld term = binom * (1.0L / (m + 2) - 0.25L) * kpow;
        sum += term;
        if (std::abs(term) <= 1e-22L * std::abs(sum)) break;
        binom *= (two_h - m) / (m + 1) * (two_h - m - 1) / (m + 2);
        kpow *= inv_k2;
    }
    return sum;
}

}  // namespace

double k2_constant(Hurst h) {
    const double p1 = h.two_h() + 1.0, p2 = h.two_h() + 2.0;
    return 1.0 / p1 - 1.0 / (p2 * p1) - 0.25;
}

Constants constants_for(Hurst h) {
    const Hurst hs = Hurst::for_sde(h.value());
    Constants c;
    c.hurst = hs;
    c.kappa = hs.value() * (hs.two_h() - 1.0);
    c.zeta_neg2H = zeta_negative(-hs.two_h());
    c.beta = std::sqrt(std::abs(c.zeta_neg2H));
    c.k2 = k2_constant(hs);
    return c;
}

double k1_kernel(long long k, Hurst h) {
    if (k < 1) throw DomainError("k1_kernel requires k >= 1");
    const ld two_h = h.two_h();
    if (k >= kSeriesLag) return static_cast<double>(k1_series(static_cast<ld>(k), two_h));
    return static_cast<double>(k1_direct(static_cast<ld>(k), two_h));
}

double c0_sequence(long long r, Hurst h) {
    if (r < 1) throw DomainError("c0_sequence requires r >= 1");
    const ld p0 = h.two_h(), p1 = p0 + 1.0L, p2 = p0 + 2.0L;
    const ld rr = static_cast<ld>(r);
    // Kahan-compensated sum of k^{2H}.
    ld sum = 0.0L, comp = 0.0L;
    for (long long k = 1; k <= r; ++k) {
        const ld y = std::pow(static_cast<ld>(k), p0) - comp;
        const ld t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    const ld value = -0.25L * forward_difference(rr, p0) - sum +
                     (2.0L * std::pow(rr, p1) + forward_difference(rr, p1)) / p1 -
                     forward_difference(rr, p2) / (p1 * p2);
    return static_cast<double>(value);
}

double c0_kernel_sum(long long r, Hurst h) {
    if (r < 1) throw DomainError("c0_kernel_sum requires r >= 1");
    // Smallest terms first.
    ld sum = 0.0L;
    for (long long k = r; k >= 1; --k) sum += static_cast<ld>(k1_kernel(k, h));
    return static_cast<double>(static_cast<ld>(k2_constant(h)) + 2.0L * sum);
}

double odd_power_series(Hurst h) {
    const double s = h.two_h() + 1.0;
    return (1.0 - std::pow(2.0, -s)) * zeta_dirichlet(s) - 1.0;
}

double lower_bound_constant(Hurst h, double spectral_c) {
    if (!(spectral_c > 0.0) || !std::isfinite(spectral_c)) {
        throw DomainError("spectral constant must be positive and finite");
    }
    const double pi_pow = std::pow(std::numbers::pi, h.two_h() + 2.0);
    return std::sqrt(odd_power_series(h) / (2.0 * pi_pow * spectral_c));
}

double theta_cross_cov(std::size_t i, std::size_t j, double s1, double s2, std::size_t n, Hurst h) {
    if (n == 0 || i >= n || j >= n) throw DomainError("theta_cross_cov: cell index out of range");
    const TimeGrid grid(n);
    const double ti = grid.time(i), ti1 = grid.time(i + 1), tj = grid.time(j), tj1 = grid.time(j + 1);
    constexpr double slack = 1e-14;
    if (s1 < ti - slack || s1 > ti1 + slack || s2 < tj - slack || s2 > tj1 + slack) {
        throw DomainError("theta_cross_cov: s1, s2 must lie in cells i, j");
    }
    const double p = h.two_h();
    auto f = [p](double x) { return x == 0.0 ? 0.0 : std::pow(std::abs(x), p); };
    return -0.125 * (f(ti - tj) + f(ti - tj1) + f(ti1 - tj) + f(ti1 - tj1)) +
           0.25 * (f(ti - s2) + f(ti1 - s2) + f(tj - s1) + f(tj1 - s1)) - 0.5 * f(s1 - s2);
}

}  // namespace fbmsde
