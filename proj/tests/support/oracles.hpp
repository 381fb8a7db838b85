#pragma once

// Independent reference implementations used only by the tests. None of
// these call into the library's own evaluators.

#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

namespace oracle {

/// fBm covariance written out directly.
inline double fbm_cov(double s, double t, double h) {
    const double p = 2.0 * h;
    return 0.5 * (std::pow(s, p) + std::pow(t, p) - std::pow(std::abs(t - s), p));
}

/// Riemann zeta by Euler-Maclaurin summation applied directly at s (valid as
/// an analytic continuation for s != 1, s > -(2J+1)).
inline double zeta_euler_maclaurin(double s) {
    constexpr int N = 40;
    static const double bernoulli[] = {1.0 / 6,         -1.0 / 30,  1.0 / 42,        -1.0 / 30,
                                       5.0 / 66,        -691.0 / 2730, 7.0 / 6,      -3617.0 / 510,
                                       43867.0 / 798,   -174611.0 / 330};
    long double sum = 0.0L;
    for (int k = 1; k < N; ++k) sum += std::pow(static_cast<long double>(k), -static_cast<long double>(s));
    const long double n = N;
    sum += std::pow(n, 1.0L - s) / (s - 1.0L) + 0.5L * std::pow(n, -static_cast<long double>(s));
    long double factorial = 1.0L;
    long double rising = s;  // s (s+1) ... (s+2j-2)
    for (int j = 1; j <= 10; ++j) {
        factorial *= (2.0L * j - 1.0L) * (2.0L * j);
        sum += bernoulli[j - 1] / factorial * rising * std::pow(n, -static_cast<long double>(s) - 2.0L * j + 1.0L);
        rising *= (s + 2.0L * j - 1.0L) * (s + 2.0L * j);
    }
    return static_cast<double>(sum);
}

/// Riemann zeta from the Dirichlet eta function, eta accelerated with the
/// Borwein alternating-series algorithm: zeta(s) = eta(s) / (1 - 2^{1-s}).
inline double zeta_borwein_eta(double s) {
    constexpr int n = 60;
    // d_k = n sum_{i=0}^{k} (n+i-1)! 4^i / ((n-i)! (2i)!)
    std::vector<long double> d(n + 1);
    long double term = 1.0L / n;  // i = 0 term divided by n
    long double acc = term;
    d[0] = n * acc;
    for (int i = 1; i <= n; ++i) {
        term *= 4.0L * (n + i - 1) * (n - i + 1) / ((2.0L * i - 1.0L) * (2.0L * i));
        acc += term;
        d[i] = n * acc;
    }
    long double sum = 0.0L;
    for (int k = 0; k < n; ++k) {
        const long double sign = (k % 2 == 0) ? 1.0L : -1.0L;
        sum += sign * (d[k] - d[n]) * std::pow(static_cast<long double>(k + 1), -static_cast<long double>(s));
    }
    const long double eta = -sum / d[n];
    return static_cast<double>(eta / (1.0L - std::pow(2.0L, 1.0L - s)));
}

/// theta_{i,j}(s1, s2) from its definition as a covariance of endpoint
/// averages minus point values.
inline double theta_from_covariance(std::size_t i, std::size_t j, double s1, double s2, std::size_t n, double h) {
    const double ti = double(i) / n, ti1 = double(i + 1) / n, tj = double(j) / n, tj1 = double(j + 1) / n;
    const double xs[3] = {ti, ti1, s1};
    const double cx[3] = {1.0, 1.0, -2.0};
    const double ys[3] = {tj, tj1, s2};
    const double cy[3] = {1.0, 1.0, -2.0};
    double v = 0.0;
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) v += cx[a] * cy[b] * fbm_cov(xs[a], ys[b], h);
    return 0.25 * v;
}

/// The three-part K1 formula in plain double precision (reliable for small k).
inline double k1_plain(long long k, double h) {
    const double p0 = 2 * h, p1 = p0 + 1, p2 = p0 + 2;
    auto f = [](double x, double p) { return x == 0 ? 0.0 : std::pow(std::abs(x), p); };
    const double kd = double(k);
    return -0.125 * (2 * f(kd, p0) + f(kd + 1, p0) + f(kd - 1, p0)) +
           (f(kd + 1, p1) - f(kd - 1, p1)) / (2 * p1) +
           (2 * f(kd, p2) - f(kd + 1, p2) - f(kd - 1, p2)) / (2 * p1 * p2);
}

/// Closed-form antiderivative of 1/(2 + sin x) anchored at 0, valid for |x| < pi.
inline double theta_two_plus_sin(double x) {
    const double r3 = std::sqrt(3.0);
    return 2.0 / r3 * (std::atan((2.0 * std::tan(x / 2.0) + 1.0) / r3) - std::numbers::pi / 6.0);
}

/// Two-dimensional tensor Gauss-Legendre on a rectangle, composite over
/// `panels` x `panels` sub-rectangles (nodes computed by Newton).
inline double integrate_2d(const std::function<double(double, double)>& f, double a0, double a1, double b0, double b1,
                           int panels = 8, int q = 12) {
    std::vector<double> x(q), w(q);
    for (int i = 0; i < q; ++i) {
        double z = std::cos(std::numbers::pi * (i + 0.75) / (q + 0.5)), dp = 0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1, p1 = 0;
            for (int k = 1; k <= q; ++k) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * k - 1) * z * p1 - (k - 1.0) * p2) / k;
            }
            dp = q * (z * p0 - p1) / (z * z - 1);
            const double dz = p0 / dp;
            z -= dz;
            if (std::abs(dz) < 1e-15) break;
        }
        x[i] = z;
        w[i] = 2 / ((1 - z * z) * dp * dp);
    }
    double total = 0.0;
    const double ha = (a1 - a0) / panels, hb = (b1 - b0) / panels;
    for (int pa = 0; pa < panels; ++pa)
        for (int pb = 0; pb < panels; ++pb)
            for (int i = 0; i < q; ++i)
                for (int j = 0; j < q; ++j) {
                    const double s = a0 + ha * (pa + 0.5 * (x[i] + 1));
                    const double t = b0 + hb * (pb + 0.5 * (x[j] + 1));
                    total += 0.25 * ha * hb * w[i] * w[j] * f(s, t);
                }
    return total;
}

/// Least-squares slope of log y on log x.
inline double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += std::log(x[i]);
        my += std::log(y[i]);
    }
    mx /= x.size();
    my /= y.size();
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = std::log(x[i]) - mx;
        sxy += dx * (std::log(y[i]) - my);
        sxx += dx * dx;
    }
    return sxy / sxx;
}

}  // namespace oracle
