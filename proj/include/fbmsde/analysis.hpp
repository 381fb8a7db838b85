#pragma once

// Analytic side of the error theory: the weight process, the limiting
// constants built from zeta(-2H), the kernel sums that converge to them and a
// deterministic evaluator for weighted interpolation errors.

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "fbmsde/fbm.hpp"
#include "fbmsde/model.hpp"

namespace fbmsde {

/// Riemann zeta for s > 1 (Dirichlet sum plus Euler-Maclaurin tail).
double zeta_dirichlet(double s);

/// Riemann zeta on (-2, 0) through the functional equation.
double zeta_negative(double s);

struct Constants {
    Hurst hurst{0.75};
    double kappa = 0.0;       // H (2H - 1)
    double zeta_neg2H = 0.0;  // zeta(-2H)
    double beta = 0.0;        // |zeta(-2H)|^{1/2}
    double k2 = 0.0;
};

/// Requires h in (1/2, 1).
Constants constants_for(Hurst h);

/// 1/(2H+1) - 1/((2H+1)(2H+2)) - 1/4.
double k2_constant(Hurst h);

/// Cell-pair kernel for lag k >= 1. Large lags use the asymptotic series in
/// k^{2H-4}, k^{2H-6}, ... because the direct formula cancels catastrophically.
double k1_kernel(long long k, Hurst h);

/// Closed form of K2 + 2 sum_{k<=r} K1(k), evaluated in extended precision.
double c0_sequence(long long r, Hurst h);

/// K2 + 2 sum_{k<=r} K1(k) summed term by term.
double c0_kernel_sum(long long r, Hurst h);

/// sum_{j>=1} (2j+1)^{-(2H+1)}.
double odd_power_series(Hurst h);

/// sqrt(odd_power_series(h) / (2 pi^{2H+2} c)) for a caller-supplied spectral constant c > 0.
double lower_bound_constant(Hurst h, double spectral_c);

/// 1/4 E(B_{t_i} + B_{t_{i+1}} - 2 B_{s1})(B_{t_j} + B_{t_{j+1}} - 2 B_{s2}) on a
/// grid with n steps, via its power expansion.
double theta_cross_cov(std::size_t i, std::size_t j, double s1, double s2, std::size_t n, Hurst h);

/// Cov(e(u1), e'(u2)) for the linear-interpolation error of fBm on two unit
/// cells at lag k (cell j - cell i = k), with u1, u2 in [0, 1] the in-cell
/// positions. Multiply by Delta^{2H} for a grid of spacing Delta.
double interp_error_covariance(long long k, double u1, double u2, Hurst h);

/// E|int_0^1 rho(t) (B_t - B~_t) dt|^2 for a deterministic weight rho and the
/// piecewise-linear interpolant B~ on n cells; q-point Gauss-Legendre per cell
/// with an endpoint-clustering substitution, diagonal cells split at s1 = s2.
double exact_weighted_interp_error(const std::function<double(double)>& rho, std::size_t n, Hurst h, int q = 8);

struct WeightPath {
    TimeGrid grid{1};
    std::vector<double> y_values;
    std::uint64_t stream_id = 0;
};

/// Y_t = sigma(X_1) h(X_t) exp(int_t^1 h(X)), h = a' - a sigma'/sigma, on the
/// grid of `path`, with the trajectory X solved on that grid.
WeightPath weight_path(const SdeProblem& p, const FbmPath& path, std::span<const double> trajectory);

/// (a sigma' - a' sigma)(X_t) exp(int_t^1 a'(X) ds + int_t^1 sigma'(X) dB) with
/// trapezoid Riemann-Stieltjes sums. This form carries the opposite sign of
/// weight_path; the two agree in absolute value.
WeightPath weight_path_stochastic(const SdeProblem& p, const FbmPath& path, std::span<const double> trajectory);

/// D_s X_t = sigma(X_t) exp(int_s^t h(X)) for s <= t, else 0; trajectory on grid.
double malliavin_derivative(const SdeProblem& p, const TimeGrid& grid, std::span<const double> trajectory, double s,
                            double t);

struct McEstimate {
    double value = 0.0;
    double std_error = 0.0;
};

struct WeightMcConfig {
    std::size_t paths = 1000;
    std::size_t fine_n = 1024;
    std::uint64_t seed = 1;
    int substeps = 8;
    std::size_t workers = 0;  // 0: worker_count()
};

/// Monte Carlo estimate of int_0^1 E|Y_t|^2 dt.
McEstimate mean_square_weight_integral(const SdeProblem& p, const WeightMcConfig& cfg);

/// Monte Carlo estimate of int_0^1 |E Y_t| dt.
McEstimate nd_condition_estimate(const SdeProblem& p, const WeightMcConfig& cfg);

/// beta_H (int_0^1 E|Y_t|^2 dt)^{1/2}.
double predicted_asymptotic_error(const SdeProblem& p, const WeightMcConfig& cfg);

}  // namespace fbmsde
