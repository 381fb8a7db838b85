#include <cmath>
#include <cstdlib>

#include <Eigen/Dense>

#include "fbmsde/error.hpp"
#include "fbmsde/fbm.hpp"

namespace fbmsde {

Hurst::Hurst(double h) : h_(h) {
    if (!(h > 0.0 && h < 1.0)) {
        throw DomainError("Hurst index must lie in (0, 1), got " + std::to_string(h));
    }
}

Hurst Hurst::for_sde(double h) {
    if (!(h > 0.5 && h < 1.0)) {
        throw DomainError("Hurst index for SDE work must lie in the open interval (1/2, 1), got " +
                          std::to_string(h));
    }
    return Hurst(h);
}

TimeGrid::TimeGrid(std::size_t steps) : n_(steps) {
    if (steps == 0) throw DomainError("time grid needs at least one step");
}

namespace {
void check_time(double t, const char* what) {
    if (!(t >= 0.0 && t <= 1.0)) {
        throw DomainError(std::string(what) + " must lie in [0, 1], got " + std::to_string(t));
    }
}
}  // namespace

double covariance(double s, double t, Hurst h) {
    check_time(s, "s");
    check_time(t, "t");
    const double p = h.two_h();
    return 0.5 * (std::pow(s, p) + std::pow(t, p) - std::pow(std::abs(t - s), p));
}

double increment_covariance(std::size_t lag, std::size_t n, Hurst h) {
    if (n == 0) throw DomainError("increment_covariance needs n >= 1");
    const double p = h.two_h();
    const double k = static_cast<double>(lag);
    const double scale = 0.5 * std::pow(1.0 / static_cast<double>(n), p);
    const double km1 = lag == 0 ? 1.0 : k - 1.0;
    return scale * (std::pow(k + 1.0, p) - 2.0 * std::pow(k, p) + std::pow(km1, p));
}

std::vector<double> grid_covariance_matrix(std::size_t n, Hurst h) {
    if (n == 0) throw DomainError("grid covariance needs n >= 1");
    const TimeGrid grid(n);
    std::vector<double> r(n * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            const double c = covariance(grid.time(i + 1), grid.time(j + 1), h);
            r[i * n + j] = c;
            r[j * n + i] = c;
        }
    }
    return r;
}

std::vector<double> conditional_mean_coefficients(std::size_t n, Hurst h, double t) {
    check_time(t, "query time");
    const TimeGrid grid(n);
    const auto cov = grid_covariance_matrix(n, h);
    Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> r(
        cov.data(), static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    Eigen::VectorXd rhs(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) rhs[static_cast<Eigen::Index>(i)] = covariance(grid.time(i + 1), t, h);
    Eigen::LLT<Eigen::MatrixXd> llt(r);
    if (llt.info() != Eigen::Success) {
        throw NumericalError("grid covariance matrix is not positive definite");
    }
    const Eigen::VectorXd c = llt.solve(rhs);
    return {c.data(), c.data() + c.size()};
}

double conditional_mean(std::span<const double> grid_values, Hurst h, double t) {
    if (grid_values.size() < 2) throw DomainError("conditional_mean needs at least one observation");
    const std::size_t n = grid_values.size() - 1;
    const auto c = conditional_mean_coefficients(n, h, t);
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += c[i] * grid_values[i + 1];
    return s;
}

}  // namespace fbmsde
