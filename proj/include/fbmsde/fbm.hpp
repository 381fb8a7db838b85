#pragma once

// Exact simulation of fractional Brownian motion on equidistant grids of
// [0, 1], its piecewise-linear interpolant and Gaussian conditioning.

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "fbmsde/rng.hpp"

namespace fbmsde {

/// Hurst index. Pure Gaussian operations accept any h in (0, 1), which lets
/// h = 1/2 serve as a Brownian cross-check; SDE work needs (1/2, 1).
class Hurst {
public:
    /// Accepts h in (0, 1); throws DomainError otherwise.
    explicit Hurst(double h);

    /// Accepts only h in (1/2, 1), the regime in which the SDE theory holds.
    static Hurst for_sde(double h);

    [[nodiscard]] double value() const noexcept { return h_; }
    [[nodiscard]] double two_h() const noexcept { return 2.0 * h_; }

    friend bool operator==(Hurst, Hurst) = default;

private:
    double h_;
};

/// Equidistant grid t_i = i/n, i = 0..n.
class TimeGrid {
public:
    explicit TimeGrid(std::size_t steps);

    [[nodiscard]] std::size_t steps() const noexcept { return n_; }
    [[nodiscard]] std::size_t nodes() const noexcept { return n_ + 1; }
    [[nodiscard]] double dt() const noexcept { return 1.0 / static_cast<double>(n_); }
    [[nodiscard]] double time(std::size_t i) const noexcept {
        return static_cast<double>(i) / static_cast<double>(n_);
    }

    friend bool operator==(TimeGrid, TimeGrid) = default;

private:
    std::size_t n_;
};

/// Sampled fBm values B_{t_0}, ..., B_{t_n} with values[0] == 0.
struct FbmPath {
    TimeGrid grid;
    std::vector<double> values;
    Hurst hurst;
    std::uint64_t stream_id = 0;

    [[nodiscard]] std::size_t steps() const noexcept { return grid.steps(); }
    [[nodiscard]] double increment(std::size_t k) const noexcept { return values[k + 1] - values[k]; }
};

/// R_H(s, t) = (s^{2H} + t^{2H} - |t - s|^{2H}) / 2 for s, t in [0, 1].
double covariance(double s, double t, Hurst h);

/// E[dB_i dB_{i+k}] for increments on a grid with n steps.
double increment_covariance(std::size_t lag, std::size_t n, Hurst h);

/// Covariance matrix of (B_{t_1}, ..., B_{t_n}) in row-major order.
std::vector<double> grid_covariance_matrix(std::size_t n, Hurst h);

/// Piecewise-linear interpolation of the path at t in [0, 1].
double linear_interpolant(const FbmPath& path, double t);

/// E(B_t | B_{t_1}, ..., B_{t_n}) for grid observations values[0..n]
/// (values[0] must be the deterministic B_0 = 0).
double conditional_mean(std::span<const double> grid_values, Hurst h, double t);

/// Regression coefficients c with E(B_t | obs) = c . (B_{t_1}, ..., B_{t_n}).
std::vector<double> conditional_mean_coefficients(std::size_t n, Hurst h, double t);

/// Restriction of a path to every factor-th node.
FbmPath subsample(const FbmPath& path, std::size_t factor);

/// CSV rows `path_id,t,value` (no header) with 17 significant digits.
void write_path_csv_rows(std::ostream& out, const FbmPath& path, std::uint64_t path_id);
inline constexpr const char* kPathCsvHeader = "path_id,t,value";

// ---------------------------------------------------------------------------
// Samplers. Both are exact in distribution and cache their setup per (n, h).

/// Cholesky factor of the grid covariance matrix; O(n^2) per path.
class CholeskySampler {
public:
    CholeskySampler(std::size_t n, Hurst h);

    /// Path from n standard normals (deterministic map).
    [[nodiscard]] FbmPath sample_from_normals(std::span<const double> z) const;
    [[nodiscard]] FbmPath sample(RngStream& stream) const;

    [[nodiscard]] std::size_t steps() const noexcept { return n_; }
    [[nodiscard]] std::size_t normals_needed() const noexcept { return n_; }
    /// Row-packed lower factor (row r has r+1 entries).
    [[nodiscard]] std::span<const double> packed_factor() const noexcept { return *factor_; }

private:
    std::size_t n_;
    Hurst h_;
    std::shared_ptr<const std::vector<double>> factor_;
};

/// Circulant embedding (Davies-Harte) of the increment autocovariance in a
/// circulant of size 2n; O(n log n) per path.
class CirculantSampler {
public:
    /// Eigenvalues in [-1e-9, 0) are clamped to zero; anything below throws.
    static constexpr double kNegativeTolerance = -1e-9;

    CirculantSampler(std::size_t n, Hurst h);

    /// Path from 4n standard normals (real and imaginary parts of 2n complex
    /// Gaussians).
    [[nodiscard]] FbmPath sample_from_normals(std::span<const double> z) const;
    [[nodiscard]] FbmPath sample(RngStream& stream) const;

    [[nodiscard]] std::size_t steps() const noexcept { return n_; }
    [[nodiscard]] std::size_t normals_needed() const noexcept { return 4 * n_; }
    /// Eigenvalues of the embedding circulant after clamping.
    [[nodiscard]] std::span<const double> eigenvalues() const noexcept;

    struct Setup;

private:
    std::size_t n_;
    Hurst h_;
    std::shared_ptr<const Setup> setup_;
};

/// Raw (unclamped) eigenvalues of the circulant embedding for (n, h).
std::vector<double> circulant_eigenvalues(std::size_t n, Hurst h);

enum class SamplerKind { cholesky, circulant };

SamplerKind parse_sampler_kind(const std::string& name);
const char* to_string(SamplerKind kind) noexcept;

/// Convenience front end over both samplers.
class FbmSampler {
public:
    FbmSampler(SamplerKind kind, std::size_t n, Hurst h);
    [[nodiscard]] FbmPath sample(RngStream& stream) const;
    [[nodiscard]] std::size_t steps() const noexcept { return n_; }
    [[nodiscard]] SamplerKind kind() const noexcept { return kind_; }

private:
    SamplerKind kind_;
    std::size_t n_;
    std::unique_ptr<CholeskySampler> cholesky_;
    std::unique_ptr<CirculantSampler> circulant_;
};

}  // namespace fbmsde
