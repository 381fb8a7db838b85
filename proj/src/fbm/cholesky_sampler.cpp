#include <Eigen/Dense>

#include "fbmsde/error.hpp"
#include "fbmsde/fbm.hpp"
#include "fbmsde/simd/kernels.hpp"
#include "setup_cache.hpp"

namespace fbmsde {

namespace {

std::vector<double> build_packed_factor(std::size_t n, Hurst h) {
    const auto cov = grid_covariance_matrix(n, h);
    const auto dim = static_cast<Eigen::Index>(n);
    Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> r(cov.data(), dim,
                                                                                                dim);
    Eigen::LLT<Eigen::MatrixXd> llt(r);
    if (llt.info() != Eigen::Success) {
        throw NumericalError("Cholesky factorization of the fBm grid covariance failed (n=" + std::to_string(n) +
                             ")");
    }
    const Eigen::MatrixXd l = llt.matrixL();
    std::vector<double> packed;
    packed.reserve(n * (n + 1) / 2);
    for (Eigen::Index i = 0; i < dim; ++i) {
        for (Eigen::Index j = 0; j <= i; ++j) packed.push_back(l(i, j));
    }
    return packed;
}

detail::SetupCache<std::vector<double>>& factor_cache() {
    static detail::SetupCache<std::vector<double>> cache;
    return cache;
}

}  // namespace

CholeskySampler::CholeskySampler(std::size_t n, Hurst h) : n_(n), h_(h) {
    if (n == 0) throw DomainError("sampler needs n >= 1");
    factor_ = factor_cache().get(n, h.value(), [&] { return std::make_shared<const std::vector<double>>(build_packed_factor(n, h)); });
}

FbmPath CholeskySampler::sample_from_normals(std::span<const double> z) const {
    if (z.size() < n_) throw DomainError("Cholesky sampler needs " + std::to_string(n_) + " normals");
    FbmPath path{TimeGrid(n_), std::vector<double>(n_ + 1, 0.0), h_, 0};
    simd::active().lower_tri_matvec(factor_->data(), z.data(), path.values.data() + 1, n_);
    return path;
}

FbmPath CholeskySampler::sample(RngStream& stream) const {
    std::vector<double> z(n_);
    stream.fill_normal(z);
    FbmPath path = sample_from_normals(z);
    path.stream_id = stream.stream_id();
    return path;
}

}  // namespace fbmsde
