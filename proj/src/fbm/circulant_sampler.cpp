#include <complex>
#include <cmath>
#include <mutex>

#include <fftw3.h>

#include "fbmsde/error.hpp"
#include "fbmsde/fbm.hpp"
#include "fbmsde/simd/kernels.hpp"
#include "setup_cache.hpp"

namespace fbmsde {

namespace {

// The FFTW planner is not re-entrant; plan execution on caller-owned arrays is.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

class ForwardPlan {
public:
    explicit ForwardPlan(std::size_t size) : size_(size) {
        std::vector<std::complex<double>> in(size), out(size);
        std::lock_guard lock(planner_mutex());
        plan_ = fftw_plan_dft_1d(static_cast<int>(size), reinterpret_cast<fftw_complex*>(in.data()),
                                 reinterpret_cast<fftw_complex*>(out.data()), FFTW_FORWARD,
                                 FFTW_ESTIMATE | FFTW_UNALIGNED);
        if (plan_ == nullptr) throw NumericalError("FFTW planning failed for size " + std::to_string(size));
    }
    ForwardPlan(const ForwardPlan&) = delete;
    ForwardPlan& operator=(const ForwardPlan&) = delete;
    ~ForwardPlan() {
        std::lock_guard lock(planner_mutex());
        fftw_destroy_plan(plan_);
    }

    void execute(std::vector<std::complex<double>>& in, std::vector<std::complex<double>>& out) const {
        fftw_execute_dft(plan_, reinterpret_cast<fftw_complex*>(in.data()),
                         reinterpret_cast<fftw_complex*>(out.data()));
    }
    [[nodiscard]] std::size_t size() const noexcept { return size_; }

private:
    std::size_t size_;
    fftw_plan plan_ = nullptr;
};

std::vector<double> raw_eigenvalues(std::size_t n, Hurst h, const ForwardPlan& plan) {
    const std::size_t m = 2 * n;
    std::vector<std::complex<double>> row(m), spectrum(m);
    for (std::size_t j = 0; j < m; ++j) {
        const std::size_t lag = j <= n ? j : m - j;
        row[j] = increment_covariance(lag, n, h);
    }
    plan.execute(row, spectrum);
    std::vector<double> eig(m);
    for (std::size_t k = 0; k < m; ++k) eig[k] = spectrum[k].real();
    return eig;
}

}  // namespace

struct CirculantSampler::Setup {
    Setup(std::size_t n, Hurst h) : plan(2 * n) {
        eigenvalues = raw_eigenvalues(n, h, plan);
        const std::size_t m = 2 * n;
        scale.resize(2 * m);
        for (std::size_t k = 0; k < m; ++k) {
            double& lambda = eigenvalues[k];
            if (lambda < 0.0) {
                if (lambda < kNegativeTolerance) {
                    throw NumericalError("circulant embedding has negative eigenvalue " + std::to_string(lambda) +
                                         " (n=" + std::to_string(n) + ", H=" + std::to_string(h.value()) + ")");
                }
                lambda = 0.0;
            }
            const double s = std::sqrt(lambda / static_cast<double>(m));
            scale[2 * k] = s;
            scale[2 * k + 1] = s;
        }
    }

    ForwardPlan plan;
    std::vector<double> eigenvalues;
    // sqrt(lambda_k / 2n), duplicated for interleaved (re, im) storage.
    std::vector<double> scale;
};

namespace {
detail::SetupCache<CirculantSampler::Setup>& setup_cache() {
    static detail::SetupCache<CirculantSampler::Setup> cache;
    return cache;
}
}  // namespace

std::vector<double> circulant_eigenvalues(std::size_t n, Hurst h) {
    if (n == 0) throw DomainError("sampler needs n >= 1");
    const ForwardPlan plan(2 * n);
    return raw_eigenvalues(n, h, plan);
}

CirculantSampler::CirculantSampler(std::size_t n, Hurst h) : n_(n), h_(h) {
    if (n == 0) throw DomainError("sampler needs n >= 1");
    setup_ = setup_cache().get(n, h.value(), [&] { return std::make_shared<const Setup>(n, h); });
}

std::span<const double> CirculantSampler::eigenvalues() const noexcept { return setup_->eigenvalues; }

FbmPath CirculantSampler::sample_from_normals(std::span<const double> z) const {
    const std::size_t m = 2 * n_;
    if (z.size() < 2 * m) throw DomainError("circulant sampler needs " + std::to_string(2 * m) + " normals");
    std::vector<std::complex<double>> weighted(m), transformed(m);
    simd::active().mul(z.data(), setup_->scale.data(), reinterpret_cast<double*>(weighted.data()), 2 * m);
    setup_->plan.execute(weighted, transformed);

    FbmPath path{TimeGrid(n_), std::vector<double>(n_ + 1, 0.0), h_, 0};
    double acc = 0.0;
    for (std::size_t k = 0; k < n_; ++k) {
        acc += transformed[k].real();
        path.values[k + 1] = acc;
    }
    return path;
}

FbmPath CirculantSampler::sample(RngStream& stream) const {
    std::vector<double> z(normals_needed());
    stream.fill_normal(z);
    FbmPath path = sample_from_normals(z);
    path.stream_id = stream.stream_id();
    return path;
}

}  // namespace fbmsde
