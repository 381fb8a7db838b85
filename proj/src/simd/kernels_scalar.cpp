#include "fbmsde/simd/kernels.hpp"

namespace fbmsde::simd {
namespace {

double dot_scalar(const double* a, const double* b, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
    return s;
}

double dot3_scalar(const double* a, const double* b, const double* c, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i] * c[i];
    return s;
}

void axpy_scalar(double alpha, const double* x, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void mul_scalar(const double* a, const double* b, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = a[i] * b[i];
}

void lower_tri_matvec_scalar(const double* packed, const double* z, double* out, std::size_t n) {
    const double* row = packed;
    for (std::size_t r = 0; r < n; ++r) {
        out[r] = dot_scalar(row, z, r + 1);
        row += r + 1;
    }
}

constexpr KernelTable kScalar{Isa::scalar, dot_scalar, dot3_scalar, axpy_scalar, mul_scalar,
                              lower_tri_matvec_scalar};

}  // namespace

const KernelTable& scalar_kernels() noexcept { return kScalar; }

}  // namespace fbmsde::simd
