#pragma once

// Data-parallel inner loops used by the samplers, schemes and analysis code.
//
// Every kernel has a scalar reference implementation; vectorized variants
// (AVX2+FMA on x86-64, NEON on aarch64) are selected once at runtime. The
// variants are equivalence-tested against the scalar reference. Summation
// order differs between variants, so results agree to rounding, not bitwise.

#include <cstddef>
#include <span>
#include <string_view>

namespace fbmsde::simd {

enum class Isa { scalar, avx2, neon };

/// Function table for one instruction set.
struct KernelTable {
    Isa isa;
    /// sum_i a[i] * b[i]
    double (*dot)(const double* a, const double* b, std::size_t n);
    /// sum_i a[i] * b[i] * c[i]
    double (*dot3)(const double* a, const double* b, const double* c, std::size_t n);
    /// y[i] += alpha * x[i]
    void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
    /// out[i] = a[i] * b[i]
    void (*mul)(const double* a, const double* b, double* out, std::size_t n);
    /// out = L z for a row-packed lower-triangular L (row r holds r+1 entries)
    void (*lower_tri_matvec)(const double* packed, const double* z, double* out, std::size_t n);
};

const KernelTable& scalar_kernels() noexcept;
#if defined(FBMSDE_HAVE_AVX2)
const KernelTable& avx2_kernels() noexcept;
#endif
#if defined(FBMSDE_HAVE_NEON)
const KernelTable& neon_kernels() noexcept;
#endif

/// Kernel table for the best ISA supported by the running CPU. The choice is
/// made on first use; setting FBM_SDE_SIMD=scalar in the environment forces
/// the scalar reference path.
const KernelTable& active() noexcept;

/// Every kernel table usable on this machine, scalar first.
std::span<const KernelTable* const> available();

std::string_view isa_name(Isa isa) noexcept;

inline double dot(std::span<const double> a, std::span<const double> b) noexcept {
    return active().dot(a.data(), b.data(), a.size() < b.size() ? a.size() : b.size());
}

inline double dot3(std::span<const double> a, std::span<const double> b,
                   std::span<const double> c) noexcept {
    std::size_t n = a.size();
    if (b.size() < n) n = b.size();
    if (c.size() < n) n = c.size();
    return active().dot3(a.data(), b.data(), c.data(), n);
}

inline void axpy(double alpha, std::span<const double> x, std::span<double> y) noexcept {
    active().axpy(alpha, x.data(), y.data(), x.size() < y.size() ? x.size() : y.size());
}

inline void mul(std::span<const double> a, std::span<const double> b, std::span<double> out) noexcept {
    std::size_t n = out.size();
    if (a.size() < n) n = a.size();
    if (b.size() < n) n = b.size();
    active().mul(a.data(), b.data(), out.data(), n);
}

}  // namespace fbmsde::simd
