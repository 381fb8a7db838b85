#include <cstdlib>
#include <string_view>
#include <vector>

#include "fbmsde/simd/kernels.hpp"

namespace fbmsde::simd {
namespace {

bool scalar_forced() {
    const char* env = std::getenv("FBM_SDE_SIMD");
    return env != nullptr && std::string_view(env) == "scalar";
}

#if defined(FBMSDE_HAVE_AVX2)
bool cpu_has_avx2() {
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
}
#endif

const KernelTable& select() {
    if (scalar_forced()) return scalar_kernels();
#if defined(FBMSDE_HAVE_AVX2)
    if (cpu_has_avx2()) return avx2_kernels();
#endif
#if defined(FBMSDE_HAVE_NEON)
    return neon_kernels();
#endif
    return scalar_kernels();
}

}  // namespace

const KernelTable& active() noexcept {
    static const KernelTable& table = select();
    return table;
}

std::span<const KernelTable* const> available() {
    static const std::vector<const KernelTable*> tables = [] {
        std::vector<const KernelTable*> out{&scalar_kernels()};
#if defined(FBMSDE_HAVE_AVX2)
        if (cpu_has_avx2()) out.push_back(&avx2_kernels());
#endif
#if defined(FBMSDE_HAVE_NEON)
        out.push_back(&neon_kernels());
#endif
        return out;
    }();
    return tables;
}

std::string_view isa_name(Isa isa) noexcept {
    switch (isa) {
        case Isa::scalar: return "scalar";
        case Isa::avx2: return "avx2";
        case Isa::neon: return "neon";
    }
    return "unknown";
}

}  // namespace fbmsde::simd
