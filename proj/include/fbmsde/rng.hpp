#pragma once

#include <array>
#include <cstdint>
#include <span>

namespace fbmsde {

/// Philox4x32-10 counter-based generator (Salmon et al., SC'11).
/// Stateless: maps (key, counter) to four 32-bit words.
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key) noexcept;

/// Deterministic stream of uniforms and standard normals identified by
/// (master_seed, stream_id). Two streams with different ids never share
/// counter blocks, so results do not depend on the order in which streams are
/// consumed or on how they are distributed over workers.
class RngStream {
public:
    RngStream(std::uint64_t master_seed, std::uint64_t stream_id) noexcept;

    [[nodiscard]] std::uint64_t master_seed() const noexcept { return seed_; }
    [[nodiscard]] std::uint64_t stream_id() const noexcept { return stream_; }

    std::uint64_t next_u64() noexcept;
    /// Uniform in the open interval (0, 1).
    double uniform() noexcept;
    /// Standard normal via Box-Muller.
    double normal() noexcept;
    void fill_normal(std::span<double> out) noexcept;

private:
    void refill() noexcept;

    std::uint64_t seed_;
    std::uint64_t stream_;
    std::uint64_t block_ = 0;
    std::array<std::uint32_t, 4> buffer_{};
    int used_ = 4;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace fbmsde
