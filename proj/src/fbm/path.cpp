#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "fbmsde/error.hpp"
#include "fbmsde/fbm.hpp"

namespace fbmsde {

double linear_interpolant(const FbmPath& path, double t) {
    if (!(t >= 0.0 && t <= 1.0)) {
        throw DomainError("interpolation time must lie in [0, 1], got " + std::to_string(t));
    }
    const std::size_t n = path.steps();
    const double scaled = t * static_cast<double>(n);
    const std::size_t k = std::min(static_cast<std::size_t>(scaled), n - 1);
    const double frac = scaled - static_cast<double>(k);
    if (frac == 0.0) return path.values[k];
    if (frac == 1.0) return path.values[k + 1];
    return path.values[k] + frac * (path.values[k + 1] - path.values[k]);
}

FbmPath subsample(const FbmPath& path, std::size_t factor) {
    if (factor == 0 || path.steps() % factor != 0) {
        throw DomainError("subsample factor " + std::to_string(factor) + " does not divide " +
                          std::to_string(path.steps()) + " steps");
    }
    const std::size_t coarse = path.steps() / factor;
    FbmPath out{TimeGrid(coarse), std::vector<double>(coarse + 1), path.hurst, path.stream_id};
    for (std::size_t k = 0; k <= coarse; ++k) out.values[k] = path.values[k * factor];
    return out;
}

void write_path_csv_rows(std::ostream& out, const FbmPath& path, std::uint64_t path_id) {
    char buf[96];
    for (std::size_t k = 0; k < path.values.size(); ++k) {
        std::snprintf(buf, sizeof buf, "%llu,%.17g,%.17g\n", static_cast<unsigned long long>(path_id),
                      path.grid.time(k), path.values[k]);
        out << buf;
    }
}

SamplerKind parse_sampler_kind(const std::string& name) {
    if (name == "cholesky") return SamplerKind::cholesky;
    if (name == "circulant") return SamplerKind::circulant;
    throw ConfigError("unknown sampler '" + name + "' (expected cholesky or circulant)");
}

const char* to_string(SamplerKind kind) noexcept {
    return kind == SamplerKind::cholesky ? "cholesky" : "circulant";
}

FbmSampler::FbmSampler(SamplerKind kind, std::size_t n, Hurst h) : kind_(kind), n_(n) {
    if (kind == SamplerKind::cholesky) {
        cholesky_ = std::make_unique<CholeskySampler>(n, h);
    } else {
        circulant_ = std::make_unique<CirculantSampler>(n, h);
    }
}

FbmPath FbmSampler::sample(RngStream& stream) const {
    return cholesky_ ? cholesky_->sample(stream) : circulant_->sample(stream);
}

}  // namespace fbmsde
