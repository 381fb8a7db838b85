#include <cmath>
#include <limits>

#include "fbmsde/analysis.hpp"
#include "fbmsde/error.hpp"
#include "fbmsde/harness.hpp"
#include "fbmsde/parallel.hpp"
#include "fbmsde/quadrature.hpp"

namespace fbmsde {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr std::size_t kMinFineFactor = 32;

double run_scheme(SchemeKind kind, const SdeProblem& p, const FbmPath& path, int substeps) {
    switch (kind) {
        case SchemeKind::euler: return euler_solve(p, path).terminal;
        case SchemeKind::mcshane: return mcshane_solve(p, path).terminal;
        case SchemeKind::wong_zakai: return wong_zakai_solve(p, path, substeps).terminal;
        default: throw ConfigError("scheme " + to_string(kind) + " cannot be run on a coarse path");
    }
}

}  // namespace

const ErrorRow& ErrorTable::at(SchemeKind scheme, std::size_t n) const {
    for (const auto& r : rows) {
        if (r.scheme == scheme && r.n == n) return r;
    }
    throw DomainError("no error row for " + to_string(scheme) + " at n = " + std::to_string(n));
}

std::pair<double, double> rms_with_jackknife(std::span<const double> squared_errors) {
    double sum = 0.0;
    std::size_t m = 0;
    for (double v : squared_errors) {
        if (std::isfinite(v)) {
            sum += v;
            ++m;
        }
    }
    if (m == 0) return {kNaN, kNaN};
    const double rms = std::sqrt(sum / static_cast<double>(m));
    if (m < 2) return {rms, kNaN};
    const double md = static_cast<double>(m);
    double mean_loo = 0.0;
    for (double v : squared_errors) {
        if (std::isfinite(v)) mean_loo += std::sqrt(std::max(sum - v, 0.0) / (md - 1.0));
    }
    mean_loo /= md;
    double var = 0.0;
    for (double v : squared_errors) {
        if (std::isfinite(v)) {
            const double d = std::sqrt(std::max(sum - v, 0.0) / (md - 1.0)) - mean_loo;
            var += d * d;
        }
    }
    return {rms, std::sqrt(var * (md - 1.0) / md)};
}

ReferenceKind select_reference(const ExperimentConfig& cfg) {
    const SdeProblem& p = cfg.problem;
    auto require_fine = [&] {
        if (cfg.fine_factor < kMinFineFactor) {
            throw ConfigError("fine_factor: a fine Wong-Zakai reference needs fine_factor >= 32");
        }
        return ReferenceKind::fine_wong_zakai;
    };
    switch (cfg.reference) {
        case ReferenceKind::automatic:
            if (degeneracy_check(p).status == Degeneracy::degenerate) return ReferenceKind::exact_degenerate;
            if (langevin_lambda(p)) return ReferenceKind::langevin_exact;
            return require_fine();
        case ReferenceKind::exact_degenerate:
            if (degeneracy_check(p).status != Degeneracy::degenerate) {
                throw ConfigError("reference: exact_degenerate requires a degenerate problem");
            }
            return ReferenceKind::exact_degenerate;
        case ReferenceKind::langevin_exact:
            if (!langevin_lambda(p)) throw ConfigError("reference: langevin_exact requires a = l*x, sigma = 1");
            return ReferenceKind::langevin_exact;
        case ReferenceKind::fine_wong_zakai: return require_fine();
        case ReferenceKind::same_grid:
            if (cfg.reference_scheme != SchemeKind::euler && cfg.reference_scheme != SchemeKind::mcshane &&
                cfg.reference_scheme != SchemeKind::wong_zakai) {
                throw ConfigError("reference_scheme: must be euler, wong_zakai or mcshane");
            }
            return ReferenceKind::same_grid;
    }
    return ReferenceKind::automatic;
}

StudyResult strong_error_study(const ExperimentConfig& cfg) {
    cfg.validate();
    const ReferenceKind reference = select_reference(cfg);
    const SdeProblem& p = cfg.problem;
    const std::size_t fine_n = cfg.fine_steps();
    const FbmSampler sampler(cfg.sampler, fine_n, p.hurst);

    std::optional<ExactDegenerate> exact;
    if (reference == ReferenceKind::exact_degenerate) exact.emplace(p);
    const double lambda = reference == ReferenceKind::langevin_exact ? *langevin_lambda(p) : 0.0;

    StudyResult result;
    result.reference = reference;
    result.schemes = cfg.schemes.size();
    result.ns = cfg.n_list.size();
    const std::size_t per_path = result.schemes * result.ns;
    result.squared_errors.assign(cfg.paths * per_path, kNaN);

    parallel_for(
        cfg.paths,
        [&](std::size_t i) {
            RngStream stream(cfg.master_seed, i);
            FbmPath fine = sampler.sample(stream);
            fine.stream_id = i;
            double* slot = result.squared_errors.data() + i * per_path;
            double ref = 0.0;
            try {
                switch (reference) {
                    case ReferenceKind::exact_degenerate: ref = exact->terminal(fine); break;
                    case ReferenceKind::langevin_exact: ref = langevin_exact_solution(lambda, p.x0, fine); break;
                    case ReferenceKind::fine_wong_zakai: ref = wong_zakai_solve(p, fine, cfg.substeps).terminal; break;
                    default: break;
                }
            } catch (const NumericalError&) {
                return;  // whole path aborted
            }
            for (std::size_t ni = 0; ni < result.ns; ++ni) {
                const std::size_t n = cfg.n_list[ni];
                const FbmPath coarse = subsample(fine, fine_n / n);
                double local_ref = ref;
                if (reference == ReferenceKind::same_grid) {
                    try {
                        local_ref = run_scheme(cfg.reference_scheme, p, coarse, cfg.substeps);
                    } catch (const NumericalError&) {
                        continue;
                    }
                }
                for (std::size_t si = 0; si < result.schemes; ++si) {
                    try {
                        const double x = run_scheme(cfg.schemes[si], p, coarse, cfg.substeps);
                        const double e = x - local_ref;
                        slot[si * result.ns + ni] = e * e;
                    } catch (const NumericalError&) {
                        // left as NaN: aborted
                    }
                }
            }
        },
        cfg.workers);

    // Single deterministic reduction pass.
    const double h = p.hurst.value();
    std::vector<double> column(cfg.paths);
    for (std::size_t si = 0; si < result.schemes; ++si) {
        for (std::size_t ni = 0; ni < result.ns; ++ni) {
            std::size_t aborted = 0;
            for (std::size_t i = 0; i < cfg.paths; ++i) {
                column[i] = result.squared_error(i, si, ni);
                if (!std::isfinite(column[i])) ++aborted;
            }
            const auto [rms, se] = rms_with_jackknife(column);
            const std::size_t n = cfg.n_list[ni];
            const double scale = std::pow(static_cast<double>(n), h + 0.5);
            result.table.rows.push_back(
                {cfg.schemes[si], h, n, cfg.paths - aborted, rms, se, scale * rms, aborted});
        }
    }
    return result;
}

RateFit rate_regression(const ErrorTable& table, SchemeKind scheme) {
    std::vector<double> xs, ys;
    for (const auto& r : table.rows) {
        if (r.scheme == scheme && r.rms_error > 0.0 && std::isfinite(r.rms_error)) {
            xs.push_back(std::log(static_cast<double>(r.n)));
            ys.push_back(std::log(r.rms_error));
        }
    }
    if (xs.size() < 3) {
        throw DomainError("rate_regression needs at least three rows with positive rms for " + to_string(scheme));
    }
    const double m = static_cast<double>(xs.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= m;
    my /= m;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
        syy += (ys[i] - my) * (ys[i] - my);
    }
    if (sxx == 0.0) throw DomainError("rate_regression needs at least two distinct n");
    RateFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    fit.r2 = syy == 0.0 ? 1.0 : (sxy * sxy) / (sxx * syy);
    return fit;
}

std::vector<InterpErrorRow> interp_error_study(const ExperimentConfig& cfg, const WeightSource& source) {
    cfg.validate();
    const SdeProblem& p = cfg.problem;
    const std::size_t fine_n = cfg.fine_steps();
    const FbmSampler sampler(cfg.sampler, fine_n, p.hurst);
    const double dt = 1.0 / static_cast<double>(fine_n);

    std::function<double(double)> rho;
    if (source.kind == WeightSource::Kind::langevin) {
        const auto lambda = langevin_lambda(p);
        if (!lambda) throw ConfigError("langevin weight requires a = l*x, sigma = 1");
        const double l = *lambda;
        rho = [l](double t) { return l * std::exp(l * (1.0 - t)); };
    } else if (source.kind == WeightSource::Kind::deterministic) {
        if (!source.rho) throw ConfigError("deterministic weight source needs a weight function");
        rho = source.rho;
    }
    std::vector<double> rho_grid;
    if (rho) {
        rho_grid.resize(fine_n + 1);
        for (std::size_t k = 0; k <= fine_n; ++k) rho_grid[k] = rho(static_cast<double>(k) * dt);
    }

    const std::size_t ns = cfg.n_list.size();
    std::vector<double> sq(cfg.paths * ns, kNaN);
    std::vector<double> weight_sq(cfg.paths, kNaN);
    parallel_for(
        cfg.paths,
        [&](std::size_t i) {
            RngStream stream(cfg.master_seed, i);
            const FbmPath fine = sampler.sample(stream);
            std::vector<double> y;
            if (rho) {
                y = rho_grid;
            } else {
                try {
                    const SolveResult sol = wong_zakai_solve(p, fine, cfg.substeps, true);
                    y = weight_path(p, fine, sol.trajectory).y_values;
                } catch (const NumericalError&) {
                    return;
                }
            }
            double w2 = 0.5 * (y.front() * y.front() + y.back() * y.back());
            for (std::size_t k = 1; k < fine_n; ++k) w2 += y[k] * y[k];
            weight_sq[i] = w2 * dt;
            for (std::size_t ni = 0; ni < ns; ++ni) {
                const std::size_t factor = fine_n / cfg.n_list[ni];
                // Endpoint terms vanish because B - B~ = 0 on coarse nodes.
                double integral = 0.0;
                for (std::size_t k = 1; k < fine_n; ++k) {
                    const std::size_t c = k / factor;
                    const double frac = static_cast<double>(k % factor) / static_cast<double>(factor);
                    const double b0 = fine.values[c * factor];
                    const double b1 = fine.values[std::min((c + 1) * factor, fine_n)];
                    integral += y[k] * (fine.values[k] - (b0 + frac * (b1 - b0)));
                }
                integral *= dt;
                sq[i * ns + ni] = integral * integral;
            }
        },
        cfg.workers);

    const double h = p.hurst.value();
    const double abs_zeta = std::abs(zeta_negative(-2.0 * h));
    double limit = 0.0;
    if (rho) {
        limit = abs_zeta * integrate_adaptive([&](double t) { return rho(t) * rho(t); }, 0.0, 1.0, 1e-13);
    } else {
        double s = 0.0;
        std::size_t m = 0;
        for (double v : weight_sq) {
            if (std::isfinite(v)) {
                s += v;
                ++m;
            }
        }
        limit = m ? abs_zeta * s / static_cast<double>(m) : kNaN;
    }

    std::vector<InterpErrorRow> rows;
    for (std::size_t ni = 0; ni < ns; ++ni) {
        const std::size_t n = cfg.n_list[ni];
        double s = 0.0, s2 = 0.0;
        std::size_t m = 0;
        for (std::size_t i = 0; i < cfg.paths; ++i) {
            const double v = sq[i * ns + ni];
            if (!std::isfinite(v)) continue;
            s += v;
            ++m;
        }
        const double mean = m ? s / static_cast<double>(m) : kNaN;
        for (std::size_t i = 0; i < cfg.paths; ++i) {
            const double v = sq[i * ns + ni];
            if (std::isfinite(v)) s2 += (v - mean) * (v - mean);
        }
        InterpErrorRow row;
        row.n = n;
        row.paths = m;
        row.mc_value = mean;
        row.mc_std_error = m > 1 ? std::sqrt(s2 / (static_cast<double>(m) - 1.0) / static_cast<double>(m)) : kNaN;
        const double scale = std::pow(static_cast<double>(n), 2.0 * h + 1.0);
        row.scaled_mc = scale * mean;
        if (rho) {
            row.exact_value = exact_weighted_interp_error(rho, n, p.hurst);
            row.scaled_exact = scale * *row.exact_value;
        }
        row.limit = limit;
        rows.push_back(row);
    }
    return rows;
}

}  // namespace fbmsde
