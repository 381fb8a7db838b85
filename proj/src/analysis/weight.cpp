#include <algorithm>
#include <cmath>

#include "fbmsde/analysis.hpp"
#include "fbmsde/error.hpp"
#include "fbmsde/parallel.hpp"
#include "fbmsde/schemes.hpp"

namespace fbmsde {

namespace {

void check_trajectory(const FbmPath& path, std::span<const double> trajectory) {
    if (trajectory.size() != path.grid.nodes()) {
        throw DomainError("trajectory length does not match the path grid");
    }
}

/// h = a' - a sigma'/sigma, written as the commutator over sigma so that
/// commuting coefficients give an exact zero.
double lamperti_rate(const SdeProblem& p, double x) { return commutator(p, x) / p.sigma(x); }

double trapezoid(std::span<const double> y, double dt) {
    if (y.size() < 2) return 0.0;
    double s = 0.5 * (y.front() + y.back());
    for (std::size_t i = 1; i + 1 < y.size(); ++i) s += y[i];
    return s * dt;
}

std::vector<WeightPath> simulate_weights(const SdeProblem& p, const WeightMcConfig& cfg) {
    if (cfg.paths < 2) throw DomainError("weight Monte Carlo needs at least two paths");
    const CirculantSampler sampler(cfg.fine_n, p.hurst);
    std::vector<WeightPath> out(cfg.paths);
    parallel_for(
        cfg.paths,
        [&](std::size_t i) {
            RngStream stream(cfg.seed, i);
            const FbmPath path = sampler.sample(stream);
            const SolveResult sol = wong_zakai_solve(p, path, cfg.substeps, true);
            out[i] = weight_path(p, path, sol.trajectory);
        },
        cfg.workers);
    return out;
}

}  // namespace

WeightPath weight_path(const SdeProblem& p, const FbmPath& path, std::span<const double> trajectory) {
    check_trajectory(path, trajectory);
    const std::size_t n = path.steps();
    const double dt = path.grid.dt();
    std::vector<double> rate(n + 1);
    for (std::size_t i = 0; i <= n; ++i) rate[i] = lamperti_rate(p, trajectory[i]);
    WeightPath w{path.grid, std::vector<double>(n + 1), path.stream_id};
    const double sigma_end = p.sigma(trajectory[n]);
    double integral = 0.0;  // int_{t_i}^1 h(X)
    for (std::size_t i = n + 1; i-- > 0;) {
        if (i < n) integral += 0.5 * dt * (rate[i] + rate[i + 1]);
        w.y_values[i] = sigma_end * rate[i] * std::exp(integral);
    }
    return w;
}

WeightPath weight_path_stochastic(const SdeProblem& p, const FbmPath& path, std::span<const double> trajectory) {
    check_trajectory(path, trajectory);
    const std::size_t n = path.steps();
    const double dt = path.grid.dt();
    WeightPath w{path.grid, std::vector<double>(n + 1), path.stream_id};
    double exponent = 0.0;
    for (std::size_t i = n + 1; i-- > 0;) {
        const double x = trajectory[i];
        if (i < n) {
            const double xn = trajectory[i + 1];
            exponent += 0.5 * dt * (p.a.d1(x) + p.a.d1(xn)) + 0.5 * (p.sigma.d1(x) + p.sigma.d1(xn)) * path.increment(i);
        }
        w.y_values[i] = -commutator(p, x) * std::exp(exponent);
    }
    return w;
}

double malliavin_derivative(const SdeProblem& p, const TimeGrid& grid, std::span<const double> trajectory, double s,
                            double t) {
    if (trajectory.size() != grid.nodes()) throw DomainError("trajectory length does not match the grid");
    if (s < 0.0 || s > 1.0 || t < 0.0 || t > 1.0) throw DomainError("malliavin_derivative needs s, t in [0, 1]");
    if (s > t) return 0.0;
    const std::size_t n = grid.steps();
    const double dt = grid.dt();
    // Cumulative trapezoid of h along the trajectory, linearly interpolated.
    std::vector<double> cumulative(n + 1, 0.0);
    double prev = lamperti_rate(p, trajectory[0]);
    for (std::size_t i = 1; i <= n; ++i) {
        const double cur = lamperti_rate(p, trajectory[i]);
        cumulative[i] = cumulative[i - 1] + 0.5 * dt * (prev + cur);
        prev = cur;
    }
    auto interp = [&](std::span<const double> v, double tau) {
        const double pos = tau * static_cast<double>(n);
        const auto k = std::min(static_cast<std::size_t>(pos), n - 1);
        const double frac = pos - static_cast<double>(k);
        return v[k] + frac * (v[k + 1] - v[k]);
    };
    const double xt = interp(trajectory, t);
    if (s == t) return p.sigma(xt);
    return p.sigma(xt) * std::exp(interp(cumulative, t) - interp(cumulative, s));
}

McEstimate mean_square_weight_integral(const SdeProblem& p, const WeightMcConfig& cfg) {
    const auto weights = simulate_weights(p, cfg);
    const double dt = 1.0 / static_cast<double>(cfg.fine_n);
    std::vector<double> per_path(weights.size());
    std::vector<double> sq;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        sq.assign(weights[i].y_values.begin(), weights[i].y_values.end());
        for (double& v : sq) v *= v;
        per_path[i] = trapezoid(sq, dt);
    }
    const double m = static_cast<double>(per_path.size());
    double mean = 0.0;
    for (double v : per_path) mean += v;
    mean /= m;
    double var = 0.0;
    for (double v : per_path) var += (v - mean) * (v - mean);
    var /= (m - 1.0);
    return {mean, std::sqrt(var / m)};
}

McEstimate nd_condition_estimate(const SdeProblem& p, const WeightMcConfig& cfg) {
    const auto weights = simulate_weights(p, cfg);
    const std::size_t nodes = cfg.fine_n + 1;
    const double dt = 1.0 / static_cast<double>(cfg.fine_n);
    const double m = static_cast<double>(weights.size());
    std::vector<double> total(nodes, 0.0);
    for (const auto& w : weights) {
        for (std::size_t k = 0; k < nodes; ++k) total[k] += w.y_values[k];
    }
    std::vector<double> mean_abs(nodes);
    auto functional = [&](const std::vector<double>& sums, double count) {
        for (std::size_t k = 0; k < nodes; ++k) mean_abs[k] = std::abs(sums[k] / count);
        return trapezoid(mean_abs, dt);
    };
    const double value = functional(total, m);
    // Leave-one-path-out jackknife.
    std::vector<double> loo(nodes);
    std::vector<double> thetas(weights.size());
    for (std::size_t i = 0; i < weights.size(); ++i) {
        for (std::size_t k = 0; k < nodes; ++k) loo[k] = total[k] - weights[i].y_values[k];
        thetas[i] = functional(loo, m - 1.0);
    }
    double tbar = 0.0;
    for (double t : thetas) tbar += t;
    tbar /= m;
    double var = 0.0;
    for (double t : thetas) var += (t - tbar) * (t - tbar);
    var *= (m - 1.0) / m;
    return {value, std::sqrt(var)};
}

double predicted_asymptotic_error(const SdeProblem& p, const WeightMcConfig& cfg) {
    const Constants c = constants_for(p.hurst);
    const McEstimate ms = mean_square_weight_integral(p, cfg);
    return c.beta * std::sqrt(std::max(ms.value, 0.0));
}

}  // namespace fbmsde
