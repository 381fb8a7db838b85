#include "fbmsde/schemes.hpp"

#include <cmath>

namespace fbmsde {

SchemeKind parse_scheme_kind(std::string_view name) {
    if (name == "euler") return SchemeKind::euler;
    if (name == "wong_zakai" || name == "wong-zakai") return SchemeKind::wong_zakai;
    if (name == "mcshane") return SchemeKind::mcshane;
    if (name == "exact_degenerate") return SchemeKind::exact_degenerate;
    if (name == "langevin_exact") return SchemeKind::langevin_exact;
    throw ConfigError("unknown scheme '" + std::string(name) +
                      "' (expected euler, wong_zakai, mcshane, exact_degenerate or langevin_exact)");
}

std::string to_string(SchemeKind k) {
    switch (k) {
        case SchemeKind::euler: return "euler";
        case SchemeKind::wong_zakai: return "wong_zakai";
        case SchemeKind::mcshane: return "mcshane";
        case SchemeKind::exact_degenerate: return "exact_degenerate";
        case SchemeKind::langevin_exact: return "langevin_exact";
    }
    return "euler";
}

BlowUpError::BlowUpError(SchemeKind scheme, std::size_t step)
    : NumericalError(to_string(scheme) + ": non-finite state at step " + std::to_string(step)), step_(step) {}

namespace {

template <typename Step>
SolveResult iterate(SchemeKind kind, const SdeProblem& p, const FbmPath& path, bool keep, Step&& step) {
    const std::size_t n = path.steps();
    SolveResult r{kind, n, p.x0, {}};
    if (keep) {
        r.trajectory.reserve(n + 1);
        r.trajectory.push_back(p.x0);
    }
    const double dt = path.grid.dt();
    double x = p.x0;
    for (std::size_t k = 0; k < n; ++k) {
        try {
            x = step(x, dt, path.increment(k));
        } catch (const EvaluationError&) {
            throw BlowUpError(kind, k + 1);
        }
        if (!std::isfinite(x)) throw BlowUpError(kind, k + 1);
        if (keep) r.trajectory.push_back(x);
    }
    r.terminal = x;
    return r;
}

}  // namespace

SolveResult euler_solve(const SdeProblem& p, const FbmPath& path, bool keep_trajectory) {
    return iterate(SchemeKind::euler, p, path, keep_trajectory,
                   [&](double x, double dt, double db) { return x + p.a(x) * dt + p.sigma(x) * db; });
}

double mcshane_step(const SdeProblem& p, double x, double dt, double db) {
    const double a = p.a(x), a1 = p.a.d1(x);
    const double s = p.sigma(x), s1 = p.sigma.d1(x), s2 = p.sigma.d2(x);
    const double db2 = db * db;
    return x + a * dt + s * db + 0.5 * s * s1 * db2 + 0.5 * (a * s1 + a1 * s) * db * dt + 0.5 * a * a1 * dt * dt +
           (s * s * s2 + s * s1 * s1) * db2 * db / 6.0;
}

SolveResult mcshane_solve(const SdeProblem& p, const FbmPath& path, bool keep_trajectory) {
    return iterate(SchemeKind::mcshane, p, path, keep_trajectory,
                   [&](double x, double dt, double db) { return mcshane_step(p, x, dt, db); });
}

SolveResult wong_zakai_solve(const SdeProblem& p, const FbmPath& path, int substeps, bool keep_trajectory) {
    if (substeps < 1) throw DomainError("Wong-Zakai substeps must be at least 1");
    const int m = substeps;
    return iterate(SchemeKind::wong_zakai, p, path, keep_trajectory, [&](double x, double dt, double db) {
        const double rate = db / dt;
        const double h = dt / m;
        auto f = [&](double y) { return p.a(y) + rate * p.sigma(y); };
        for (int j = 0; j < m; ++j) {
            const double k1 = f(x);
            const double k2 = f(x + 0.5 * h * k1);
            const double k3 = f(x + 0.5 * h * k2);
            const double k4 = f(x + h * k3);
            x += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        }
        return x;
    });
}

ExactDegenerate::ExactDegenerate(const SdeProblem& p, ProbeRange range) : p_(&p), map_(p), slope_(0.0) {
    const auto check = degeneracy_check(p, range);
    if (check.status != Degeneracy::degenerate) {
        throw DomainError("exact degenerate solution requires a degenerate problem (classified " +
                          to_string(check.status) + ")");
    }
    slope_ = p.a(p.x0) / p.sigma(p.x0);
}

double ExactDegenerate::at(const FbmPath& path, double t) const {
    return map_.theta_inverse(map_.anchor() + slope_ * t + linear_interpolant(path, t));
}

SolveResult ExactDegenerate::solve(const FbmPath& path, bool keep_trajectory) const {
    const std::size_t n = path.steps();
    SolveResult r{SchemeKind::exact_degenerate, n, 0.0, {}};
    if (keep_trajectory) {
        r.trajectory.reserve(n + 1);
        for (std::size_t i = 0; i <= n; ++i) {
            r.trajectory.push_back(map_.theta_inverse(map_.anchor() + slope_ * path.grid.time(i) + path.values[i]));
        }
        r.terminal = r.trajectory.back();
    } else {
        r.terminal = map_.theta_inverse(map_.anchor() + slope_ + path.values[n]);
    }
    return r;
}

double exact_degenerate_solution(const SdeProblem& p, const FbmPath& path, double t) {
    return ExactDegenerate(p).at(path, t);
}

double langevin_exact_solution(double lambda, double x0, const FbmPath& path, int substeps) {
    if (substeps < 1) throw DomainError("Simpson substeps must be at least 1");
    const int m = substeps + (substeps % 2);
    const std::size_t n = path.steps();
    const double dt = path.grid.dt();
    const double h = dt / m;
    // Composite Simpson on each cell; B is linear inside the cell.
    double integral = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const double t0 = path.grid.time(k);
        const double b0 = path.values[k];
        const double slope = (path.values[k + 1] - b0) / dt;
        double cell = 0.0;
        for (int j = 0; j <= m; ++j) {
            const double u = j * h;
            const double w = (j == 0 || j == m) ? 1.0 : (j % 2 == 1 ? 4.0 : 2.0);
            cell += w * std::exp(-lambda * (t0 + u)) * (b0 + slope * u);
        }
        integral += cell * h / 3.0;
    }
    const double b1 = path.values[n];
    return std::exp(lambda) * (x0 + std::exp(-lambda) * b1 + lambda * integral);
}

}  // namespace fbmsde
