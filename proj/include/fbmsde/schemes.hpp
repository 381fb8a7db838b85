#pragma once

// Pathwise schemes for dX = a(X) dt + sigma(X) dB driven by a sampled fBm
// path on an equidistant grid, and exact solutions for the two cases that
// have them.

#include <string>
#include <vector>

#include "fbmsde/error.hpp"
#include "fbmsde/fbm.hpp"
#include "fbmsde/model.hpp"

namespace fbmsde {

enum class SchemeKind { euler, wong_zakai, mcshane, exact_degenerate, langevin_exact };
SchemeKind parse_scheme_kind(std::string_view name);
std::string to_string(SchemeKind k);

/// Non-finite scheme state; the path is aborted.
class BlowUpError : public NumericalError {
public:
    BlowUpError(SchemeKind scheme, std::size_t step);
    [[nodiscard]] std::size_t step() const noexcept { return step_; }

private:
    std::size_t step_;
};

struct SolveResult {
    SchemeKind scheme = SchemeKind::euler;
    std::size_t n = 0;
    double terminal = 0.0;
    std::vector<double> trajectory;  // X at t_0..t_n, empty unless requested
};

SolveResult euler_solve(const SdeProblem& p, const FbmPath& path, bool keep_trajectory = false);

/// One McShane step with all coefficients evaluated at x.
double mcshane_step(const SdeProblem& p, double x, double dt, double db);

SolveResult mcshane_solve(const SdeProblem& p, const FbmPath& path, bool keep_trajectory = false);

/// Piecewise-linear driver: in each cell integrates x' = a(x) + (dB/dt) sigma(x)
/// with m classical RK4 substeps.
SolveResult wong_zakai_solve(const SdeProblem& p, const FbmPath& path, int substeps = 8,
                             bool keep_trajectory = false);

/// X_t = theta^{-1}(theta(x0) + (a/sigma)(x0) t + B_t) for degenerate problems.
/// Construction rejects problems whose degeneracy check is not `degenerate`.
class ExactDegenerate {
public:
    explicit ExactDegenerate(const SdeProblem& p, ProbeRange range = {});

    /// B_t is read from the path (linear interpolation between grid nodes).
    [[nodiscard]] double at(const FbmPath& path, double t) const;
    [[nodiscard]] double terminal(const FbmPath& path) const { return at(path, 1.0); }
    [[nodiscard]] SolveResult solve(const FbmPath& path, bool keep_trajectory = false) const;

private:
    const SdeProblem* p_;
    LampertiMap map_;
    double slope_;
};

/// Convenience wrapper that builds an ExactDegenerate per call.
double exact_degenerate_solution(const SdeProblem& p, const FbmPath& path, double t);

/// X_1 = e^lambda (x0 + e^{-lambda} B_1 + lambda int_0^1 e^{-lambda s} B_s ds), the
/// integral by composite Simpson with `substeps` (rounded up to even) panels
/// per grid cell on the linear interpolant of B.
double langevin_exact_solution(double lambda, double x0, const FbmPath& path, int substeps = 2);

}  // namespace fbmsde
