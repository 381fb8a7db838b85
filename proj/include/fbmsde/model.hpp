#pragma once

// Scalar SDE dX = a(X) dt + sigma(X) dB on [0, 1], the commutator that
// decides whether the solution is a function of (t, B_t), and the Lamperti
// map that straightens the diffusion coefficient.

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "fbmsde/expr.hpp"
#include "fbmsde/fbm.hpp"

namespace fbmsde {

struct SdeProblem {
    Hurst hurst{0.75};
    double x0 = 0.0;
    CoefficientFn a;
    CoefficientFn sigma;
    ParamMap params;

    /// Builds a problem from expression strings. Throws DomainError for h
    /// outside (1/2, 1), ParseError for bad expressions and EvaluationError
    /// for unbound parameters.
    static SdeProblem make(double hurst, double x0, std::string_view drift, std::string_view diffusion,
                           ParamMap params = {});

    /// Problem JSON: {"hurst":..,"x0":..,"drift":"..","diffusion":"..","params":{..}}.
    /// Throws ConfigError on schema errors.
    static SdeProblem from_json(std::string_view text);
    [[nodiscard]] std::string to_json() const;
};

/// (a' sigma - a sigma')(x).
double commutator(const SdeProblem& p, double x);

enum class Degeneracy { degenerate, non_degenerate, inconclusive };
std::string to_string(Degeneracy d);

struct DegeneracyThresholds {
    double zero_tol = 1e-12;  // |commutator| below this everywhere: identically zero
    double x0_tol = 1e-8;     // |commutator(x0)| above this: non-degenerate
    std::size_t probes = 10001;
};

struct DegeneracyResult {
    Degeneracy status = Degeneracy::inconclusive;
    double max_abs_commutator = 0.0;
    double commutator_at_x0 = 0.0;
};

DegeneracyResult degeneracy_check(const SdeProblem& p, ProbeRange range = {}, DegeneracyThresholds thresholds = {});

/// lambda when a(x) = lambda x and sigma = 1 on the probe range.
std::optional<double> langevin_lambda(const SdeProblem& p, ProbeRange range = {});

/// theta(x) = int_0^x 1/sigma. Values on a lattice around 0 are tabulated at
/// construction; queries add one short adaptive integral. Immutable after
/// construction and safe to share between threads.
class LampertiMap {
public:
    static constexpr double kLatticeSpacing = 1e-3;

    explicit LampertiMap(const SdeProblem& p, double tolerance = 1e-12, ProbeRange lattice = {});

    /// Throws DomainError if sigma is not positive along [0, x].
    [[nodiscard]] double theta(double x) const;
    /// Throws NumericalError if the root find fails.
    [[nodiscard]] double theta_inverse(double y) const;
    /// (g, g') at y with g = a/sigma and g' = a' - a sigma'/sigma, both at theta^{-1}(y).
    [[nodiscard]] std::pair<double, double> reduced_drift(double y) const;

    [[nodiscard]] double anchor() const noexcept { return theta_x0_; }
    [[nodiscard]] const SdeProblem& problem() const noexcept { return *p_; }

private:
    [[nodiscard]] double inv_sigma(double x) const;
    [[nodiscard]] double integrate(double lo, double hi) const;

    const SdeProblem* p_;
    double tol_;
    double lo_ = 0.0;  // lattice covers [lo_, hi_] in steps of kLatticeSpacing from 0
    double hi_ = 0.0;
    std::vector<double> neg_;  // theta(-k h)
    std::vector<double> pos_;  // theta(k h)
    double theta_x0_ = 0.0;
};

}  // namespace fbmsde
