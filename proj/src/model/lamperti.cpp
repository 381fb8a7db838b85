#include <cmath>

#include "fbmsde/error.hpp"
#include "fbmsde/model.hpp"
#include "fbmsde/quadrature.hpp"

namespace fbmsde {

namespace {

constexpr double kCellTolerance = 1e-16;
constexpr int kNewtonIterations = 40;
constexpr int kBisectionIterations = 200;
constexpr double kResidualTarget = 1e-13;
constexpr double kResidualAccept = 1e-10;

}  // namespace

LampertiMap::LampertiMap(const SdeProblem& p, double tolerance, ProbeRange lattice) : p_(&p), tol_(tolerance) {
    const double h = kLatticeSpacing;
    pos_.push_back(0.0);
    neg_.push_back(0.0);
    // Tabulate outward from 0 and stop at the first cell where sigma fails;
    // queries past that point go through integrate() and report the error.
    try {
        for (double x = h; x <= lattice.hi + 0.5 * h; x += h) {
            const double k = static_cast<double>(pos_.size());
            pos_.push_back(pos_.back() + integrate_adaptive([this](double s) { return inv_sigma(s); },
                                                            (k - 1) * h, k * h, kCellTolerance));
        }
    } catch (const DomainError&) {
    } catch (const EvaluationError&) {
    }
    try {
        for (double x = -h; x >= lattice.lo - 0.5 * h; x -= h) {
            const double k = static_cast<double>(neg_.size());
            neg_.push_back(neg_.back() - integrate_adaptive([this](double s) { return inv_sigma(s); },
                                                            -k * h, -(k - 1) * h, kCellTolerance));
        }
    } catch (const DomainError&) {
    } catch (const EvaluationError&) {
    }
    hi_ = static_cast<double>(pos_.size() - 1) * h;
    lo_ = -static_cast<double>(neg_.size() - 1) * h;
    theta_x0_ = theta(p.x0);
}

double LampertiMap::inv_sigma(double x) const {
    const double s = p_->sigma(x);
    if (!(s > 0.0)) {
        throw DomainError("diffusion coefficient is not positive at x = " + std::to_string(x));
    }
    return 1.0 / s;
}

double LampertiMap::integrate(double lo, double hi) const {
    if (lo == hi) return 0.0;
    return integrate_adaptive([this](double s) { return inv_sigma(s); }, lo, hi, tol_);
}

double LampertiMap::theta(double x) const {
    if (!std::isfinite(x)) throw DomainError("theta argument must be finite");
    const double h = kLatticeSpacing;
    if (x >= 0.0) {
        if (x >= hi_) return pos_.back() + integrate(hi_, x);
        const auto k = static_cast<std::size_t>(std::lround(x / h));
        return pos_[k] + integrate(static_cast<double>(k) * h, x);
    }
    if (x <= lo_) return neg_.back() + integrate(lo_, x);
    const auto k = static_cast<std::size_t>(std::lround(-x / h));
    return neg_[k] + integrate(-static_cast<double>(k) * h, x);
}

double LampertiMap::theta_inverse(double y) const {
    if (!std::isfinite(y)) throw DomainError("theta_inverse argument must be finite");
    const double x0 = p_->x0;
    double x = x0 + p_->sigma(x0) * (y - theta_x0_);
    // Newton on theta(x) = y with theta' = 1/sigma.
    try {
        for (int it = 0; it < kNewtonIterations; ++it) {
            const double f = theta(x) - y;
            if (std::abs(f) <= kResidualTarget) return x;
            const double next = x - f * p_->sigma(x);
            if (!std::isfinite(next)) break;
            if (next == x) {
                if (std::abs(f) <= kResidualAccept) return x;
                break;
            }
            x = next;
        }
    } catch (const DomainError&) {
    } catch (const EvaluationError&) {
    }

    // Bracket by doubling around the initial guess, then bisect.
    double guess = x0 + p_->sigma(x0) * (y - theta_x0_);
    double step = 1.0;
    double lo = guess, hi = guess;
    int doublings = 0;
    while (theta(lo) > y) {
        lo = guess - step;
        step *= 2.0;
        if (++doublings > 200) throw NumericalError("theta_inverse: no lower bracket");
    }
    step = 1.0;
    doublings = 0;
    while (theta(hi) < y) {
        hi = guess + step;
        step *= 2.0;
        if (++doublings > 200) throw NumericalError("theta_inverse: no upper bracket");
    }
    for (int it = 0; it < kBisectionIterations; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double f = theta(mid) - y;
        if (std::abs(f) <= kResidualTarget || mid == lo || mid == hi) {
            if (std::abs(f) <= kResidualAccept) return mid;
            break;
        }
        (f < 0.0 ? lo : hi) = mid;
    }
    throw NumericalError("theta_inverse did not converge for y = " + std::to_string(y));
}

std::pair<double, double> LampertiMap::reduced_drift(double y) const {
    const double x = theta_inverse(y);
    const double a = p_->a(x);
    const double s = p_->sigma(x);
    return {a / s, p_->a.d1(x) - a * p_->sigma.d1(x) / s};
}

}  // namespace fbmsde
