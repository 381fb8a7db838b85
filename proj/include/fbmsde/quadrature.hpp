#pragma once

#include <functional>
#include <vector>

namespace fbmsde {

/// Adaptive Gauss-Kronrod (7/15) integration of f over [a, b] to the given
/// absolute tolerance. Throws NumericalError if the subdivision budget runs
/// out before the tolerance is met.
double integrate_adaptive(const std::function<double(double)>& f, double a, double b, double abs_tol = 1e-12,
                          int max_subdivisions = 2000);

/// Gauss-Legendre nodes and weights of order q on [0, 1].
struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};
GaussRule gauss_legendre_unit(int q);

}  // namespace fbmsde
