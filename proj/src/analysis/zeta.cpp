#include <cmath>
#include <numbers>

#include "fbmsde/analysis.hpp"
#include "fbmsde/error.hpp"

namespace fbmsde {

double zeta_dirichlet(double s) {
    if (!(s > 1.0)) throw DomainError("zeta_dirichlet requires s > 1");
    constexpr int kTerms = 16;
    // B_{2j} / (2j)!
    static constexpr double kBernoulliOverFactorial[] = {
        1.0 / 6.0 / 2.0,
        -1.0 / 30.0 / 24.0,
        1.0 / 42.0 / 720.0,
        -1.0 / 30.0 / 40320.0,
        5.0 / 66.0 / 3628800.0,
        -691.0 / 2730.0 / 479001600.0,
        7.0 / 6.0 / 87178291200.0,
    };
    double sum = 0.0;
    for (int k = kTerms - 1; k >= 1; --k) sum += std::pow(static_cast<double>(k), -s);
    const double N = kTerms;
    sum += std::pow(N, 1.0 - s) / (s - 1.0) + 0.5 * std::pow(N, -s);
    // Rising product s (s+1) ... (s+2j-2) times N^{-s-2j+1}.
    double rising = s;
    double npow = std::pow(N, -s - 1.0);
    for (int j = 0; j < 7; ++j) {
        sum += kBernoulliOverFactorial[j] * rising * npow;
        rising *= (s + 2 * j + 1) * (s + 2 * j + 2);
        npow /= N * N;
    }
    return sum;
}

double zeta_negative(double s) {
    if (!(s > -2.0 && s < 0.0)) throw DomainError("zeta_negative requires s in (-2, 0)");
    const double pi = std::numbers::pi;
    return std::pow(2.0, s) * std::pow(pi, s - 1.0) * std::sin(pi * s / 2.0) * std::tgamma(1.0 - s) *
           zeta_dirichlet(1.0 - s);
}

}  // namespace fbmsde
