#include "fbmsde/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <queue>

#include "fbmsde/error.hpp"

namespace fbmsde {

namespace {

// Kronrod 15-point abscissae/weights and the embedded 7-point Gauss weights.
constexpr double kXgk[8] = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                            0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                            0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                            0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double kWgk[8] = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                            0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                            0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                            0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                           0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
    double a, b, value, error;
    bool operator<(const Panel& o) const { return error < o.error; }
};

Panel gk15(const std::function<double(double)>& f, double a, double b) {
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double fc = f(center);
    double kronrod = fc * kWgk[7];
    double gauss = fc * kWg[3];
    for (int j = 0; j < 7; ++j) {
        const double dx = half * kXgk[j];
        const double sum = f(center - dx) + f(center + dx);
        kronrod += kWgk[j] * sum;
        if (j % 2 == 1) gauss += kWg[j / 2] * sum;
    }
    return {a, b, kronrod * half, std::abs((kronrod - gauss) * half)};
}

}  // namespace

double integrate_adaptive(const std::function<double(double)>& f, double a, double b, double abs_tol,
                          int max_subdivisions) {
    if (a == b) return 0.0;
    std::priority_queue<Panel> panels;
    Panel first = gk15(f, a, b);
    double total = first.value;
    double error = first.error;
    panels.push(first);
    int splits = 0;
    while (error > abs_tol) {
        if (splits++ >= max_subdivisions) {
            throw NumericalError("adaptive quadrature did not reach tolerance");
        }
        const Panel worst = panels.top();
        panels.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        const Panel left = gk15(f, worst.a, mid);
        const Panel right = gk15(f, mid, worst.b);
        total += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        panels.push(left);
        panels.push(right);
        // Resum to keep round-off in the running totals from stalling the loop.
        if (error <= abs_tol || splits % 64 == 0) {
            auto copy = panels;
            double t = 0.0, e = 0.0;
            while (!copy.empty()) {
                t += copy.top().value;
                e += copy.top().error;
                copy.pop();
            }
            total = t;
            error = e;
        }
        if (error <= abs_tol) break;
        // Panels narrower than round-off cannot improve further.
        if (std::abs(mid - worst.a) <= 4 * std::numeric_limits<double>::epsilon() * std::abs(mid)) break;
    }
    return total;
}

GaussRule gauss_legendre_unit(int q) {
    if (q < 1) throw DomainError("Gauss-Legendre order must be positive");
    GaussRule rule;
    rule.nodes.resize(static_cast<std::size_t>(q));
    rule.weights.resize(static_cast<std::size_t>(q));
    // Newton iteration on P_q from Chebyshev-type initial guesses.
    for (int i = 0; i < q; ++i) {
        double z = std::cos(std::numbers::pi * (i + 0.75) / (q + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = 0.0;
            for (int k = 1; k <= q; ++k) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p2) / k;
            }
            dp = q * (z * p0 - p1) / (z * z - 1.0);
            const double step = p0 / dp;
            z -= step;
            if (std::abs(step) < 1e-16) break;
        }
        {
            double p0 = 1.0, p1 = 0.0;
            for (int k = 1; k <= q; ++k) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p2) / k;
            }
            dp = q * (z * p0 - p1) / (z * z - 1.0);
        }
        const auto idx = static_cast<std::size_t>(q - 1 - i);
        rule.nodes[idx] = 0.5 * (z + 1.0);
        rule.weights[idx] = 1.0 / ((1.0 - z * z) * dp * dp);  // 2/((1-z^2)P'^2) scaled by 1/2
    }
    return rule;
}

}  // namespace fbmsde
