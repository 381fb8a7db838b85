#include <algorithm>
#include <cmath>

#include "fbmsde/error.hpp"
#include "fbmsde/expr.hpp"

namespace fbmsde {

CoefficientFn::CoefficientFn(Expr expr, ParamMap params) : params_(std::move(params)) {
    source_ = print_expr(expr);
    exprs_[0] = std::move(expr);
    for (int k = 1; k < 4; ++k) exprs_[k] = differentiate(exprs_[k - 1]);
    for (int k = 0; k < 4; ++k) programs_[k] = Program(exprs_[k], params_);
}

CoefficientFn CoefficientFn::parse(std::string_view source, ParamMap params) {
    CoefficientFn fn(parse_expr(source), std::move(params));
    fn.source_ = std::string(source);
    return fn;
}

namespace {

struct Extremes {
    double min = INFINITY;
    double max_abs = 0.0;
    double max_abs_inner = 0.0;  // over the middle half of the range
    double max_abs_outer = 0.0;  // over the outer tenth at each end
    bool constant = true;
    double first = 0.0;
};

}  // namespace

AssumptionReport validate_assumptions(const CoefficientFn& a, const CoefficientFn& sigma, ProbeRange range,
                                      bool needs_positivity, double magnitude_bound, std::size_t probes) {
    AssumptionReport report;
    report.probes = probes;
    if (probes < 2 || !(range.hi > range.lo)) {
        report.violations.push_back("probe range must be a non-empty interval with at least two probes");
        return report;
    }

    // Index 0..1 of `a` (a, a', a''), 2..5 of sigma (sigma .. sigma''').
    Extremes ext[7];
    const double width = range.hi - range.lo;
    for (std::size_t i = 0; i < probes; ++i) {
        const double x = range.lo + width * static_cast<double>(i) / static_cast<double>(probes - 1);
        const double rel = (x - range.lo) / width;
        const bool inner = rel >= 0.25 && rel <= 0.75;
        const bool outer = rel <= 0.1 || rel >= 0.9;
        double vals[7];
        try {
            for (int k = 0; k < 3; ++k) vals[k] = a.derivative(k, x);
            for (int k = 0; k < 4; ++k) vals[3 + k] = sigma.derivative(k, x);
        } catch (const EvaluationError& err) {
            report.violations.push_back("evaluation failed at x = " + std::to_string(x) + ": " + err.what());
            return report;
        }
        for (int k = 0; k < 7; ++k) {
            Extremes& e = ext[k];
            const double v = vals[k];
            if (i == 0) e.first = v;
            if (v != e.first) e.constant = false;
            e.min = std::min(e.min, v);
            e.max_abs = std::max(e.max_abs, std::abs(v));
            if (inner) e.max_abs_inner = std::max(e.max_abs_inner, std::abs(v));
            if (outer) e.max_abs_outer = std::max(e.max_abs_outer, std::abs(v));
        }
    }

    report.max_abs_a = ext[0].max_abs;
    report.max_abs_a_derivs[0] = ext[1].max_abs;
    report.max_abs_a_derivs[1] = ext[2].max_abs;
    report.max_abs_sigma = ext[3].max_abs;
    for (int k = 0; k < 3; ++k) report.max_abs_sigma_derivs[k] = ext[4 + k].max_abs;
    report.min_sigma = ext[3].min;
    report.sigma_positive = report.min_sigma > 0.0;
    report.sigma_constant = ext[3].constant;

    if (needs_positivity && !report.sigma_positive) {
        report.violations.push_back("diffusion coefficient is not strictly positive on the probe range (min " +
                                    std::to_string(report.min_sigma) + ")");
    } else if (!report.sigma_positive) {
        report.warnings.push_back("diffusion coefficient is not strictly positive on the probe range");
    }

    static const char* names[7] = {"a", "a'", "a''", "sigma", "sigma'", "sigma''", "sigma'''"};
    for (int k = 0; k < 7; ++k) {
        if (ext[k].max_abs > magnitude_bound) {
            report.violations.push_back(std::string(names[k]) + " exceeds the magnitude bound on the probe range");
        }
    }

    // Growth heuristic: a bounded smooth function does not keep growing toward
    // the ends of a wide probe range.
    auto grows = [](const Extremes& e) { return e.max_abs_outer > 1.5 * e.max_abs_inner + 1e-12; };
    report.drift_growth_suspected = grows(ext[0]);
    if (report.drift_growth_suspected) {
        if (report.sigma_constant) {
            report.warnings.push_back(
                "drift appears unbounded; acceptable because the diffusion coefficient is constant");
        } else {
            report.warnings.push_back("drift appears unbounded on the probe range; boundedness is assumed");
        }
    }
    for (int k = 3; k < 7; ++k) {
        if (grows(ext[k])) {
            report.warnings.push_back(std::string(names[k]) + " appears unbounded on the probe range");
        }
    }
    return report;
}

}  // namespace fbmsde
