#include <cmath>
#include "json.hpp"

#include "fbmsde/error.hpp"
#include "fbmsde/model.hpp"

namespace fbmsde {

SdeProblem SdeProblem::make(double hurst, double x0, std::string_view drift, std::string_view diffusion,
                            ParamMap params) {
    if (!std::isfinite(x0)) throw DomainError("x0 must be finite");
    SdeProblem p{Hurst::for_sde(hurst), x0, CoefficientFn::parse(drift, params),
                 CoefficientFn::parse(diffusion, params), std::move(params)};
    return p;
}

SdeProblem SdeProblem::from_json(std::string_view text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(std::string("problem JSON: ") + e.what());
    }
    if (!j.is_object()) throw ConfigError("problem JSON must be an object");
    auto need = [&](const char* key) -> const nlohmann::json& {
        if (!j.contains(key)) throw ConfigError(std::string("problem JSON: missing \"") + key + "\"");
        return j.at(key);
    };
    const auto& hj = need("hurst");
    const auto& xj = need("x0");
    const auto& dj = need("drift");
    const auto& sj = need("diffusion");
    if (!hj.is_number() || !xj.is_number()) throw ConfigError("problem JSON: hurst and x0 must be numbers");
    if (!dj.is_string() || !sj.is_string()) throw ConfigError("problem JSON: drift and diffusion must be strings");
    ParamMap params;
    if (j.contains("params")) {
        const auto& pj = j.at("params");
        if (!pj.is_object()) throw ConfigError("problem JSON: params must be an object");
        for (const auto& [name, value] : pj.items()) {
            if (!value.is_number()) throw ConfigError("problem JSON: parameter \"" + name + "\" must be a number");
            params.emplace(name, value.get<double>());
        }
    }
    for (const auto& [key, _] : j.items()) {
        if (key != "hurst" && key != "x0" && key != "drift" && key != "diffusion" && key != "params") {
            throw ConfigError("problem JSON: unknown key \"" + key + "\"");
        }
    }
    return make(hj.get<double>(), xj.get<double>(), dj.get<std::string>(), sj.get<std::string>(),
                std::move(params));
}

std::string SdeProblem::to_json() const {
    nlohmann::json j;
    j["hurst"] = hurst.value();
    j["x0"] = x0;
    j["drift"] = a.source();
    j["diffusion"] = sigma.source();
    j["params"] = nlohmann::json::object();
    for (const auto& [k, v] : params) j["params"][k] = v;
    return j.dump();
}

double commutator(const SdeProblem& p, double x) { return p.a.d1(x) * p.sigma(x) - p.a(x) * p.sigma.d1(x); }

std::string to_string(Degeneracy d) {
    switch (d) {
        case Degeneracy::degenerate: return "degenerate";
        case Degeneracy::non_degenerate: return "non_degenerate";
        case Degeneracy::inconclusive: return "inconclusive";
    }
    return "inconclusive";
}

DegeneracyResult degeneracy_check(const SdeProblem& p, ProbeRange range, DegeneracyThresholds thresholds) {
    DegeneracyResult r;
    const std::size_t m = std::max<std::size_t>(thresholds.probes, 2);
    bool all_zero = true;
    for (std::size_t i = 0; i < m; ++i) {
        const double x = range.lo + (range.hi - range.lo) * static_cast<double>(i) / static_cast<double>(m - 1);
        double c;
        try {
            c = commutator(p, x);
        } catch (const EvaluationError&) {
            all_zero = false;
            continue;
        }
        r.max_abs_commutator = std::max(r.max_abs_commutator, std::abs(c));
        if (std::abs(c) > thresholds.zero_tol) all_zero = false;
    }
    r.commutator_at_x0 = commutator(p, p.x0);
    if (all_zero && std::abs(r.commutator_at_x0) <= thresholds.zero_tol) {
        r.status = Degeneracy::degenerate;
    } else if (std::abs(r.commutator_at_x0) > thresholds.x0_tol) {
        r.status = Degeneracy::non_degenerate;
    } else {
        r.status = Degeneracy::inconclusive;
    }
    return r;
}

std::optional<double> langevin_lambda(const SdeProblem& p, ProbeRange range) {
    constexpr int kProbes = 201;
    try {
        if (p.a(0.0) != 0.0) return std::nullopt;
        const double lambda = p.a.d1(0.0);
        for (int i = 0; i < kProbes; ++i) {
            const double x = range.lo + (range.hi - range.lo) * i / (kProbes - 1.0);
            if (p.sigma(x) != 1.0 || p.sigma.d1(x) != 0.0) return std::nullopt;
            if (std::abs(p.a.d2(x)) > 0.0) return std::nullopt;
            if (std::abs(p.a(x) - lambda * x) > 1e-12 * (1.0 + std::abs(lambda * x))) return std::nullopt;
        }
        return lambda;
    } catch (const EvaluationError&) {
        return std::nullopt;
    }
}

}  // namespace fbmsde
