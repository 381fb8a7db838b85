#include <algorithm>
#include <fstream>
#include <sstream>

#include "fbmsde/error.hpp"
#include "fbmsde/harness.hpp"
#include "json.hpp"

namespace fbmsde {

ReferenceKind parse_reference_kind(std::string_view name) {
    if (name == "auto" || name == "automatic") return ReferenceKind::automatic;
    if (name == "exact_degenerate") return ReferenceKind::exact_degenerate;
    if (name == "langevin_exact") return ReferenceKind::langevin_exact;
    if (name == "fine_wong_zakai") return ReferenceKind::fine_wong_zakai;
    if (name == "same_grid") return ReferenceKind::same_grid;
    throw ConfigError("unknown reference '" + std::string(name) +
                      "' (expected auto, exact_degenerate, langevin_exact, fine_wong_zakai or same_grid)");
}

std::string to_string(ReferenceKind k) {
    switch (k) {
        case ReferenceKind::automatic: return "auto";
        case ReferenceKind::exact_degenerate: return "exact_degenerate";
        case ReferenceKind::langevin_exact: return "langevin_exact";
        case ReferenceKind::fine_wong_zakai: return "fine_wong_zakai";
        case ReferenceKind::same_grid: return "same_grid";
    }
    return "auto";
}

void ExperimentConfig::validate() const {
    if (schemes.empty()) throw ConfigError("schemes: at least one scheme is required");
    for (SchemeKind s : schemes) {
        if (s != SchemeKind::euler && s != SchemeKind::wong_zakai && s != SchemeKind::mcshane) {
            throw ConfigError("schemes: only euler, wong_zakai and mcshane can be studied");
        }
    }
    if (n_list.empty()) throw ConfigError("n_list: at least one step count is required");
    for (std::size_t n : n_list) {
        if (n == 0) throw ConfigError("n_list: step counts must be positive");
    }
    if (fine_factor == 0) throw ConfigError("fine_factor: must be positive");
    if (paths < 2) throw ConfigError("paths: at least two paths are required");
    if (substeps < 1) throw ConfigError("substeps: must be at least 1");
    const std::size_t fine = fine_steps();
    for (std::size_t n : n_list) {
        if (fine % n != 0) throw ConfigError("n_list: " + std::to_string(n) + " does not divide the fine grid");
    }
    if (fine > (std::size_t{1} << 24)) throw ConfigError("fine grid too large (max(n_list) * fine_factor > 2^24)");
    if (sampler == SamplerKind::cholesky && fine > 4096) {
        throw ConfigError("sampler: cholesky is limited to fine grids of at most 4096 steps; use circulant");
    }
}

std::size_t ExperimentConfig::fine_steps() const {
    std::size_t m = 0;
    for (std::size_t n : n_list) m = std::max(m, n);
    return m * fine_factor;
}

namespace {

template <typename T>
T get_field(const nlohmann::json& j, const char* key, T fallback) {
    if (!j.contains(key)) return fallback;
    try {
        return j.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
        throw ConfigError(std::string("config: field \"") + key + "\" has the wrong type");
    }
}

}  // namespace

ExperimentConfig ExperimentConfig::from_json(std::string_view text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(std::string("config JSON: ") + e.what());
    }
    if (!j.is_object()) throw ConfigError("config JSON must be an object");
    // Manifests wrap the config.
    if (j.contains("config") && j.at("config").is_object()) {
        nlohmann::json inner = j.at("config");
        j = std::move(inner);
    }
    ExperimentConfig cfg;
    if (!j.contains("problem")) {
        cfg.problem = SdeProblem::from_json(j.dump());
        return cfg;
    }
    cfg.problem = SdeProblem::from_json(j.at("problem").dump());
    if (j.contains("schemes")) {
        cfg.schemes.clear();
        for (const auto& s : j.at("schemes")) {
            if (!s.is_string()) throw ConfigError("config: schemes must be strings");
            cfg.schemes.push_back(parse_scheme_kind(s.get<std::string>()));
        }
    }
    cfg.n_list = get_field(j, "n_list", cfg.n_list);
    cfg.fine_factor = get_field(j, "fine_factor", cfg.fine_factor);
    cfg.paths = get_field(j, "paths", cfg.paths);
    cfg.master_seed = get_field(j, "seed", cfg.master_seed);
    cfg.substeps = get_field(j, "substeps", cfg.substeps);
    cfg.sampler = parse_sampler_kind(get_field<std::string>(j, "sampler", to_string(cfg.sampler)));
    cfg.reference = parse_reference_kind(get_field<std::string>(j, "reference", to_string(cfg.reference)));
    cfg.reference_scheme =
        parse_scheme_kind(get_field<std::string>(j, "reference_scheme", to_string(cfg.reference_scheme)));
    cfg.output = get_field(j, "output", cfg.output);
    static const char* known[] = {"problem", "schemes",   "n_list",    "fine_factor",      "paths", "seed",
                                  "substeps", "sampler", "reference", "reference_scheme", "output"};
    for (const auto& [key, _] : j.items()) {
        if (std::find(std::begin(known), std::end(known), key) == std::end(known)) {
            throw ConfigError("config: unknown key \"" + key + "\"");
        }
    }
    cfg.validate();
    return cfg;
}

std::string ExperimentConfig::to_json(int indent) const {
    nlohmann::ordered_json j;
    j["problem"] = nlohmann::ordered_json::parse(problem.to_json());
    j["schemes"] = nlohmann::ordered_json::array();
    for (SchemeKind s : schemes) j["schemes"].push_back(to_string(s));
    j["n_list"] = n_list;
    j["fine_factor"] = fine_factor;
    j["paths"] = paths;
    j["seed"] = master_seed;
    j["substeps"] = substeps;
    j["sampler"] = to_string(sampler);
    j["reference"] = to_string(reference);
    j["reference_scheme"] = to_string(reference_scheme);
    j["output"] = output;
    return j.dump(indent);
}

ExperimentConfig ExperimentConfig::load(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw ConfigError("cannot open config file " + file.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return from_json(buf.str());
}

}  // namespace fbmsde
