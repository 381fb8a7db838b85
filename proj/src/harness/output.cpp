#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include "fbmsde/error.hpp"
#include "fbmsde/harness.hpp"
#include "json.hpp"

#ifndef FBMSDE_VERSION
#define FBMSDE_VERSION "0.1.0-unknown"
#endif

namespace fbmsde {

namespace {

std::string g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_file(const std::filesystem::path& file, const std::string& content) {
    std::ofstream out(file, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + file.string());
    out << content;
    if (!out) throw std::runtime_error("write failed for " + file.string());
}

}  // namespace

std::string version_string() { return FBMSDE_VERSION; }

void write_error_table_csv(std::ostream& out, const ErrorTable& table) {
    out << kErrorTableHeader << '\n';
    for (const auto& r : table.rows) {
        out << to_string(r.scheme) << ',' << g17(r.hurst) << ',' << r.n << ',' << r.paths << ',' << g17(r.rms_error)
            << ',' << g17(r.std_error) << ',' << g17(r.scaled_error) << ',' << r.aborted_paths << '\n';
    }
}

void write_interp_table_csv(std::ostream& out, const std::vector<InterpErrorRow>& rows) {
    out << "n,paths,mc_value,mc_stderr,exact_value,scaled_mc,scaled_exact,limit\n";
    for (const auto& r : rows) {
        out << r.n << ',' << r.paths << ',' << g17(r.mc_value) << ',' << g17(r.mc_std_error) << ','
            << (r.exact_value ? g17(*r.exact_value) : "") << ',' << g17(r.scaled_mc) << ','
            << (r.scaled_exact ? g17(*r.scaled_exact) : "") << ',' << g17(r.limit) << '\n';
    }
}

void write_regression_csv(std::ostream& out, const ErrorTable& table, const std::vector<SchemeKind>& schemes) {
    out << "scheme,slope,intercept,r2\n";
    for (SchemeKind s : schemes) {
        try {
            const RateFit fit = rate_regression(table, s);
            out << to_string(s) << ',' << g17(fit.slope) << ',' << g17(fit.intercept) << ',' << g17(fit.r2) << '\n';
        } catch (const DomainError&) {
            out << to_string(s) << ",,,\n";
        }
    }
}

std::string manifest_json(const ExperimentConfig& cfg, double elapsed_seconds) {
    nlohmann::ordered_json j;
    j["config"] = nlohmann::ordered_json::parse(cfg.to_json());
    j["seed"] = cfg.master_seed;
    j["version"] = version_string();
    j["elapsed_seconds"] = elapsed_seconds;
    return j.dump(2) + "\n";
}

RunArtifacts run_experiment(const ExperimentConfig& cfg) {
    cfg.validate();
    const std::filesystem::path dir(cfg.output);
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw std::runtime_error("cannot create output directory " + dir.string() + ": " + ec.message());

    const auto start = std::chrono::steady_clock::now();
    RunArtifacts art;
    art.result = strong_error_study(cfg);
    const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    art.error_csv = dir / "errors.csv";
    art.manifest = dir / "manifest.json";
    art.regression_csv = dir / "regression.csv";
    std::ostringstream csv, reg;
    write_error_table_csv(csv, art.result.table);
    write_regression_csv(reg, art.result.table, cfg.schemes);
    write_file(art.error_csv, csv.str());
    write_file(art.regression_csv, reg.str());
    write_file(art.manifest, manifest_json(cfg, elapsed));
    return art;
}

}  // namespace fbmsde
