#pragma once

// Monte Carlo convergence studies on coupled paths: one fine fBm path per
// sample drives the reference and, after subsampling, every coarse scheme.

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "fbmsde/fbm.hpp"
#include "fbmsde/model.hpp"
#include "fbmsde/schemes.hpp"

namespace fbmsde {

enum class ReferenceKind {
    automatic,         // exact_degenerate, then langevin_exact, then fine_wong_zakai
    exact_degenerate,
    langevin_exact,
    fine_wong_zakai,
    same_grid,         // reference_scheme on the coarse path itself
};
ReferenceKind parse_reference_kind(std::string_view name);
std::string to_string(ReferenceKind k);

struct ExperimentConfig {
    SdeProblem problem;
    std::vector<SchemeKind> schemes{SchemeKind::mcshane};
    std::vector<std::size_t> n_list{16, 32, 64, 128};
    std::size_t fine_factor = 32;
    std::size_t paths = 1000;
    std::uint64_t master_seed = 1;
    int substeps = 8;
    SamplerKind sampler = SamplerKind::circulant;
    ReferenceKind reference = ReferenceKind::automatic;
    SchemeKind reference_scheme = SchemeKind::wong_zakai;  // for same_grid
    std::string output = "results";
    std::size_t workers = 0;  // 0: worker_count(); not serialized

    /// Throws ConfigError naming the offending field.
    void validate() const;
    [[nodiscard]] std::size_t fine_steps() const;

    /// Accepts a full experiment config or a bare problem JSON (defaults elsewhere).
    static ExperimentConfig from_json(std::string_view text);
    [[nodiscard]] std::string to_json(int indent = 2) const;
    static ExperimentConfig load(const std::filesystem::path& file);
};

struct ErrorRow {
    SchemeKind scheme = SchemeKind::euler;
    double hurst = 0.0;
    std::size_t n = 0;
    std::size_t paths = 0;  // paths that completed
    double rms_error = 0.0;
    double std_error = 0.0;
    double scaled_error = 0.0;  // n^{H+1/2} rms
    std::size_t aborted_paths = 0;
};

struct ErrorTable {
    std::vector<ErrorRow> rows;
    [[nodiscard]] const ErrorRow& at(SchemeKind scheme, std::size_t n) const;
};

/// RMS of path-level values and its leave-one-out jackknife standard error.
/// Non-finite entries are skipped.
std::pair<double, double> rms_with_jackknife(std::span<const double> squared_errors);

struct StudyResult {
    ErrorTable table;
    ReferenceKind reference = ReferenceKind::automatic;  // the policy actually used
    /// Squared errors indexed [path][scheme][n] (flattened); NaN for aborted paths.
    std::vector<double> squared_errors;
    std::size_t schemes = 0;
    std::size_t ns = 0;
    [[nodiscard]] double squared_error(std::size_t path, std::size_t scheme, std::size_t n_index) const {
        return squared_errors[(path * schemes + scheme) * ns + n_index];
    }
};

/// Resolves `automatic` for the problem; throws ConfigError if the requested
/// reference is not admissible.
ReferenceKind select_reference(const ExperimentConfig& cfg);

StudyResult strong_error_study(const ExperimentConfig& cfg);

struct RateFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
};

/// Least squares of log(rms) on log(n) over the scheme's rows with rms > 0.
RateFit rate_regression(const ErrorTable& table, SchemeKind scheme);

struct WeightSource {
    enum class Kind { langevin, mc_weight, deterministic } kind = Kind::mc_weight;
    std::function<double(double)> rho;  // for `deterministic`
};

struct InterpErrorRow {
    std::size_t n = 0;
    std::size_t paths = 0;
    double mc_value = 0.0;  // E|int Y (B - B~) dt|^2
    double mc_std_error = 0.0;
    std::optional<double> exact_value;
    double scaled_mc = 0.0;  // n^{2H+1} mc_value
    std::optional<double> scaled_exact;
    double limit = 0.0;  // |zeta(-2H)| int E|Y|^2
};

std::vector<InterpErrorRow> interp_error_study(const ExperimentConfig& cfg, const WeightSource& source);

// Serialization.
inline constexpr const char* kErrorTableHeader = "scheme,hurst,n,paths,rms_error,stderr,scaled_error,aborted_paths";
void write_error_table_csv(std::ostream& out, const ErrorTable& table);
void write_interp_table_csv(std::ostream& out, const std::vector<InterpErrorRow>& rows);
void write_regression_csv(std::ostream& out, const ErrorTable& table, const std::vector<SchemeKind>& schemes);
std::string manifest_json(const ExperimentConfig& cfg, double elapsed_seconds);
std::string version_string();

struct RunArtifacts {
    std::filesystem::path error_csv;
    std::filesystem::path manifest;
    std::filesystem::path regression_csv;
    StudyResult result;
};

/// Runs strong_error_study and writes errors.csv, manifest.json and
/// regression.csv under cfg.output.
RunArtifacts run_experiment(const ExperimentConfig& cfg);

}  // namespace fbmsde
