#include "fbmsde/cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>

#include "CLI11.hpp"
#include "fbmsde/analysis.hpp"
#include "fbmsde/error.hpp"
#include "fbmsde/harness.hpp"

namespace fbmsde::cli {

namespace {

struct Options {
    double hurst = 0.75;
    std::size_t n = 0;
    std::vector<std::size_t> n_list;
    std::size_t paths = 1;
    std::uint64_t seed = 1;
    std::string method = "circulant";
    std::string out;
    std::string config;
    std::string scheme = "mcshane";
    std::vector<std::string> schemes;
    std::size_t path_index = 0;
    int substeps = 8;
    bool trajectory = false;
    std::size_t fine_factor = 32;
    std::string reference = "auto";
    std::string weight = "auto";
    long long r = 10000;
    double spectral_c = 0.0;
    std::size_t fine_n = 1024;
};

struct App {
    std::unique_ptr<CLI::App> app;
    Options opt;
    CLI::App* sample = nullptr;
    CLI::App* solve = nullptr;
    CLI::App* convergence = nullptr;
    CLI::App* interp = nullptr;
    CLI::App* constants = nullptr;
    CLI::App* degeneracy = nullptr;
    CLI::App* weight = nullptr;
};

std::unique_ptr<App> build() {
    auto a = std::make_unique<App>();
    a->app = std::make_unique<CLI::App>("Simulation and error analysis for SDEs driven by fractional Brownian motion",
                                        "fbmsde");
    a->app->require_subcommand(1);
    Options& o = a->opt;
    CLI::App& app = *a->app;

    a->sample = app.add_subcommand("sample", "Sample fBm paths on [0, 1] and write path_id,t,value CSV");
    a->sample->add_option("--hurst", o.hurst, "Hurst index in (0, 1)")->required();
    a->sample->add_option("--n", o.n, "Number of grid steps")->required()->check(CLI::PositiveNumber);
    a->sample->add_option("--paths", o.paths, "Number of paths")->check(CLI::PositiveNumber);
    a->sample->add_option("--seed", o.seed, "Master seed");
    a->sample->add_option("--method", o.method, "Sampler: cholesky or circulant")
        ->check(CLI::IsMember({"cholesky", "circulant"}));
    a->sample->add_option("--out", o.out, "Output file (default: standard output)");

    a->solve = app.add_subcommand("solve", "Solve one problem on one sampled path");
    a->solve->add_option("--config", o.config, "Problem or experiment JSON file")->required();
    a->solve->add_option("--scheme", o.scheme,
                         "euler, wong_zakai, mcshane, exact_degenerate or langevin_exact");
    a->solve->add_option("--n", o.n, "Number of grid steps")->required()->check(CLI::PositiveNumber);
    a->solve->add_option("--seed", o.seed, "Master seed");
    a->solve->add_option("--path-index", o.path_index, "Path (stream) index");
    a->solve->add_option("--substeps", o.substeps, "Runge-Kutta substeps per cell (wong_zakai)")
        ->check(CLI::PositiveNumber);
    a->solve->add_option("--method", o.method, "Sampler: cholesky or circulant")
        ->check(CLI::IsMember({"cholesky", "circulant"}));
    a->solve->add_flag("--trajectory", o.trajectory, "Write the trajectory as t,value CSV");
    a->solve->add_option("--out", o.out, "Output file (default: standard output)");

    a->convergence = app.add_subcommand("convergence", "Strong error study; writes the error table CSV");
    a->convergence->add_option("--config", o.config, "Problem or experiment JSON file")->required();
    a->convergence->add_option("--schemes", o.schemes, "Comma-separated schemes")->delimiter(',');
    a->convergence->add_option("--n", o.n_list, "Comma-separated coarse step counts")->delimiter(',');
    a->convergence->add_option("--paths", o.paths, "Monte Carlo paths")->check(CLI::PositiveNumber);
    a->convergence->add_option("--seed", o.seed, "Master seed");
    a->convergence->add_option("--fine-factor", o.fine_factor, "Fine grid = max(n) * fine-factor")
        ->check(CLI::PositiveNumber);
    a->convergence->add_option("--substeps", o.substeps, "Runge-Kutta substeps per cell")
        ->check(CLI::PositiveNumber);
    a->convergence->add_option("--reference", o.reference,
                               "auto, exact_degenerate, langevin_exact, fine_wong_zakai or same_grid");
    a->convergence->add_option("--method", o.method, "Sampler: cholesky or circulant")
        ->check(CLI::IsMember({"cholesky", "circulant"}));
    a->convergence->add_option("--out", o.out, "Output directory for errors.csv, manifest.json, regression.csv");

    a->interp = app.add_subcommand("interp-error", "Weighted interpolation error study");
    a->interp->add_option("--config", o.config, "Problem or experiment JSON file")->required();
    a->interp->add_option("--weight", o.weight, "auto, langevin or mc")
        ->check(CLI::IsMember({"auto", "langevin", "mc"}));
    a->interp->add_option("--n", o.n_list, "Comma-separated coarse step counts")->delimiter(',');
    a->interp->add_option("--paths", o.paths, "Monte Carlo paths")->check(CLI::PositiveNumber);
    a->interp->add_option("--seed", o.seed, "Master seed");
    a->interp->add_option("--fine-factor", o.fine_factor, "Fine grid = max(n) * fine-factor")
        ->check(CLI::PositiveNumber);
    a->interp->add_option("--substeps", o.substeps, "Runge-Kutta substeps per cell")->check(CLI::PositiveNumber);
    a->interp->add_option("--out", o.out, "Output file (default: standard output)");

    a->constants = app.add_subcommand("constants", "Print the limiting constants for a Hurst index");
    a->constants->add_option("--hurst", o.hurst, "Hurst index in (1/2, 1)")->required();
    a->constants->add_option("--r", o.r, "Truncation index of the C0 sequence")->check(CLI::PositiveNumber);
    a->constants->add_option("--spectral-c", o.spectral_c, "Spectral constant for the lower-bound constant");

    a->degeneracy = app.add_subcommand("degeneracy", "Classify a problem as degenerate or non-degenerate");
    a->degeneracy->add_option("--config", o.config, "Problem or experiment JSON file")->required();

    a->weight = app.add_subcommand("weight", "Monte Carlo estimates of the weight-process functionals");
    a->weight->add_option("--config", o.config, "Problem or experiment JSON file")->required();
    a->weight->add_option("--paths", o.paths, "Monte Carlo paths")->check(CLI::PositiveNumber);
    a->weight->add_option("--fine-n", o.fine_n, "Fine grid steps")->check(CLI::PositiveNumber);
    a->weight->add_option("--seed", o.seed, "Master seed");
    a->weight->add_option("--substeps", o.substeps, "Runge-Kutta substeps per cell")->check(CLI::PositiveNumber);
    return a;
}

std::string g6(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

std::string g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

/// Standard output or the --out file.
class Sink {
public:
    Sink(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
        if (!path.empty()) {
            file_.open(path, std::ios::binary);
            if (!file_) throw std::runtime_error("cannot open output file " + path);
            stream_ = &file_;
        }
    }
    std::ostream& operator*() { return *stream_; }

private:
    std::ofstream file_;
    std::ostream* stream_;
};

int cmd_sample(const Options& o, std::ostream& out) {
    const FbmSampler sampler(parse_sampler_kind(o.method), o.n, Hurst(o.hurst));
    Sink sink(o.out, out);
    *sink << kPathCsvHeader << '\n';
    for (std::size_t p = 0; p < o.paths; ++p) {
        RngStream stream(o.seed, p);
        write_path_csv_rows(*sink, sampler.sample(stream), p);
    }
    return kOk;
}

int cmd_solve(const Options& o, std::ostream& out) {
    const ExperimentConfig cfg = ExperimentConfig::load(o.config);
    const SdeProblem& p = cfg.problem;
    const SchemeKind kind = parse_scheme_kind(o.scheme);
    const FbmSampler sampler(parse_sampler_kind(o.method), o.n, p.hurst);
    RngStream stream(o.seed, o.path_index);
    const FbmPath path = sampler.sample(stream);
    SolveResult r;
    switch (kind) {
        case SchemeKind::euler: r = euler_solve(p, path, o.trajectory); break;
        case SchemeKind::mcshane: r = mcshane_solve(p, path, o.trajectory); break;
        case SchemeKind::wong_zakai: r = wong_zakai_solve(p, path, o.substeps, o.trajectory); break;
        case SchemeKind::exact_degenerate: r = ExactDegenerate(p).solve(path, o.trajectory); break;
        case SchemeKind::langevin_exact: {
            const auto lambda = langevin_lambda(p);
            if (!lambda) throw ConfigError("--scheme langevin_exact requires a = l*x, sigma = 1");
            if (o.trajectory) throw ConfigError("--trajectory is not available for langevin_exact");
            r = SolveResult{kind, o.n, langevin_exact_solution(*lambda, p.x0, path), {}};
            break;
        }
    }
    Sink sink(o.out, out);
    if (o.trajectory) {
        *sink << "t,value\n";
        for (std::size_t i = 0; i < r.trajectory.size(); ++i) {
            *sink << g17(path.grid.time(i)) << ',' << g17(r.trajectory[i]) << '\n';
        }
    } else {
        *sink << "scheme=" << to_string(kind) << "\nn=" << r.n << "\nterminal=" << g6(r.terminal) << '\n';
    }
    return kOk;
}

/// True when `sub` defines the flag and it was given on the command line.
bool given(CLI::App* sub, const std::string& flag) {
    const CLI::Option* opt = sub->get_option_no_throw(flag);
    return opt != nullptr && opt->count() > 0;
}

ExperimentConfig study_config(const Options& o, const App& a, CLI::App* sub) {
    ExperimentConfig cfg = ExperimentConfig::load(o.config);
    if (given(sub, "--schemes")) {
        cfg.schemes.clear();
        for (const auto& s : o.schemes) cfg.schemes.push_back(parse_scheme_kind(s));
    }
    if (given(sub, "--n")) cfg.n_list = o.n_list;
    if (given(sub, "--paths")) cfg.paths = o.paths;
    if (given(sub, "--seed")) cfg.master_seed = o.seed;
    if (given(sub, "--fine-factor")) cfg.fine_factor = o.fine_factor;
    if (given(sub, "--substeps")) cfg.substeps = o.substeps;
    if (sub == a.convergence) {
        if (given(sub, "--reference")) cfg.reference = parse_reference_kind(o.reference);
        if (given(sub, "--method")) cfg.sampler = parse_sampler_kind(o.method);
        if (given(sub, "--out")) cfg.output = o.out;
    }
    cfg.validate();
    return cfg;
}

int cmd_convergence(const App& a, std::ostream& out, std::ostream& err) {
    const Options& o = a.opt;
    const ExperimentConfig cfg = study_config(o, a, a.convergence);
    if (!o.out.empty()) {
        const RunArtifacts art = run_experiment(cfg);
        write_error_table_csv(out, art.result.table);
        err << "wrote " << art.error_csv.string() << ", " << art.regression_csv.string() << ", "
            << art.manifest.string() << '\n';
        return kOk;
    }
    const StudyResult res = strong_error_study(cfg);
    write_error_table_csv(out, res.table);
    return kOk;
}

int cmd_interp(const App& a, std::ostream& out) {
    const Options& o = a.opt;
    const ExperimentConfig cfg = study_config(o, a, a.interp);
    WeightSource source;
    if (o.weight == "langevin" || (o.weight == "auto" && langevin_lambda(cfg.problem))) {
        source.kind = WeightSource::Kind::langevin;
    }
    const auto rows = interp_error_study(cfg, source);
    Sink sink(o.out, out);
    write_interp_table_csv(*sink, rows);
    return kOk;
}

int cmd_constants(const Options& o, std::ostream& out) {
    const Hurst h = Hurst::for_sde(o.hurst);
    const Constants c = constants_for(h);
    out << "hurst=" << g6(h.value()) << '\n'
        << "kappa=" << g6(c.kappa) << '\n'
        << "zeta_neg2H=" << g6(c.zeta_neg2H) << '\n'
        << "beta_H=" << g6(c.beta) << '\n'
        << "K2=" << g6(c.k2) << '\n'
        << "C0(" << o.r << ")=" << g6(c0_sequence(o.r, h)) << '\n';
    if (o.spectral_c != 0.0) out << "lower_bound_constant=" << g6(lower_bound_constant(h, o.spectral_c)) << '\n';
    return kOk;
}

int cmd_degeneracy(const Options& o, std::ostream& out, std::ostream& err) {
    const ExperimentConfig cfg = ExperimentConfig::load(o.config);
    const SdeProblem& p = cfg.problem;
    const DegeneracyResult d = degeneracy_check(p);
    out << "status=" << to_string(d.status) << '\n'
        << "commutator_x0=" << g6(d.commutator_at_x0) << '\n'
        << "max_abs_commutator=" << g6(d.max_abs_commutator) << '\n';
    if (const auto lambda = langevin_lambda(p)) out << "langevin_lambda=" << g6(*lambda) << '\n';
    const AssumptionReport rep = validate_assumptions(p.a, p.sigma, {}, true);
    for (const auto& w : rep.warnings) err << "warning: " << w << '\n';
    for (const auto& v : rep.violations) err << "assumption violated: " << v << '\n';
    return kOk;
}

int cmd_weight(const Options& o, std::ostream& out) {
    const ExperimentConfig cfg = ExperimentConfig::load(o.config);
    const SdeProblem& p = cfg.problem;
    WeightMcConfig w;
    w.paths = o.paths < 2 ? 200 : o.paths;
    w.fine_n = o.fine_n;
    w.seed = o.seed;
    w.substeps = o.substeps;
    const McEstimate ms = mean_square_weight_integral(p, w);
    const McEstimate nd = nd_condition_estimate(p, w);
    const Constants c = constants_for(p.hurst);
    out << "paths=" << w.paths << '\n'
        << "mean_square_weight=" << g6(ms.value) << '\n'
        << "mean_square_weight_stderr=" << g6(ms.std_error) << '\n'
        << "nd_estimate=" << g6(nd.value) << '\n'
        << "nd_stderr=" << g6(nd.std_error) << '\n'
        << "beta_H=" << g6(c.beta) << '\n'
        << "predicted_constant=" << g6(c.beta * std::sqrt(std::max(ms.value, 0.0))) << '\n';
    return kOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    auto a = build();
    try {
        a->app->parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = a->app->exit(e, out, err);
        return code == 0 ? kOk : kValidationError;
    }
    const Options& o = a->opt;
    try {
        if (*a->sample) return cmd_sample(o, out);
        if (*a->solve) return cmd_solve(o, out);
        if (*a->convergence) return cmd_convergence(*a, out, err);
        if (*a->interp) return cmd_interp(*a, out);
        if (*a->constants) return cmd_constants(o, out);
        if (*a->degeneracy) return cmd_degeneracy(o, out, err);
        if (*a->weight) return cmd_weight(o, out);
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << '\n';
        return kValidationError;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << '\n';
        return kValidationError;
    } catch (const ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kValidationError;
    } catch (const EvaluationError& e) {
        err << "error: " << e.what() << '\n';
        return kValidationError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kRuntimeError;
    }
    return kValidationError;
}

std::vector<SubcommandFlags> flag_registry() {
    auto a = build();
    std::vector<SubcommandFlags> reg;
    for (const CLI::App* sub : a->app->get_subcommands({})) {
        SubcommandFlags entry{sub->get_name(), {}};
        for (const CLI::Option* opt : sub->get_options()) {
            for (const auto& name : opt->get_lnames()) entry.flags.push_back("--" + name);
        }
        reg.push_back(std::move(entry));
    }
    return reg;
}

}  // namespace fbmsde::cli
