#pragma once

#include <array>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "nlfd/nlfd.hpp"

namespace nlfd::cli {

class UsageError : public std::runtime_error {
public:
    explicit UsageError(const std::string& what) : std::runtime_error(what) {}
};

enum class Subcommand { Solve, Study, Verify };

struct CliConfig {
    Subcommand subcommand = Subcommand::Study;
    std::string problem;
    std::string scheme = "lf1";
    double alpha = 1.5;
    std::optional<std::array<double, 3>> betas;
    std::string ghost = "second-diff-constant";
    std::string solver = "newton";
    std::optional<std::string> rho;  // number or "auto"
    std::optional<double> gamma;
    std::string guess = "linear";
    std::optional<double> h;
    std::optional<std::vector<double>> h_list;
    int halvings = 0;
    std::string reference = "exact";
    std::optional<std::string> out;
    std::string format = "table";
    std::optional<std::string> preset;
    std::optional<double> res_tol;
};

inline const char* usage_text() {
    return "usage: nlfd <solve|study|verify> [flags]\n"
           "  --problem <example1..example5>\n"
           "  --scheme <lf1|lf2|lf3|godunov-ext|godunov-extr>   (default lf1)\n"
           "  --alpha <real>                                    (default 1.5)\n"
           "  --betas <b1,b2,b3>                                (custom LF weights)\n"
           "  --ghost <second-diff-constant|linear-extrapolation>\n"
           "  --solver <newton|mrho>                            (default newton)\n"
           "  --rho <real|auto>        --gamma <real>           (mrho only)\n"
           "  --guess <linear|coarse:<h>|custom:<name>>         (default linear)\n"
           "  --h <real>  --halvings <n>  --h-list <h1,h2,...>\n"
           "  --reference <exact|alternate>                     (default exact)\n"
           "  --res-tol <real>  --out <path prefix>  --format <table|csv>\n"
           "  --preset <table1|table3-alpha1|...>               (packaged sweeps)\n"
           "  --config <file>                                   (key=value defaults)\n";
}

namespace detail {

inline double parse_real(const std::string& key, const std::string& text) {
    try {
        std::size_t used = 0;
        const double value = std::stod(text, &used);
        if (used != text.size()) throw std::invalid_argument(text);
        return value;
    } catch (const std::exception&) {
        throw UsageError("--" + key + ": expected a number, got '" + text + "'");
    }
}

inline std::vector<double> parse_real_list(const std::string& key, const std::string& text) {
    std::vector<double> values;
    std::size_t start = 0;
    for (std::size_t k = 0; k <= text.size(); ++k) {
        if (k == text.size() || text[k] == ',') {
            values.push_back(parse_real(key, text.substr(start, k - start)));
            start = k + 1;
        }
    }
    return values;
}

inline void apply_key(CliConfig& cfg, const std::string& key, const std::string& value) {
    if (key == "problem") cfg.problem = value;
    else if (key == "scheme") cfg.scheme = value;
    else if (key == "alpha") cfg.alpha = parse_real(key, value);
    else if (key == "betas") {
        const std::vector<double> b = parse_real_list(key, value);
        if (b.size() != 3) throw UsageError("--betas: expected three comma-separated numbers");
        cfg.betas = {b[0], b[1], b[2]};
    } else if (key == "ghost") cfg.ghost = value;
    else if (key == "solver") cfg.solver = value;
    else if (key == "rho") cfg.rho = value;
    else if (key == "gamma") cfg.gamma = parse_real(key, value);
    else if (key == "guess") cfg.guess = value;
    else if (key == "h") cfg.h = parse_real(key, value);
    else if (key == "h-list") cfg.h_list = parse_real_list(key, value);
    else if (key == "halvings") cfg.halvings = static_cast<int>(parse_real(key, value));
    else if (key == "reference") cfg.reference = value;
    else if (key == "out") cfg.out = value;
    else if (key == "format") cfg.format = value;
    else if (key == "preset") cfg.preset = value;
    else if (key == "res-tol") cfg.res_tol = parse_real(key, value);
    else throw UsageError("unknown flag --" + key);
}

inline void load_config_file(CliConfig& cfg, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read config file '" + path + "'");
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos) throw UsageError("config file: expected key=value, got '" + line + "'");
        apply_key(cfg, line.substr(0, eq), line.substr(eq + 1));
    }
}

} // namespace detail

inline CliConfig parse_args(const std::vector<std::string>& args) {
    if (args.empty()) throw UsageError("missing subcommand");
    CliConfig cfg;
    if (args[0] == "solve") cfg.subcommand = Subcommand::Solve;
    else if (args[0] == "study") cfg.subcommand = Subcommand::Study;
    else if (args[0] == "verify") cfg.subcommand = Subcommand::Verify;
    else throw UsageError("unknown subcommand '" + args[0] + "'");

    // config file first, flags override
    std::vector<std::pair<std::string, std::string>> pairs;
    std::optional<std::string> config_path;
    for (std::size_t k = 1; k < args.size(); ++k) {
        std::string token = args[k];
        if (token.rfind("--", 0) != 0) throw UsageError("expected a flag, got '" + token + "'");
        token = token.substr(2);
        std::string value;
        const std::size_t eq = token.find('=');
        if (eq != std::string::npos) {
            value = token.substr(eq + 1);
            token = token.substr(0, eq);
        } else {
            if (k + 1 >= args.size()) throw UsageError("--" + token + ": missing value");
            value = args[++k];
        }
        if (token == "config") config_path = value;
        else pairs.emplace_back(token, value);
    }
    if (config_path) detail::load_config_file(cfg, *config_path);
    for (const auto& [key, value] : pairs) detail::apply_key(cfg, key, value);

    if (cfg.preset && cfg.subcommand != Subcommand::Study) {
        throw UsageError("--preset applies to the study subcommand");
    }
    if (cfg.preset && !cfg.problem.empty()) {
        throw UsageError("--preset already fixes the problem; drop --problem");
    }
    if (cfg.subcommand != Subcommand::Verify && !cfg.preset && cfg.problem.empty()) {
        throw UsageError("--problem is required");
    }
    if (cfg.subcommand == Subcommand::Verify && cfg.problem.empty()) {
        throw UsageError("--problem is required");
    }
    if (cfg.rho && cfg.solver != "mrho") throw UsageError("--rho requires --solver mrho");
    if (cfg.betas && cfg.scheme.rfind("lf", 0) != 0) {
        throw UsageError("--betas applies to Lax-Friedrichs schemes only");
    }
    if (cfg.solver == "mrho" && cfg.scheme.rfind("godunov", 0) == 0) {
        throw UsageError("--solver mrho requires a Lax-Friedrichs scheme");
    }
    return cfg;
}

namespace detail {

inline GhostPolicy ghost_of(const CliConfig& cfg) {
    if (cfg.ghost == "second-diff-constant") return GhostPolicy::SecondDiffConstant;
    if (cfg.ghost == "linear-extrapolation") return GhostPolicy::LinearValueExtrapolation;
    throw UsageError("unknown ghost policy '" + cfg.ghost + "'");
}

inline OperatorKind operator_of(const CliConfig& cfg) {
    if (cfg.betas) {
        try {
            return LaxFriedrichs{LFWeights((*cfg.betas)[0], (*cfg.betas)[1], (*cfg.betas)[2], cfg.alpha)};
        } catch (const std::invalid_argument& err) {
            throw UsageError(std::string("--betas: ") + err.what());
        }
    }
    if (cfg.scheme == "lf1") return LaxFriedrichs{LFWeights::lf1(cfg.alpha)};
    if (cfg.scheme == "lf2") return LaxFriedrichs{LFWeights::lf2(cfg.alpha)};
    if (cfg.scheme == "lf3") return LaxFriedrichs{LFWeights::lf3(cfg.alpha)};
    if (cfg.scheme == "godunov-ext") return GodunovExt{};
    if (cfg.scheme == "godunov-extr") return GodunovExtr{};
    throw UsageError("unknown scheme '" + cfg.scheme + "'");
}

inline InitialGuess guess_of(const CliConfig& cfg, const SchemeConfig& scheme) {
    if (cfg.guess == "linear") return LinearInterpolant{};
    if (cfg.guess.rfind("coarse:", 0) == 0) {
        return CoarseSolveInterpolate{parse_real("guess", cfg.guess.substr(7)), scheme};
    }
    if (cfg.guess.rfind("custom:", 0) == 0) {
        const std::string name = cfg.guess.substr(7);
        if (auto fn = guess_preset(name)) return CustomFunction{*fn};
        throw UsageError("unknown custom guess preset '" + name + "'");
    }
    throw UsageError("unknown guess '" + cfg.guess + "'");
}

inline StudyConfig study_of(const CliConfig& cfg) {
    StudyConfig study;
    if (cfg.preset) {
        auto preset = preset_study(*cfg.preset);
        if (!preset) throw UsageError("unknown preset '" + *cfg.preset + "'");
        study = std::move(*preset);
    } else {
        study.problem = problem_by_name(cfg.problem);
        study.scheme = SchemeConfig{operator_of(cfg), ghost_of(cfg)};
        if (cfg.h_list) {
            study.h_values = *cfg.h_list;
        } else if (cfg.h) {
            study.h_values = {*cfg.h};
            for (int k = 0; k < cfg.halvings; ++k) study.h_values.push_back(study.h_values.back() / 2.0);
        } else {
            throw UsageError("study: provide --h (with optional --halvings) or --h-list");
        }
        study.guess = guess_of(cfg, study.scheme);
        study.reference = cfg.reference == "alternate" ? ErrorReference::AlternateExact
                                                       : ErrorReference::Exact;
        if (cfg.reference != "exact" && cfg.reference != "alternate") {
            throw UsageError("unknown reference '" + cfg.reference + "'");
        }
        study.solver = cfg.solver == "mrho" ? SolverChoice::MRho : SolverChoice::Newton;
        if (cfg.solver != "newton" && cfg.solver != "mrho") {
            throw UsageError("unknown solver '" + cfg.solver + "'");
        }
        if (cfg.rho && *cfg.rho != "auto") study.fixed_point.rho = parse_real("rho", *cfg.rho);
        study.gamma = cfg.gamma;
    }
    if (cfg.res_tol) study.newton.res_tol = *cfg.res_tol;
    return study;
}

inline int run_study_command(const CliConfig& cfg, std::ostream& out) {
    const StudyConfig study = study_of(cfg);
    const std::vector<ConvergenceRow> rows = run_study(study);
    out << (cfg.format == "csv" ? render_csv(rows) : render_table(rows));
    if (cfg.out) emit_csv(rows, *cfg.out + ".csv");
    for (const ConvergenceRow& row : rows) {
        if (row.status != SolveStatus::Converged) return 1;
    }
    return 0;
}

inline int run_solve_command(const CliConfig& cfg, std::ostream& out) {
    if (!cfg.h) throw UsageError("solve: --h is required");
    const StudyConfig base = study_of(cfg);
    const Problem& prob = base.problem;
    const Grid grid(prob.a, prob.b, nlfd::detail::points_for_spacing(prob.a, prob.b, *cfg.h));
    DiscreteSystem sys(grid, prob, base.scheme);
    GridFunction u0 = build_initial_guess(base.guess, grid, prob, base.newton);
    auto [u, report] = base.solver == SolverChoice::Newton
                           ? newton_solve(sys, u0, base.newton)
                           : mrho_solve(sys, u0, base.fixed_point, base.gamma);
    out << "solver: " << report.solver << "\n"
        << "config: " << report.config << "\n"
        << "status: " << to_string(report.status) << "\n"
        << "iterations: " << report.iterations << "\n"
        << "final residual max-norm: " << format_full(report.final_residual_norm) << "\n";
    const std::function<double(double)>& reference =
        base.reference == ErrorReference::Exact ? prob.exact : prob.alternate_exact;
    if (reference) {
        out << "linf error vs " << (base.reference == ErrorReference::Exact ? "exact" : "alternate")
            << ": " << format_full(linf_error(grid, u, reference)) << "\n";
    }
    if (cfg.out) emit_plot_data(grid, u, reference, *cfg.out + "_solution.dat");
    return report.status == SolveStatus::Converged ? 0 : 1;
}

inline int run_verify_command(const CliConfig& cfg, std::ostream& out) {
    const Problem prob = problem_by_name(cfg.problem);
    const OperatorKind kind = operator_of(cfg);
    const ExtremumStrategy strategy =
        prob.monotone_in_p ? ExtremumStrategy{EndpointStrategy{}} : ExtremumStrategy{SampledStrategy{}};

    bool all_pass = true;
    const ConsistencyReport consistency = check_consistency(kind, prob.f, prob.verify_box, 1000,
                                                            1e-12, strategy);
    all_pass = all_pass && consistency.pass;
    out << "consistency: " << (consistency.pass ? "PASS" : "FAIL")
        << " (max relative defect " << format_full(consistency.max_defect) << ", tol "
        << format_full(consistency.tol) << ")\n";

    const GMonotonicityReport monotone = check_gmonotonicity(kind, prob.f, prob.verify_box, 1000,
                                                             1e-5, 1e-8, strategy);
    all_pass = all_pass && monotone.pass;
    out << "g-monotonicity: " << (monotone.pass ? "PASS" : "FAIL")
        << " (min dF/dp1 " << format_full(monotone.min_dp1) << ", max dF/dp2 "
        << format_full(monotone.max_dp2) << ", min dF/dp3 " << format_full(monotone.min_dp3) << ")\n";

    const EllipticityReport elliptic = check_ellipticity(prob.f, prob.verify_box);
    all_pass = all_pass && elliptic.pass;
    out << "ellipticity: " << (elliptic.pass ? "PASS" : "FAIL")
        << " (max dF/dp " << format_full(elliptic.max_slope) << ", empirical gamma "
        << format_full(elliptic.gamma_hat) << ")\n";
    return all_pass ? 0 : 1;
}

} // namespace detail

/// Entry point shared by the binary and the tests. Exit codes: 0 success,
/// 1 non-convergence or failed verification, 2 usage, 3 I/O.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    try {
        if (!args.empty() && (args[0] == "--help" || args[0] == "-h" || args[0] == "help")) {
            out << usage_text();
            return 0;
        }
        const CliConfig cfg = parse_args(args);
        switch (cfg.subcommand) {
            case Subcommand::Solve: return detail::run_solve_command(cfg, out);
            case Subcommand::Study: return detail::run_study_command(cfg, out);
            case Subcommand::Verify: return detail::run_verify_command(cfg, out);
        }
        return 2;
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n" << usage_text();
        return 2;
    } catch (const IoError& e) {
        err << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 3;
    }
}

inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    std::vector<std::string> args;
    for (int k = 1; k < argc; ++k) args.emplace_back(argv[k]);
    return run(args, out, err);
}

} // namespace nlfd::cli
