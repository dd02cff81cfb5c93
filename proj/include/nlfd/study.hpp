#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "nlfd/assembly.hpp"
#include "nlfd/grid.hpp"
#include "nlfd/problems.hpp"
#include "nlfd/solvers.hpp"

namespace nlfd {

class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

/// U^(0) = the line through the boundary data.
struct LinearInterpolant {};
/// Solve once on a coarser grid with the given scheme, then interpolate.
struct CoarseSolveInterpolate {
    double coarse_h;
    SchemeConfig config;
};
/// Sample an arbitrary function at the nodes.
struct CustomFunction {
    std::function<double(double)> fn;
};
using InitialGuess = std::variant<LinearInterpolant, CoarseSolveInterpolate, CustomFunction>;

enum class ErrorReference { Exact, AlternateExact };
enum class SolverChoice { Newton, MRho };

struct StudyConfig {
    Problem problem;
    SchemeConfig scheme;
    SolverChoice solver = SolverChoice::Newton;
    NewtonOptions newton;
    FixedPointOptions fixed_point;
    std::optional<double> gamma;  ///< for the fixed-point solver
    std::vector<double> h_values; ///< strictly decreasing
    InitialGuess guess = LinearInterpolant{};
    ErrorReference reference = ErrorReference::Exact;
};

struct ConvergenceRow {
    double h = 0.0;
    double linf_error = std::numeric_limits<double>::quiet_NaN();
    std::optional<double> order;
    SolveStatus status = SolveStatus::MaxIters;
    int iterations = 0;
};

/// Thrown (and caught by run_study) when a coarse bootstrap solve fails.
class CoarseSolveFailure : public std::runtime_error {
public:
    explicit CoarseSolveFailure(SolveStatus status)
        : std::runtime_error(std::string("coarse solve did not converge: ") + to_string(status)),
          status(status) {}
    SolveStatus status;
};

namespace detail {

inline int points_for_spacing(double a, double b, double h) {
    const double intervals = (b - a) / h;
    const int n = static_cast<int>(std::lround(intervals));
    if (n < 1 || std::abs(intervals - n) > 1e-8 * std::max(1.0, std::abs(intervals))) {
        throw std::invalid_argument("spacing " + std::to_string(h) + " does not subdivide [" +
                                    std::to_string(a) + ", " + std::to_string(b) + "] evenly");
    }
    return n + 1;
}

/// Piecewise-linear interpolation with shared nodes snapped exactly.
inline GridFunction interpolate_linear(const Grid& coarse, const GridFunction& values,
                                       const Grid& fine) {
    GridFunction out(static_cast<std::size_t>(fine.num_points()));
    for (int i = 0; i < fine.num_points(); ++i) {
        const double r = (fine.node(i) - coarse.left()) / coarse.spacing();
        const double nearest = std::round(r);
        if (std::abs(r - nearest) < 1e-9 && nearest >= 0 && nearest < coarse.num_points()) {
            out[static_cast<std::size_t>(i)] = values[static_cast<std::size_t>(nearest)];
            continue;
        }
        int cell = static_cast<int>(std::floor(r));
        cell = std::max(0, std::min(coarse.num_points() - 2, cell));
        const double t = r - cell;
        out[static_cast<std::size_t>(i)] = (1.0 - t) * values[static_cast<std::size_t>(cell)] +
                                           t * values[static_cast<std::size_t>(cell + 1)];
    }
    return out;
}

} // namespace detail

/// Materialize an initial guess on `grid`. A coarse bootstrap that fails to
/// converge throws CoarseSolveFailure.
inline GridFunction build_initial_guess(const InitialGuess& guess, const Grid& grid,
                                        const Problem& prob,
                                        const NewtonOptions& coarse_opts = {}) {
    return std::visit(
        [&](const auto& g) -> GridFunction {
            using T = std::decay_t<decltype(g)>;
            if constexpr (std::is_same_v<T, LinearInterpolant>) {
                GridFunction u(static_cast<std::size_t>(grid.num_points()));
                const double slope = (prob.u_b - prob.u_a) / (prob.b - prob.a);
                for (int i = 0; i < grid.num_points(); ++i) {
                    u[static_cast<std::size_t>(i)] = prob.u_a + slope * (grid.node(i) - prob.a);
                }
                return u;
            } else if constexpr (std::is_same_v<T, CoarseSolveInterpolate>) {
                if (g.coarse_h < grid.spacing()) {
                    throw std::invalid_argument("build_initial_guess: coarse spacing must not be "
                                                "finer than the target grid");
                }
                const Grid coarse(prob.a, prob.b,
                                  detail::points_for_spacing(prob.a, prob.b, g.coarse_h));
                DiscreteSystem coarse_sys(coarse, prob, g.config);
                auto [coarse_u, report] =
                    newton_solve(coarse_sys, build_initial_guess(LinearInterpolant{}, coarse, prob),
                                 coarse_opts);
                if (report.status != SolveStatus::Converged) throw CoarseSolveFailure(report.status);
                return detail::interpolate_linear(coarse, coarse_u, grid);
            } else {
                return sample_on_grid(grid, g.fn);
            }
        },
        guess);
}

/// log(e_coarse/e_fine) / log(h_coarse/h_fine); empty when either error is
/// not a positive finite number.
inline std::optional<double> observed_order(double e_coarse, double e_fine, double h_coarse,
                                            double h_fine) {
    if (!(h_coarse > h_fine) || !(h_fine > 0.0)) {
        throw std::invalid_argument("observed_order: requires h_coarse > h_fine > 0");
    }
    if (!(e_coarse > 0.0) || !(e_fine > 0.0) || !std::isfinite(e_coarse) || !std::isfinite(e_fine)) {
        return std::nullopt;
    }
    return std::log(e_coarse / e_fine) / std::log(h_coarse / h_fine);
}

/// One mesh-refinement sweep. Rows of failed solves are retained with their
/// status; a failed coarse bootstrap aborts only its own row.
inline std::vector<ConvergenceRow> run_study(const StudyConfig& cfg) {
    if (cfg.h_values.empty()) throw std::invalid_argument("run_study: empty h list");
    for (std::size_t k = 1; k < cfg.h_values.size(); ++k) {
        if (!(cfg.h_values[k] < cfg.h_values[k - 1])) {
            throw std::invalid_argument("run_study: h list must be strictly decreasing");
        }
    }
    const std::function<double(double)>& reference =
        cfg.reference == ErrorReference::Exact ? cfg.problem.exact : cfg.problem.alternate_exact;
    if (!reference) {
        throw std::invalid_argument("run_study: problem '" + cfg.problem.name +
                                    "' does not provide the requested error reference");
    }

    std::vector<ConvergenceRow> rows;
    std::optional<std::pair<double, double>> previous;  // (h, error) of last usable row
    for (double h : cfg.h_values) {
        ConvergenceRow row;
        row.h = h;
        const Grid grid(cfg.problem.a, cfg.problem.b,
                        detail::points_for_spacing(cfg.problem.a, cfg.problem.b, h));
        DiscreteSystem sys(grid, cfg.problem, cfg.scheme);
        try {
            const GridFunction u0 = build_initial_guess(cfg.guess, grid, cfg.problem, cfg.newton);
            auto [u, report] = cfg.solver == SolverChoice::Newton
                                   ? newton_solve(sys, u0, cfg.newton)
                                   : mrho_solve(sys, u0, cfg.fixed_point, cfg.gamma);
            row.status = report.status;
            row.iterations = report.iterations;
            row.linf_error = linf_error(grid, u, reference);
        } catch (const CoarseSolveFailure& failure) {
            row.status = failure.status;
            row.iterations = 0;
            row.linf_error = std::numeric_limits<double>::quiet_NaN();
        }
        if (previous) row.order = observed_order(previous->second, row.linf_error, previous->first, h);
        if (std::isfinite(row.linf_error)) previous = {h, row.linf_error};
        rows.push_back(std::move(row));
    }
    return rows;
}

inline std::string format_full(double value) {
    char buffer[64];
    std::snprintf(buffer, sizeof buffer, "%.17g", value);
    return buffer;
}

/// CSV with header "h,linf_error,order,status,iterations"; numbers carry 17
/// significant digits, a missing order is an empty field.
inline std::string render_csv(const std::vector<ConvergenceRow>& rows) {
    std::string text = "h,linf_error,order,status,iterations\n";
    for (const ConvergenceRow& row : rows) {
        text += format_full(row.h);
        text += ',';
        text += format_full(row.linf_error);
        text += ',';
        if (row.order) text += format_full(*row.order);
        text += ',';
        text += to_string(row.status);
        text += ',';
        text += std::to_string(row.iterations);
        text += '\n';
    }
    return text;
}

inline void emit_csv(const std::vector<ConvergenceRow>& rows, const std::string& path) {
    if (rows.empty()) throw std::invalid_argument("emit_csv: no rows");
    std::ofstream out(path);
    if (!out) throw IoError("emit_csv: cannot open '" + path + "' for writing");
    out << render_csv(rows);
    if (!out.flush()) throw IoError("emit_csv: write to '" + path + "' failed");
}

/// Parses what emit_csv produced (used by the round-trip checks and the
/// occasional downstream script).
inline std::vector<ConvergenceRow> parse_csv(std::istream& in) {
    std::vector<ConvergenceRow> rows;
    std::string line;
    if (!std::getline(in, line) || line != "h,linf_error,order,status,iterations") {
        throw IoError("parse_csv: missing or unexpected header");
    }
    auto status_of = [](const std::string& name) {
        for (SolveStatus s : {SolveStatus::Converged, SolveStatus::MaxIters, SolveStatus::LineSearchFailed,
                              SolveStatus::SingularLinearSolve, SolveStatus::NonFiniteResidual}) {
            if (name == to_string(s)) return s;
        }
        throw IoError("parse_csv: unknown status '" + name + "'");
    };
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> fields;
        std::size_t start = 0;
        for (std::size_t k = 0; k <= line.size(); ++k) {
            if (k == line.size() || line[k] == ',') {
                fields.push_back(line.substr(start, k - start));
                start = k + 1;
            }
        }
        if (fields.size() != 5) throw IoError("parse_csv: malformed row '" + line + "'");
        ConvergenceRow row;
        row.h = std::stod(fields[0]);
        row.linf_error = std::stod(fields[1]);
        if (!fields[2].empty()) row.order = std::stod(fields[2]);
        row.status = status_of(fields[3]);
        row.iterations = std::stoi(fields[4]);
        rows.push_back(row);
    }
    return rows;
}

/// Fixed-width text table in the shape of the paper's convergence tables.
inline std::string render_table(const std::vector<ConvergenceRow>& rows) {
    std::string text = "         h    linf error   order  iters  status\n";
    for (const ConvergenceRow& row : rows) {
        char buffer[128];
        char order_text[16] = "     --";
        if (row.order) std::snprintf(order_text, sizeof order_text, "%7.2f", *row.order);
        std::snprintf(buffer, sizeof buffer, "%10.4e    %10.3e %s  %5d  %s\n", row.h, row.linf_error,
                      order_text, row.iterations, to_string(row.status));
        text += buffer;
    }
    return text;
}

/// Two-column (x, value) series: the computed solution, then (blank-line
/// separated) the reference sampled at the same nodes.
inline void emit_plot_data(const Grid& grid, const GridFunction& u,
                           const std::function<double(double)>& reference, const std::string& path) {
    detail::require_matching(grid, u, "emit_plot_data");
    std::ofstream out(path);
    if (!out) throw IoError("emit_plot_data: cannot open '" + path + "' for writing");
    out << "# x computed\n";
    for (int i = 0; i < grid.num_points(); ++i) {
        out << format_full(grid.node(i)) << ' ' << format_full(u[static_cast<std::size_t>(i)]) << '\n';
    }
    if (reference) {
        out << "\n# x reference\n";
        for (int i = 0; i < grid.num_points(); ++i) {
            out << format_full(grid.node(i)) << ' ' << format_full(reference(grid.node(i))) << '\n';
        }
    }
    if (!out.flush()) throw IoError("emit_plot_data: write to '" + path + "' failed");
}

} // namespace nlfd
