#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "nlfd/grid.hpp"
#include "nlfd/linalg.hpp"
#include "nlfd/operators.hpp"
#include "nlfd/problems.hpp"

namespace nlfd {

/// How the second differences at the first and last node (which would need
/// the ghost values U_{-1}, U_J) are closed.
enum class GhostPolicy {
    /// End delta2 copies the adjacent interior value: never manufactures
    /// curvature and keeps the g-monotone structure intact.
    SecondDiffConstant,
    /// Ghost value extrapolates linearly (U_{-1} := 2 U_0 - U_1), so the end
    /// delta2 vanishes.
    LinearValueExtrapolation,
};

inline const char* ghost_policy_name(GhostPolicy policy) {
    return policy == GhostPolicy::SecondDiffConstant ? "second-diff-constant" : "linear-extrapolation";
}

struct SchemeConfig {
    OperatorKind kind = LaxFriedrichs{LFWeights::lf1(1.5)};
    GhostPolicy ghost = GhostPolicy::SecondDiffConstant;
};

namespace detail {

/// delta2 of U at any node; the two end values follow the ghost policy.
inline double d2_at(const Grid& grid, const GridFunction& u, int i, GhostPolicy ghost) {
    const double h2 = grid.spacing() * grid.spacing();
    const int last = grid.num_points() - 1;
    if (i == 0) {
        if (ghost == GhostPolicy::SecondDiffConstant) return (u[2] - 2.0 * u[1] + u[0]) / h2;
        const double ghost_value = 2.0 * u[0] - u[1];
        return (ghost_value - 2.0 * u[0] + u[1]) / h2;
    }
    if (i == last) {
        const std::size_t j = static_cast<std::size_t>(last);
        if (ghost == GhostPolicy::SecondDiffConstant) return (u[j] - 2.0 * u[j - 1] + u[j - 2]) / h2;
        const double ghost_value = 2.0 * u[j] - u[j - 1];
        return (ghost_value - 2.0 * u[j] + u[j - 1]) / h2;
    }
    const std::size_t j = static_cast<std::size_t>(i);
    return (u[j + 1] - 2.0 * u[j] + u[j - 1]) / h2;
}

} // namespace detail

/// delta2 of U at every node, end values per the ghost policy.
inline std::vector<double> ghost_second_differences(const Grid& grid, const GridFunction& u,
                                                    GhostPolicy ghost) {
    detail::require_matching(grid, u, "ghost_second_differences");
    std::vector<double> d(u.size());
    for (int i = 0; i < grid.num_points(); ++i) {
        d[static_cast<std::size_t>(i)] = detail::d2_at(grid, u, i, ghost);
    }
    return d;
}

/// The discrete problem: interior unknowns U_1 .. U_{J-2}; U_0 and U_{J-1}
/// stay pinned to the boundary data.
class DiscreteSystem {
public:
    DiscreteSystem(Grid grid, Problem problem, SchemeConfig config)
        : grid_(grid), problem_(std::move(problem)), config_(std::move(config)) {
        validate(problem_);
        if (problem_.monotone_in_p) {
            strategy_ = EndpointStrategy{};
        } else {
            strategy_ = SampledStrategy{};
        }
    }

    const Grid& grid() const { return grid_; }
    const Problem& problem() const { return problem_; }
    const SchemeConfig& config() const { return config_; }
    const ExtremumStrategy& extremum_strategy() const { return strategy_; }
    int num_unknowns() const { return grid_.num_interior(); }

    /// Returns U with the boundary entries overwritten by the boundary data.
    GridFunction pin_boundary(GridFunction u) const {
        detail::require_matching(grid_, u, "pin_boundary");
        u.front() = problem_.u_a;
        u.back() = problem_.u_b;
        return u;
    }

    std::string config_echo() const {
        return "problem=" + problem_.name + " operator=" + operator_name(config_.kind) +
               " ghost=" + ghost_policy_name(config_.ghost) +
               " extremum=" + strategy_name(strategy_);
    }

private:
    Grid grid_;
    Problem problem_;
    SchemeConfig config_;
    ExtremumStrategy strategy_;
};

/// One residual component (0-based unknown index r, grid node r+1). A
/// non-finite operator evaluation escapes as EvaluationError carrying
/// (p, v, x); x places the failure at its grid node.
inline double residual_entry(const DiscreteSystem& sys, const GridFunction& u, int r) {
    const Grid& grid = sys.grid();
    const int j = r + 1;
    const GhostPolicy ghost = sys.config().ghost;
    const double p1 = detail::d2_at(grid, u, j - 1, ghost);
    const double p2 = detail::d2_at(grid, u, j, ghost);
    const double p3 = detail::d2_at(grid, u, j + 1, ghost);
    return apply_numerical_operator(sys.config().kind, sys.problem().f, p1, p2, p3,
                                    u[static_cast<std::size_t>(j)], grid.node(j),
                                    sys.extremum_strategy());
}

/// Residual of the scheme over the interior nodes; component r corresponds to
/// node r+1. U must carry the boundary data in its end entries.
inline std::vector<double> residual(const DiscreteSystem& sys, const GridFunction& u) {
    detail::require_matching(sys.grid(), u, "residual");
    std::vector<double> r(static_cast<std::size_t>(sys.num_unknowns()));
    for (int k = 0; k < sys.num_unknowns(); ++k) r[static_cast<std::size_t>(k)] = residual_entry(sys, u, k);
    return r;
}

/// Central finite-difference Jacobian of the residual with respect to the
/// interior unknowns. Each residual component touches U only through the
/// three neighbouring second differences, so the band is pentadiagonal;
/// entries outside bandwidth 2 are structurally zero and never formed.
inline BandedMatrix jacobian_fd(const DiscreteSystem& sys, const GridFunction& u,
                                double fd_step_scale = 1e-6) {
    detail::require_matching(sys.grid(), u, "jacobian_fd");
    const int n = sys.num_unknowns();
    BandedMatrix jac(n, 2, 2);
    GridFunction work = u;
    for (int c = 0; c < n; ++c) {
        const std::size_t j = static_cast<std::size_t>(c + 1);
        const double base = u[j];
        const double e = fd_step_scale * (1.0 + std::abs(base));
        const int rlo = std::max(0, c - 2), rhi = std::min(n - 1, c + 2);
        for (int r = rlo; r <= rhi; ++r) {
            work[j] = base + e;
            const double up = residual_entry(sys, work, r);
            work[j] = base - e;
            const double dn = residual_entry(sys, work, r);
            if (!std::isfinite(up) || !std::isfinite(dn)) {
                throw EvaluationError(detail::d2_at(sys.grid(), work, r + 1, sys.config().ghost),
                                      work[static_cast<std::size_t>(r + 1)], sys.grid().node(r + 1));
            }
            jac.at(r, c) = (up - dn) / (2.0 * e);
        }
        work[j] = base;
    }
    return jac;
}

} // namespace nlfd
