#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace nlfd {

/// Uniform mesh of [a, b]. Nodes are x_i = a + i*h for i = 0 .. num_points-1,
/// generated from the spacing stored at construction (no accumulated sums, so
/// node positions are reproducible across refinement levels).
class Grid {
public:
    Grid(double a, double b, int num_points) : a_(a), b_(b), n_(num_points) {
        if (!std::isfinite(a) || !std::isfinite(b) || !(a < b)) {
            throw std::invalid_argument("Grid: endpoints must be finite with a < b (got a=" +
                                        std::to_string(a) + ", b=" + std::to_string(b) + ")");
        }
        if (num_points < 4) {
            throw std::invalid_argument("Grid: need at least 4 points so an interior equation "
                                        "exists away from both boundaries (got " +
                                        std::to_string(num_points) + ")");
        }
        h_ = (b_ - a_) / (n_ - 1);
    }

    double left() const { return a_; }
    double right() const { return b_; }
    double spacing() const { return h_; }
    int num_points() const { return n_; }
    int num_interior() const { return n_ - 2; }

    double node(int i) const {
        if (i < 0 || i >= n_) {
            throw std::out_of_range("Grid::node: index " + std::to_string(i) + " outside 0.." +
                                    std::to_string(n_ - 1));
        }
        return i == n_ - 1 ? b_ : a_ + i * h_;
    }

private:
    double a_;
    double b_;
    int n_;
    double h_;
};

/// Nodal values aligned with a Grid; the discrete unknown and its candidates.
using GridFunction = std::vector<double>;

namespace detail {

inline void require_matching(const Grid& grid, const GridFunction& v, const char* who) {
    if (static_cast<int>(v.size()) != grid.num_points()) {
        throw std::invalid_argument(std::string(who) + ": grid function has " +
                                    std::to_string(v.size()) + " values, grid has " +
                                    std::to_string(grid.num_points()) + " points");
    }
}

} // namespace detail

template <class Fn>
GridFunction sample_on_grid(const Grid& grid, Fn&& f) {
    GridFunction v(static_cast<std::size_t>(grid.num_points()));
    for (int i = 0; i < grid.num_points(); ++i) v[static_cast<std::size_t>(i)] = f(grid.node(i));
    return v;
}

/// (V_{i+1} - 2 V_i + V_{i-1}) / h^2 at an interior node, 1 <= i <= num_points-2.
inline double second_difference(const Grid& grid, const GridFunction& v, int i) {
    detail::require_matching(grid, v, "second_difference");
    if (i < 1 || i > grid.num_points() - 2) {
        throw std::out_of_range("second_difference: index " + std::to_string(i) +
                                " outside interior range 1.." + std::to_string(grid.num_points() - 2));
    }
    const double h = grid.spacing();
    const std::size_t k = static_cast<std::size_t>(i);
    return (v[k + 1] - 2.0 * v[k] + v[k - 1]) / (h * h);
}

/// (V_{i+1} - V_i) / h, 0 <= i <= num_points-2.
inline double forward_difference(const Grid& grid, const GridFunction& v, int i) {
    detail::require_matching(grid, v, "forward_difference");
    if (i < 0 || i > grid.num_points() - 2) {
        throw std::out_of_range("forward_difference: index " + std::to_string(i) +
                                " outside 0.." + std::to_string(grid.num_points() - 2));
    }
    const std::size_t k = static_cast<std::size_t>(i);
    return (v[k + 1] - v[k]) / grid.spacing();
}

/// (V_i - V_{i-1}) / h, 1 <= i <= num_points-1.
inline double backward_difference(const Grid& grid, const GridFunction& v, int i) {
    detail::require_matching(grid, v, "backward_difference");
    if (i < 1 || i > grid.num_points() - 1) {
        throw std::out_of_range("backward_difference: index " + std::to_string(i) +
                                " outside 1.." + std::to_string(grid.num_points() - 1));
    }
    const std::size_t k = static_cast<std::size_t>(i);
    return (v[k] - v[k - 1]) / grid.spacing();
}

/// max_i |U_i - exact(x_i)|; the nodal norm used by every convergence table.
template <class Fn>
double linf_error(const Grid& grid, const GridFunction& u, Fn&& exact) {
    detail::require_matching(grid, u, "linf_error");
    double worst = 0.0;
    for (int i = 0; i < grid.num_points(); ++i) {
        worst = std::max(worst, std::abs(u[static_cast<std::size_t>(i)] - exact(grid.node(i))));
    }
    return worst;
}

/// Piecewise-constant extension: u_h(x) = U_i on the right-closed cell
/// (x_i - h/2, x_i + h/2]. The left endpoint a, outside every half-open cell,
/// maps to U_0 so that [a, b] is fully covered.
inline double piecewise_constant_eval(const Grid& grid, const GridFunction& u, double x) {
    detail::require_matching(grid, u, "piecewise_constant_eval");
    if (!(x >= grid.left() && x <= grid.right())) {
        throw std::domain_error("piecewise_constant_eval: x=" + std::to_string(x) +
                                " outside [" + std::to_string(grid.left()) + ", " +
                                std::to_string(grid.right()) + "]");
    }
    const double r = (x - grid.left()) / grid.spacing();
    int i = static_cast<int>(std::ceil(r - 0.5));
    i = std::max(0, std::min(grid.num_points() - 1, i));
    return u[static_cast<std::size_t>(i)];
}

} // namespace nlfd
