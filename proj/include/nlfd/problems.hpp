#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "nlfd/operators.hpp"
#include "nlfd/properties.hpp"

namespace nlfd {

/// A two-point boundary value problem F(u_xx, u, x) = 0 on (a, b) with
/// Dirichlet data, optional exact solution(s), and the metadata the scheme
/// and verifiers need.
struct Problem {
    std::string name;
    double a = 0.0, b = 1.0;
    OperatorFn f;       ///< F(p, v, x)
    double u_a = 0.0, u_b = 0.0;
    std::function<double(double)> exact;            ///< empty when unknown
    std::function<double(double)> alternate_exact;  ///< second classical solution, if any
    std::optional<EllipticityBounds> gamma_hint;
    /// True when p -> F(p, v, x) is nonincreasing everywhere the solver can
    /// roam; enables the endpoint extremum strategy for Godunov operators.
    bool monotone_in_p = false;
    /// Box the property suites and gamma estimation sample over.
    SampleBox verify_box{{-1.0, 1.0}, {-1.0, 1.0}, {0.0, 1.0}};
};

/// Checks the boundary data against the declared exact solutions.
inline void validate(const Problem& prob) {
    if (!(prob.a < prob.b)) throw std::invalid_argument(prob.name + ": domain endpoints out of order");
    if (!prob.f) throw std::invalid_argument(prob.name + ": missing operator");
    if (prob.exact) {
        if (std::abs(prob.exact(prob.a) - prob.u_a) > 1e-12 ||
            std::abs(prob.exact(prob.b) - prob.u_b) > 1e-12) {
            throw std::invalid_argument(prob.name + ": exact solution disagrees with boundary data");
        }
    }
    if (prob.alternate_exact) {
        if (std::abs(prob.alternate_exact(prob.a) - prob.u_a) > 1e-12 ||
            std::abs(prob.alternate_exact(prob.b) - prob.u_b) > 1e-12) {
            throw std::invalid_argument(prob.name + ": alternate solution disagrees with boundary data");
        }
    }
}

struct BellmanMin {
    double value;
    int argmin;  ///< index of the first coefficient attaining the minimum
};

/// min over the finite control set of (-A_theta * p - source); ties break to
/// the smallest index.
inline BellmanMin bellman_min_finite(std::span<const double> coeffs, double p, double source) {
    if (coeffs.empty()) throw std::invalid_argument("bellman_min_finite: empty coefficient list");
    BellmanMin best{-coeffs[0] * p - source, 0};
    for (std::size_t k = 1; k < coeffs.size(); ++k) {
        const double val = -coeffs[k] * p - source;
        if (val < best.value) best = {val, static_cast<int>(k)};
    }
    return best;
}

/// -u_xx^3 + x^3 = 0 on (-1, 1); exact u = x^3/6.
inline Problem example1() {
    Problem prob;
    prob.name = "example1";
    prob.a = -1.0;
    prob.b = 1.0;
    prob.f = [](double p, double, double x) { return -p * p * p + x * x * x; };
    prob.u_a = -1.0 / 6.0;
    prob.u_b = 1.0 / 6.0;
    prob.exact = [](double x) { return x * x * x / 6.0; };
    prob.monotone_in_p = true;
    prob.verify_box = {{-1.1, 1.1}, {-0.5, 0.5}, {-1.0, 1.0}};
    validate(prob);
    return prob;
}

/// 1-D Monge-Ampere: -u_xx^2 + 1 = 0 on (0, 1). Two classical solutions:
/// the convex viscosity solution u+ = x^2/2 and the concave u- = -x^2/2 + x.
inline Problem example2() {
    Problem prob;
    prob.name = "example2";
    prob.a = 0.0;
    prob.b = 1.0;
    prob.f = [](double p, double, double) { return -p * p + 1.0; };
    prob.u_a = 0.0;
    prob.u_b = 0.5;
    prob.exact = [](double x) { return 0.5 * x * x; };
    prob.alternate_exact = [](double x) { return -0.5 * x * x + x; };
    prob.monotone_in_p = false;  // dF/dp = -2p changes sign
    prob.verify_box = {{0.5, 1.5}, {0.0, 0.5}, {0.0, 1.0}};  // convex branch
    validate(prob);
    return prob;
}

/// Bellman problem with the two-element control set {1, 2}:
/// min(-u_xx, -2 u_xx) - S(x) = 0 on (-1, 1); exact u = x|x|^3.
inline Problem example3() {
    Problem prob;
    prob.name = "example3";
    prob.a = -1.0;
    prob.b = 1.0;
    prob.f = [](double p, double, double x) {
        static constexpr double coeffs[] = {1.0, 2.0};
        const double source = x < 0.0 ? 12.0 * x * x : -24.0 * x * x;
        return bellman_min_finite(coeffs, p, source).value;
    };
    prob.u_a = -1.0;
    prob.u_b = 1.0;
    prob.exact = [](double x) { return x * std::abs(x) * x * x; };
    prob.gamma_hint = EllipticityBounds{2.0};  // dF/dp in {-1, -2}
    prob.monotone_in_p = true;
    prob.verify_box = {{-12.0, 12.0}, {-1.5, 1.5}, {-1.0, 1.0}};
    validate(prob);
    return prob;
}

/// Bellman problem with control theta in [-1, 1]:
/// inf_theta(-theta u_xx + theta^2 u + x^-2) = 0 on (2, 4); exact u = x^2.
/// The infimum of the quadratic in theta is taken in closed form.
inline Problem example4() {
    Problem prob;
    prob.name = "example4";
    prob.a = 2.0;
    prob.b = 4.0;
    prob.f = [](double p, double v, double x) {
        const double forcing = 1.0 / (x * x);
        if (v > 0.0) {
            const double theta = std::clamp(p / (2.0 * v), -1.0, 1.0);
            return -theta * p + theta * theta * v + forcing;
        }
        if (v == 0.0) return -std::abs(p) + forcing;
        return v - std::abs(p) + forcing;  // concave in theta: endpoint minimum
    };
    prob.u_a = 4.0;
    prob.u_b = 16.0;
    prob.exact = [](double x) { return x * x; };
    prob.monotone_in_p = false;  // dF/dp = -theta* changes sign with p
    prob.verify_box = {{1.0, 3.0}, {3.0, 17.0}, {2.0, 4.0}};
    validate(prob);
    return prob;
}

/// -u_xx^3 + 8 sign(x) = 0 on (-1, 1) with sign(0) = 0; exact u = x|x|,
/// which is C^1 but not C^2.
inline Problem example5() {
    Problem prob;
    prob.name = "example5";
    prob.a = -1.0;
    prob.b = 1.0;
    prob.f = [](double p, double, double x) {
        const double sgn = x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0);
        return -p * p * p + 8.0 * sgn;
    };
    prob.u_a = -1.0;
    prob.u_b = 1.0;
    prob.exact = [](double x) { return x * std::abs(x); };
    prob.monotone_in_p = true;
    prob.verify_box = {{-2.2, 2.2}, {-1.2, 1.2}, {-1.0, 1.0}};
    validate(prob);
    return prob;
}

inline std::vector<std::string> problem_names() {
    return {"example1", "example2", "example3", "example4", "example5"};
}

inline Problem problem_by_name(std::string_view name) {
    if (name == "example1") return example1();
    if (name == "example2") return example2();
    if (name == "example3") return example3();
    if (name == "example4") return example4();
    if (name == "example5") return example5();
    throw std::invalid_argument("unknown problem '" + std::string(name) +
                                "'; expected one of example1..example5");
}

} // namespace nlfd
