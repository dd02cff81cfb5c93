#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <variant>

namespace nlfd {

/// F(p, v, x): the nonlinear differential operator with p in the
/// second-derivative slot and v in the solution-value slot.
using OperatorFn = std::function<double(double, double, double)>;

/// Thrown when an operator evaluation comes back non-finite; carries the
/// offending arguments.
class EvaluationError : public std::runtime_error {
public:
    EvaluationError(double p, double v, double x)
        : std::runtime_error("operator evaluation is not finite at (p=" + std::to_string(p) +
                             ", v=" + std::to_string(v) + ", x=" + std::to_string(x) + ")"),
          p(p), v(v), x(x) {}
    double p, v, x;
};

/// Weights of the Lax-Friedrichs-like family: the operator reads
///   F(beta1*p1 + beta2*p2 + beta3*p3, v, x) + alpha*(p1 - 2*p2 + p3).
/// alpha may be any real; negative values select the concave branch on
/// problems with two classical solutions.
struct LFWeights {
    double beta1, beta2, beta3;
    double alpha;

    LFWeights(double b1, double b2, double b3, double a)
        : beta1(b1), beta2(b2), beta3(b3), alpha(a) {
        if (!(b1 >= 0.0 && b2 >= 0.0 && b3 >= 0.0)) {
            throw std::invalid_argument("LFWeights: betas must be nonnegative");
        }
        if (std::abs(b1 + b2 + b3 - 1.0) > 1e-12) {
            throw std::invalid_argument("LFWeights: betas must sum to 1 (got " +
                                        std::to_string(b1 + b2 + b3) + ")");
        }
        if (!std::isfinite(a)) throw std::invalid_argument("LFWeights: alpha must be finite");
    }

    static LFWeights lf1(double alpha) { return {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0, alpha}; }
    static LFWeights lf2(double alpha) { return {0.0, 1.0, 0.0, alpha}; }
    static LFWeights lf3(double alpha) { return {0.25, 0.5, 0.25, alpha}; }
};

struct LaxFriedrichs {
    LFWeights weights;
};
struct GodunovExt {};
struct GodunovExtr {};

using OperatorKind = std::variant<LaxFriedrichs, GodunovExt, GodunovExtr>;

inline std::string operator_name(const OperatorKind& kind) {
    return std::visit(
        [](const auto& k) -> std::string {
            using T = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<T, LaxFriedrichs>) {
                return "lf(" + std::to_string(k.weights.beta1) + "," + std::to_string(k.weights.beta2) +
                       "," + std::to_string(k.weights.beta3) + ";alpha=" + std::to_string(k.weights.alpha) + ")";
            } else if constexpr (std::is_same_v<T, GodunovExt>) {
                return "godunov-ext";
            } else {
                return "godunov-extr";
            }
        },
        kind);
}

/// Ellipticity constant of condition 0 > -1/gamma >= dF/dp >= -gamma.
struct EllipticityBounds {
    double gamma;
    explicit EllipticityBounds(double g) : gamma(g) {
        if (!(g > 0.0) || !std::isfinite(g)) {
            throw std::invalid_argument("EllipticityBounds: gamma must be positive and finite");
        }
    }
};

/// p1 - 2*p2 + p3. Applied to three neighbouring second differences this is
/// h^2 times the centered fourth difference of U.
constexpr double numerical_moment(double p1, double p2, double p3) { return p1 - 2.0 * p2 + p3; }

template <class F>
double lf_apply(const LFWeights& w, F&& f, double p1, double p2, double p3, double v, double x) {
    const double mean = w.beta1 * p1 + w.beta2 * p2 + w.beta3 * p3;
    const double value = f(mean, v, x) + w.alpha * numerical_moment(p1, p2, p3);
    if (!std::isfinite(value)) throw EvaluationError(mean, v, x);
    return value;
}

enum class ExtremumMode { Min, Max };

/// Evaluates only the interval endpoints; valid when F is monotone in p.
struct EndpointStrategy {};
/// Equispaced scan followed by golden-section refinement of the best bracket.
struct SampledStrategy {
    int samples = 256;
};
using ExtremumStrategy = std::variant<EndpointStrategy, SampledStrategy>;

inline const char* strategy_name(const ExtremumStrategy& s) {
    return std::holds_alternative<EndpointStrategy>(s) ? "endpoints" : "sampled";
}

struct Extremum {
    double value;
    const char* strategy;
};

namespace detail {

template <class F>
double checked_eval(F&& f, double p, double v, double x) {
    const double y = f(p, v, x);
    if (!std::isfinite(y)) throw EvaluationError(p, v, x);
    return y;
}

// Golden-section search for the minimum of g on [lo, hi]; g is assumed
// unimodal near the bracket handed over by the scan. Returns the best value.
template <class G>
double golden_min(G&& g, double lo, double hi, double best_so_far) {
    constexpr double inv_phi = 0.6180339887498949;
    const double tol = 1e-12 * (1.0 + std::abs(lo) + std::abs(hi));
    double a = lo, b = hi;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = g(c), fd = g(d);
    double best = std::min({best_so_far, fc, fd});
    for (int it = 0; it < 200 && (b - a) > tol; ++it) {
        if (fc <= fd) {
            b = d; d = c; fd = fc;
            c = b - inv_phi * (b - a);
            fc = g(c);
        } else {
            a = c; c = d; fc = fd;
            d = a + inv_phi * (b - a);
            fd = g(d);
        }
        best = std::min({best, fc, fd});
    }
    return best;
}

} // namespace detail

/// Extremum of p -> F(p, v, x) over [lo, hi] under the requested strategy.
template <class F>
Extremum interval_extremum(F&& f, double v, double x, double lo, double hi, ExtremumMode mode,
                           const ExtremumStrategy& strategy = SampledStrategy{}) {
    if (!(lo <= hi)) throw std::invalid_argument("interval_extremum: requires lo <= hi");
    if (lo == hi) return {detail::checked_eval(f, lo, v, x), strategy_name(strategy)};

    if (std::holds_alternative<EndpointStrategy>(strategy)) {
        const double fl = detail::checked_eval(f, lo, v, x);
        const double fh = detail::checked_eval(f, hi, v, x);
        return {mode == ExtremumMode::Min ? std::min(fl, fh) : std::max(fl, fh), "endpoints"};
    }

    const int n = std::max(2, std::get<SampledStrategy>(strategy).samples);
    const double sign = mode == ExtremumMode::Min ? 1.0 : -1.0;
    auto g = [&](double p) { return sign * detail::checked_eval(f, p, v, x); };

    double best = g(lo);
    int best_k = 0;
    for (int k = 1; k <= n; ++k) {
        const double p = lo + (hi - lo) * (static_cast<double>(k) / n);
        const double y = g(p);
        if (y < best) { best = y; best_k = k; }
    }
    const double bl = lo + (hi - lo) * (static_cast<double>(std::max(0, best_k - 1)) / n);
    const double bh = lo + (hi - lo) * (static_cast<double>(std::min(n, best_k + 1)) / n);
    best = detail::golden_min(g, bl, bh, best);
    return {sign * best, "sampled"};
}

/// Godunov operator "ext": case-dependent extremum of F over the interval
/// spanned by the three second differences.
template <class F>
double godunov_ext(F&& f, double p1, double p2, double p3, double v, double x,
                   const ExtremumStrategy& strategy = SampledStrategy{}) {
    const double lo = std::min({p1, p2, p3});
    const double hi = std::max({p1, p2, p3});
    if (p2 >= std::max(p1, p3)) {
        return interval_extremum(f, v, x, lo, hi, ExtremumMode::Min, strategy).value;
    }
    if (p2 <= std::min(p1, p3)) {
        return interval_extremum(f, v, x, lo, hi, ExtremumMode::Max, strategy).value;
    }
    if (p1 < p2 && p2 < p3) {
        return interval_extremum(f, v, x, p1, p2, ExtremumMode::Min, strategy).value;
    }
    // remaining ordering: p3 < p2 < p1
    return interval_extremum(f, v, x, p3, p2, ExtremumMode::Min, strategy).value;
}

/// Godunov operator "extr": same first two cases as ext, maxima between p2
/// and the larger neighbour otherwise.
template <class F>
double godunov_extr(F&& f, double p1, double p2, double p3, double v, double x,
                    const ExtremumStrategy& strategy = SampledStrategy{}) {
    const double lo = std::min({p1, p2, p3});
    const double hi = std::max({p1, p2, p3});
    if (p2 >= std::max(p1, p3)) {
        return interval_extremum(f, v, x, lo, hi, ExtremumMode::Min, strategy).value;
    }
    if (p2 <= std::min(p1, p3)) {
        return interval_extremum(f, v, x, lo, hi, ExtremumMode::Max, strategy).value;
    }
    if (p1 < p2 && p2 < p3) {
        return interval_extremum(f, v, x, p2, p3, ExtremumMode::Max, strategy).value;
    }
    return interval_extremum(f, v, x, p2, p1, ExtremumMode::Max, strategy).value;
}

/// Applies whichever numerical operator `kind` selects.
template <class F>
double apply_numerical_operator(const OperatorKind& kind, F&& f, double p1, double p2, double p3,
                                double v, double x,
                                const ExtremumStrategy& strategy = SampledStrategy{}) {
    return std::visit(
        [&](const auto& k) -> double {
            using T = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<T, LaxFriedrichs>) {
                return lf_apply(k.weights, f, p1, p2, p3, v, x);
            } else if constexpr (std::is_same_v<T, GodunovExt>) {
                return godunov_ext(f, p1, p2, p3, v, x, strategy);
            } else {
                return godunov_extr(f, p1, p2, p3, v, x, strategy);
            }
        },
        kind);
}

} // namespace nlfd
