#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>

#include "nlfd/operators.hpp"

namespace nlfd {

struct Interval {
    double lo, hi;
    Interval(double l, double h) : lo(l), hi(h) {
        if (!std::isfinite(l) || !std::isfinite(h) || !(l <= h)) {
            throw std::invalid_argument("Interval: requires finite lo <= hi");
        }
    }
};

/// Sampling box over (p, v, x) for the property verifiers.
struct SampleBox {
    Interval p, v, x;
};

namespace detail {

// mt19937_64 output mapped to [lo, hi) by hand so samples are identical
// across standard libraries.
inline double uniform(std::mt19937_64& rng, double lo, double hi) {
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    return lo + (hi - lo) * u;
}

constexpr std::uint64_t kDefaultSeed = 0x9e3779b97f4a7c15ull;

} // namespace detail

struct PropertySample {
    double p1 = 0, p2 = 0, p3 = 0, v = 0, x = 0;
};

struct ConsistencyReport {
    bool pass = true;
    double max_defect = 0.0;       ///< worst |F_hat(p,p,p,v,x) - F(p,v,x)| / (1 + |F|)
    double max_abs_defect = 0.0;
    PropertySample worst;
    int samples = 0;
    double tol = 0.0;
};

/// Diagonal consistency: F_hat(p,p,p,v,x) must reduce to F(p,v,x).
inline ConsistencyReport check_consistency(const OperatorKind& kind, const OperatorFn& f,
                                           const SampleBox& box, int n_samples = 1000,
                                           double tol = 1e-12,
                                           const ExtremumStrategy& strategy = SampledStrategy{},
                                           std::uint64_t seed = detail::kDefaultSeed) {
    ConsistencyReport report;
    report.samples = n_samples;
    report.tol = tol;
    std::mt19937_64 rng(seed);
    for (int s = 0; s < n_samples; ++s) {
        const double p = detail::uniform(rng, box.p.lo, box.p.hi);
        const double v = detail::uniform(rng, box.v.lo, box.v.hi);
        const double x = detail::uniform(rng, box.x.lo, box.x.hi);
        const double direct = f(p, v, x);
        const double via_op = apply_numerical_operator(kind, f, p, p, p, v, x, strategy);
        const double abs_defect = std::abs(via_op - direct);
        const double defect = abs_defect / (1.0 + std::abs(direct));
        if (defect > report.max_defect) {
            report.max_defect = defect;
            report.max_abs_defect = abs_defect;
            report.worst = {p, p, p, v, x};
        }
    }
    report.pass = report.max_defect <= tol;
    return report;
}

struct SlopeProbe {
    double slope = 0.0;
    PropertySample at;
};

struct GMonotonicityReport {
    bool pass = true;
    /// Worst finite-difference slopes over all samples; the scheme needs
    /// dp1 >= 0, dp2 <= 0, dp3 >= 0 up to tolerance.
    double min_dp1 = 0.0, max_dp2 = 0.0, min_dp3 = 0.0;
    SlopeProbe worst_p1, worst_p2, worst_p3;
    bool p1_ok = true, p2_ok = true, p3_ok = true;
    int samples = 0;
    double fd_step_scale = 0.0;
    double tol = 0.0;
};

/// Central finite-difference probes of dF_hat/dp_k over the box; the sign
/// pattern (up, down, up) is checked non-strictly with a tolerance scaled by
/// the local slope magnitude.
inline GMonotonicityReport check_gmonotonicity(const OperatorKind& kind, const OperatorFn& f,
                                               const SampleBox& box, int n_samples = 1000,
                                               double fd_step_scale = 1e-5, double tol = 1e-8,
                                               const ExtremumStrategy& strategy = SampledStrategy{},
                                               std::uint64_t seed = detail::kDefaultSeed) {
    GMonotonicityReport report;
    report.samples = n_samples;
    report.fd_step_scale = fd_step_scale;
    report.tol = tol;

    bool first = true;
    std::mt19937_64 rng(seed);
    for (int s = 0; s < n_samples; ++s) {
        PropertySample q;
        q.p1 = detail::uniform(rng, box.p.lo, box.p.hi);
        q.p2 = detail::uniform(rng, box.p.lo, box.p.hi);
        q.p3 = detail::uniform(rng, box.p.lo, box.p.hi);
        q.v = detail::uniform(rng, box.v.lo, box.v.hi);
        q.x = detail::uniform(rng, box.x.lo, box.x.hi);

        auto slope = [&](int arm) {
            double p[3] = {q.p1, q.p2, q.p3};
            const double e = fd_step_scale * (1.0 + std::abs(p[arm]));
            p[arm] += e;
            const double up = apply_numerical_operator(kind, f, p[0], p[1], p[2], q.v, q.x, strategy);
            p[arm] -= 2.0 * e;
            const double dn = apply_numerical_operator(kind, f, p[0], p[1], p[2], q.v, q.x, strategy);
            return (up - dn) / (2.0 * e);
        };
        const double d1 = slope(0), d2 = slope(1), d3 = slope(2);
        const double local_tol = tol * (1.0 + std::max({std::abs(d1), std::abs(d2), std::abs(d3)}));
        if (d1 < -local_tol) report.p1_ok = false;
        if (d2 > local_tol) report.p2_ok = false;
        if (d3 < -local_tol) report.p3_ok = false;
        if (first || d1 < report.min_dp1) { report.min_dp1 = d1; report.worst_p1 = {d1, q}; }
        if (first || d2 > report.max_dp2) { report.max_dp2 = d2; report.worst_p2 = {d2, q}; }
        if (first || d3 < report.min_dp3) { report.min_dp3 = d3; report.worst_p3 = {d3, q}; }
        first = false;
    }
    report.pass = report.p1_ok && report.p2_ok && report.p3_ok;
    return report;
}

struct EllipticityReport {
    bool pass = true;
    double max_slope = 0.0;      ///< max dF/dp over samples; elliptic needs <= tol
    double gamma_hat = 0.0;      ///< max(-dF/dp): empirical gamma for (LF_C)
    double min_neg_slope = 0.0;  ///< min(-dF/dp): empirical 1/gamma end
    SlopeProbe worst;
    int samples = 0;
    double fd_step_scale = 0.0;
    double tol = 0.0;
};

/// Samples dF/dp by central differences; passes when F never increases in p.
/// Also reports the empirical slope range for use as EllipticityBounds.
inline EllipticityReport check_ellipticity(const OperatorFn& f, const SampleBox& box,
                                           int n_samples = 1000, double fd_step_scale = 1e-5,
                                           double tol = 1e-8,
                                           std::uint64_t seed = detail::kDefaultSeed) {
    EllipticityReport report;
    report.samples = n_samples;
    report.fd_step_scale = fd_step_scale;
    report.tol = tol;

    bool first = true;
    std::mt19937_64 rng(seed);
    for (int s = 0; s < n_samples; ++s) {
        const double p = detail::uniform(rng, box.p.lo, box.p.hi);
        const double v = detail::uniform(rng, box.v.lo, box.v.hi);
        const double x = detail::uniform(rng, box.x.lo, box.x.hi);
        const double e = fd_step_scale * (1.0 + std::abs(p));
        const double d = (f(p + e, v, x) - f(p - e, v, x)) / (2.0 * e);
        if (first || d > report.max_slope) {
            report.max_slope = d;
            report.worst = {d, {p, p, p, v, x}};
        }
        if (first || -d > report.gamma_hat) report.gamma_hat = -d;
        if (first || -d < report.min_neg_slope) report.min_neg_slope = -d;
        first = false;
    }
    report.pass = report.max_slope <= tol;
    return report;
}

/// Theorem bound: any alpha strictly above max(beta1, beta3) * gamma makes
/// the Lax-Friedrichs operator g-monotone under (LF_C).
inline double alpha_lower_bound(const LFWeights& w, double gamma) {
    if (!(gamma > 0.0)) throw std::invalid_argument("alpha_lower_bound: gamma must be positive");
    return std::max(w.beta1, w.beta3) * gamma;
}

} // namespace nlfd
