#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "nlfd/problems.hpp"
#include "nlfd/study.hpp"

namespace nlfd {

/// Named nodal initial guesses selectable from the CLI as custom:<name>.
inline std::optional<std::function<double(double)>> guess_preset(std::string_view name) {
    if (name == "example4-cubic") {
        return [](double x) { return (3.0 / 14.0) * x * x * x + 16.0 / 7.0; };
    }
    if (name == "example2-uplus") {
        return [](double x) { return 0.5 * x * x; };
    }
    if (name == "example2-uminus") {
        return [](double x) { return -0.5 * x * x + x; };
    }
    return std::nullopt;
}

namespace detail {

inline std::vector<double> halved(double h0, int halvings) {
    std::vector<double> hs{h0};
    for (int k = 0; k < halvings; ++k) hs.push_back(hs.back() / 2.0);
    return hs;
}

} // namespace detail

/// Prepackaged sweeps mirroring the paper's convergence tables. Every preset
/// uses the linear-extrapolation ghost closure, which is the one that
/// reproduces the published error constants.
inline std::optional<StudyConfig> preset_study(std::string_view name) {
    const GhostPolicy ghost = GhostPolicy::LinearValueExtrapolation;
    auto lf = [&](const LFWeights& w) { return SchemeConfig{LaxFriedrichs{w}, ghost}; };
    auto godunov = [&]() { return SchemeConfig{GodunovExt{}, ghost}; };

    StudyConfig cfg;
    if (name == "table1") {
        cfg.problem = example1();
        cfg.scheme = lf(LFWeights::lf1(1.5));
        cfg.h_values = detail::halved(0.1, 4);
    } else if (name == "table1-godunov") {
        cfg.problem = example1();
        cfg.scheme = godunov();
        cfg.h_values = detail::halved(0.1, 4);
    } else if (name == "table2-godunov") {
        cfg.problem = example1();
        cfg.scheme = godunov();
        cfg.guess = CoarseSolveInterpolate{0.1, lf(LFWeights::lf1(1.5))};
        cfg.h_values = detail::halved(0.1, 4);
    } else if (name == "table3-alpha1") {
        cfg.problem = example2();
        cfg.scheme = lf(LFWeights::lf1(1.0));
        cfg.h_values = detail::halved(0.1, 2);
    } else if (name == "table3-alpha-neg1") {
        cfg.problem = example2();
        cfg.scheme = lf(LFWeights::lf1(-1.0));
        cfg.h_values = detail::halved(0.1, 2);
        cfg.reference = ErrorReference::AlternateExact;
    } else if (name == "table4-alpha6") {
        cfg.problem = example2();
        cfg.scheme = lf(LFWeights::lf2(6.0));
        cfg.h_values = detail::halved(0.1, 2);
    } else if (name == "table4-alpha005") {
        cfg.problem = example2();
        cfg.scheme = lf(LFWeights::lf2(0.05));
        cfg.h_values = detail::halved(0.1, 2);
    } else if (name == "table4-alpha0") {
        cfg.problem = example2();
        cfg.scheme = lf(LFWeights::lf2(0.0));
        cfg.h_values = detail::halved(0.1, 2);
    } else if (name == "table5-godunov") {
        cfg.problem = example2();
        cfg.scheme = godunov();
        cfg.guess = CustomFunction{*guess_preset("example2-uplus")};
        cfg.h_values = detail::halved(0.1, 3);
    } else if (name == "table5-3point") {
        cfg.problem = example2();
        cfg.scheme = lf(LFWeights::lf2(0.0));
        cfg.guess = CustomFunction{*guess_preset("example2-uplus")};
        cfg.h_values = detail::halved(0.1, 3);
    } else if (name == "table6-3point") {
        cfg.problem = example2();
        cfg.scheme = lf(LFWeights::lf2(0.0));
        cfg.guess = CustomFunction{*guess_preset("example2-uminus")};
        cfg.h_values = detail::halved(0.1, 3);
        cfg.reference = ErrorReference::AlternateExact;
    } else if (name == "table7") {
        cfg.problem = example3();
        cfg.scheme = lf(LFWeights::lf1(1.0));
        cfg.h_values = detail::halved(0.1, 5);
    } else if (name == "table7-godunov") {
        cfg.problem = example3();
        cfg.scheme = godunov();
        cfg.h_values = detail::halved(0.1, 5);
    } else if (name == "table8") {
        cfg.problem = example4();
        cfg.scheme = lf(LFWeights::lf1(0.5));
        cfg.h_values = detail::halved(0.1, 3);
    } else if (name == "table9") {
        cfg.problem = example4();
        cfg.scheme = lf(LFWeights::lf1(0.5));
        cfg.guess = CustomFunction{*guess_preset("example4-cubic")};
        cfg.h_values = detail::halved(0.1, 4);
    } else if (name == "table9-godunov") {
        cfg.problem = example4();
        cfg.scheme = godunov();
        cfg.guess = CustomFunction{*guess_preset("example4-cubic")};
        cfg.h_values = detail::halved(0.1, 2);
    } else if (name == "table10") {
        cfg.problem = example5();
        cfg.scheme = lf(LFWeights::lf1(1.5));
        cfg.h_values = detail::halved(0.1, 4);
    } else if (name == "table10-godunov") {
        cfg.problem = example5();
        cfg.scheme = godunov();
        cfg.h_values = detail::halved(0.1, 4);
    } else if (name == "table11-godunov") {
        cfg.problem = example5();
        cfg.scheme = godunov();
        cfg.guess = CoarseSolveInterpolate{0.1, lf(LFWeights::lf1(1.5))};
        cfg.h_values = detail::halved(0.1, 4);
    } else {
        return std::nullopt;
    }
    // the finest paper grids push the residual floor below the default
    cfg.newton.res_tol = 1e-8;
    return cfg;
}

inline std::vector<std::string> preset_names() {
    return {"table1",        "table1-godunov", "table2-godunov", "table3-alpha1", "table3-alpha-neg1",
            "table4-alpha6", "table4-alpha005", "table4-alpha0", "table5-godunov", "table5-3point",
            "table6-3point", "table7",         "table7-godunov", "table8",        "table9",
            "table9-godunov", "table10",       "table10-godunov", "table11-godunov"};
}

} // namespace nlfd
