#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <random>

#include "nlfd/problems.hpp"
#include "oracles.hpp"

using namespace nlfd;

TEST(Example1, SpotValuesAndBoundary) {
    const Problem prob = example1();
    EXPECT_NEAR(prob.f(1.0, 0.0, 1.0), 0.0, 1e-15);
    EXPECT_NEAR(prob.f(0.0, 0.0, 0.0), 0.0, 1e-15);
    EXPECT_NEAR(prob.exact(1.0), prob.u_b, 1e-15);
    EXPECT_TRUE(prob.monotone_in_p);
}

TEST(Example2, TwoRootsAndSharedBoundary) {
    const Problem prob = example2();
    EXPECT_NEAR(prob.f(1.0, 0.0, 0.3), 0.0, 1e-15);
    EXPECT_NEAR(prob.f(-1.0, 0.0, 0.3), 0.0, 1e-15);
    EXPECT_DOUBLE_EQ(prob.f(0.0, 0.0, 0.3), 1.0);
    EXPECT_NEAR(prob.exact(1.0), 0.5, 1e-15);
    EXPECT_NEAR(prob.alternate_exact(1.0), 0.5, 1e-15);
    EXPECT_NEAR(prob.exact(0.0), prob.u_a, 1e-15);
    EXPECT_NEAR(prob.alternate_exact(0.0), prob.u_a, 1e-15);
    EXPECT_FALSE(prob.monotone_in_p);
}

TEST(Example3, BranchValuesFromDifferentiatingTheExactSolution) {
    const Problem prob = example3();
    // x = -0.5: u_xx = -12 x^2 = -3, S = 3, F = min(3, 6) - 3 = 0
    EXPECT_NEAR(prob.f(-3.0, 0.0, -0.5), 0.0, 1e-15);
    // x = 0.5: u_xx = 3, S = -6, F = min(-3, -6) + 6 = 0
    EXPECT_NEAR(prob.f(3.0, 0.0, 0.5), 0.0, 1e-15);
    EXPECT_NEAR(prob.f(0.0, 0.0, 0.0), 0.0, 1e-15);
}

TEST(Example4, ClosedFormSpotValues) {
    const Problem prob = example4();
    // on the exact solution the optimal control is x^-2, interior of [-1,1]
    for (double x : {2.1, 3.0, 3.9}) {
        EXPECT_NEAR(prob.f(2.0, x * x, x), 0.0, 1e-14);
    }
    // v = 1, p = 10, x = 2: unclamped theta = 5 clamps to 1
    EXPECT_NEAR(prob.f(10.0, 1.0, 2.0), -10.0 + 1.0 + 0.25, 1e-14);
    // v = 0, p = -3, x = 2: linear in theta, minimum at theta = -1
    EXPECT_NEAR(prob.f(-3.0, 0.0, 2.0), -3.0 + 0.25, 1e-14);
}

TEST(Example4, ClosedFormMatchesThetaGridOracle) {
    std::mt19937_64 rng(8);
    const Problem prob = example4();
    for (int trial = 0; trial < 1000; ++trial) {
        const double p = oracles::uniform(rng, -10.0, 10.0);
        const double v = oracles::uniform(rng, -5.0, 20.0);
        const double x = oracles::uniform(rng, 2.0, 4.0);
        const double oracle = oracles::example4_theta_grid(p, v, x);
        EXPECT_NEAR(prob.f(p, v, x), oracle, 1e-9) << "p=" << p << " v=" << v << " x=" << x;
    }
}

TEST(Example5, SignConventionAndBoundary) {
    const Problem prob = example5();
    EXPECT_NEAR(prob.f(2.0, 0.0, 0.5), 0.0, 1e-15);
    EXPECT_NEAR(prob.f(0.0, 0.0, 0.0), 0.0, 1e-15);  // sign(0) = 0
    EXPECT_NEAR(prob.exact(-1.0), prob.u_a, 1e-15);
}

TEST(AllExamples, ExactSolutionsSatisfyTheOperator) {
    // F(u_xx(x), u(x), x) = 0 to 1e-12 on a fine sample; the kink at x = 0 is
    // excluded for examples 3 and 5 where u_xx jumps
    struct Case {
        Problem prob;
        std::function<double(double)> u;
        std::function<double(double)> uxx;
        bool exclude_origin;
    };
    const Problem p2 = example2();
    std::vector<Case> cases;
    cases.push_back({example1(), example1().exact, [](double x) { return x; }, false});
    cases.push_back({p2, p2.exact, [](double) { return 1.0; }, false});
    cases.push_back({p2, p2.alternate_exact, [](double) { return -1.0; }, false});
    cases.push_back({example3(), example3().exact,
                     [](double x) { return x >= 0.0 ? 12.0 * x * x : -12.0 * x * x; }, true});
    cases.push_back({example4(), example4().exact, [](double) { return 2.0; }, false});
    cases.push_back({example5(), example5().exact,
                     [](double x) { return x >= 0.0 ? 2.0 : -2.0; }, true});
    for (const Case& c : cases) {
        const int n = 1001;
        for (int k = 0; k <= n; ++k) {
            const double x = c.prob.a + (c.prob.b - c.prob.a) * (static_cast<double>(k) / n);
            if (c.exclude_origin && std::abs(x) < 1e-9) continue;
            EXPECT_NEAR(c.prob.f(c.uxx(x), c.u(x), x), 0.0, 1e-12)
                << c.prob.name << " at x=" << x;
        }
    }
}

TEST(BellmanMinFinite, ValuesAndTieBreak) {
    const std::array<double, 2> coeffs{1.0, 2.0};
    const BellmanMin neg = bellman_min_finite(coeffs, -1.0, 0.0);
    EXPECT_DOUBLE_EQ(neg.value, 1.0);
    EXPECT_EQ(neg.argmin, 0);
    const BellmanMin pos = bellman_min_finite(coeffs, 1.0, 0.0);
    EXPECT_DOUBLE_EQ(pos.value, -2.0);
    EXPECT_EQ(pos.argmin, 1);
    const BellmanMin tie = bellman_min_finite(coeffs, 0.0, 0.0);
    EXPECT_DOUBLE_EQ(tie.value, 0.0);
    EXPECT_EQ(tie.argmin, 0);  // ties break to the smallest index
    EXPECT_THROW(bellman_min_finite({}, 1.0, 0.0), std::invalid_argument);
}

TEST(Registry, NamesResolve) {
    for (const std::string& name : problem_names()) {
        EXPECT_EQ(problem_by_name(name).name, name);
    }
    EXPECT_THROW(problem_by_name("example9"), std::invalid_argument);
}
