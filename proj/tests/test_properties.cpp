#include <gtest/gtest.h>

#include <cmath>

#include "nlfd/problems.hpp"
#include "nlfd/properties.hpp"

using namespace nlfd;

TEST(AlphaLowerBound, TheoremValues) {
    EXPECT_DOUBLE_EQ(alpha_lower_bound(LFWeights::lf1(0.0), 3.0), 1.0);
    EXPECT_DOUBLE_EQ(alpha_lower_bound(LFWeights::lf2(0.0), 17.0), 0.0);
    EXPECT_DOUBLE_EQ(alpha_lower_bound(LFWeights::lf3(0.0), 4.0), 1.0);
    EXPECT_THROW(alpha_lower_bound(LFWeights::lf1(0.0), 0.0), std::invalid_argument);
}

TEST(Consistency, AllOperatorsOnAllProblems) {
    // diagonal consistency <= 1e-12 relative, 1000 samples each
    for (const std::string& name : problem_names()) {
        const Problem prob = problem_by_name(name);
        const ExtremumStrategy strategy = prob.monotone_in_p
                                              ? ExtremumStrategy{EndpointStrategy{}}
                                              : ExtremumStrategy{SampledStrategy{}};
        const std::vector<OperatorKind> kinds = {
            LaxFriedrichs{LFWeights::lf1(1.5)}, LaxFriedrichs{LFWeights::lf2(1.0)},
            LaxFriedrichs{LFWeights::lf3(0.5)}, GodunovExt{}, GodunovExtr{}};
        for (const OperatorKind& kind : kinds) {
            const ConsistencyReport report =
                check_consistency(kind, prob.f, prob.verify_box, 1000, 1e-12, strategy);
            EXPECT_TRUE(report.pass) << name << " / " << operator_name(kind)
                                     << ": max defect " << report.max_defect;
        }
    }
}

TEST(Consistency, BrokenWeightsAreRejectedAndDetected) {
    EXPECT_THROW(LFWeights(0.3, 0.3, 0.3, 1.0), std::invalid_argument);
    // bypass the invariant through the public fields to show the verifier
    // catches the diagonal defect on its own
    LFWeights w = LFWeights::lf1(1.0);
    w.beta2 = w.beta2 - 0.1;  // betas now sum to 0.9
    const Problem prob = example1();
    const ConsistencyReport report =
        check_consistency(LaxFriedrichs{w}, prob.f, prob.verify_box, 500, 1e-12);
    EXPECT_FALSE(report.pass);
    EXPECT_GT(report.max_defect, 1e-6);
}

TEST(GMonotonicity, Lf1OnConvexBranchOfExample2) {
    // box p in [0.5, 1.5]: gamma_hat = 3, and alpha = 1.5 > gamma_hat/3
    const Problem prob = example2();
    const SampleBox box{{0.5, 1.5}, {0.0, 0.5}, {0.0, 1.0}};
    const EllipticityReport elliptic = check_ellipticity(prob.f, box);
    EXPECT_TRUE(elliptic.pass);
    EXPECT_NEAR(elliptic.gamma_hat, 3.0, 1e-2);
    const double bound = alpha_lower_bound(LFWeights::lf1(0.0), elliptic.gamma_hat);
    EXPECT_LT(bound, 1.5);
    const GMonotonicityReport report =
        check_gmonotonicity(LaxFriedrichs{LFWeights::lf1(1.5)}, prob.f, box);
    EXPECT_TRUE(report.pass) << "min dp1 " << report.min_dp1 << " max dp2 " << report.max_dp2;
}

TEST(GMonotonicity, Lf2PassesForAnyPositiveAlphaOnEllipticBox) {
    // beta1 = beta3 = 0 needs no moment at all as long as F is elliptic
    const Problem prob = example3();
    for (double alpha : {1e-6, 0.1, 10.0}) {
        const GMonotonicityReport report =
            check_gmonotonicity(LaxFriedrichs{LFWeights::lf2(alpha)}, prob.f, prob.verify_box);
        EXPECT_TRUE(report.pass) << "alpha=" << alpha;
    }
}

TEST(GMonotonicity, Lf1WithoutMomentFailsInOuterArms) {
    // alpha = 0 on a box where dF/dp < 0 strictly: dp1 and dp3 go negative
    const Problem prob = example1();
    const SampleBox box{{1.0, 2.0}, {-0.5, 0.5}, {-1.0, 1.0}};
    const GMonotonicityReport report =
        check_gmonotonicity(LaxFriedrichs{LFWeights::lf1(0.0)}, prob.f, box);
    EXPECT_FALSE(report.pass);
    EXPECT_FALSE(report.p1_ok);
    EXPECT_FALSE(report.p3_ok);
    EXPECT_TRUE(report.p2_ok);
    EXPECT_LT(report.min_dp1, -0.5);
}

TEST(Ellipticity, SpecExampleBoxes) {
    const Problem ex4 = example4();
    const EllipticityReport pass4 = check_ellipticity(ex4.f, SampleBox{{1.0, 3.0}, {3.0, 17.0}, {2.0, 4.0}});
    EXPECT_TRUE(pass4.pass);
    EXPECT_GT(pass4.gamma_hat, 0.0);
    EXPECT_LE(pass4.gamma_hat, 0.51);

    const Problem ex2 = example2();
    const EllipticityReport fail2 =
        check_ellipticity(ex2.f, SampleBox{{-2.0, -0.5}, {0.0, 0.5}, {0.0, 1.0}});
    EXPECT_FALSE(fail2.pass);  // dF/dp = -2p > 0 on the negative branch

    const Problem ex1 = example1();
    const EllipticityReport pass1 =
        check_ellipticity(ex1.f, SampleBox{{0.5, 2.0}, {-0.5, 0.5}, {-1.0, 1.0}});
    EXPECT_TRUE(pass1.pass);
}

TEST(Theorem41Certificate, AlphaAboveBoundImpliesSampledGMonotonicity) {
    // wherever check_ellipticity passes with gamma_hat, any alpha above
    // alpha_lower_bound certifies the sampled g-monotonicity on the same box
    for (const std::string& name : {std::string("example1"), std::string("example3"), std::string("example4")}) {
        const Problem prob = problem_by_name(name);
        const EllipticityReport elliptic = check_ellipticity(prob.f, prob.verify_box);
        EXPECT_TRUE(elliptic.pass) << name;
        for (const LFWeights& base : {LFWeights::lf1(0.0), LFWeights::lf2(0.0), LFWeights::lf3(0.0)}) {
            const double alpha = alpha_lower_bound(base, elliptic.gamma_hat) * 1.05 + 1e-6;
            const LFWeights w(base.beta1, base.beta2, base.beta3, alpha);
            const GMonotonicityReport report =
                check_gmonotonicity(LaxFriedrichs{w}, prob.f, prob.verify_box);
            EXPECT_TRUE(report.pass) << name << " alpha=" << alpha << " min dp1 " << report.min_dp1
                                     << " max dp2 " << report.max_dp2 << " min dp3 " << report.min_dp3;
        }
    }
}

TEST(Verifiers, DeterministicAcrossRuns) {
    const Problem prob = example1();
    const OperatorKind kind = LaxFriedrichs{LFWeights::lf1(1.5)};
    const ConsistencyReport a = check_consistency(kind, prob.f, prob.verify_box);
    const ConsistencyReport b = check_consistency(kind, prob.f, prob.verify_box);
    EXPECT_EQ(a.max_defect, b.max_defect);
    EXPECT_EQ(a.worst.p1, b.worst.p1);
}
