#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "spectramp/qsp.hpp"

using namespace spectramp;

namespace {

PhaseSequence random_phases(int n, unsigned seed, double frame = 0.0, double spread = 3.0) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> u(-spread, spread);
    PhaseSequence p;
    for (int i = 0; i < n; ++i) p.phases.push_back(u(rng));
    p.frame = frame;
    return p;
}

} // namespace

TEST(Rotation, Unitary) {
    auto p = random_phases(9, 1, 0.3);
    for (double th = -3; th < 3; th += 0.37) {
        auto c = rotation_components(p, th);
        EXPECT_NEAR(c.A * c.A + c.B * c.B + c.C * c.C + c.D * c.D, 1.0, 1e-13);
    }
}

TEST(Rotation, GroverSequence) {
    const double pi = std::acos(-1.0);
    for (int L : {1, 4, 7}) {
        PhaseSequence zero, flip;
        zero.phases.assign(L, 0.0);
        flip.phases.assign(L, pi);
        for (double th = 0; th < 3; th += 0.21) {
            EXPECT_NEAR(rotation_components(zero, th).C, -std::sin(L * th), 1e-13);
            EXPECT_NEAR(rotation_components(flip, th).C, std::sin(L * th), 1e-13);
        }
    }
}

TEST(Rotation, ComponentsArePolynomialsOfMatchingDegree) {
    for (int n : {1, 4, 9}) {
        auto p = random_phases(n, 10 + n, 0.7);
        auto s = spec_from_phases(p);
        EXPECT_LE(s.A.degree(), n);
        EXPECT_LE(s.C.degree(), n - 1);
        EXPECT_LT(verify_phases(p, s, 4 * n + 5), 1e-12);
    }
    auto p = random_phases(7, 3);
    auto s = spec_from_phases(p, SpecVariable::sin);
    EXPECT_LE(s.D.degree(), 7);
    EXPECT_LE(s.A.degree(), 6);
    EXPECT_LT(verify_phases(p, s, 40), 1e-12);
    EXPECT_THROW(spec_from_phases(random_phases(4, 3), SpecVariable::sin), PreconditionError);
}

TEST(Stripping, RoundTrip) {
    for (int n : {1, 2, 5, 12, 25}) {
        auto p = random_phases(n, 100 + n);
        auto s = spec_from_phases(p);
        auto q = phases_from_full(s);
        ASSERT_EQ(q.target_degree(), n);
        EXPECT_LT(verify_phases(q, s, 4 * n + 5), 1e-10) << n;
        if (n > 5) continue;
        // well-conditioned: phases are recovered up to 2 pi
        for (int k = 0; k < n; ++k) EXPECT_NEAR(canonical_phase(q.phases[k] - p.phases[k]), 0.0, 1e-8);
        EXPECT_NEAR(canonical_phase(q.frame), 0.0, 1e-8);
    }
}

TEST(Stripping, RecoversFrame) {
    auto p = random_phases(6, 7, 0.4);
    auto q = phases_from_full(spec_from_phases(p));
    EXPECT_NEAR(q.frame, 0.4, 1e-9);
}

TEST(Stripping, ExtendedAtHighDegree) {
    auto p = random_phases(70, 5, 0.0, 0.5);
    auto s = spec_from_phases(p);
    auto q = phases_from_full_extended(s, 1e-10);
    EXPECT_LT(verify_phases_extended(q, s, 300), 1e-10);
}

TEST(Completion, Identity) {
    auto s = complete_ab(ChebPoly::T(1), ChebPoly({0.0}));
    for (double x = -1; x <= 1; x += 0.1) {
        double c = s.C.eval_any(x), d = s.D.eval_any(x);
        EXPECT_NEAR(c * c + d * d, 1.0, 1e-12);
    }
    auto q = phases_from_full(s);
    EXPECT_LT(verify_phases(q, s, 21), 1e-10);
}

TEST(Completion, ChebyshevT) {
    for (int n : {2, 3, 6, 9}) {
        auto s = complete_ab(ChebPoly::T(n), ChebPoly({0.0}));
        auto q = phases_from_full(s);
        EXPECT_LT(verify_phases(q, s, 4 * n + 5), 1e-9) << n;
        EXPECT_LT(verify_phases(q, 'A', ChebPoly::T(n), SpecVariable::cos, 4 * n + 5), 1e-9);
    }
}

TEST(Completion, RandomAchievablePair) {
    // beyond this degree, completions of random pairs can need phases that are ill-conditioned in binary64
    for (int n : {4, 6, 7}) {
        auto p = random_phases(n, 40 + n);
        auto ref = spec_from_phases(p);
        auto s = complete_ab(ref.A, ref.B);
        auto q = phases_from_full(s);
        EXPECT_LT(verify_phases(q, 'A', ref.A, SpecVariable::cos, 4 * n + 5), 1e-8) << n;
        EXPECT_LT(verify_phases(q, 'B', ref.B, SpecVariable::cos, 4 * n + 5), 1e-8) << n;
    }
}

TEST(Completion, ReportsViolatedCondition) {
    try {
        complete_ab(0.5 * ChebPoly::T(2), ChebPoly({0.0}));
        FAIL();
    } catch (const InfeasibleSpec& e) {
        EXPECT_EQ(e.condition.substr(0, 3), "(2)");
    }
    try {
        complete_ab(ChebPoly::T(2), 0.5 * ChebPoly::T(2) - 0.5 * ChebPoly::T(0));
        FAIL();
    } catch (const InfeasibleSpec& e) {
        EXPECT_EQ(e.condition.substr(0, 3), "(3)");
        EXPECT_LE(std::abs(e.witness), 1.0);
    }
    EXPECT_THROW(complete_ab(ChebPoly::T(3), ChebPoly::T(2)), InfeasibleSpec);
}

TEST(Completion, OutsideConditionWitness) {
    // A = 1 - (x^2 - 1)(x^2 - 4)/10: inside the disk on [-1,1], below 1 for 2 < x <= 3
    ChebPoly bad({0.8125, 0.0, 0.2, 0.0, -0.0125});
    try {
        complete_ab(bad, ChebPoly({0.0}));
        FAIL();
    } catch (const InfeasibleSpec& e) {
        EXPECT_EQ(e.condition.substr(0, 3), "(4)");
        EXPECT_GT(e.witness, 2.0);
    }
}

TEST(SingleB, LowDegree) {
    for (int n : {1, 3, 5}) {
        auto p = phases_for_B(ChebPoly::T(n));
        EXPECT_EQ(p.target_degree(), n);
        EXPECT_EQ(p.kind, PhaseKind::B_only);
        EXPECT_LT(verify_phases(p, 'B', ChebPoly::T(n), SpecVariable::cos, 4 * n + 5), 1e-12) << n;
    }
}

TEST(SingleB, LinearAmplification) {
    ChebPoly B = lin_amp_poly(0.2, 0.01);
    auto p = phases_for_B(B);
    EXPECT_LT(verify_phases(p, 'B', B, SpecVariable::cos, 4 * B.degree() + 5), 1e-10);
}

TEST(SingleB, RequiresZeroAtOrigin) {
    EXPECT_THROW(phases_for_B(ChebPoly::T(2)), PreconditionError);
    auto p = phases_for_B_unchecked(ChebPoly::T(2));
    EXPECT_LT(verify_phases(p, 'B', ChebPoly::T(2), SpecVariable::cos, 13), 1e-12);
}

TEST(SingleB, RejectsLargeOrMixedParity) {
    EXPECT_THROW(phases_for_B(1.2 * ChebPoly::T(3)), PreconditionError);
    EXPECT_THROW(phases_for_B(ChebPoly({0.0, 0.5, 0.3})), PreconditionError);
}

TEST(SingleB, Extended) {
    ChebPoly B = 0.9 * ChebPoly::T(81);
    auto p = phases_for_B_extended(B);
    EXPECT_LT(verify_phases_extended(p, 'B', B, SpecVariable::cos, 400), 1e-20);
}

TEST(SingleD, Examples) {
    auto p = phases_for_D(ChebPoly::T(1));
    EXPECT_LT(verify_phases(p, 'D', ChebPoly::T(1), SpecVariable::sin, 9), 1e-12);
    for (int n : {3, 7}) {
        auto q = phases_for_D(ChebPoly::T(n));
        EXPECT_EQ(q.target_degree(), n);
        EXPECT_LT(verify_phases(q, 'D', ChebPoly::T(n), SpecVariable::sin, 4 * n + 5), 1e-11) << n;
    }
    ChebPoly D = lin_amp_poly(0.5, 1e-4);
    auto r = phases_for_D(D);
    EXPECT_LT(verify_phases(r, 'D', D, SpecVariable::sin, 4 * D.degree() + 5), 1e-10);
    EXPECT_THROW(phases_for_D(ChebPoly::T(2)), PreconditionError);
}

TEST(Verify, RejectsCoarseGrid) {
    auto p = random_phases(5, 2);
    EXPECT_THROW(verify_phases(p, spec_from_phases(p), 10), PreconditionError);
}

TEST(Serialization, RoundTrip) {
    auto p = random_phases(4, 9, 0.1);
    p.kind = PhaseKind::D_only;
    auto q = phases_from_json(to_json(p));
    EXPECT_EQ(q.phases, p.phases);
    EXPECT_EQ(q.frame, p.frame);
    EXPECT_EQ(q.kind, p.kind);
    auto s = spec_from_phases(p);
    auto t = spec_from_json(to_json(s));
    EXPECT_EQ(t.C.coeffs(), s.C.coeffs());
}

TEST(Phase, Canonical) {
    const double pi = std::acos(-1.0);
    EXPECT_NEAR(canonical_phase(3 * pi), pi, 1e-12);
    EXPECT_NEAR(canonical_phase(-pi), pi, 1e-12);
    EXPECT_NEAR(canonical_phase(0.5 - 4 * pi), 0.5, 1e-12);
}
