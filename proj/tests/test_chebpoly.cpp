#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "spectramp/chebpoly.hpp"

using namespace spectramp;
using std::numbers::pi;

namespace {

// Independent oracle: expand in monomials with the three-term recurrence, then Horner in long double.
long double monomial_eval(const std::vector<double>& a, long double x) {
    const int n = static_cast<int>(a.size()) - 1;
    std::vector<long double> mono(n + 1, 0.0L), tm1(n + 1, 0.0L), t0(n + 1, 0.0L);
    t0[0] = 1.0L;
    for (int k = 0; k <= n; ++k) {
        for (int i = 0; i <= n; ++i) mono[i] += a[k] * t0[i];
        std::vector<long double> tp1(n + 1, 0.0L);
        for (int i = 0; i < n; ++i) tp1[i + 1] = (k == 0 ? 1.0L : 2.0L) * t0[i];
        if (k > 0)
            for (int i = 0; i <= n; ++i) tp1[i] -= tm1[i];
        tm1 = t0;
        t0 = tp1;
    }
    long double r = 0.0L;
    for (int i = n; i >= 0; --i) r = r * x + mono[i];
    return r;
}

double grid_max(const std::function<double(double)>& g, double lo, double hi, int m = 20001) {
    double w = 0;
    for (int i = 0; i < m; ++i) w = std::max(w, g(lo + (hi - lo) * i / (m - 1)));
    return w;
}

} // namespace

TEST(ChebEval, ConstantAndT2) {
    EXPECT_DOUBLE_EQ(cheb_eval(ChebPoly({1.0}), 0.3), 1.0);
    EXPECT_NEAR(cheb_eval(ChebPoly({0.0, 0.0, 1.0}), 0.5), -0.5, 1e-15);
}

TEST(ChebEval, MatchesMonomialOracle) {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<double> c(13);
    for (auto& v : c) v = u(rng);
    ChebPoly p(c);
    for (int i = 0; i < 100; ++i) {
        double x = u(rng);
        EXPECT_NEAR(p(x), static_cast<double>(monomial_eval(c, x)), 1e-12);
    }
}

TEST(ChebEval, DomainError) {
    ChebPoly p({0.0, 1.0});
    EXPECT_THROW(p(1.0 + 1e-9), std::domain_error);
    EXPECT_NO_THROW(p(1.0 + 1e-13));
}

TEST(ChebPolyType, ParityAndTrim) {
    ChebPoly p({1.0, 2.0, 3.0, 0.0, 0.0}, Parity::odd);
    EXPECT_EQ(p.degree(), 1);
    EXPECT_EQ(p.coeff(0), 0.0);
    ChebPoly q({1.0, 2.0, 3.0}, Parity::even);
    EXPECT_EQ(q.degree(), 2);
    EXPECT_EQ(q.coeff(1), 0.0);
}

TEST(ChebArithmetic, ProductAndIntegral) {
    ChebPoly a({0.3, -0.2, 0.5, 0.1}), b({-0.4, 0.7, 0.2});
    ChebPoly ab = a * b;
    ChebPoly xa = mul_x(a);
    ChebPoly ia = integrate_from_zero(a);
    for (double x : {-0.9, -0.3, 0.0, 0.4, 0.95}) {
        EXPECT_NEAR(ab(x), a(x) * b(x), 1e-14);
        EXPECT_NEAR(xa(x), x * a(x), 1e-14);
        // Simpson quadrature oracle
        const int m = 2000;
        double h = x / m, s = a(0) + a(x);
        for (int i = 1; i < m; ++i) s += (i % 2 ? 4.0 : 2.0) * a(i * h);
        EXPECT_NEAR(ia(x), s * h / 3.0, 1e-12);
    }
}

TEST(ChebArithmetic, ComposeAffine) {
    ChebPoly p({0.1, 0.2, -0.3, 0.4, 0.5});
    ChebPoly q = compose_affine(p, 0.5, -0.25);
    for (double x : {-1.0, -0.2, 0.6, 1.0}) EXPECT_NEAR(q(x), p(0.5 * x - 0.25), 1e-14);
}

TEST(ChebArithmetic, JsonRoundTrip) {
    ChebPoly p({0.0, 0.5, 0.0, -0.25}, Parity::odd);
    ChebPoly q = cheb_from_json(to_json(p));
    EXPECT_EQ(q.coeffs(), p.coeffs());
    EXPECT_EQ(q.parity(), Parity::odd);
}

TEST(Bessel, ScaledIMatchesStd) {
    for (double beta : {0.5, 2.0, 20.0, 150.0}) {
        auto s = scaled_bessel_i(beta, 40);
        for (int j = 0; j <= 40; ++j) {
            double ref = std::exp(-beta) * std::cyl_bessel_i(static_cast<double>(j), beta);
            EXPECT_NEAR(s[j], ref, 1e-14 + 1e-12 * ref) << "beta=" << beta << " j=" << j;
        }
    }
}

TEST(Bessel, JMatchesStd) {
    for (double tau : {0.3, 3.0, 25.0}) {
        auto J = bessel_j(tau, 60);
        for (int k = 0; k <= 60; ++k)
            EXPECT_NEAR(J[k], std::cyl_bessel_j(static_cast<double>(k), tau), 1e-13) << tau << " " << k;
    }
}

TEST(JacobiAnger, ZeroBetaIsOne) {
    ChebPoly p = jacobi_anger_exp(0.0, 9);
    EXPECT_EQ(p.degree(), 0);
    EXPECT_DOUBLE_EQ(p(0.2), 1.0);
    EXPECT_THROW(jacobi_anger_exp(-1.0, 3), PreconditionError);
}

TEST(JacobiAnger, DegreeFormulaMeetsEps) {
    const double beta = 5.0, eps = 1e-6;
    int n = exp_degree(beta, eps);
    ChebPoly p = jacobi_anger_exp(beta, n);
    auto cert = certify(p, target_exp(beta), {{-1.0, 1.0}}, eps);
    EXPECT_TRUE(cert.passed()) << cert.measured_sup_error;
}

TEST(JacobiAnger, TailIdentityFrozen) {
    // 2 e^{-beta} sum_{j>n} I_j(beta), computed once at 40 digits.
    struct Case {
        double beta;
        int n;
        double tail;
    };
    for (auto c : {Case{2.0, 10, 8.028558228771094e-09}, Case{1.0, 5, 1.780042996727506e-05},
                   Case{5.0, 12, 6.042541089053906e-07}, Case{20.0, 30, 1.396930474422223e-10}}) {
        EXPECT_NEAR(exp_tail(c.beta, c.n), c.tail, 1e-15);
        ChebPoly p = jacobi_anger_exp(c.beta, c.n);
        double at_minus1 = std::abs(p(-1.0) - 1.0);
        EXPECT_NEAR(at_minus1, c.tail, 1e-12);
        auto cert = certify(p, target_exp(c.beta), {{-1.0, 1.0}}, 1.0);
        EXPECT_NEAR(cert.measured_sup_error, c.tail, 1e-12);
    }
}

TEST(JacobiAnger, MonotoneInDegree) {
    double prev = 1e300;
    for (int n = 2; n <= 40; n += 2) {
        auto cert = certify(jacobi_anger_exp(8.0, n), target_exp(8.0), {{-1.0, 1.0}}, 1.0);
        EXPECT_LE(cert.measured_sup_error, prev + 1e-14);  // roundoff floor
        prev = cert.measured_sup_error;
    }
}

TEST(Gauss, ConstantAndDegreeFormula) {
    EXPECT_DOUBLE_EQ(gauss_poly(0.0, 6)(0.7), 1.0);
    EXPECT_THROW(gauss_poly(1.0, 5), PreconditionError);
    const double eps = 1e-5;
    int n = 2 * exp_degree(4.5, eps);
    ChebPoly p = gauss_poly(3.0, n);
    EXPECT_LE(grid_max([&](double x) { return std::abs(p(x) - std::exp(-9.0 * x * x)); }, -1, 1), eps);
}

TEST(Gauss, PointwiseWithinTail) {
    ChebPoly p = gauss_poly(2.0, 12);
    double tail = gauss_tail(2.0, 12);
    double err = grid_max([&](double x) { return std::abs(p(x) - std::exp(-4.0 * x * x)); }, -1, 1);
    EXPECT_LE(err, tail * (1 + 1e-9));
    EXPECT_GT(err, 0.5 * tail);
}

TEST(Erf, OddAndAccurate) {
    ChebPoly p = erf_poly(3.0, 21);
    EXPECT_EQ(p(0.0), 0.0);
    EXPECT_THROW(erf_poly(1.0, 4), PreconditionError);
    int n = erf_degree(4.0, 1e-4);
    ChebPoly q = erf_poly(4.0, n);
    EXPECT_LE(grid_max([&](double x) { return std::abs(q(x) - std::erf(4.0 * x)); }, -1, 1), 1e-4);
}

TEST(Erf, K2N15AgainstOracle) {
    ChebPoly p = erf_poly(2.0, 15);
    double bound = erf_bound(2.0, 15);
    for (int i = 0; i < 1000; ++i) {
        long double x = -1.0L + 2.0L * i / 999.0L;
        EXPECT_LE(std::abs(p(static_cast<double>(x)) - std::erf(2.0L * x)), bound + 1e-15);
    }
}

TEST(Sgn, OddAtZeroShift) {
    ChebPoly p = sgn_poly(0.2, 0.0, 1e-3);
    EXPECT_EQ(p.parity(), Parity::odd);
    EXPECT_EQ(p(0.0), 0.0);
    double err = grid_max([&](double x) { return std::abs(x) >= 0.1 ? std::abs(p(x) - (x > 0 ? 1.0 : -1.0)) : 0.0; },
                          -1, 1);
    EXPECT_LE(err, 1e-3);
    EXPECT_LE(sup_abs(p), 1.0 + 1e-9);
    EXPECT_THROW(sgn_poly(0.2, 0.0, 0.6), PreconditionError);
}

TEST(Sgn, ShiftedGridCheck) {
    ChebPoly p = sgn_poly(0.1, 0.3, 1e-4);
    double err = grid_max(
        [&](double x) { return std::abs(x - 0.3) >= 0.05 ? std::abs(p(x) - (x > 0.3 ? 1.0 : -1.0)) : 0.0; }, -1, 1);
    EXPECT_LE(err, 1e-4);
}

TEST(Rect, CenterPlateauSymmetry) {
    const double eps = 1e-3;
    ChebPoly p = rect_poly(0.5, 0.25, eps);
    EXPECT_NEAR(p(0.0), 1.0, eps);
    auto cert = certify(p, target_rect(0.5), rect_domain(0.5, 0.25), eps);
    EXPECT_TRUE(cert.passed()) << cert.measured_sup_error;
    for (int i = 0; i <= 200; ++i) {
        double x = i / 200.0;
        EXPECT_NEAR(p(x), p(-x), 1e-14);
    }
    EXPECT_THROW(rect_poly(1.9, 0.25, eps), PreconditionError);
}

TEST(LinAmp, ThmAContract) {
    ChebPoly p = lin_amp_poly(0.25, 1e-3);
    EXPECT_EQ(p(0.0), 0.0);
    EXPECT_EQ(p.parity(), Parity::odd);
    auto cert = certify_lin(p, 0.25, 1e-3);
    EXPECT_TRUE(cert.passed()) << cert.measured_sup_error << " " << cert.max_abs;
    double rel = grid_max([&](double x) { return x == 0 ? 0.0 : std::abs(p(x) - 2 * x) / std::abs(2 * x); }, -0.25, 0.25);
    EXPECT_LE(rel, 1e-3);
}

TEST(LinAmp, HalfGammaSlope) {
    ChebPoly p = lin_amp_poly(0.5, 1e-3);
    double slope = (p(1e-4) - p(-1e-4)) / 2e-4;
    EXPECT_NEAR(slope, 1.0, 2e-3);
}

TEST(LinAmp, Preconditions) {
    EXPECT_THROW(lin_amp_poly(0.6, 1e-3), PreconditionError);
    EXPECT_THROW(lin_amp_poly(0.1, 0.02), PreconditionError);
}

TEST(LinAmp, DegreeScaling) {
    std::vector<double> ratios;
    for (double G : {0.125, 0.25, 0.5})
        for (double eps : {1e-2, 1e-4, 1e-6, 1e-8}) {
            if (eps > lin_amp_c * G) continue;
            ChebPoly p = lin_amp_poly(G, eps);
            ratios.push_back(p.degree() / (std::log(1.0 / eps) / G));
        }
    auto [lo, hi] = std::minmax_element(ratios.begin(), ratios.end());
    EXPECT_LE(*hi / *lo, 4.0);
}

TEST(GapAmp, LemmaContract) {
    const double D = 0.25, eps = 1e-3;
    ChebPoly p = gap_amp_poly(D, eps);
    EXPECT_EQ(p.parity(), Parity::odd);
    EXPECT_LE(std::abs(p(-1 + D)), eps);
    auto cert = certify_gap(p, D, eps);
    EXPECT_TRUE(cert.passed()) << cert.measured_sup_error << " " << cert.max_abs;
    for (int i = 0; i <= 100; ++i) {
        double y = 0.25 * i / 100.0;
        EXPECT_NEAR(p(1 - D + y), -p(-1 + D - y), 1e-13);
    }
}

TEST(Arcsin, Contract) {
    ChebPoly p = arcsin_poly(1e-6);
    EXPECT_EQ(p(0.0), 0.0);
    EXPECT_NEAR(p(0.5), pi / 6, 1e-6);
    EXPECT_LE(sup_abs(p), 1.0 + 1e-9);
}

TEST(Arcsin, DegreeLinearInLog) {
    std::vector<double> L, n;
    for (double eps : {1e-2, 1e-4, 1e-8}) {
        L.push_back(std::log(1.0 / eps));
        n.push_back(arcsin_poly(eps).degree());
    }
    // least-squares affine fit
    double mx = (L[0] + L[1] + L[2]) / 3, my = (n[0] + n[1] + n[2]) / 3, sxy = 0, sxx = 0;
    for (int i = 0; i < 3; ++i) {
        sxy += (L[i] - mx) * (n[i] - my);
        sxx += (L[i] - mx) * (L[i] - mx);
    }
    double b = sxy / sxx, a = my - b * mx;
    EXPECT_GT(b, 0.0);
    for (int i = 0; i < 3; ++i) EXPECT_LE(std::abs(n[i] - (a + b * L[i])), 0.25 * n[i]);
}

TEST(Certify, ExactTargetAndUndersized) {
    auto cert = certify(ChebPoly::T(5), target_cheb(5), {{-1.0, 1.0}}, 1e-14);
    EXPECT_LE(cert.measured_sup_error, 1e-14);
    EXPECT_TRUE(cert.passed());
    auto small = certify(jacobi_anger_exp(20.0, 8), target_exp(20.0), {{-1.0, 1.0}}, 1e-6);
    EXPECT_FALSE(small.passed());
    auto lin = certify_lin(lin_amp_poly(0.25, 1e-3), 0.25, 1e-3);
    EXPECT_TRUE(lin.passed());
    EXPECT_EQ(to_json(lin)["target"], "lin");
}

TEST(Factories, ParitySignOnGrid) {
    std::vector<ChebPoly> ps = {gauss_poly(2.0, 20), erf_poly(2.0, 21), sgn_poly(0.3, 0.0, 1e-3),
                                rect_poly(0.4, 0.3, 1e-3), lin_amp_poly(0.3, 1e-3), gap_amp_poly(0.3, 1e-3),
                                arcsin_poly(1e-4)};
    for (const auto& p : ps) {
        double sign = p.parity() == Parity::odd ? -1.0 : 1.0;
        ASSERT_NE(p.parity(), Parity::none);
        for (int i = 0; i <= 100; ++i) {
            double x = i / 100.0;
            EXPECT_NEAR(p(-x), sign * p(x), 1e-13);
        }
        EXPECT_LE(sup_abs(p), 1.0 + 1e-9);
    }
}
