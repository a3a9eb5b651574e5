#include <cmath>
#include <random>

#include <Eigen/Eigenvalues>
#include <gtest/gtest.h>

#include "spectramp/chebpoly.hpp"
#include "spectramp/linalg.hpp"
#include "spectramp/qubitization.hpp"
#include "test_util.hpp"

using namespace spectramp;
using testutil::opnorm;

namespace {

const double pi = std::acos(-1.0);

PhaseSequence random_phases(int n, unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> u(-pi, pi);
    PhaseSequence p;
    for (int i = 0; i < n; ++i) p.phases.push_back(u(rng));
    return p;
}

// e^{-i sigma_phi theta} with sigma_phi = cos(phi) X + sin(phi) Y
Mat rotation(double phi, double theta) {
    const Mat s = std::cos(phi) * testutil::pauli('X') + std::sin(phi) * testutil::pauli('Y');
    return std::cos(theta) * Mat::Identity(2, 2) - cplx(0, std::sin(theta)) * s;
}

// Restriction of the qubiterate to span{|0_b v>, |1_b v>} for an eigenvector v.
Mat restrict_2d(const Mat& w, const Vec& v) {
    const auto n = v.size();
    Mat basis = Mat::Zero(2 * n, 2);
    basis.col(0).head(n) = v;
    basis.col(1).tail(n) = v;
    return basis.adjoint() * w * basis;
}

} // namespace

TEST(Qubiterate, HalfZRotations) {
    const auto enc = encode_dense(0.5 * testutil::pauli('Z'), 1.0);
    const auto q = qubiterate(enc, 0.0);
    EXPECT_LT(unitarity_defect(q.W), 1e-13);
    Vec e0 = Vec::Zero(2), e1 = Vec::Zero(2);
    e0(0) = 1;
    e1(1) = 1;
    const Mat r0 = restrict_2d(q.W, e0), r1 = restrict_2d(q.W, e1);
    EXPECT_LT(opnorm(r0 - rotation(0, std::acos(0.5))), 1e-12);
    EXPECT_LT(opnorm(r1 - rotation(0, std::acos(-0.5))), 1e-12);
    // the 2D subspaces are invariant: the restriction is itself unitary
    EXPECT_LT(unitarity_defect(r0), 1e-12);
}

TEST(Qubiterate, PhasedRotationsOnRandomEigenbasis) {
    const Mat h = testutil::random_hermitian(4, 3, 0.9);
    const auto enc = encode_dense(h, 1.0);
    const double phi = 0.7;
    const auto q = qubiterate(enc, phi);
    Eigen::SelfAdjointEigenSolver<Mat> es(h);
    for (int k = 0; k < 4; ++k) {
        const double lam = es.eigenvalues()(k);
        EXPECT_LT(opnorm(restrict_2d(q.W, es.eigenvectors().col(k)) - rotation(phi, std::acos(lam))), 1e-10);
    }
}

TEST(Qubiterate, EigenvalueOneEdge) {
    Mat h = Mat::Zero(2, 2);
    h(0, 0) = 1.0;
    h(1, 1) = -1.0;
    const auto enc = encode_dense(h, 1.0);
    const auto q = qubiterate(enc, 0.4);
    Vec e0 = Vec::Zero(2), e1 = Vec::Zero(2);
    e0(0) = 1;
    e1(1) = 1;
    EXPECT_LT(opnorm(restrict_2d(q.W, e0) - Mat::Identity(2, 2)), 1e-12);
    EXPECT_LT(opnorm(restrict_2d(q.W, e1) + Mat::Identity(2, 2)), 1e-12);
    EXPECT_LT(unitarity_defect(q.W), 1e-12);
}

TEST(Qubiterate, BlockMatchesSource) {
    const Mat h = testutil::random_hermitian(5, 9, 1.3);
    const auto enc = encode_dense(h, 1.5);
    const auto e = qubiterate(enc, -1.1).as_encoding();
    EXPECT_LT(opnorm(extract_block(e) - extract_block(enc)), 1e-12);
    EXPECT_EQ(e.d, 4);
    EXPECT_DOUBLE_EQ(e.alpha, 1.5);
    validate(e);
}

TEST(Qubiterate, RejectsNonHermitian) {
    BlockEncoding e;
    e.U = testutil::random_unitary(4, 1);
    e.n = 2;
    e.d = 2;
    EXPECT_THROW(qubiterate(e, 0.0), PreconditionError);
    e.hermitian = true;
    EXPECT_THROW(qubiterate(e, 0.0), PreconditionError);
}

TEST(Qubiterate, CircuitCrossCheck) {
    // the dilation [[h, s], [s, -h]] is a Hermitian unitary, so the reflection circuit applies
    const Mat h = testutil::random_hermitian(3, 17, 0.8);
    const auto enc = encode_dense(h, 1.0);
    const PhaseSequence phi = random_phases(5, 23);
    Mat prod = Mat::Identity(6, 6);
    for (double p : phi.phases) prod = full_unitary(qubiterate_circuit(enc, p)) * prod;
    const Mat spectral = extract_block(composite_qubiterate(enc, phi));
    EXPECT_LT(opnorm(prod.topLeftCorner(3, 3) - spectral), 1e-10);
    EXPECT_LT(unitarity_defect(prod), 1e-12);
}

TEST(Composite, SinglePhaseIsIdentityTransform) {
    const Mat h = testutil::random_hermitian(4, 5, 0.6);
    const auto enc = encode_dense(h, 1.0);
    PhaseSequence p;
    p.phases = {0.0};
    const auto c = composite_qubiterate(enc, p);
    EXPECT_LT(opnorm(extract_block(c) - h), 1e-12);
    EXPECT_EQ(c.cost, 1);
    EXPECT_EQ(c.d, 4);
}

TEST(Composite, FunctionalCalculus) {
    const Mat h = testutil::random_hermitian(4, 6, 0.95);
    const auto enc = encode_dense(h, 1.0);
    const PhaseSequence phi = random_phases(7, 8);
    const auto c = composite_qubiterate(enc, phi);
    Eigen::SelfAdjointEigenSolver<Mat> es(h);
    Vec diag(4);
    for (int k = 0; k < 4; ++k) {
        const auto x = rotation_components(phi, std::acos(es.eigenvalues()(k)));
        diag(k) = cplx(x.A, x.B);
    }
    const Mat ref = es.eigenvectors() * diag.asDiagonal() * es.eigenvectors().adjoint();
    const Mat blk = extract_block(c);
    EXPECT_LT(opnorm(blk - ref), 1e-9);
    EXPECT_LT(opnorm(blk * h - h * blk), 1e-9);
    EXPECT_EQ(c.cost, 7);
    validate(c);
}

TEST(Composite, MatchesProductOfQubiterates) {
    const Mat h = testutil::random_hermitian(3, 12, 0.7);
    const auto enc = encode_dense(h, 1.0);
    const PhaseSequence phi = random_phases(4, 13);
    Mat prod = Mat::Identity(6, 6);
    for (double p : phi.phases) prod = qubiterate(enc, p).W * prod;
    EXPECT_LT(opnorm(prod - composite_qubiterate(enc, phi).U), 1e-11);
}

TEST(Flexible, IdentityPolynomial) {
    const Mat h = testutil::random_hermitian(4, 14, 0.8);
    const auto enc = encode_dense(h, 1.0);
    const auto f = flexible_qsp_apply(enc, ChebPoly::T(1));
    EXPECT_LT(opnorm(extract_block(f) - h), 1e-10);
    EXPECT_EQ(f.d, 8);
    EXPECT_DOUBLE_EQ(f.alpha, 1.0);
    validate(f);
}

TEST(Flexible, ThirdChebyshev) {
    const Mat h = testutil::random_hermitian(5, 15, 2.0);
    const auto enc = encode_dense(h, 2.5);
    const Mat x = h / 2.5;
    const Mat ref = 4.0 * x * x * x - 3.0 * x;
    const auto f = flexible_qsp_apply(enc, ChebPoly::T(3));
    EXPECT_LT(opnorm(extract_block(f) - ref), 1e-9);
    EXPECT_LT(hermiticity_defect(extract_block(f)), 1e-10);
    EXPECT_EQ(f.cost, 3);
}

TEST(Flexible, LinearAmplification) {
    const Mat h = testutil::random_hermitian(4, 16, 0.2);
    const auto enc = encode_dense(h, 1.0);
    const ChebPoly p = lin_amp_poly(0.25, 1e-4);
    const auto f = flexible_qsp_apply(enc, p);
    EXPECT_LT(opnorm(extract_block(f) - testutil::matrix_cheb(p, h)), 1e-9);
    // inside the window the block is close to H / (2 Gamma)
    EXPECT_LT(opnorm(extract_block(f) - h / 0.5), 1e-4 * 0.2 / 0.5 + 1e-9);
}

TEST(Flexible, EvenPolynomialWithoutZeroCheck) {
    const Mat h = testutil::random_hermitian(3, 18, 0.9);
    const auto enc = encode_dense(h, 1.0);
    const ChebPoly p({0.3, 0, 0.4}, Parity::even);
    FlexibleOptions opt;
    opt.require_zero_at_origin = false;
    const auto f = flexible_qsp_apply(enc, p, opt);
    EXPECT_LT(opnorm(extract_block(f) - testutil::matrix_cheb(p, h)), 1e-9);
    validate(f);
}

TEST(Flexible, RejectsMixedParity) {
    const auto enc = encode_dense(testutil::random_hermitian(2, 1, 0.5), 1.0);
    EXPECT_THROW(flexible_qsp_apply(enc, ChebPoly({0.0, 0.3, 0.2})), PreconditionError);
}

TEST(HamSim, ZeroTime) {
    const auto enc = encode_dense(testutil::random_hermitian(4, 2, 0.5), 0.5);
    const auto r = hamsim_qubitization(enc, 0.0, 1e-6);
    EXPECT_EQ((extract_block(r.encoding) - Mat::Identity(4, 4)).norm(), 0.0);
    EXPECT_EQ(r.report.queries, 0);
}

TEST(HamSim, RandomEightByEight) {
    const Mat h = testutil::random_hermitian(8, 19, 1.0);
    const auto enc = encode_dense(h, 1.0);
    const auto r = hamsim_qubitization(enc, 2.0, 1e-8);
    const double err = opnorm(extract_block(r.encoding) - testutil::expm(h, 2.0));
    EXPECT_LE(err, 1e-8);
    EXPECT_NEAR(r.report.error_measured, err, 1e-12);
    EXPECT_TRUE(r.report.passed());
    EXPECT_LT(unitarity_defect(r.encoding.U), 1e-10);
    EXPECT_EQ(r.encoding.d, 8 * enc.d);
}

TEST(HamSim, ScaledNormalization) {
    const Mat h = testutil::random_hermitian(4, 20, 2.0);
    const auto enc = encode_dense(h, 3.0);
    const auto r = hamsim_qubitization(enc, 1.5, 1e-6);
    EXPECT_LE(opnorm(extract_block(r.encoding) - testutil::expm(h, 1.5)), 1e-6);
    EXPECT_NEAR(r.report.meta["tau"].get<double>(), 4.5, 1e-15);
}

TEST(HamSim, DegreeAffineInTime) {
    const Mat h = testutil::random_hermitian(2, 21, 1.0);
    const auto enc = encode_dense(h, 1.0);
    std::vector<double> ts = {2, 4, 8, 16};
    std::vector<int> deg;
    for (double t : ts) {
        const auto r = hamsim_qubitization(enc, t, 1e-6);
        EXPECT_LE(r.report.error_measured, 1e-6) << "t = " << t;
        deg.push_back(r.report.degree());
    }
    std::vector<double> slope;
    for (int i = 0; i + 1 < 4; ++i) slope.push_back((deg[i + 1] - deg[i]) / (ts[i + 1] - ts[i]));
    const auto [lo, hi] = std::minmax_element(slope.begin(), slope.end());
    EXPECT_GT(*lo, 0);
    EXPECT_LE(*hi, 2 * *lo);
}
