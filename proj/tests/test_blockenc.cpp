#include <cmath>
#include <cstdio>
#include <numeric>
#include <random>

#include <gtest/gtest.h>

#include "spectramp/blockenc.hpp"
#include "spectramp/chebpoly.hpp"
#include "spectramp/linalg.hpp"
#include "test_util.hpp"

using namespace spectramp;
using testutil::opnorm;
using testutil::pauli;

namespace {

const double pi = std::acos(-1.0);

} // namespace

TEST(Extract, IdentityEncoding) {
    BlockEncoding e;
    e.U = Mat::Identity(3, 3);
    e.n = 3;
    e.alpha = 2.0;
    EXPECT_LT(opnorm(extract_block(e) - Mat::Identity(3, 3)), 1e-15);
    EXPECT_NO_THROW(validate(e));
}

TEST(EncodeDense, DiagonalRoundTrip) {
    Mat h = Mat::Zero(2, 2);
    h(0, 0) = 0.3;
    h(1, 1) = -0.2;
    const auto e = encode_dense(h, 1.0);
    EXPECT_EQ(e.d, 2);
    EXPECT_LT(opnorm(extract_block(e) - h), 1e-12);
    validate(e);
}

TEST(EncodeDense, ZeroMatrix) {
    const auto e = encode_dense(Mat::Zero(4, 4), 1.0);
    EXPECT_LT(opnorm(extract_block(e)), 1e-15);
    validate(e);
}

TEST(EncodeDense, RandomRoundTrip) {
    const Mat h = testutil::random_hermitian(8, 7, 1.7);
    const double alpha = 1.1 * 1.7;
    const auto e = encode_dense(h, alpha);
    EXPECT_LT(opnorm(alpha * extract_block(e) - h), 1e-10);
    EXPECT_LT(unitarity_defect(e.U), 1e-10);
    EXPECT_LT(hermiticity_defect(extract_block(e)), 1e-12);
}

TEST(EncodeDense, AlphaAtNorm) {
    const Mat h = testutil::random_hermitian(6, 8, 0.9);
    const auto e = encode_dense(h, 0.9);
    EXPECT_LT(unitarity_defect(e.U), 1e-9);
    EXPECT_LT(opnorm(0.9 * extract_block(e) - h), 1e-10);
}

TEST(EncodeDense, RejectsSmallAlphaWithNorm) {
    const Mat h = testutil::random_hermitian(4, 9, 2.0);
    try {
        encode_dense(h, 1.0);
        FAIL() << "expected rejection";
    } catch (const PreconditionError& e) {
        EXPECT_NE(std::string(e.what()).find("2.0"), std::string::npos) << e.what();
    }
}

TEST(Lcu, SingleUnitary) {
    const Mat u = testutil::random_unitary(3, 4);
    const auto e = encode_lcu({1.0}, {u});
    EXPECT_LT(opnorm(extract_block(e) - u), 1e-13);
    EXPECT_DOUBLE_EQ(e.alpha, 1.0);
}

TEST(Lcu, TwoPaulis) {
    const auto e = encode_lcu({0.5, 0.5}, {pauli('X'), pauli('Z')});
    const Mat expect = 0.5 * (pauli('X') + pauli('Z'));
    EXPECT_LT(opnorm(extract_block(e) - expect), 1e-14);
    EXPECT_NEAR(opnorm(extract_block(e)), std::sqrt(2.0) / 2, 1e-14);
    EXPECT_DOUBLE_EQ(e.alpha, 1.0);
    EXPECT_TRUE(e.hermitian);
    validate(e);
}

TEST(Lcu, WeightedUnitariesRoundTrip) {
    std::vector<Mat> us = {testutil::random_unitary(4, 1), testutil::random_unitary(4, 2),
                           testutil::random_unitary(4, 3)};
    std::vector<double> w = {0.2, 1.3, 0.5};
    const auto e = encode_lcu(w, us);
    Mat ref = Mat::Zero(4, 4);
    for (int j = 0; j < 3; ++j) ref += w[j] * us[j];
    EXPECT_NEAR(e.alpha, 2.0, 1e-15);
    EXPECT_LT(opnorm(e.alpha * extract_block(e) - ref), 1e-12);
    validate(e);
}

TEST(Lcu, Exponentials) {
    const Mat h1 = 0.3 * pauli('X'), h2 = 0.4 * pauli('Y');
    const auto e = encode_lcu({1.0, 0.5}, {testutil::expm(h1, 1), testutil::expm(h2, 1)});
    const Mat ref = testutil::expm(h1, 1) + 0.5 * testutil::expm(h2, 1);
    EXPECT_LT(opnorm(e.alpha * extract_block(e) - ref), 1e-12);
}

TEST(Lcu, RejectsNonUnitary) {
    Mat bad = pauli('X');
    bad(0, 1) = 0.5;
    EXPECT_THROW(encode_lcu({1.0, 1.0}, {pauli('Z'), bad}), PreconditionError);
    EXPECT_THROW(encode_lcu({0.0, 0.0}, {pauli('Z'), pauli('X')}), PreconditionError);
}

TEST(Sparse, OracleValidation) {
    const Mat h = testutil::random_two_sparse(6, 3);
    const auto o = SparseOracle::from_dense(h);
    EXPECT_EQ(o.d(), 2);
    for (int j = 0; j < 6; ++j) {
        EXPECT_EQ(o.row_size(j), 2);
        for (int l = 0; l < o.row_size(j); ++l) {
            const int k = o.col(j, l);
            EXPECT_NE(h(j, k), cplx(0));
            EXPECT_EQ(o.value(j, k), std::conj(o.value(k, j)));
        }
    }
    std::vector<SparseOracle::Row> rows(2);
    rows[0] = {{1, cplx(0.5, 0.1)}};
    rows[1] = {{0, cplx(0.5, 0.1)}};
    EXPECT_THROW(SparseOracle(2, 1, rows, {}), PreconditionError);
    rows[1] = {{0, cplx(0.5, -0.1)}, {1, 1.0}};
    EXPECT_THROW(SparseOracle(2, 1, rows, {}), PreconditionError);
}

TEST(Sparse, JsonRoundTrip) {
    const auto o = SparseOracle::from_dense(testutil::random_two_sparse(8, 5));
    const auto back = oracle_from_json(nlohmann::json::parse(to_json(o).dump()));
    EXPECT_EQ(back.n(), 8);
    EXPECT_EQ(back.d(), 2);
    EXPECT_LT(opnorm(back.dense() - o.dense()), 1e-15);
    EXPECT_DOUBLE_EQ(back.norms().max_norm, o.norms().max_norm);
}

TEST(Overlap, ScaledIdentity) {
    const double lmax = 0.7;
    const auto o = SparseOracle::from_dense(lmax * Mat::Identity(4, 4));
    const auto b = build_overlap_factors(o);
    EXPECT_EQ(o.d(), 1);
    EXPECT_NEAR(b.encoding.alpha, lmax, 1e-15);
    EXPECT_LT(opnorm(extract_block(b.encoding) - Mat::Identity(4, 4)), 1e-12);
}

TEST(Overlap, FourByFourDense) {
    Mat h(4, 4);
    h << 0.2, cplx(0.1, 0.3), 0, 0, cplx(0.1, -0.3), -0.4, 0, 0, 0, 0, 0, cplx(0, 0.5), 0, 0, cplx(0, -0.5), 0.1;
    const auto o = SparseOracle::from_dense(h);
    ASSERT_EQ(o.d(), 2);
    const auto b = build_overlap_factors(o);
    const double alpha = 2 * o.norms().max_norm;
    EXPECT_NEAR(b.encoding.alpha, alpha, 1e-15);
    EXPECT_LT(opnorm(extract_block(b.encoding) - h / alpha), 1e-10);
}

TEST(Overlap, RandomTwoSparse) {
    for (unsigned seed : {11u, 12u, 13u}) {
        const Mat h = testutil::random_two_sparse(8, seed);
        const auto o = SparseOracle::from_dense(h);
        const auto b = build_overlap_factors(o);
        const auto& f = b.factors;
        EXPECT_LT(opnorm(b.encoding.alpha * extract_block(b.encoding) - h), 1e-10);
        EXPECT_LT(hermiticity_defect(extract_block(b.encoding)), 1e-10);
        EXPECT_LT(unitarity_defect(f.U_row), 1e-10);
        EXPECT_LT(unitarity_defect(f.U_col), 1e-10);
        EXPECT_LT(unitarity_defect(f.U_mix), 1e-10);
        EXPECT_LE(opnorm(extract_block(b.encoding)), o.norms().spectral / b.encoding.alpha + 1e-10);
        EXPECT_GT(f.lambda_beta, 0);
        EXPECT_LE(f.lambda_beta, 1 + 1e-12);
        // the matrix-free factors agree with the dense ones
        EXPECT_LT(opnorm(f.col_op.materialize() - f.U_col), 1e-12);
        EXPECT_LT(opnorm(f.row_op.apply_adjoint(Mat::Identity(f.row_op.dim, f.row_op.dim)) - f.U_row.adjoint()),
                  1e-12);
    }
}

TEST(Overlap, MixActsTriviallyOnFlag) {
    const auto b = build_overlap_factors(SparseOracle::from_dense(testutil::random_two_sparse(4, 2)));
    const Mat& m = b.factors.U_mix;
    const int blk = 16;
    for (int a = 0; a < 3; ++a)
        for (int c = 0; c < 3; ++c)
            if (a != c) EXPECT_LT(m.block(a * blk, c * blk, blk, blk).norm(), 1e-15);
}

TEST(Overlap, ComplexOffDiagonal) {
    Mat h = Mat::Zero(3, 3);
    const cplx v = 0.3 * std::exp(cplx(0, pi / 3));
    h(0, 1) = v;
    h(1, 0) = std::conj(v);
    h(2, 2) = -0.25;
    h(0, 0) = 0.1;
    const auto o = SparseOracle::from_dense(h);
    const auto b = build_overlap_factors(o);
    const Mat blk = extract_block(b.encoding);
    EXPECT_LT(hermiticity_defect(blk), 1e-12);
    EXPECT_LT(opnorm(b.encoding.alpha * blk - h), 1e-10);
}

TEST(Overlap, NegativeDiagonal) {
    Mat h = Mat::Zero(2, 2);
    h(0, 0) = -0.5;
    h(1, 1) = 0.2;
    h(0, 1) = h(1, 0) = cplx(-0.3);
    const auto b = build_overlap_factors(SparseOracle::from_dense(h));
    EXPECT_LT(opnorm(b.encoding.alpha * extract_block(b.encoding) - h), 1e-10);
}

TEST(Overlap, RejectsSmallLambdaMax) {
    const auto o = SparseOracle::from_dense(testutil::random_two_sparse(4, 1));
    SparseNorms s = o.norms();
    s.max_norm *= 0.5;
    try {
        build_overlap_factors(o.with_norms(s));
        FAIL() << "expected rejection";
    } catch (const PreconditionError& e) {
        EXPECT_NE(std::string(e.what()).find("entry ("), std::string::npos) << e.what();
    }
}

TEST(Overlap, InflatedLambdaMaxStillEncodes) {
    const Mat h = testutil::random_two_sparse(6, 21);
    const auto o = SparseOracle::from_dense(h);
    SparseNorms s = o.norms();
    s.max_norm *= 4;
    const auto b = build_overlap_factors(o.with_norms(s));
    EXPECT_NEAR(b.encoding.alpha, 2 * s.max_norm, 1e-14);
    EXPECT_LT(opnorm(b.encoding.alpha * extract_block(b.encoding) - h), 1e-10);
    EXPECT_NEAR(b.factors.lambda_beta, o.norms().one_norm / (2 * s.max_norm), 1e-12);
}

TEST(Exponential, SinEncoding) {
    const Mat h = testutil::random_hermitian(3, 31, 0.5);
    const auto e = encode_sin(testutil::expm(h, 1));
    const Mat v = (cplx(0, -1) * h).exp();
    const Mat ref = cplx(0, 0.5) * (v - v.adjoint());  // sin(H) = i (e^{-iH} - e^{iH}) / 2
    EXPECT_LT(opnorm(extract_block(e) - ref), 1e-12);
    EXPECT_LT(unitarity_defect(e.U), 1e-12);
}

TEST(Exponential, ZeroHamiltonian) {
    const auto r = encode_from_exponential(Mat::Identity(2, 2), 1e-6);
    EXPECT_LT(opnorm(extract_block(r.encoding)), 1e-12);
}

TEST(Exponential, PauliZ) {
    const Mat h = 0.4 * pauli('Z');
    const auto r = encode_from_exponential(testutil::expm(h, 1), 1e-6, &h);
    EXPECT_LE(opnorm(extract_block(r.encoding) - h), 1e-6);
    EXPECT_EQ(r.encoding.alpha, 1.0);
    EXPECT_LT(unitarity_defect(r.encoding.U), 1e-10);
}

TEST(Exponential, RandomFourByFour) {
    const Mat h = testutil::random_hermitian(4, 41, 0.5);
    const auto r = encode_from_exponential(testutil::expm(h, 1), 1e-8, &h);
    EXPECT_LE(opnorm(extract_block(r.encoding) - h), 1e-8);
    EXPECT_GT(r.degree, 0);
    EXPECT_EQ(r.encoding.cost, 2L * static_cast<long>(r.degree));
}

TEST(Exponential, DegreeIsLogarithmic) {
    std::vector<int> deg;
    for (double eps : {1e-2, 1e-4, 1e-8}) deg.push_back(arcsin_poly(eps).degree());
    // affine in log(1/eps): degree added per decade stays within a factor 2
    const double s1 = (deg[1] - deg[0]) / 2.0, s2 = (deg[2] - deg[1]) / 4.0;
    EXPECT_GT(s1, 0);
    EXPECT_LT(s2, 2 * s1);
    EXPECT_GT(s2, 0.5 * s1);
}

TEST(Exponential, RejectsLargeNorm) {
    const Mat h = 0.8 * pauli('X');
    EXPECT_THROW(encode_from_exponential(testutil::expm(h, 1), 1e-4, &h), PreconditionError);
}

TEST(Container, RoundTrip) {
    const auto e = encode_dense(testutil::random_hermitian(3, 5, 0.5), 0.75);
    const std::string path = ::testing::TempDir() + "spectramp_enc.bin";
    write_encoding(path, e);
    const auto back = read_encoding(path);
    EXPECT_EQ(back.d, 2);
    EXPECT_EQ(back.n, 3);
    EXPECT_DOUBLE_EQ(back.alpha, 0.75);
    EXPECT_TRUE(back.hermitian);
    EXPECT_EQ((back.U - e.U).norm(), 0.0);
    std::remove(path.c_str());
}

TEST(Property, CompositionsStayUnitary) {
    const auto a = encode_dense(testutil::random_hermitian(4, 51, 0.8), 1.0);
    const Mat u = testutil::random_unitary(8, 52);
    EXPECT_LT(unitarity_defect(a.U * u * a.U.adjoint()), 1e-10);
    EXPECT_LT(unitarity_defect(kron(Mat::Identity(3, 3), a.U)), 1e-10);
    Mat ctrl = Mat::Identity(16, 16);
    ctrl.bottomRightCorner(8, 8) = a.U;
    EXPECT_LT(unitarity_defect(ctrl), 1e-10);
}
