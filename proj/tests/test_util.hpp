#pragma once
// Test-side helpers. The matrix exponential here goes through Eigen's Pade/scaling-squaring
// implementation, independent of the eigendecomposition used by the library.

#include <algorithm>
#include <numeric>
#include <random>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include "spectramp/types.hpp"

namespace testutil {

using spectramp::cplx;
using spectramp::Mat;

inline Mat random_complex(int n, std::mt19937& rng) {
    std::normal_distribution<double> g;
    Mat m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m(i, j) = cplx(g(rng), g(rng));
    return m;
}

/// Random Hermitian matrix scaled to the given operator norm.
inline Mat random_hermitian(int n, unsigned seed, double norm = 1.0) {
    std::mt19937 rng(seed);
    Mat a = random_complex(n, rng);
    Mat h = 0.5 * (a + a.adjoint());
    Eigen::SelfAdjointEigenSolver<Mat> es(h, Eigen::EigenvaluesOnly);
    return h * (norm / es.eigenvalues().cwiseAbs().maxCoeff());
}

inline Mat random_unitary(int n, unsigned seed) {
    std::mt19937 rng(seed);
    Eigen::HouseholderQR<Mat> qr(random_complex(n, rng));
    return qr.householderQ() * Mat::Identity(n, n);
}

/// e^{-i H t} by Pade approximation.
inline Mat expm(const Mat& h, double t) {
    Mat a = cplx(0, -t) * h;
    return a.exp();
}

inline double opnorm(const Mat& m) { return m.jacobiSvd().singularValues()(0); }

inline Mat pauli(char p) {
    Mat m(2, 2);
    switch (p) {
    case 'X': m << 0, 1, 1, 0; break;
    case 'Y': m << 0, cplx(0, -1), cplx(0, 1), 0; break;
    case 'Z': m << 1, 0, 0, -1; break;
    default: m.setIdentity();
    }
    return m;
}

/// Sum of c_j T_j(x) evaluated on a matrix by the three-term recurrence.
template <class Poly>
Mat matrix_cheb(const Poly& p, const Mat& x) {
    const auto n = x.rows();
    Mat t0 = Mat::Identity(n, n), t1 = x;
    Mat out = p.coeff(0) * t0;
    if (p.degree() >= 1) out += p.coeff(1) * t1;
    for (int j = 2; j <= p.degree(); ++j) {
        Mat t2 = 2.0 * x * t1 - t0;
        out += p.coeff(j) * t2;
        t0 = std::move(t1);
        t1 = std::move(t2);
    }
    return out;
}

// Rows paired by a random perfect matching; each row holds its diagonal and its partner.
inline Mat random_two_sparse(int n, unsigned seed) {
    std::mt19937 rng(seed);
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    std::uniform_real_distribution<double> u(-1, 1);
    Mat h = Mat::Zero(n, n);
    for (int j = 0; j < n; ++j) h(j, j) = u(rng);
    for (int k = 0; k + 1 < n; k += 2) {
        const cplx v(u(rng), u(rng));
        h(perm[k], perm[k + 1]) = v;
        h(perm[k + 1], perm[k]) = std::conj(v);
    }
    return h;
}

} // namespace testutil
