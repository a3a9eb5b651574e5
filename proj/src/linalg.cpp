#include "spectramp/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SVD>

namespace spectramp {

Mat kron(const Mat& a, const Mat& b) {
    Mat out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

double spectral_norm(const Mat& m) {
    if (m.size() == 0) return 0.0;
    return Eigen::JacobiSVD<Mat>(m).singularValues()(0);
}

double unitarity_defect(const Mat& u) {
    return spectral_norm(u.adjoint() * u - Mat::Identity(u.cols(), u.cols()));
}

double hermiticity_defect(const Mat& m) { return spectral_norm(m - m.adjoint()); }

Mat hermitian_part(const Mat& m) { return 0.5 * (m + m.adjoint()); }

Mat herm_function(const Mat& h, const std::function<cplx(double)>& f) {
    Eigen::SelfAdjointEigenSolver<Mat> es(hermitian_part(h));
    const Mat& v = es.eigenvectors();
    Vec fl(v.cols());
    for (Eigen::Index k = 0; k < v.cols(); ++k) fl(k) = f(es.eigenvalues()(k));
    return v * fl.asDiagonal() * v.adjoint();
}

Mat expm_herm(const Mat& h, double t) {
    return herm_function(h, [t](double l) { return std::exp(cplx(0, -l * t)); });
}

Mat complete_isometry(const Mat& v) {
    const Eigen::Index dim = v.rows(), k = v.cols();
    Eigen::HouseholderQR<Mat> qr(v);
    Mat q = qr.householderQ() * Mat::Identity(dim, dim);
    // R is diagonal and unitary for orthonormal v; the leading columns are replaced by v exactly
    q.leftCols(k) = v;
    return q;
}

Mat phase_reflection(const Vec& s, double angle) {
    const cplx f = 1.0 - std::exp(cplx(0, -angle));
    return Mat::Identity(s.size(), s.size()) - f * s * s.adjoint();
}

} // namespace spectramp
