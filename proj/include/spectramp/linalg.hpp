#pragma once
// Dense helpers shared by the encoding modules. Register convention everywhere:
// ancilla (x) system with the ancilla index major, index = a * n + s.

#include <functional>

#include "spectramp/types.hpp"

namespace spectramp {

Mat kron(const Mat& a, const Mat& b);

double spectral_norm(const Mat& m);
/// ||U^dagger U - I|| in the operator norm.
double unitarity_defect(const Mat& u);
double hermiticity_defect(const Mat& m);
Mat hermitian_part(const Mat& m);

/// f(H) for Hermitian H through its eigendecomposition.
Mat herm_function(const Mat& h, const std::function<cplx(double)>& f);
/// e^{-i H t} for Hermitian H.
Mat expm_herm(const Mat& h, double t);

/// Unitary whose leading columns are the orthonormal columns of v.
Mat complete_isometry(const Mat& v);

/// Rank-one phase reflection I - (1 - e^{-i angle}) |s><s| for a unit vector s.
Mat phase_reflection(const Vec& s, double angle);

} // namespace spectramp
