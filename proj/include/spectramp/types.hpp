#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace spectramp {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using RMat = Eigen::MatrixXd;
using RVec = Eigen::VectorXd;

/// Thrown when an input violates a documented precondition.
class PreconditionError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// Thrown when a numerical stage misses its residual tolerance.
class NumericalError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Working-precision policy for polynomial construction and phase synthesis.
/// `automatic` uses binary64 up to degree 60 and extended precision above.
enum class Precision { automatic, f64, extended };

/// Reads SPECTRAMP_PRECISION (unset, "f64" or "extended").
Precision precision_from_env();

/// True when a construction of the given degree should run in extended precision.
bool use_extended(int degree);

} // namespace spectramp
