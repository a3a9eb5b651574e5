#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "spectramp/types.hpp"

namespace spectramp {

/// Standard-form encoding: (<0|_a (x) I) U (|0>_a (x) I) = H / alpha.
///
/// Only the leading `stored_ancilla()` ancilla levels of U are kept; the declared ancilla
/// dimension `d` may be larger, in which case U acts as the identity on the remaining levels.
/// Encodings built by qubitization are identity outside a small active slice, so this keeps
/// their storage at a few times n.
struct BlockEncoding {
    Mat U;
    int d = 1;
    int n = 1;
    double alpha = 1.0;
    bool hermitian = false;
    /// Queries to the underlying oracle per application of U.
    long cost = 1;

    int stored_ancilla() const { return static_cast<int>(U.rows()) / n; }
};

Mat extract_block(const BlockEncoding& enc);
/// U with the identity on undeclared levels filled in; dimension d * n.
Mat full_unitary(const BlockEncoding& enc);
/// Checks the type invariants; throws NumericalError naming the first failure.
void validate(const BlockEncoding& enc, double tol = 1e-10);

/// d = 2 dilation [[H/a, S], [S, -H/a]] with S = sqrt(I - (H/a)^2).
BlockEncoding encode_dense(const Mat& H, double alpha);

/// G^dagger SELECT G with G|0> = sum_j sqrt(alpha_j / alpha)|j>; the index register is the ancilla.
BlockEncoding encode_lcu(const std::vector<double>& alphas, const std::vector<Mat>& unitaries);

/// Turns an encoding on (index (x) system) into one on the system alone by sandwiching it with the
/// preparation of sqrt(alpha_j / alpha)|j>; the index register joins the ancilla as its minor part.
/// The result encodes sum_j alpha_j B_jj where B_jj are the diagonal index blocks.
BlockEncoding absorb_index(const std::vector<double>& alphas, const BlockEncoding& inner);

/// Unitary on C^m whose first column is sqrt(alpha_j / sum alpha).
Mat prepare_weights(const std::vector<double>& alphas);

struct SparseNorms {
    double max_norm = 0;  // Lambda_max >= max |H_jk|
    double one_norm = 0;  // Lambda_1 >= max_j sum_k |H_jk|
    double spectral = 0;  // Lambda >= ||H||
};

/// Row-wise sparse Hermitian matrix behind the value and column-index oracles.
class SparseOracle {
  public:
    using Row = std::vector<std::pair<int, cplx>>;

    SparseOracle(int n, int d, std::vector<Row> rows, SparseNorms norms);

    /// Exact norms; d defaults to the largest row population.
    static SparseOracle from_dense(const Mat& H, int d = 0, double drop = 0.0);

    int n() const { return n_; }
    int d() const { return d_; }
    const SparseNorms& norms() const { return norms_; }
    SparseOracle with_norms(SparseNorms norms) const;

    cplx value(int j, int k) const;
    /// Column of the l-th nonzero of row j, l < row_size(j).
    int col(int j, int l) const;
    int row_size(int j) const { return static_cast<int>(rows_[j].size()); }
    const Row& row(int j) const { return rows_[j]; }

    Mat dense() const;
    SparseNorms exact_norms() const;

  private:
    int n_;
    int d_;
    std::vector<Row> rows_;
    SparseNorms norms_;
};

nlohmann::json to_json(const SparseOracle& o);
SparseOracle oracle_from_json(const nlohmann::json& j);

/// Matrix-free view of a unitary.
struct LinearOp {
    Eigen::Index dim = 0;
    std::function<Mat(const Mat&)> apply;
    std::function<Mat(const Mat&)> apply_adjoint;

    static LinearOp dense(Mat u);
    Mat materialize() const;
};

/// Factors on the register a2 (x) a1 (x) s with dimensions 3, n, n (a2 major).
/// a2 = 0 flags the overlap component; a2 = 1 carries the column-side remainder, a2 = 2 the row side.
struct OverlapFactors {
    Mat U_row, U_col, U_mix;
    LinearOp row_op, col_op;
    double lambda_beta = 1;
    double lambda_gamma = 1;
    double alpha = 1;  // d * Lambda_max
    int n = 1;
    int sparsity = 1;
};

struct OverlapBuild {
    OverlapFactors factors;
    BlockEncoding encoding;  // U_row^dagger U_mix U_col, ancilla dimension 3n
};

/// With materialize = false the composite encoding is left empty (U has no rows).
OverlapBuild build_overlap_factors(const SparseOracle& oracle, bool materialize = true);

/// Encodes H_lin with ||H_lin - H|| <= eps from V = e^{-iH}, ||H|| <= 1/2: the one-query encoding of
/// sin(H) followed by flexible QSP with the arcsin polynomial. `reference`, when given, is used to
/// check the norm promise.
struct ExpEncoding {
    BlockEncoding encoding;
    int degree = 0;
};
ExpEncoding encode_from_exponential(const Mat& V, double eps, const Mat* reference = nullptr);

/// Encoding of sin(H) from V = e^{-iH}; ancilla dimension 2, two queries to controlled V.
BlockEncoding encode_sin(const Mat& V);

/// Binary container: JSON header line followed by row-major complex128 data.
void write_matrix(const std::string& path, const Mat& m, const nlohmann::json& header = {});
Mat read_matrix(const std::string& path, nlohmann::json* header = nullptr);
void write_encoding(const std::string& path, const BlockEncoding& enc);
BlockEncoding read_encoding(const std::string& path);

} // namespace spectramp
