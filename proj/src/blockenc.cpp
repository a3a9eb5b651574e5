#include "spectramp/blockenc.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <memory>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include "spectramp/chebpoly.hpp"
#include "spectramp/linalg.hpp"
#include "spectramp/qubitization.hpp"

namespace spectramp {

Mat extract_block(const BlockEncoding& enc) { return enc.U.topLeftCorner(enc.n, enc.n); }

Mat full_unitary(const BlockEncoding& enc) {
    const Eigen::Index dim = static_cast<Eigen::Index>(enc.d) * enc.n;
    if (enc.U.rows() == dim) return enc.U;
    Mat u = Mat::Identity(dim, dim);
    u.topLeftCorner(enc.U.rows(), enc.U.cols()) = enc.U;
    return u;
}

void validate(const BlockEncoding& enc, double tol) {
    if (enc.U.rows() != enc.U.cols() || enc.U.rows() % enc.n != 0 || enc.stored_ancilla() > enc.d)
        throw NumericalError("encoding shape is inconsistent with d and n");
    if (!(enc.alpha > 0)) throw NumericalError("encoding normalization must be positive");
    const double u = unitarity_defect(enc.U);
    if (u > tol) throw NumericalError("encoding is not unitary: defect " + std::to_string(u));
    const Mat b = extract_block(enc);
    const double nb = spectral_norm(b);
    if (nb > 1 + tol) throw NumericalError("block norm exceeds 1: " + std::to_string(nb));
    if (enc.hermitian) {
        const double h = hermiticity_defect(b);
        if (h > tol) throw NumericalError("block flagged Hermitian has defect " + std::to_string(h));
    }
}

BlockEncoding encode_dense(const Mat& H, double alpha) {
    if (H.rows() != H.cols()) throw PreconditionError("encode_dense needs a square matrix");
    if (hermiticity_defect(H) > 1e-12 * std::max(1.0, spectral_norm(H)))
        throw PreconditionError("encode_dense needs a Hermitian matrix");
    Eigen::SelfAdjointEigenSolver<Mat> es(hermitian_part(H));
    const RVec& ev = es.eigenvalues();
    const double norm = ev.size() ? std::max(std::abs(ev(0)), std::abs(ev(ev.size() - 1))) : 0.0;
    if (!(alpha > 0) || norm > alpha * (1 + 1e-12))
        throw PreconditionError("encode_dense: alpha " + std::to_string(alpha) + " is below ||H|| = " +
                                std::to_string(norm));
    const Eigen::Index n = H.rows();
    Vec h(n), s(n);
    for (Eigen::Index k = 0; k < n; ++k) {
        const double x = std::clamp(ev(k) / alpha, -1.0, 1.0);
        h(k) = x;
        s(k) = std::sqrt(std::max(0.0, 1.0 - x * x));
    }
    const Mat& v = es.eigenvectors();
    const Mat hb = v * h.asDiagonal() * v.adjoint();
    const Mat sb = v * s.asDiagonal() * v.adjoint();
    BlockEncoding enc;
    enc.U.resize(2 * n, 2 * n);
    enc.U << hb, sb, sb, -hb;
    enc.d = 2;
    enc.n = static_cast<int>(n);
    enc.alpha = alpha;
    enc.hermitian = true;
    return enc;
}

Mat prepare_weights(const std::vector<double>& alphas) {
    double total = 0;
    for (double a : alphas) {
        if (!(a >= 0)) throw PreconditionError("LCU weights must be nonnegative");
        total += a;
    }
    if (!(total > 0)) throw PreconditionError("LCU weights are all zero");
    Mat v(alphas.size(), 1);
    for (std::size_t j = 0; j < alphas.size(); ++j) v(j, 0) = std::sqrt(alphas[j] / total);
    return complete_isometry(v);
}

BlockEncoding absorb_index(const std::vector<double>& alphas, const BlockEncoding& inner) {
    const int m = static_cast<int>(alphas.size());
    if (m == 0 || inner.n % m != 0) throw PreconditionError("index register does not divide the system");
    const int ns = inner.n / m;
    double total = 0;
    for (double a : alphas) total += a;
    const Mat w = prepare_weights(alphas);
    const int stored = inner.stored_ancilla();
    const Mat g = kron(kron(Mat::Identity(stored, stored), w), Mat::Identity(ns, ns));
    BlockEncoding out;
    out.U = g.adjoint() * inner.U * g;
    out.d = inner.d * m;
    out.n = ns;
    out.alpha = total * inner.alpha;
    out.hermitian = inner.hermitian;
    out.cost = inner.cost;
    return out;
}

BlockEncoding encode_lcu(const std::vector<double>& alphas, const std::vector<Mat>& unitaries) {
    if (alphas.size() != unitaries.size() || unitaries.empty())
        throw PreconditionError("encode_lcu needs one weight per unitary");
    const Eigen::Index n = unitaries.front().rows();
    const Eigen::Index m = static_cast<Eigen::Index>(unitaries.size());
    Mat select = Mat::Zero(m * n, m * n);
    bool hermitian = true;
    for (Eigen::Index j = 0; j < m; ++j) {
        const Mat& u = unitaries[j];
        if (u.rows() != n || u.cols() != n) throw PreconditionError("encode_lcu: unitaries differ in size");
        const double def = unitarity_defect(u);
        if (def > 1e-10)
            throw PreconditionError("encode_lcu: input " + std::to_string(j) + " is not unitary (defect " +
                                    std::to_string(def) + ")");
        if (hermiticity_defect(u) > 1e-12) hermitian = false;
        select.block(j * n, j * n, n, n) = u;
    }
    BlockEncoding inner;
    inner.U = select;
    inner.d = 1;
    inner.n = static_cast<int>(m * n);
    inner.alpha = 1.0;
    inner.hermitian = hermitian;
    return absorb_index(alphas, inner);
}

SparseOracle::SparseOracle(int n, int d, std::vector<Row> rows, SparseNorms norms)
    : n_(n), d_(d), rows_(std::move(rows)), norms_(norms) {
    if (n < 1 || d < 1) throw PreconditionError("sparse oracle needs n >= 1 and d >= 1");
    if (static_cast<int>(rows_.size()) != n) throw PreconditionError("sparse oracle needs n rows");
    for (int j = 0; j < n; ++j) {
        auto& r = rows_[j];
        std::sort(r.begin(), r.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
        if (static_cast<int>(r.size()) > d)
            throw PreconditionError("row " + std::to_string(j) + " has more than d nonzeros");
        for (std::size_t l = 0; l < r.size(); ++l) {
            if (r[l].first < 0 || r[l].first >= n) throw PreconditionError("column index out of range");
            if (l > 0 && r[l].first == r[l - 1].first) throw PreconditionError("duplicate column index");
        }
    }
    for (int j = 0; j < n; ++j)
        for (const auto& [k, v] : rows_[j])
            if (std::abs(value(k, j) - std::conj(v)) > 1e-12 * std::max(1.0, std::abs(v)))
                throw PreconditionError("oracle is not Hermitian at (" + std::to_string(j) + ", " +
                                        std::to_string(k) + ")");
}

SparseOracle SparseOracle::from_dense(const Mat& H, int d, double drop) {
    const int n = static_cast<int>(H.rows());
    std::vector<Row> rows(n);
    int widest = 1;
    for (int j = 0; j < n; ++j) {
        for (int k = 0; k < n; ++k)
            if (std::abs(H(j, k)) > drop) rows[j].emplace_back(k, H(j, k));
        widest = std::max(widest, static_cast<int>(rows[j].size()));
    }
    if (d == 0) d = widest;
    SparseOracle o(n, d, std::move(rows), {});
    o.norms_ = o.exact_norms();
    return o;
}

SparseOracle SparseOracle::with_norms(SparseNorms norms) const {
    SparseOracle o = *this;
    o.norms_ = norms;
    return o;
}

cplx SparseOracle::value(int j, int k) const {
    const auto& r = rows_.at(j);
    auto it = std::lower_bound(r.begin(), r.end(), k, [](const auto& e, int c) { return e.first < c; });
    return (it != r.end() && it->first == k) ? it->second : cplx(0);
}

int SparseOracle::col(int j, int l) const { return rows_.at(j).at(l).first; }

Mat SparseOracle::dense() const {
    Mat h = Mat::Zero(n_, n_);
    for (int j = 0; j < n_; ++j)
        for (const auto& [k, v] : rows_[j]) h(j, k) = v;
    return h;
}

SparseNorms SparseOracle::exact_norms() const {
    SparseNorms s;
    for (const auto& r : rows_) {
        double row = 0;
        for (const auto& e : r) {
            s.max_norm = std::max(s.max_norm, std::abs(e.second));
            row += std::abs(e.second);
        }
        s.one_norm = std::max(s.one_norm, row);
    }
    Eigen::SelfAdjointEigenSolver<Mat> es(dense(), Eigen::EigenvaluesOnly);
    s.spectral = es.eigenvalues().cwiseAbs().maxCoeff();
    return s;
}

nlohmann::json to_json(const SparseOracle& o) {
    nlohmann::json entries = nlohmann::json::array();
    for (int j = 0; j < o.n(); ++j)
        for (const auto& [k, v] : o.row(j)) entries.push_back({j, k, v.real(), v.imag()});
    const auto& s = o.norms();
    return {{"n", o.n()},
            {"d", o.d()},
            {"entries", entries},
            {"norms", {{"max_norm", s.max_norm}, {"one_norm", s.one_norm}, {"spectral", s.spectral}}}};
}

SparseOracle oracle_from_json(const nlohmann::json& j) {
    const int n = j.at("n").get<int>();
    const int d = j.at("d").get<int>();
    std::vector<SparseOracle::Row> rows(n);
    for (const auto& e : j.at("entries")) {
        const int r = e.at(0).get<int>();
        if (r < 0 || r >= n) throw PreconditionError("entry row out of range");
        rows[r].emplace_back(e.at(1).get<int>(), cplx(e.at(2).get<double>(), e.at(3).get<double>()));
    }
    SparseOracle o(n, d, std::move(rows), {});
    SparseNorms s = o.exact_norms();
    if (j.contains("norms")) {
        const auto& nj = j.at("norms");
        s.max_norm = nj.value("max_norm", s.max_norm);
        s.one_norm = nj.value("one_norm", s.one_norm);
        s.spectral = nj.value("spectral", s.spectral);
    }
    return o.with_norms(s);
}

LinearOp LinearOp::dense(Mat u) {
    auto m = std::make_shared<const Mat>(std::move(u));
    LinearOp op;
    op.dim = m->rows();
    op.apply = [m](const Mat& x) -> Mat { return *m * x; };
    op.apply_adjoint = [m](const Mat& x) -> Mat { return m->adjoint() * x; };
    return op;
}

Mat LinearOp::materialize() const { return apply(Mat::Identity(dim, dim)); }

namespace {

// Householder form of the completion of v: U = Q diag(r, 1), where v = Q R with R diagonal unitary.
LinearOp householder_completion(const Mat& v) {
    auto qr = std::make_shared<const Eigen::HouseholderQR<Mat>>(v);
    const Eigen::Index k = v.cols();
    Vec r = Vec::Ones(v.rows());
    for (Eigen::Index i = 0; i < k; ++i) {
        const cplx rii = qr->matrixQR()(i, i);
        r(i) = rii / std::abs(rii);
    }
    auto phases = std::make_shared<const Vec>(r);
    LinearOp op;
    op.dim = v.rows();
    op.apply = [qr, phases](const Mat& x) -> Mat {
        Mat y = phases->asDiagonal() * x;
        return qr->householderQ() * y;
    };
    op.apply_adjoint = [qr, phases](const Mat& x) -> Mat {
        Mat y = qr->householderQ().adjoint() * x;
        return phases->conjugate().asDiagonal() * y;
    };
    return op;
}

} // namespace

OverlapBuild build_overlap_factors(const SparseOracle& oracle, bool materialize) {
    const int n = oracle.n();
    const int d = oracle.d();
    const double lmax = oracle.norms().max_norm;
    if (d > n) throw PreconditionError("sparsity exceeds the dimension");
    if (!(lmax > 0)) throw PreconditionError("Lambda_max must be positive");
    for (int j = 0; j < n; ++j)
        for (const auto& [k, v] : oracle.row(j))
            if (std::abs(v) > lmax * (1 + 1e-12))
                throw PreconditionError("entry (" + std::to_string(j) + ", " + std::to_string(k) +
                                        ") has |H_jk| = " + std::to_string(std::abs(v)) +
                                        " above Lambda_max = " + std::to_string(lmax));
    // principal root with signed zeros folded, so sqrt(conj(h_jk)) and sqrt(h_kj) agree on the cut
    auto root = [lmax](cplx h) { return std::sqrt(cplx(h.real() / lmax + 0.0, h.imag() / lmax + 0.0)); };
    const Eigen::Index dim = 3LL * n * n;
    auto idx = [n](int a2, int a1, int s) { return (static_cast<Eigen::Index>(a2) * n + a1) * n + s; };

    // rows with fewer than d nonzeros are padded with zero-valued columns so every state has norm 1
    auto padded = [&](int j) {
        std::vector<int> cols;
        for (const auto& e : oracle.row(j)) cols.push_back(e.first);
        for (int k = 0; static_cast<int>(cols.size()) < d; ++k)
            if (std::find(cols.begin(), cols.end(), k) == cols.end()) cols.push_back(k);
        return cols;
    };

    const double inv_sqrt_d = 1.0 / std::sqrt(static_cast<double>(d));
    Mat vcol = Mat::Zero(dim, n), vrow = Mat::Zero(dim, n);
    double sigma_max = 0;
    for (int j = 0; j < n; ++j) {
        double sigma = 0;
        for (int p : padded(j)) {
            const cplx h = oracle.value(j, p);
            sigma += std::abs(h);
            const double rest = std::sqrt(std::max(0.0, 1.0 - std::abs(h) / lmax));
            // the conjugate convention sits on the column side so that the composite encodes H, not H^T
            const cplx hc = (p == j) ? h : std::conj(h);
            vcol(idx(0, p, j), j) = inv_sqrt_d * root(hc);
            vcol(idx(1, p, j), j) = inv_sqrt_d * rest;
            vrow(idx(0, p, j), j) = inv_sqrt_d * std::conj(root(h));
            vrow(idx(2, p, j), j) = inv_sqrt_d * rest;
        }
        sigma_max = std::max(sigma_max, sigma);
    }

    OverlapBuild out;
    OverlapFactors& f = out.factors;
    f.n = n;
    f.sparsity = d;
    f.alpha = d * lmax;
    f.lambda_beta = f.lambda_gamma = sigma_max / (d * lmax);
    f.col_op = householder_completion(vcol);
    f.row_op = householder_completion(vrow);
    f.U_col = complete_isometry(vcol);
    f.U_row = complete_isometry(vrow);
    f.U_mix = Mat::Zero(dim, dim);
    for (int a2 = 0; a2 < 3; ++a2)
        for (int a1 = 0; a1 < n; ++a1)
            for (int s = 0; s < n; ++s) f.U_mix(idx(a2, s, a1), idx(a2, a1, s)) = 1.0;

    BlockEncoding& enc = out.encoding;
    enc.d = 3 * n;
    enc.n = n;
    enc.alpha = f.alpha;
    enc.hermitian = true;
    enc.cost = 3;
    if (materialize) enc.U = f.U_row.adjoint() * f.U_mix * f.U_col;
    return out;
}

BlockEncoding encode_sin(const Mat& V) {
    const Eigen::Index n = V.rows();
    const double r = std::sqrt(0.5);
    Mat u0 = Mat::Identity(2 * n, 2 * n);
    u0.bottomRightCorner(n, n) = V;
    Mat x(2, 2);
    x << 0, 1, 1, 0;
    Mat g(2, 2);
    g << r, cplx(0, r), cplx(0, r), r;  // e^{i X pi/4}
    const Mat gi = kron(g, Mat::Identity(n, n));
    const Mat u1 = u0.adjoint() * kron(x, Mat::Identity(n, n)) * u0;
    BlockEncoding enc;
    enc.U = gi.adjoint() * u1 * gi;
    enc.d = 2;
    enc.n = static_cast<int>(n);
    enc.alpha = 1.0;
    enc.hermitian = true;
    enc.cost = 2;
    return enc;
}

ExpEncoding encode_from_exponential(const Mat& V, double eps, const Mat* reference) {
    if (unitarity_defect(V) > 1e-10) throw PreconditionError("encode_from_exponential needs a unitary");
    if (reference) {
        const double nh = spectral_norm(*reference);
        if (nh > 0.5 + 1e-12)
            throw PreconditionError("encode_from_exponential: ||H|| = " + std::to_string(nh) + " exceeds 1/2");
    }
    ChebPoly p = arcsin_poly(eps);
    ExpEncoding out;
    out.encoding = flexible_qsp_apply(encode_sin(V), p);
    out.degree = p.degree();
    return out;
}

void write_matrix(const std::string& path, const Mat& m, const nlohmann::json& header) {
    nlohmann::json h = header.is_object() ? header : nlohmann::json::object();
    h["rows"] = m.rows();
    h["cols"] = m.cols();
    h["layout"] = "row-major complex128";
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << h.dump() << '\n';
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            const double re = m(i, j).real(), im = m(i, j).imag();
            out.write(reinterpret_cast<const char*>(&re), sizeof re);
            out.write(reinterpret_cast<const char*>(&im), sizeof im);
        }
}

Mat read_matrix(const std::string& path, nlohmann::json* header) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path);
    std::string line;
    std::getline(in, line);
    const auto h = nlohmann::json::parse(line);
    const Eigen::Index rows = h.at("rows").get<Eigen::Index>(), cols = h.at("cols").get<Eigen::Index>();
    Mat m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index j = 0; j < cols; ++j) {
            double re = 0, im = 0;
            in.read(reinterpret_cast<char*>(&re), sizeof re);
            in.read(reinterpret_cast<char*>(&im), sizeof im);
            m(i, j) = cplx(re, im);
        }
    if (!in) throw std::runtime_error("truncated matrix container " + path);
    if (header) *header = h;
    return m;
}

void write_encoding(const std::string& path, const BlockEncoding& enc) {
    write_matrix(path, enc.U,
                 {{"d", enc.d}, {"n", enc.n}, {"alpha", enc.alpha}, {"hermitian", enc.hermitian},
                  {"cost", enc.cost}});
}

BlockEncoding read_encoding(const std::string& path) {
    nlohmann::json h;
    BlockEncoding enc;
    enc.U = read_matrix(path, &h);
    enc.d = h.at("d").get<int>();
    enc.n = h.at("n").get<int>();
    enc.alpha = h.at("alpha").get<double>();
    enc.hermitian = h.at("hermitian").get<bool>();
    enc.cost = h.value("cost", 1L);
    return enc;
}

} // namespace spectramp
