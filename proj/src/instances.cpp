#include "spectramp/instances.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <set>

#include "spectramp/linalg.hpp"

namespace spectramp {

namespace {

double hop(int j, int n) { return std::sqrt(static_cast<double>(j + 1) * (n - j)) / n; }

void check_bits(const std::vector<int>& x) {
    for (int b : x)
        if (b != 0 && b != 1) throw PreconditionError("bit strings take values 0 and 1");
}

Mat or_block(const std::vector<int>& x) {
    check_bits(x);
    const int m = static_cast<int>(x.size());
    if (m < 1) throw PreconditionError("h_or needs m >= 1");
    if (std::accumulate(x.begin(), x.end(), 0) > 1) throw PreconditionError("h_or promise violated: more than one bit set");
    Mat c0 = Mat::Zero(m, m);
    for (int r = 0; r < m; ++r)
        for (int c = 0; c < m; ++c) c0(r, c) = x[((c - r) % m + m) % m];
    const Mat c1 = Mat::Constant(m, m, 1.0 / m) - 0.5 * (c0 + c0.adjoint());
    Mat h(2 * m, 2 * m);
    h << c1, c0, c0.adjoint(), c1;
    return h;
}

// Chain of length n+1 with the clique factor; hop j -> j+1 acts with gate[j] on the inner register.
Mat chain_with_gates(const std::vector<Mat>& gate, int s) {
    const int n = static_cast<int>(gate.size());
    const Eigen::Index g = gate.front().rows();
    const Eigen::Index block = s * g;
    Mat h = Mat::Zero((n + 1) * block, (n + 1) * block);
    const Mat clique = Mat::Ones(s, s);
    for (int j = 0; j < n; ++j) {
        const Mat b = hop(j, n) * kron(clique, gate[j]);
        h.block((j + 1) * block, j * block, block, block) = b;
        h.block(j * block, (j + 1) * block, block, block) = b.adjoint();
    }
    return h;
}

} // namespace

Instance make_instance(const Mat& H, const std::string& family, nlohmann::json params) {
    if (hermiticity_defect(H) > 1e-14) throw PreconditionError("instance matrix is not Hermitian");
    Instance inst{H, SparseOracle::from_dense(H), nlohmann::json::object()};
    const SparseNorms& nm = inst.oracle.norms();
    inst.meta["family"] = family;
    inst.meta["n"] = inst.oracle.n();
    inst.meta["d"] = inst.oracle.d();
    inst.meta["max_norm"] = nm.max_norm;
    inst.meta["one_norm"] = nm.one_norm;
    inst.meta["spectral_norm"] = nm.spectral;
    inst.meta["one_norm_ratio"] = nm.max_norm > 0 ? nm.one_norm / (inst.oracle.d() * nm.max_norm) : 1.0;
    inst.meta["params"] = std::move(params);
    return inst;
}

Instance h_spin(int N) {
    if (N < 1) throw PreconditionError("h_spin needs N >= 1");
    Mat h = Mat::Zero(N + 1, N + 1);
    for (int j = 1; j <= N; ++j) {
        const double v = std::sqrt(static_cast<double>(j) * (N - j + 1)) / N;
        h(j - 1, j) = v;
        h(j, j - 1) = v;
    }
    return make_instance(h, "spin", {{"N", N}, {"transfer_time", std::acos(-1.0) * N / 2}});
}

Instance h_parity(const std::vector<int>& x, int s) {
    check_bits(x);
    if (x.empty()) throw PreconditionError("h_parity needs at least one bit");
    if (s < 1) throw PreconditionError("h_parity needs s >= 1");
    std::vector<Mat> gates;
    for (int b : x) {
        Mat g(2, 2);
        g << 1 - b, b, b, 1 - b;
        gates.push_back(g);
    }
    const int n = static_cast<int>(x.size());
    Instance inst = make_instance(chain_with_gates(gates, s), "parity",
                                  {{"x", x}, {"s", s}, {"time", std::acos(-1.0) * n / (2.0 * s)}});
    inst.meta["paper_sparsity"] = 2 * s;
    return inst;
}

Instance h_or(const std::vector<int>& x) {
    Instance inst = make_instance(or_block(x), "or", {{"x", x}});
    inst.meta["paper_sparsity"] = 2 * static_cast<int>(x.size());
    return inst;
}

Instance h_parity_or(const std::vector<std::vector<int>>& x, int s) {
    if (x.empty()) throw PreconditionError("h_parity_or needs at least one row");
    if (s < 1) throw PreconditionError("h_parity_or needs s >= 1");
    const std::size_t m = x.front().size();
    std::vector<Mat> gates;
    for (const auto& row : x) {
        if (row.size() != m) throw PreconditionError("h_parity_or rows must have equal length");
        gates.push_back(or_block(row));
    }
    const int n = static_cast<int>(x.size());
    Instance inst = make_instance(chain_with_gates(gates, s), "parity_or",
                                  {{"x", x}, {"s", s}, {"time", std::acos(-1.0) * n / (2.0 * s)}});
    inst.meta["paper_sparsity"] = 2 * s * static_cast<int>(m);
    return inst;
}

Vec parity_or_input(int n, int m, int s) {
    const Eigen::Index inner = 2 * m;
    Vec psi = Vec::Zero((n + 1) * s * inner);
    const double amp = 1.0 / std::sqrt(static_cast<double>(s) * m);
    // |0>_chain |u>_clique |0>_out |u>_o
    for (int c = 0; c < s; ++c)
        for (int o = 0; o < m; ++o) psi(c * inner + o) = amp;
    return psi;
}

double parity_or_output_one(const Vec& psi, int n, int m, int s) {
    const Eigen::Index inner = 2 * m;
    double p = 0;
    for (Eigen::Index blk = 0; blk < static_cast<Eigen::Index>(n + 1) * s; ++blk)
        p += psi.segment(blk * inner + m, m).squaredNorm();
    return p;
}

Instance random_sparse(int n, int d, double ratio, unsigned seed) {
    if (n < 1 || d < 1 || d > n) throw PreconditionError("random_sparse needs 1 <= d <= n");
    if (d > 1 && !(ratio > 1.0 / d && ratio <= 1.0))
        throw PreconditionError("random_sparse: ratio must lie in (1/d, 1]");
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> u(0, 1);
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);

    // circulant pattern {0, +-1, ..., +-k} plus the antipode when d is even
    std::set<int> offsets = {0};
    for (int k = 1; static_cast<int>(offsets.size()) + 1 < d; ++k) {
        offsets.insert(k);
        offsets.insert(n - k);
    }
    if (static_cast<int>(offsets.size()) < d) {
        if (n % 2) throw PreconditionError("random_sparse: even d needs even n");
        offsets.insert(n / 2);
    }

    const double w = d > 1 ? (d * ratio - 1) / (d - 1) : 0.0;
    Mat h = Mat::Zero(n, n);
    for (int j = 0; j < n; ++j) h(perm[j], perm[j]) = u(rng) < 0.5 ? -1.0 : 1.0;
    for (int j = 0; j < n; ++j)
        for (int off : offsets) {
            const int k = (j + off) % n;
            if (off == 0 || k < j) continue;
            const cplx v = std::polar(w, 2 * std::acos(-1.0) * u(rng));
            h(perm[j], perm[k]) = v;
            h(perm[k], perm[j]) = std::conj(v);
        }
    Instance inst = make_instance(h, "random_sparse", {{"n", n}, {"d", d}, {"ratio", ratio}, {"seed", seed}});
    // zero-modulus couplings still count toward the declared sparsity
    if (inst.oracle.d() != d) {
        inst.oracle = SparseOracle::from_dense(h, d);
        inst.meta["d"] = d;
        const SparseNorms& nm = inst.oracle.norms();
        inst.meta["one_norm_ratio"] = nm.one_norm / (d * nm.max_norm);
    }
    return inst;
}

nlohmann::json to_json(const Instance& inst) {
    nlohmann::json j = inst.meta;
    j["oracle"] = to_json(inst.oracle);
    return j;
}

} // namespace spectramp
