#include "spectramp/qubitization.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "spectramp/linalg.hpp"

namespace spectramp {

namespace {

const double pi = std::acos(-1.0);

double elapsed_ms(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

void require_hermitian(const BlockEncoding& enc, const char* who) {
    if (!enc.hermitian) throw PreconditionError(std::string(who) + " needs a Hermitian encoding");
    const double h = hermiticity_defect(extract_block(enc));
    if (h > 1e-10) throw PreconditionError(std::string(who) + ": block is not Hermitian (defect " +
                                           std::to_string(h) + ")");
}

// Active 2n x 2n unitary acting as A + iBZ + iCX + iDY on each eigen-subspace.
Mat su2_lift(const SpectralFrame& f, const std::vector<Components>& comp) {
    const Eigen::Index n = f.V.rows();
    Vec a(n), b(n), c(n), d(n);
    for (Eigen::Index k = 0; k < n; ++k) {
        const Components& x = comp[k];
        a(k) = cplx(x.A, x.B);
        b(k) = cplx(x.D, x.C);
        c(k) = cplx(-x.D, x.C);
        d(k) = cplx(x.A, -x.B);
    }
    auto conj_by = [&](const Vec& v) -> Mat { return f.V * v.asDiagonal() * f.V.adjoint(); };
    Mat w(2 * n, 2 * n);
    w << conj_by(a), conj_by(b), conj_by(c), conj_by(d);
    return w;
}

std::vector<Components> components_on(const SpectralFrame& f, const PhaseSequence& phi) {
    std::vector<Components> out;
    out.reserve(f.lambda.size());
    for (Eigen::Index k = 0; k < f.lambda.size(); ++k)
        out.push_back(rotation_components(phi, std::acos(std::clamp(f.lambda(k), -1.0, 1.0))));
    return out;
}

// Places the 2x2 operator-valued matrix m[c][c'] on the ordering (outer, c, s).
Mat insert_minor_qubit(const Mat m[2][2], Eigen::Index outer, Eigen::Index ns) {
    Mat out = Mat::Zero(outer * 2 * ns, outer * 2 * ns);
    for (int c = 0; c < 2; ++c)
        for (int cp = 0; cp < 2; ++cp) {
            if (m[c][cp].size() == 0) continue;
            for (Eigen::Index o = 0; o < outer; ++o)
                for (Eigen::Index op = 0; op < outer; ++op)
                    out.block((o * 2 + c) * ns, (op * 2 + cp) * ns, ns, ns) =
                        m[c][cp].block(o * ns, op * ns, ns, ns);
        }
    return out;
}

PhaseSequence negated(const PhaseSequence& phi) {
    PhaseSequence out = phi;
    for (double& p : out.phases) p = -p;
    out.frame = -phi.frame;
    return out;
}

} // namespace

SpectralFrame spectral_frame(const BlockEncoding& enc) {
    Eigen::SelfAdjointEigenSolver<Mat> es(hermitian_part(extract_block(enc)));
    return {es.eigenvectors(), es.eigenvalues()};
}

BlockEncoding Qubiterate::as_encoding() const {
    BlockEncoding e;
    e.U = W;
    e.d = 2 * source.d;
    e.n = source.n;
    e.alpha = source.alpha;
    e.hermitian = std::abs(std::sin(phase)) < 1e-15;
    e.cost = source.cost;
    return e;
}

Qubiterate qubiterate(const BlockEncoding& enc, double phi) {
    require_hermitian(enc, "qubiterate");
    PhaseSequence seq;
    seq.phases = {phi};
    const SpectralFrame f = spectral_frame(enc);
    return {su2_lift(f, components_on(f, seq)), enc, phi};
}

BlockEncoding qubiterate_circuit(const BlockEncoding& enc, double phi) {
    require_hermitian(enc, "qubiterate_circuit");
    const Mat u = full_unitary(enc);
    if (hermiticity_defect(u) > 1e-10)
        throw PreconditionError("qubiterate_circuit needs a Hermitian signal unitary");
    const Eigen::Index dim = u.rows(), n = enc.n;
    const double beta = phi + pi / 2;
    auto p = [&](double b) {
        Vec diag = Vec::Constant(dim, std::exp(cplx(0, b / 2)));
        diag.head(n).setConstant(std::exp(cplx(0, -b / 2)));
        return diag;
    };
    Vec refl = Vec::Constant(dim, -1.0);
    refl.head(n).setOnes();
    BlockEncoding out = enc;
    out.U = p(beta).asDiagonal() * (refl.asDiagonal() * u) * p(-beta).asDiagonal();
    out.hermitian = false;
    return out;
}

BlockEncoding composite_qubiterate(const BlockEncoding& enc, const PhaseSequence& phi) {
    require_hermitian(enc, "composite_qubiterate");
    const SpectralFrame f = spectral_frame(enc);
    BlockEncoding out;
    out.U = su2_lift(f, components_on(f, phi));
    out.d = 2 * enc.d;
    out.n = enc.n;
    out.alpha = enc.alpha;
    out.hermitian = hermiticity_defect(extract_block(out)) < 1e-12;
    out.cost = static_cast<long>(phi.phases.size()) * enc.cost;
    return out;
}

BlockEncoding flexible_qsp_apply(const BlockEncoding& enc, const PhaseSequence& phi) {
    require_hermitian(enc, "flexible_qsp_apply");
    const SpectralFrame f = spectral_frame(enc);
    const Mat wp = su2_lift(f, components_on(f, phi));
    const Mat wm = su2_lift(f, components_on(f, negated(phi)));
    const cplx i(0, 1);
    // Had V' Had in closed form: V_cc' = (M_01 + (-1)^c M_10 (-1)^c') / 2 with M_10 = -i W_phi, M_01 = i W_-phi
    const Mat s = 0.5 * (i * wm - i * wp);
    const Mat dlt = 0.5 * (i * wm + i * wp);
    const Mat blocks[2][2] = {{s, -dlt}, {dlt, -s}};
    BlockEncoding out;
    out.U = insert_minor_qubit(blocks, 2, enc.n);
    out.d = 4 * enc.d;
    out.n = enc.n;
    out.alpha = 1.0;
    out.hermitian = true;
    out.cost = static_cast<long>(phi.phases.size()) * enc.cost;
    return out;
}

BlockEncoding flexible_qsp_apply(const BlockEncoding& enc, const ChebPoly& B, const FlexibleOptions& opt) {
    bool has_even = false, has_odd = false;
    for (int j = 0; j <= B.degree(); ++j)
        if (B.coeff(j) != 0.0) (j % 2 ? has_odd : has_even) = true;
    if (has_even && has_odd) throw PreconditionError("flexible_qsp_apply: B has mixed parity");
    const PhaseSequence phi = opt.require_zero_at_origin ? phases_for_B(B) : phases_for_B_unchecked(B);
    return flexible_qsp_apply(enc, phi);
}

HamSimResult hamsim_qubitization(const BlockEncoding& enc, double t, double eps) {
    require_hermitian(enc, "hamsim_qubitization");
    if (!(t >= 0)) throw PreconditionError("hamsim_qubitization needs t >= 0");
    if (!(eps > 0 && eps < 1)) throw PreconditionError("hamsim_qubitization needs eps in (0, 1)");
    const auto t0 = std::chrono::steady_clock::now();
    HamSimResult res;
    SimReport& rep = res.report;
    rep.t = t;
    rep.alpha = enc.alpha;
    rep.eps_requested = eps;
    const double tau = t * enc.alpha;
    const Mat h = enc.alpha * hermitian_part(extract_block(enc));

    if (tau == 0.0) {
        res.encoding.U = Mat::Identity(enc.n, enc.n);
        res.encoding.d = 8 * enc.d;
        res.encoding.n = enc.n;
        res.encoding.alpha = 1.0;
        res.encoding.cost = 0;
        rep.degrees = {0, 0};
        rep.error_measured = 0.0;
        return res;
    }

    // eps/8 truncation and eps/8 rescale per part keep ||C - iS - e^{-iHt}|| <= eps/2
    const int nc = trig_degree(tau, eps / 8, 0);
    const int ns = trig_degree(tau, eps / 8, 1);
    ChebPoly c = cos_poly(tau, nc), s = sin_poly(tau, ns);
    const double shrink = 1.0 / (1.0 + eps / 8 + std::max(0.0, std::max(sup_abs(c), sup_abs(s)) - 1.0));
    c = shrink * c;
    s = shrink * s;
    FlexibleOptions unchecked;
    unchecked.require_zero_at_origin = false;
    const auto t1 = std::chrono::steady_clock::now();
    const BlockEncoding uc = flexible_qsp_apply(enc, c, unchecked);
    const BlockEncoding us = flexible_qsp_apply(enc, s, unchecked);
    rep.timings_ms["synthesis"] = elapsed_ms(t1);

    // one-qubit LCU with weights (1/2, 1/2) over U_C and -i U_S; index qubit is the minor ancilla
    const Eigen::Index act = uc.U.rows();
    BlockEncoding sel;
    const Mat blocks[2][2] = {{uc.U, Mat()}, {Mat(), cplx(0, -1) * us.U}};
    sel.U = insert_minor_qubit(blocks, act / enc.n, enc.n);
    sel.d = uc.d;
    sel.n = 2 * enc.n;
    sel.alpha = 1.0;
    const BlockEncoding lcu = absorb_index({0.5, 0.5}, sel);

    // -U R U^dagger R U with R = I - 2 Pi maps the block V to 3V - 4 V V^dagger V
    const Mat& u = lcu.U;
    Vec r = Vec::Ones(u.rows());
    r.head(enc.n).setConstant(-1.0);
    BlockEncoding& x = res.encoding;
    x.U = -(u * r.asDiagonal() * u.adjoint() * r.asDiagonal() * u);
    x.d = lcu.d;
    x.n = enc.n;
    x.alpha = 1.0;
    x.hermitian = false;
    x.cost = 3L * (nc + ns) * enc.cost;

    rep.degrees = {nc, ns};
    rep.queries = x.cost;
    rep.error_measured = spectral_norm(extract_block(x) - expm_herm(h, t));
    rep.timings_ms["total"] = elapsed_ms(t0);
    rep.meta["ancilla_dim"] = x.d;
    rep.meta["tau"] = tau;
    return res;
}

} // namespace spectramp
