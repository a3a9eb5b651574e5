#include "spectramp/spectral_amp.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "spectramp/chebpoly.hpp"
#include "spectramp/linalg.hpp"
#include "spectramp/qubitization.hpp"

namespace spectramp {

namespace {

double elapsed_ms(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

Mat checked_block(const BlockEncoding& enc, const char* who) {
    if (!enc.hermitian) throw PreconditionError(std::string(who) + " needs a Hermitian encoding");
    const Mat b = extract_block(enc);
    if (hermiticity_defect(b) > 1e-10) throw PreconditionError(std::string(who) + ": block is not Hermitian");
    return hermitian_part(b);
}

Mat input_columns(Eigen::Index dim, Eigen::Index n) {
    Mat x = Mat::Zero(dim, n);
    x.topRows(n).setIdentity();
    return x;
}

// Amplitude multiplication circuit for one overlap factor; Gamma >= 1/2 dilutes.
AmpCircuit side_circuit(const LinearOp& op, int n, double Gamma, double eps, const PhaseSequence* phases) {
    StatePrep p;
    p.G = op;
    p.in_dim = n;
    p.good_dim = static_cast<Eigen::Index>(n) * n;
    if (Gamma >= 0.5) return AmpCircuit::dilution(p, Gamma);
    if (phases) return AmpCircuit::flexible(p, *phases);
    return flexible_amp_amp(p, lin_amp_poly(Gamma, eps));
}

} // namespace

AmpResult spectral_multiply(const BlockEncoding& enc, double Lambda, double eps) {
    const Mat blk = checked_block(enc, "spectral_multiply");
    const double hnorm = enc.alpha * spectral_norm(blk);
    if (!(Lambda >= hnorm * (1 - 1e-12)) || Lambda > enc.alpha * (1 + 1e-12))
        throw PreconditionError("spectral_multiply needs ||H|| = " + std::to_string(hnorm) + " <= Lambda <= alpha = " +
                                std::to_string(enc.alpha) + " (Lambda = " + std::to_string(Lambda) + ")");
    if (!(eps > 0 && eps < 1)) throw PreconditionError("spectral_multiply needs eps in (0, 1)");
    const double Gamma = Lambda / enc.alpha;
    AmpResult r;
    r.new_alpha = 2 * Lambda;
    r.meta["Gamma"] = Gamma;
    if (Gamma > 0.5) {
        const double f = 1 / (2 * Gamma), s = std::sqrt(1 - f * f);
        Mat rc(2, 2);
        rc << f, -s, s, f;
        r.enc_out.U = kron(rc, full_unitary(enc));
        r.enc_out.d = 2 * enc.d;
        r.enc_out.n = enc.n;
        r.enc_out.hermitian = true;
        r.enc_out.cost = enc.cost;
        r.meta["path"] = "dilution";
    } else {
        if (eps > lin_amp_c * Gamma)
            throw PreconditionError("spectral_multiply needs eps <= " + std::to_string(lin_amp_c) + " Lambda / alpha");
        const ChebPoly p = lin_amp_poly(Gamma, eps);
        r.enc_out = flexible_qsp_apply(enc, p);
        r.meta["path"] = "polynomial";
        r.meta["degree"] = p.degree();
    }
    r.enc_out.alpha = r.new_alpha;
    r.queries = r.enc_out.cost;
    r.measured_distortion = spectral_norm(extract_block(r.enc_out) - blk * (enc.alpha / (2 * Lambda)));
    return r;
}

AmpResult low_energy_amplify(const BlockEncoding& enc, double Delta, double eps) {
    const Mat blk = checked_block(enc, "low_energy_amplify");
    // the gapped-linear polynomial exists only for Delta <= 1/2
    if (!(Delta > 0 && Delta <= 0.5)) throw PreconditionError("low_energy_amplify needs Delta in (0, 1/2]");
    const ChebPoly p = gap_amp_poly(Delta, eps);
    AmpResult r;
    r.enc_out = flexible_qsp_apply(enc, p);
    r.new_alpha = Delta * enc.alpha;
    r.enc_out.alpha = r.new_alpha;
    r.queries = r.enc_out.cost;
    r.meta["degree"] = p.degree();

    Eigen::SelfAdjointEigenSolver<Mat> es(blk);
    const Mat out = extract_block(r.enc_out);
    double worst = 0;
    int low = 0, high = 0;
    for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k) {
        const double l = es.eigenvalues()(k);
        double target;
        if (l <= -1 + Delta + 1e-12) {
            target = (l + 1 - Delta) / Delta;
            ++low;
        } else if (l >= 1 - Delta - 1e-12) {
            target = (l - 1 + Delta) / Delta;
            ++high;
        } else {
            continue;
        }
        const Vec v = es.eigenvectors().col(k);
        worst = std::max(worst, (out * v - target * v).norm());
    }
    r.measured_distortion = worst;
    r.meta["low_eigenvalues"] = low;
    r.meta["high_eigenvalues"] = high;
    return r;
}

Mat overlap_block(const OverlapFactors& f) {
    const Mat in = input_columns(f.col_op.dim, f.n);
    const Mat ycol = f.col_op.apply(in);
    const Mat yrow = f.row_op.apply(in);
    return yrow.adjoint() * (f.U_mix * ycol);
}

Mat overlap_block_exact(const OverlapFactors& f, double LambdaB, double LambdaG) {
    const Eigen::Index flag = static_cast<Eigen::Index>(f.n) * f.n;
    const Mat in = input_columns(f.col_op.dim, f.n);
    auto scaled = [&](Mat y, double Lambda) {
        const double m = 1 / (2 * std::sqrt(Lambda));
        for (Eigen::Index j = 0; j < y.cols(); ++j) {
            const double g = y.col(j).head(flag).norm() * m;
            if (g > 1 + 1e-12) throw PreconditionError("overlap_block_exact: amplified amplitude exceeds 1");
            y.col(j).head(flag) *= m;
            const double rest = y.col(j).tail(y.rows() - flag).norm();
            if (rest > 0) y.col(j).tail(y.rows() - flag) *= std::sqrt(std::max(0.0, 1 - g * g)) / rest;
        }
        return y;
    };
    const Mat ycol = scaled(f.col_op.apply(in), LambdaB);
    const Mat yrow = scaled(f.row_op.apply(in), LambdaG);
    return yrow.adjoint() * (f.U_mix * ycol);
}

AmpResult overlap_amplify(const OverlapFactors& f, double LambdaB, double LambdaG, double eps) {
    const double tol = 1e-12;
    if (!(LambdaB >= f.lambda_beta * (1 - tol) && LambdaB <= 0.5 && LambdaG >= f.lambda_gamma * (1 - tol) &&
          LambdaG <= 0.5))
        throw PreconditionError("overlap_amplify needs lambda_beta <= LambdaB <= 1/2 and lambda_gamma <= LambdaG <= 1/2");
    if (!(eps > 0 && eps < std::min(LambdaB, LambdaG)))
        throw PreconditionError("overlap_amplify needs 0 < eps < min(LambdaB, LambdaG)");
    const double gb = std::sqrt(LambdaB), gg = std::sqrt(LambdaG);
    const double side_eps = eps / 2;
    for (double g : {gb, gg})
        if (g < 0.5 && side_eps > lin_amp_c * g)
            throw PreconditionError("overlap_amplify: eps / 2 exceeds " + std::to_string(lin_amp_c) + " sqrt(Lambda)");

    // one synthesis when both sides share the target
    PhaseSequence shared;
    const bool same = gb == gg && gb < 0.5;
    if (same) shared = phases_for_D(lin_amp_poly(gb, side_eps));
    const AmpCircuit col = side_circuit(f.col_op, f.n, gb, side_eps, same ? &shared : nullptr);
    const AmpCircuit row = side_circuit(f.row_op, f.n, gg, side_eps, same ? &shared : nullptr);

    // separate c qubits: only the |0>_c parts of both sides meet in the block
    const Eigen::Index dim = f.col_op.dim;
    const Mat eye = Mat::Identity(f.n, f.n);
    const Mat ycol = col.apply_input(eye).topRows(dim);
    const Mat yrow = row.apply_input(eye).topRows(dim);
    const Mat blk = yrow.adjoint() * (f.U_mix * ycol);

    AmpResult r;
    r.new_alpha = 4 * f.alpha * std::sqrt(LambdaB * LambdaG);
    const Mat h = f.alpha * overlap_block(f);
    const Mat hlin = r.new_alpha * blk;
    r.measured_distortion = spectral_norm(hlin - h) / spectral_norm(h);
    const double anti = r.new_alpha * spectral_norm(0.5 * (blk - blk.adjoint()));
    r.enc_out = encode_dense(hermitian_part(hlin), r.new_alpha);
    r.enc_out.cost = col.queries() + row.queries() + 1;
    r.queries = r.enc_out.cost;
    r.meta["anti_hermitian"] = anti;
    r.meta["anti_hermitian_bound"] = 1.25 * eps * spectral_norm(h);
    r.meta["queries_col"] = col.queries();
    r.meta["queries_row"] = row.queries();
    r.meta["circuit_ancilla_dim"] = 4 * 3 * f.n;
    r.meta["Gamma_beta"] = gb;
    r.meta["Gamma_gamma"] = gg;
    return r;
}

SimResult sparse_simulate(const SparseOracle& oracle, double t, double eps) {
    if (!(t >= 0)) throw PreconditionError("sparse_simulate needs t >= 0");
    if (!(eps > 0 && eps < 1)) throw PreconditionError("sparse_simulate needs eps in (0, 1)");
    const auto t0 = std::chrono::steady_clock::now();
    const SparseNorms& norms = oracle.norms();
    const Mat h = oracle.dense();
    const SparseNorms exact = oracle.exact_norms();
    if (exact.max_norm > norms.max_norm * (1 + 1e-12) || exact.one_norm > norms.one_norm * (1 + 1e-12) ||
        exact.spectral > norms.spectral * (1 + 1e-12))
        throw PreconditionError("sparse_simulate: declared norms are not upper bounds of the instance");

    const OverlapBuild build = build_overlap_factors(oracle, false);
    const OverlapFactors& f = build.factors;
    const double lb = norms.one_norm / (oracle.d() * norms.max_norm);
    SimResult out;
    SimReport& rep = out.report;
    rep.timings_ms["factors"] = elapsed_ms(t0);

    const auto t1 = std::chrono::steady_clock::now();
    BlockEncoding enc;
    if (lb > 0.5) {
        enc = encode_dense(hermitian_part(f.alpha * overlap_block(f)), f.alpha);
        enc.cost = 3;
        rep.meta["path"] = "composite";
    } else {
        const double Lambda = norms.spectral;
        double eps0 = (t * Lambda > 0) ? 0.4 * eps / (t * Lambda) : eps;
        eps0 = std::min({eps0, 0.5 * lb, 2 * lin_amp_c * std::sqrt(lb)});
        const AmpResult amp = overlap_amplify(f, lb, lb, eps0);
        enc = amp.enc_out;
        rep.meta["path"] = "amplified";
        rep.meta["eps_amplify"] = eps0;
        rep.meta["amplify_queries"] = amp.queries;
        rep.meta["amplify_distortion"] = amp.measured_distortion;
        rep.meta["anti_hermitian"] = amp.meta["anti_hermitian"];
    }
    rep.timings_ms["amplify"] = elapsed_ms(t1);

    const auto t2 = std::chrono::steady_clock::now();
    const HamSimResult hs = hamsim_qubitization(enc, t, eps / 2);
    rep.timings_ms["hamsim"] = elapsed_ms(t2);
    out.X = extract_block(hs.encoding);
    rep.queries = hs.encoding.cost;
    rep.degrees = hs.report.degrees;
    rep.eps_requested = eps;
    rep.t = t;
    rep.alpha = enc.alpha;
    rep.error_measured = spectral_norm(out.X - expm_herm(h, t));
    rep.meta["lambda_beta"] = lb;
    rep.meta["alpha_unamplified"] = f.alpha;
    rep.meta["hamsim_error"] = hs.report.error_measured;
    rep.meta["n"] = oracle.n();
    rep.meta["d"] = oracle.d();
    rep.meta["max_norm"] = norms.max_norm;
    rep.meta["one_norm"] = norms.one_norm;
    rep.meta["spectral_norm"] = norms.spectral;
    rep.timings_ms["total"] = elapsed_ms(t0);
    return out;
}

SimResult simulate_low_energy(const BlockEncoding& enc, double Delta, double t, double eps) {
    const Mat blk = checked_block(enc, "simulate_low_energy");
    if (!(t >= 0)) throw PreconditionError("simulate_low_energy needs t >= 0");
    if (!(eps > 0 && eps < 1)) throw PreconditionError("simulate_low_energy needs eps in (0, 1)");
    const auto t0 = std::chrono::steady_clock::now();
    const double alpha = enc.alpha;
    double eps_amp = (t > 0) ? eps / (2 * t * Delta * alpha) : eps;
    eps_amp = std::min(eps_amp, 0.1);
    const AmpResult amp = low_energy_amplify(enc, Delta, eps_amp);
    const HamSimResult hs = hamsim_qubitization(amp.enc_out, t, eps / 2);

    SimResult out;
    SimReport& rep = out.report;
    out.X = extract_block(hs.encoding);
    rep.queries = hs.encoding.cost;
    rep.degrees = {amp.meta["degree"].get<int>()};
    for (int d : hs.report.degrees) rep.degrees.push_back(d);
    rep.eps_requested = eps;
    rep.t = t;
    rep.alpha = amp.new_alpha;

    // on eigenvectors with l in [-1, -1 + Delta] the evolution is e^{-i (l + 1 - Delta) alpha t}
    Eigen::SelfAdjointEigenSolver<Mat> es(blk);
    double err = 0;
    int low = 0;
    for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k) {
        const double l = es.eigenvalues()(k);
        if (l > -1 + Delta + 1e-12) continue;
        ++low;
        const Vec v = es.eigenvectors().col(k);
        const cplx ph = std::exp(cplx(0, -(l + 1 - Delta) * alpha * t));
        err = std::max(err, (out.X * v - ph * v).norm());
    }
    rep.error_measured = err;
    const long plain = 3L * (trig_degree(t * alpha, eps / 8, 0) + trig_degree(t * alpha, eps / 8, 1)) * enc.cost;
    rep.meta["offset"] = (1 - Delta) * alpha;
    rep.meta["low_eigenvalues"] = low;
    rep.meta["eps_amplify"] = eps_amp;
    rep.meta["amplify_distortion"] = amp.measured_distortion;
    rep.meta["plain_queries"] = plain;
    rep.meta["Delta"] = Delta;
    rep.timings_ms["total"] = elapsed_ms(t0);
    return out;
}

Mat log_unitary(const Mat& V) {
    Eigen::ComplexSchur<Mat> schur(V);
    const Mat& q = schur.matrixU();
    const Mat& tri = schur.matrixT();
    Vec phase(V.rows());
    for (Eigen::Index k = 0; k < V.rows(); ++k) phase(k) = -std::arg(tri(k, k));
    return hermitian_part(q * phase.asDiagonal() * q.adjoint());
}

SimResult simulate_with_exponentials(const std::vector<ExpTerm>& terms, double t, double eps) {
    if (terms.empty()) throw PreconditionError("simulate_with_exponentials needs at least one term");
    if (!(t >= 0)) throw PreconditionError("simulate_with_exponentials needs t >= 0");
    if (!(eps > 0 && eps < 1)) throw PreconditionError("simulate_with_exponentials needs eps in (0, 1)");
    const auto t0 = std::chrono::steady_clock::now();
    const int m = static_cast<int>(terms.size());
    const Eigen::Index n = terms.front().V.rows();
    double alpha = 0;
    std::vector<double> alphas;
    for (const auto& term : terms) {
        if (term.V.rows() != n) throw PreconditionError("terms act on different dimensions");
        alphas.push_back(term.alpha);
        alpha += term.alpha;
    }
    const double eps1 = std::min(0.1, t > 0 ? eps / (2 * t * alpha) : eps);

    std::vector<BlockEncoding> encs;
    Mat h = Mat::Zero(n, n);
    int degree = 0;
    for (const auto& term : terms) {
        const Mat ref = term.reference.size() ? term.reference : log_unitary(term.V);
        const ExpEncoding e = encode_from_exponential(term.V, eps1, &ref);
        encs.push_back(e.encoding);
        degree = e.degree;
        h += term.alpha * ref;
    }

    // SELECT = sum_j |j><j| (x) U_j on (ancilla, j, system)
    const Eigen::Index stored = encs.front().U.rows() / n;
    BlockEncoding sel;
    sel.U = Mat::Zero(stored * m * n, stored * m * n);
    for (int j = 0; j < m; ++j)
        for (Eigen::Index a = 0; a < stored; ++a)
            for (Eigen::Index b = 0; b < stored; ++b)
                sel.U.block((a * m + j) * n, (b * m + j) * n, n, n) = encs[j].U.block(a * n, b * n, n, n);
    sel.d = encs.front().d;
    sel.n = static_cast<int>(m * n);
    sel.hermitian = true;
    sel.cost = encs.front().cost;
    const BlockEncoding lcu = absorb_index(alphas, sel);
    const HamSimResult hs = hamsim_qubitization(lcu, t, eps / 2);

    SimResult out;
    SimReport& rep = out.report;
    out.X = extract_block(hs.encoding);
    rep.queries = hs.encoding.cost;
    rep.degrees = {degree};
    for (int d : hs.report.degrees) rep.degrees.push_back(d);
    rep.eps_requested = eps;
    rep.t = t;
    rep.alpha = alpha;
    rep.error_measured = spectral_norm(out.X - expm_herm(h, t));
    rep.meta["eps_encode"] = eps1;
    rep.meta["encoding_error"] = spectral_norm(alpha * hermitian_part(extract_block(lcu)) - h);
    rep.meta["terms"] = m;
    rep.meta["ancilla_dim"] = hs.encoding.d;
    rep.timings_ms["total"] = elapsed_ms(t0);
    return out;
}

} // namespace spectramp
