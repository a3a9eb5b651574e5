#include "spectramp/ampamp.hpp"

#include <algorithm>
#include <cmath>

#include "spectramp/linalg.hpp"

namespace spectramp {

namespace {

const double pi = std::acos(-1.0);
const cplx I1(0, 1);

void phase_rows(Mat& x, Eigen::Index rows, double angle) { x.topRows(rows) *= std::exp(I1 * angle); }

} // namespace

StatePrep StatePrep::single(const Mat& G, Vec target) {
    if (G.rows() != G.cols() || G.rows() % 2 != 0) throw PreconditionError("state preparation must act on C^{2d}");
    if (unitarity_defect(G) > 1e-10) throw PreconditionError("state preparation is not unitary");
    StatePrep p;
    p.G = LinearOp::dense(G);
    p.in_dim = 1;
    p.good_dim = G.rows() / 2;
    p.target = std::move(target);
    return p;
}

Vec StatePrep::target_vector() const {
    if (target.size() > 0) {
        if (target.size() != good_dim) throw PreconditionError("target must live in the good subspace");
        return target.normalized();
    }
    Mat e = Mat::Zero(dim(), 1);
    e(0, 0) = 1.0;
    Vec good = G.apply(e).col(0).head(good_dim);
    const double nrm = good.norm();
    if (nrm == 0.0) {
        Vec t = Vec::Zero(good_dim);
        t(0) = 1.0;
        return t;
    }
    return good / nrm;
}

cplx StatePrep::overlap() const {
    Mat e = Mat::Zero(dim(), 1);
    e(0, 0) = 1.0;
    return target_vector().dot(G.apply(e).col(0).head(good_dim));
}

Mat partial_reflection(const Vec& s, double angle) { return phase_reflection(s, angle); }

Mat partial_reflection(Eigen::Index dim, Eigen::Index index, double angle) {
    if (index < 0 || index >= dim) throw PreconditionError("reflection index out of range");
    Vec s = Vec::Zero(dim);
    s(index) = 1.0;
    return phase_reflection(s, angle);
}

cplx grover_amplify(const StatePrep& prep, int N) {
    if (N < 0) throw PreconditionError("grover_amplify needs N >= 0");
    Mat x = Mat::Zero(prep.dim(), 1);
    x(0, 0) = 1.0;
    x = prep.G.apply(x);
    for (int k = 0; k < N; ++k) {
        x.topRows(prep.good_dim) *= -1.0;         // Ref_t
        x = prep.G.apply_adjoint(x);
        x.topRows(prep.in_dim) *= -1.0;           // Ref_0
        x = -prep.G.apply(x);                     // with the leading sign, -Ref_s Ref_t
    }
    return prep.target_vector().dot(x.col(0).head(prep.good_dim));
}

// In the two-dimensional picture G is e^{-i sigma_{-pi/2} theta} from (in-perp, in) to
// (good, bad) and G^dagger is e^{-i sigma_{pi/2} theta} back, with sin(theta) = lambda. Each
// rotation e^{-i sigma_phi theta} is rewritten as Z(l) G Z(r) or Z(l) G^dagger Z(r) with
// Z(a) = e^{-i a Z}; neighbouring Z rotations merge, and each one becomes a phase on the marked
// rows times a scalar that is tracked exactly.
AmpCircuit AmpCircuit::flexible(const StatePrep& prep, const PhaseSequence& phi) {
    const int N = static_cast<int>(phi.phases.size());
    if (N % 2 == 0) throw PreconditionError("amplitude sequences need an odd number of phases");
    AmpCircuit c;
    c.prep_ = prep;
    c.phi_ = phi;
    c.queries_ = N;
    c.degree_ = N;
    for (int b = 0; b < 2; ++b) {
        std::vector<double> p = phi.phases;
        double frame = phi.frame;
        if (b == 1) {
            for (double& v : p) v = pi - v;
            frame = -frame;
        }
        std::vector<double> l(N), r(N);
        for (int k = 0; k < N; ++k) {
            const double q = (k % 2 == 0) ? pi / 4 : -pi / 4;  // k = 0 is a G step
            l[k] = p[k] / 2 + q;
            r[k] = -p[k] / 2 - q;
        }
        std::vector<Gate>& gates = c.branch_[b];
        cplx g = 1.0;
        auto push = [&](bool output, double a) {
            if (output) {
                gates.push_back({true, -2 * a});
                g *= std::exp(I1 * a);
            } else {
                gates.push_back({false, 2 * a});
                g *= std::exp(-I1 * a);
            }
        };
        push(false, r[0]);
        for (int k = 0; k + 1 < N; ++k) push(k % 2 == 0, r[k + 1] + l[k]);
        push(true, frame + l[N - 1]);
        c.global_[b] = g;
    }
    return c;
}

AmpCircuit AmpCircuit::dilution(const StatePrep& prep, double Gamma) {
    if (!(Gamma >= 0.5)) throw PreconditionError("dilution needs Gamma >= 1/2");
    AmpCircuit c;
    c.prep_ = prep;
    c.dilution_ = Gamma;
    c.queries_ = 1;
    c.degree_ = 1;
    return c;
}

Mat AmpCircuit::run_branch(int b, Mat x) const {
    const auto& gates = branch_[b];
    auto gate = [&](const Gate& g) { phase_rows(x, g.output ? prep_.good_dim : prep_.in_dim, g.angle); };
    gate(gates[0]);
    for (std::size_t k = 1; k < gates.size(); ++k) {
        x = (k % 2 == 1) ? prep_.G.apply(x) : prep_.G.apply_adjoint(x);
        gate(gates[k]);
    }
    return global_[b] * x;
}

Mat AmpCircuit::apply(const Mat& x) const {
    const Eigen::Index m = prep_.dim();
    if (x.rows() != 2 * m) throw PreconditionError("AmpCircuit::apply: dimension mismatch");
    const Mat x0 = x.topRows(m), x1 = x.bottomRows(m);
    Mat out(2 * m, x.cols());
    if (dilution_ > 0) {
        const double a = 1.0 / (2 * dilution_), s = std::sqrt(std::max(0.0, 1 - a * a));
        const Mat g0 = prep_.G.apply(x0), g1 = prep_.G.apply(x1);
        out.topRows(m) = a * g0 - s * g1;
        out.bottomRows(m) = s * g0 + a * g1;
        return out;
    }
    const double h = std::sqrt(0.5);
    const Mat yp = run_branch(0, h * (x0 + x1));
    const Mat ym = run_branch(1, h * (x0 - x1));
    out.topRows(m) = h * (yp + ym);
    out.bottomRows(m) = h * (yp - ym);
    return out;
}

Mat AmpCircuit::apply_input(const Mat& x) const {
    const Eigen::Index m = prep_.dim();
    if (x.rows() != prep_.in_dim) throw PreconditionError("AmpCircuit::apply_input: dimension mismatch");
    Mat full = Mat::Zero(m, x.cols());
    full.topRows(prep_.in_dim) = x;
    Mat out(2 * m, x.cols());
    if (dilution_ > 0) {
        const double a = 1.0 / (2 * dilution_), s = std::sqrt(std::max(0.0, 1 - a * a));
        const Mat g0 = prep_.G.apply(full);
        out.topRows(m) = a * g0;
        out.bottomRows(m) = s * g0;
        return out;
    }
    const Mat yp = run_branch(0, full), ym = run_branch(1, full);
    out.topRows(m) = 0.5 * (yp + ym);
    out.bottomRows(m) = 0.5 * (yp - ym);
    return out;
}

Mat AmpCircuit::dense() const { return apply(Mat::Identity(dim(), dim())); }

cplx AmpCircuit::target_amplitude() const {
    Mat e = Mat::Zero(prep_.in_dim, 1);
    e(0, 0) = 1.0;
    const Mat y = apply_input(e);
    return prep_.target_vector().dot(y.col(0).head(prep_.good_dim));
}

double AmpCircuit::achieved_amplitude(double lambda) const {
    if (dilution_ > 0) return lambda / (2 * dilution_);
    const double theta = std::asin(std::clamp(lambda, -1.0, 1.0));
    PhaseSequence mirror = phi_;
    for (double& v : mirror.phases) v = pi - v;
    mirror.frame = -phi_.frame;
    return 0.5 * (rotation_components(phi_, theta).D + rotation_components(mirror, theta).D);
}

AmpCircuit flexible_amp_amp(const StatePrep& prep, const ChebPoly& D) {
    return AmpCircuit::flexible(prep, phases_for_D(D));
}

AmpMultiply amplitude_multiply(const StatePrep& prep, double Gamma, double eps) {
    if (!(Gamma > 0)) throw PreconditionError("amplitude_multiply needs Gamma > 0");
    if (!(eps > 0 && eps < 1)) throw PreconditionError("amplitude_multiply needs eps in (0, 1)");
    AmpMultiply out;
    SimReport& rep = out.report;
    rep.eps_requested = eps;
    rep.meta["Gamma"] = Gamma;
    if (Gamma >= 0.5) {
        out.circuit = AmpCircuit::dilution(prep, Gamma);
        rep.meta["path"] = "dilution";
    } else {
        if (eps > lin_amp_c * Gamma)
            throw PreconditionError("amplitude_multiply needs eps <= " + std::to_string(lin_amp_c) +
                                    " Gamma (eps = " + std::to_string(eps) + ", Gamma = " +
                                    std::to_string(Gamma) + ")");
        out.circuit = flexible_amp_amp(prep, lin_amp_poly(Gamma, eps));
        rep.meta["path"] = "polynomial";
    }
    rep.queries = out.circuit.queries();
    rep.degrees = {out.circuit.degree()};
    const cplx lambda = prep.overlap();
    const cplx amp = out.circuit.target_amplitude();
    const cplx ideal = lambda / (2 * Gamma);
    rep.meta["lambda"] = std::abs(lambda);
    rep.meta["amplitude"] = std::abs(amp);
    if (std::abs(lambda) > Gamma) {
        rep.meta["outside_window"] = true;  // bounded by 1 only; no contract
    } else if (std::abs(lambda) > 0) {
        rep.error_measured = std::abs(amp - ideal) / std::abs(ideal);
    } else {
        rep.error_measured = std::abs(amp);
    }
    return out;
}

} // namespace spectramp
