#include "spectramp/qsp.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <sstream>

#include <Eigen/Dense>
#include <boost/multiprecision/eigen.hpp>

#include "spectramp/detail/su2.hpp"

namespace spectramp {

using detail::Cx;
using detail::Su2;
using detail::xreal;
using wide = boost::multiprecision::cpp_bin_float_100;

std::string to_string(PhaseKind k) {
    switch (k) {
    case PhaseKind::AB:
        return "AB";
    case PhaseKind::B_only:
        return "B";
    case PhaseKind::CD:
        return "CD";
    case PhaseKind::D_only:
        return "D";
    }
    return "AB";
}

PhaseKind phase_kind_from_string(const std::string& s) {
    if (s == "AB") return PhaseKind::AB;
    if (s == "B") return PhaseKind::B_only;
    if (s == "CD") return PhaseKind::CD;
    if (s == "D") return PhaseKind::D_only;
    throw PreconditionError("unknown phase kind '" + s + "'");
}

PhaseSequence to_double(const PhaseSequenceX& p) {
    return {detail::to_double(p.phases), static_cast<double>(p.frame), p.kind};
}

double canonical_phase(double a) {
    const double pi = detail::pi_v<double>();
    double r = std::remainder(a, 2 * pi);
    return r <= -pi ? r + 2 * pi : r;
}

InfeasibleSpec::InfeasibleSpec(const std::string& cond, double w, double v)
    : PreconditionError([&] {
          std::ostringstream os;
          os << "infeasible (A,B): condition " << cond << " violated at x = " << w << " (value " << v << ")";
          return os.str();
      }()),
      condition(cond), witness(w), value(v) {}

namespace {

template <class T>
Su2<T> rotation_product(const BasicPhaseSequence<T>& phi, const T& c, const T& s) {
    Su2<T> u = detail::zframe(phi.frame);
    for (std::size_t k = phi.phases.size(); k-- > 0;) u = u * detail::rot(phi.phases[k], c, s);
    return u;
}

template <class T>
struct CompT {
    T A, B, C, D;
};

template <class T>
CompT<T> product_components(const BasicPhaseSequence<T>& phi, const T& theta) {
    using std::cos;
    using std::sin;
    Su2<T> u = rotation_product(phi, T(cos(theta)), T(sin(theta)));
    return {u.a.re, u.a.im, u.b.im, u.b.re};
}

template <class T>
T eval_t(const ChebPoly& p, const T& x) {
    return detail::clenshaw(detail::from_double<T>(p.coeffs()), x);
}

template <class T>
CompT<T> spec_components_t(const FullSpec& s, const T& theta) {
    using std::cos;
    using std::sin;
    const T c = cos(theta), sn = sin(theta);
    if (s.var == SpecVariable::cos)
        return {eval_t(s.A, c), eval_t(s.B, c), sn * eval_t(s.C, c), sn * eval_t(s.D, c)};
    return {c * eval_t(s.A, sn), c * eval_t(s.B, sn), eval_t(s.C, sn), eval_t(s.D, sn)};
}

template <class T>
T grid_theta(SpecVariable var, int j, int grid) {
    const T pi = detail::pi_v<T>();
    T t = pi * T(j) / T(grid - 1);
    return var == SpecVariable::cos ? t : t - pi / T(2);
}

int parity_of(int n) { return ((n % 2) + 2) % 2; }

/// Largest |coefficient| of the wrong parity relative to N.
double parity_defect(const ChebPoly& p, int N) {
    double m = 0;
    for (int j = 0; j <= p.degree(); ++j)
        if (parity_of(j) != parity_of(N)) m = std::max(m, std::abs(p.coeff(j)));
    return m;
}

Parity parity_enum(int N) { return parity_of(N) == 0 ? Parity::even : Parity::odd; }

} // namespace

Components spec_components(const FullSpec& s, double theta) {
    auto c = spec_components_t<double>(s, theta);
    return {c.A, c.B, c.C, c.D};
}

Components rotation_components(const PhaseSequence& phi, double theta) {
    auto c = product_components<double>(phi, theta);
    return {c.A, c.B, c.C, c.D};
}

FullSpec spec_from_phases(const PhaseSequence& phi, SpecVariable var) {
    const int N = phi.target_degree();
    if (N < 1) throw PreconditionError("phase sequence must have at least one phase");
    if (var == SpecVariable::sin && N % 2 == 0)
        throw PreconditionError("C, D are polynomials in sin(theta) only for odd N");
    auto comp = [&](double v, int which) {
        double theta = var == SpecVariable::cos ? std::acos(v) : std::asin(v);
        double other = std::sqrt(std::max(0.0, 1 - v * v));
        auto c = product_components<double>(phi, theta);
        double vals[4] = {c.A, c.B, c.C, c.D};
        bool reduced = var == SpecVariable::cos ? which >= 2 : which < 2;
        return reduced ? vals[which] / other : vals[which];
    };
    FullSpec s;
    s.var = var;
    ChebPoly* out[4] = {&s.A, &s.B, &s.C, &s.D};
    for (int w = 0; w < 4; ++w) {
        bool reduced = var == SpecVariable::cos ? w >= 2 : w < 2;
        int deg = reduced ? N - 1 : N;
        *out[w] = deg < 0 ? ChebPoly({0.0}) : ChebPoly(detail::interpolate<double>([&](double v) { return comp(v, w); }, deg), parity_enum(deg));
    }
    return s;
}

// ---------------------------------------------------------------------------
// Newton solver for symmetric phases.

namespace detail {
namespace {

struct ReSystem {
    int d = 0;
    int m = 0;
    std::vector<double> x, s, t;
};

ReSystem make_system(const ChebPoly& g, int d) {
    ReSystem sys;
    sys.d = d;
    sys.m = d / 2 + 1;
    const double pi = pi_v<double>();
    for (int j = 1; j <= sys.m; ++j) {
        double x = std::cos((2 * j - 1) * pi / (4 * sys.m));
        sys.x.push_back(x);
        sys.s.push_back(std::sqrt(std::max(0.0, 1 - x * x)));
        sys.t.push_back(g.eval_any(x));
    }
    return sys;
}

template <class T>
std::vector<T> expand(const std::vector<T>& red, int d) {
    std::vector<T> full(d + 1);
    for (int k = 0; k <= d; ++k) full[k] = red[std::min(k, d - k)];
    return full;
}

template <class T>
T re_p(const std::vector<T>& full, const T& x, const T& s) {
    Su2<T> u = zphase(full[0]);
    const Su2<T> w = wx(x, s);
    for (std::size_t k = 1; k < full.size(); ++k) u = u * w * zphase(full[k]);
    return u.a.re;
}

/// Residual F and Jacobian J (m x m) for reduced phases.
void residual_jacobian(const ReSystem& sys, const std::vector<double>& red, Eigen::VectorXd& F,
                       Eigen::MatrixXd* J, double scale = 1.0) {
    const int d = sys.d, m = sys.m;
    auto full = expand(red, d);
    F.resize(m);
    if (J) J->setZero(m, m);
    std::vector<Su2<double>> L(d + 1), R(d + 1);
    for (int j = 0; j < m; ++j) {
        const Su2<double> w = wx(sys.x[j], sys.s[j]);
        L[0] = Su2<double>{};
        for (int k = 0; k < d; ++k) L[k + 1] = L[k] * zphase(full[k]) * w;
        R[d] = Su2<double>{};
        for (int k = d; k >= 1; --k) R[k - 1] = w * zphase(full[k]) * R[k];
        Su2<double> u = L[d] * zphase(full[d]);
        F(j) = u.a.re - scale * sys.t[j];
        if (!J) continue;
        for (int k = 0; k <= d; ++k) {
            Su2<double> dk{{-std::sin(full[k]), std::cos(full[k])}, {0.0, 0.0}};
            (*J)(j, std::min(k, d - k)) += (L[k] * dk * R[k]).a.re;
        }
    }
}

bool newton(const ReSystem& sys, std::vector<double>& red, double scale, int max_iter, double tol,
            NewtonStats* stats) {
    Eigen::VectorXd F, Fn;
    Eigen::MatrixXd J;
    residual_jacobian(sys, red, F, &J, scale);
    double norm = F.lpNorm<Eigen::Infinity>();
    for (int it = 0; it < max_iter; ++it) {
        if (stats) {
            stats->iterations++;
            stats->residual = norm;
        }
        if (norm <= tol) return true;
        Eigen::VectorXd step = J.fullPivLu().solve(F);
        if (!step.allFinite()) return false;
        double lambda = 1.0;
        bool improved = false;
        std::vector<double> trial(red.size());
        for (int ls = 0; ls < 30; ++ls) {
            for (std::size_t i = 0; i < red.size(); ++i) trial[i] = red[i] - lambda * step(i);
            residual_jacobian(sys, trial, Fn, nullptr, scale);
            double nn = Fn.lpNorm<Eigen::Infinity>();
            if (nn < norm || (nn <= tol)) {
                improved = true;
                norm = nn;
                break;
            }
            lambda /= 2;
        }
        if (!improved) return norm <= 10 * tol;
        red = trial;
        residual_jacobian(sys, red, F, &J, scale);
    }
    if (stats) stats->residual = norm;
    return norm <= tol;
}

} // namespace

std::vector<double> solve_symmetric_re(const ChebPoly& g, int d, NewtonStats* stats) {
    if (d == 0) {
        double g0 = g.eval_any(0.0);
        if (std::abs(g0) > 1) throw PreconditionError("|g| > 1");
        return {std::acos(g0)};
    }
    const ReSystem sys = make_system(g, d);
    const double tol = 1e-14;
    std::vector<double> init(sys.m, 0.0);
    init[0] = pi_v<double>() / 4;
    std::vector<double> red = init;
    if (!newton(sys, red, 1.0, 60, tol, stats)) {
        // homotopy on the target amplitude
        red = init;
        const int steps = 16;
        for (int i = 1; i <= steps; ++i) {
            double sc = double(i) / steps;
            if (!newton(sys, red, sc, 60, i == steps ? tol : 1e-10, stats) && i == steps)
                throw NumericalError("phase solver did not converge (residual " +
                                     std::to_string(stats ? stats->residual : 0.0) + ")");
        }
    }
    return expand(red, d);
}

std::vector<xreal> refine_symmetric_re(const ChebPoly& g, int d, const std::vector<double>& start,
                                       NewtonStats* stats) {
    if (d == 0) {
        xreal g0 = eval_t<xreal>(g, xreal(0));
        return {acos(g0)};
    }
    const ReSystem sys = make_system(g, d);
    const int m = sys.m;
    const xreal pi = pi_v<xreal>();
    std::vector<xreal> xs(m), ss(m), ts(m);
    for (int j = 1; j <= m; ++j) {
        xs[j - 1] = cos(xreal(2 * j - 1) * pi / xreal(4 * m));
        ss[j - 1] = sqrt(xreal(1) - xs[j - 1] * xs[j - 1]);
        ts[j - 1] = eval_t<xreal>(g, xs[j - 1]);
    }
    std::vector<xreal> red(m);
    for (int i = 0; i < m; ++i) red[i] = xreal(start[i]);
    Eigen::VectorXd Fd;
    Eigen::MatrixXd J;
    for (int it = 0; it < 12; ++it) {
        auto full = expand(red, d);
        Eigen::VectorXd F(m);
        for (int j = 0; j < m; ++j) F(j) = static_cast<double>(re_p(full, xs[j], ss[j]) - ts[j]);
        double norm = F.lpNorm<Eigen::Infinity>();
        if (stats) {
            stats->iterations++;
            stats->residual = norm;
        }
        if (norm < 1e-32) break;
        residual_jacobian(sys, to_double(red), Fd, &J);
        Eigen::VectorXd step = J.fullPivLu().solve(F);
        for (int i = 0; i < m; ++i) red[i] -= xreal(step(i));
    }
    return expand(red, d);
}

} // namespace detail

// ---------------------------------------------------------------------------
// Phases for a single component.

namespace {

/// From z-phases c_0..c_N of Z(c_0) X Z(c_1) ... X Z(c_N) to rotation phases and frame.
template <class T>
BasicPhaseSequence<T> from_z_phases(const std::vector<T>& c) {
    const int N = static_cast<int>(c.size()) - 1;
    BasicPhaseSequence<T> out;
    out.phases.resize(N);
    out.phases[0] = -c[N];
    for (int k = N - 1; k >= 1; --k) out.phases[N - k] = out.phases[N - k - 1] - c[k];
    out.frame = (c[0] - out.phases[N - 1]) / T(2);
    return out;
}

int degree_for(const ChebPoly& p) {
    int N = p.degree();
    return N == 0 ? 2 : N;
}

void check_component(const ChebPoly& p, int N, const char* name) {
    double tol = 1e-12 * std::max(1.0, sup_abs(p));
    if (parity_defect(p, N) > tol)
        throw PreconditionError(std::string(name) + " must have parity " + std::to_string(N % 2) + " (degree " +
                                std::to_string(N) + ")");
    double sup = sup_abs(p);
    if (sup > 1 + 1e-9) {
        std::ostringstream os;
        os << name << "^2 <= 1 violated: sup |" << name << "| = " << sup;
        throw PreconditionError(os.str());
    }
}

template <class T>
BasicPhaseSequence<T> b_phases_from_lin(const std::vector<T>& lin) {
    const T quarter = detail::pi_v<T>() / T(4);
    std::vector<T> c(lin.size());
    for (std::size_t k = 0; k < lin.size(); ++k) c[k] = T(2) * lin[k];
    c.front() += T(2) * quarter;
    c.back() += T(2) * quarter;
    auto out = from_z_phases(c);
    out.kind = PhaseKind::B_only;
    return out;
}

} // namespace

namespace {

// Binary64 Newton; the 50-digit refinement runs when forced or when the residual misses 1e-13.
std::vector<double> symmetric_phases(const ChebPoly& g, int N) {
    const Precision mode = precision_from_env();
    detail::NewtonStats stats;
    auto lin = detail::solve_symmetric_re(g, N, &stats);
    if (mode == Precision::f64 || (mode == Precision::automatic && stats.residual <= 1e-13)) return lin;
    const std::vector<double> red(lin.begin(), lin.begin() + (N / 2 + 1));
    return detail::to_double(detail::refine_symmetric_re(g, N, red));
}

} // namespace

PhaseSequence phases_for_B_unchecked(const ChebPoly& B) {
    const int N = degree_for(B);
    check_component(B, N, "B");
    return b_phases_from_lin(symmetric_phases(-1.0 * B, N));
}

PhaseSequence phases_for_B(const ChebPoly& B) {
    double b0 = B.eval_any(0.0);
    if (std::abs(b0) > 1e-12) {
        std::ostringstream os;
        os << "B(0) = 0 violated: B(0) = " << b0;
        throw PreconditionError(os.str());
    }
    return phases_for_B_unchecked(B);
}

PhaseSequenceX phases_for_B_extended(const ChebPoly& B) {
    const int N = degree_for(B);
    check_component(B, N, "B");
    ChebPoly g = -1.0 * B;
    auto lin = detail::solve_symmetric_re(g, N);
    auto red = std::vector<double>(lin.begin(), lin.begin() + (N / 2 + 1));
    auto linx = detail::refine_symmetric_re(g, N, red);
    return b_phases_from_lin(linx);
}

PhaseSequence phases_for_D(const ChebPoly& D) {
    const int N = D.degree();
    if (N % 2 == 0) throw PreconditionError("D must be odd with odd degree");
    check_component(D, N, "D");
    const double sign = ((N + 1) / 2) % 2 == 0 ? 1.0 : -1.0;
    ChebPoly g = sign * D;
    // the conversion below is linear; binary64 suffices once the phases are accurate
    std::vector<double> lin = symmetric_phases(g, N);
    const double quarter = detail::pi_v<double>() / 4;
    lin.front() += quarter;
    lin.back() += quarter;
    std::vector<double> c(N + 1);
    for (int k = 0; k <= N; ++k) c[k] = -2.0 * ((N - k) % 2 == 0 ? 1.0 : -1.0) * lin[k];
    auto out = from_z_phases(c);
    out.kind = PhaseKind::D_only;
    return out;
}

// ---------------------------------------------------------------------------
// Verification.

namespace {

template <class T>
double verify_full_t(const BasicPhaseSequence<T>& phi, const FullSpec& spec, int grid) {
    using std::abs;
    double err = 0;
    for (int j = 0; j < grid; ++j) {
        T th = grid_theta<T>(spec.var, j, grid);
        auto u = product_components<T>(phi, th);
        auto s = spec_components_t<T>(spec, th);
        T e = std::max({abs(u.A - s.A), abs(u.B - s.B), abs(u.C - s.C), abs(u.D - s.D)});
        err = std::max(err, static_cast<double>(e));
    }
    return err;
}

template <class T>
double verify_one_t(const BasicPhaseSequence<T>& phi, char comp, const ChebPoly& target, SpecVariable var,
                    int grid) {
    using std::abs;
    using std::cos;
    using std::sin;
    int idx = std::string("ABCD").find(comp);
    if (idx < 0 || idx > 3) throw PreconditionError(std::string("unknown component '") + comp + "'");
    bool reduced = var == SpecVariable::cos ? idx >= 2 : idx < 2;
    double err = 0;
    for (int j = 0; j < grid; ++j) {
        T th = grid_theta<T>(var, j, grid);
        auto u = product_components<T>(phi, th);
        T vals[4] = {u.A, u.B, u.C, u.D};
        T v = var == SpecVariable::cos ? cos(th) : sin(th);
        T f = var == SpecVariable::cos ? sin(th) : cos(th);
        T want = eval_t<T>(target, v);
        if (reduced) want *= f;
        err = std::max(err, static_cast<double>(abs(vals[idx] - want)));
    }
    return err;
}

void check_grid(int N, int grid) {
    if (grid < 2 * N + 1)
        throw PreconditionError("verification grid must have at least 2N+1 = " + std::to_string(2 * N + 1) +
                                " points");
}

} // namespace

double verify_phases(const PhaseSequence& phi, const FullSpec& spec, int grid) {
    check_grid(phi.target_degree(), grid);
    return verify_full_t(phi, spec, grid);
}

double verify_phases(const PhaseSequence& phi, char component, const ChebPoly& target, SpecVariable var,
                     int grid) {
    check_grid(phi.target_degree(), grid);
    return verify_one_t(phi, component, target, var, grid);
}

double verify_phases_extended(const PhaseSequenceX& phi, char component, const ChebPoly& target,
                              SpecVariable var, int grid) {
    check_grid(phi.target_degree(), grid);
    return verify_one_t(phi, component, target, var, grid);
}

double verify_phases_extended(const PhaseSequenceX& phi, const FullSpec& spec, int grid) {
    check_grid(phi.target_degree(), grid);
    return verify_full_t(phi, spec, grid);
}

// ---------------------------------------------------------------------------
// Completion.

namespace {

using lcx = std::complex<long double>;

lcx clenshaw_lc(const std::vector<long double>& a, lcx x) { return detail::clenshaw(a, x); }

std::vector<long double> derivative(const std::vector<long double>& c) {
    const int m = static_cast<int>(c.size()) - 1;
    if (m < 1) return {0.0L};
    std::vector<long double> d(m + 1, 0.0L);
    for (int k = m; k >= 1; --k) d[k - 1] = (k + 1 <= m ? d[k + 1] : 0.0L) + 2.0L * k * c[k];
    d[0] /= 2;
    d.pop_back();
    return d;
}

lcx polish(const std::vector<long double>& c, lcx z) {
    auto dc = derivative(c);
    const lcx z0 = z;
    lcx best = z;
    long double bres = std::abs(clenshaw_lc(c, z));
    for (int it = 0; it < 30; ++it) {
        lcx f = clenshaw_lc(c, z), df = clenshaw_lc(dc, z);
        if (df == lcx(0)) break;
        z -= f / df;
        long double r = std::abs(clenshaw_lc(c, z));
        if (!std::isfinite(r)) break;
        if (r < bres) {
            bres = r;
            best = z;
        }
    }
    return std::abs(best - z0) < 1e-3L * std::max<long double>(1, std::abs(z0)) ? best : z0;
}

std::vector<lcx> cheb_roots(const std::vector<double>& c) {
    const int m = static_cast<int>(c.size()) - 1;
    if (m < 1) return {};
    if (m == 1) return {lcx(-c[0] / c[1])};
    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(m, m);
    M(0, 1) = 1;
    for (int i = 1; i < m - 1; ++i) {
        M(i, i - 1) = 0.5;
        M(i, i + 1) = 0.5;
    }
    M(m - 1, m - 2) += 0.5;
    for (int j = 0; j < m; ++j) M(m - 1, j) -= c[j] / (2 * c[m]);
    Eigen::EigenSolver<Eigen::MatrixXd> es(M, false);
    std::vector<lcx> out;
    for (int i = 0; i < m; ++i) out.emplace_back(es.eigenvalues()(i).real(), es.eigenvalues()(i).imag());
    return out;
}

std::vector<lcx> pair_average(std::vector<lcx> v, const std::vector<long double>& dG, bool by_imag) {
    if (v.size() % 2) throw NumericalError("completion: unpaired root on an axis of 1 - A^2 - B^2");
    std::sort(v.begin(), v.end(), [&](lcx a, lcx b) { return by_imag ? a.imag() < b.imag() : a.real() < b.real(); });
    std::vector<lcx> out;
    for (std::size_t i = 0; i < v.size(); i += 2) {
        lcx r = (v[i] + v[i + 1]) / 2.0L;
        // a double root of G is a simple root of G'
        if (dG.size() > 1) r = polish(dG, r);
        if (by_imag)
            r = lcx(0, r.imag());
        else
            r = lcx(r.real(), 0);
        out.push_back(r);
    }
    return out;
}

} // namespace

FullSpec complete_ab(const ChebPoly& A, const ChebPoly& B, const CompletionOptions& opt) {
    const int N = std::max(A.degree(), B.degree());
    if (N < 1) throw PreconditionError("completion needs degree N >= 1");
    double scale = std::max(1.0, std::max(sup_abs(A), sup_abs(B)));
    if (parity_defect(A, N) > 1e-12 * scale) throw InfeasibleSpec("(1) parity of A", 0.0, parity_defect(A, N));
    if (parity_defect(B, N) > 1e-12 * scale) throw InfeasibleSpec("(1) parity of B", 0.0, parity_defect(B, N));
    if (std::abs(A.eval_any(1.0) - 1) > opt.tol) throw InfeasibleSpec("(2) A(1) = 1", 1.0, A.eval_any(1.0));

    auto norm2 = [&](double x) {
        double a = A.eval_any(x), b = B.eval_any(x);
        return a * a + b * b;
    };
    const int grid = std::max(40 * N + 1, 401);
    const double pi = detail::pi_v<double>();
    for (int j = 0; j < grid; ++j) {
        double x = std::cos(pi * j / (grid - 1));
        if (norm2(x) > 1 + opt.tol) throw InfeasibleSpec("(3) A^2 + B^2 <= 1 on [-1,1]", x, norm2(x));
    }
    for (int j = 0; j < grid; ++j) {
        double x = 1 + (opt.outside_max - 1) * j / (grid - 1);
        if (norm2(x) < 1 - opt.tol) throw InfeasibleSpec("(4) A^2 + B^2 >= 1 for x >= 1", x, norm2(x));
    }
    if (N % 2 == 0) {
        for (int j = 0; j < grid; ++j) {
            double y = opt.outside_max * j / (grid - 1);
            cplx a = A.eval_any(cplx(0, y)), b = B.eval_any(cplx(0, y));
            double v = (a * a + b * b).real();
            if (v < 1 - opt.tol) throw InfeasibleSpec("(5) A^2 + B^2 >= 1 on the imaginary axis", y, v);
        }
    }

    // G = (1 - A^2 - B^2) / (1 - x^2), even of degree 2N - 2, interpolated in extended precision.
    std::vector<double> gc;
    if (N == 1) {
        gc = {1 - norm2(0.0)};
    } else {
        auto ax = detail::from_double<xreal>(A.coeffs()), bx = detail::from_double<xreal>(B.coeffs());
        gc = detail::to_double(detail::interpolate<xreal>(
            [&](const xreal& x) {
                xreal a = detail::clenshaw(ax, x), b = detail::clenshaw(bx, x);
                return (xreal(1) - a * a - b * b) / (xreal(1) - x * x);
            },
            2 * N - 2));
        for (std::size_t k = 1; k < gc.size(); k += 2) gc[k] = 0;
    }
    double gmax = 0;
    for (double v : gc) gmax = std::max(gmax, std::abs(v));
    while (gc.size() > 1 && std::abs(gc.back()) <= 1e-14 * gmax) gc.pop_back();

    const int dC = N - 1;
    FullSpec out{A, B, ChebPoly({0.0}, parity_enum(dC)), ChebPoly({0.0}, parity_enum(dC)), SpecVariable::cos};
    if (gmax < 1e-15) return out;

    std::vector<long double> gl(gc.begin(), gc.end());
    auto dG = derivative(gl);
    std::vector<lcx> S, real_pos, imag_pos;
    int zeros = 0;
    for (lcx r : cheb_roots(gc)) {
        r = polish(gl, r);
        long double tau = 1e-5L * std::max<long double>(1, std::abs(r));
        if (std::abs(r) < 1e-6L) {
            zeros++;
        } else if (std::abs(r.imag()) < tau) {
            if (r.real() > 0) real_pos.push_back(r);
        } else if (std::abs(r.real()) < tau) {
            if (r.imag() > 0) imag_pos.push_back(r);
        } else if (r.real() > 0 && r.imag() > 0) {
            S.push_back(r);
            S.push_back(-r);
        }
    }
    if (zeros % 2) throw NumericalError("completion: odd multiplicity at zero");
    for (int i = 0; i < zeros / 2; ++i) S.push_back(0);
    for (lcx r : pair_average(real_pos, dG, false)) {
        S.push_back(r);
        S.push_back(-r);
    }
    for (lcx r : pair_average(imag_pos, dG, true)) {
        S.push_back(r);
        S.push_back(-r);
    }
    const int hdeg = static_cast<int>(gc.size()) - 1;
    if (static_cast<int>(S.size()) * 2 != hdeg)
        throw NumericalError("completion: root partition found " + std::to_string(S.size()) + " of " +
                             std::to_string(hdeg / 2) + " roots");

    std::vector<lcx> h{lcx(1)};
    for (lcx r : S) {
        std::vector<lcx> nh(h.size() + 1, lcx(0));
        nh[1] += h[0];
        for (std::size_t j = 1; j < h.size(); ++j) {
            nh[j + 1] += h[j] / 2.0L;
            nh[j - 1] += h[j] / 2.0L;
        }
        for (std::size_t j = 0; j < h.size(); ++j) nh[j] -= r * h[j];
        h = nh;
    }
    // normalize |h|^2 = G at the point where G is largest
    long double x0 = 0, g0 = -1;
    for (int j = 0; j <= 2 * hdeg + 8; ++j) {
        long double x = std::cos(pi * (j + 0.5) / (2 * hdeg + 9));
        long double g = detail::clenshaw(gl, x);
        if (g > g0) {
            g0 = g;
            x0 = x;
        }
    }
    if (g0 <= 0) throw NumericalError("completion: 1 - A^2 - B^2 is not positive anywhere");
    long double sc = std::sqrt(g0) / std::abs(detail::clenshaw(h, lcx(x0)));
    for (auto& v : h) v *= sc;

    // global phase minimizing max |C|
    const int ng = 257;
    std::vector<lcx> hv(ng);
    std::vector<long double> wv(ng);
    for (int j = 0; j < ng; ++j) {
        long double x = std::cos(pi * j / (ng - 1));
        hv[j] = detail::clenshaw(h, lcx(x));
        wv[j] = std::sqrt(std::max(0.0L, 1 - x * x));
    }
    auto maxc = [&](long double g) {
        lcx e = std::polar(1.0L, g);
        long double m = 0;
        for (int j = 0; j < ng; ++j) m = std::max(m, std::abs(wv[j] * (e * hv[j]).real()));
        return m;
    };
    long double best_g = 0, best = maxc(0);
    for (int i = 1; i < 360; ++i) {
        long double g = pi * i / 360.0L;
        long double v = maxc(g);
        if (v < best) {
            best = v;
            best_g = g;
        }
    }
    long double lo = best_g - pi / 360, hi = best_g + pi / 360;
    for (int it = 0; it < 40; ++it) {
        long double m1 = lo + (hi - lo) * 0.381966L, m2 = hi - (hi - lo) * 0.381966L;
        if (maxc(m1) < maxc(m2))
            hi = m2;
        else
            lo = m1;
    }
    if (maxc((lo + hi) / 2) < best) best_g = (lo + hi) / 2;
    lcx e = std::polar(1.0L, best_g);
    std::vector<double> cc(h.size()), dc(h.size());
    for (std::size_t k = 0; k < h.size(); ++k) {
        lcx v = e * h[k];
        cc[k] = static_cast<double>(v.real());
        dc[k] = static_cast<double>(v.imag());
    }
    out.C = ChebPoly(cc, parity_enum(dC));
    out.D = ChebPoly(dc, parity_enum(dC));

    double res = 0;
    for (int j = 0; j < grid; ++j) {
        double x = std::cos(pi * j / (grid - 1));
        double c = out.C.eval_any(x), d = out.D.eval_any(x);
        res = std::max(res, std::abs(norm2(x) + (1 - x * x) * (c * c + d * d) - 1));
    }
    if (res > opt.tol) {
        std::ostringstream os;
        os << "completion residual " << res << " exceeds " << opt.tol;
        throw NumericalError(os.str());
    }
    return out;
}

// ---------------------------------------------------------------------------
// Layer stripping.

namespace {

template <class T>
struct M2 {
    Cx<T> m[2][2];
};

template <class T>
M2<T> operator*(const M2<T>& x, const M2<T>& y) {
    M2<T> r;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) r.m[i][j] = x.m[i][0] * y.m[0][j] + x.m[i][1] * y.m[1][j];
    return r;
}

template <class T>
M2<T> operator+(const M2<T>& x, const M2<T>& y) {
    M2<T> r;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) r.m[i][j] = x.m[i][j] + y.m[i][j];
    return r;
}

/// (I + sign sigma_phi) / 2
template <class T>
M2<T> projector(const T& phi, int sign) {
    const T h(0.5);
    Cx<T> em = detail::expi(T(-phi)), ep = detail::expi(phi);
    M2<T> p;
    p.m[0][0] = {h, T(0)};
    p.m[1][1] = {h, T(0)};
    p.m[0][1] = T(sign) * h * em;
    p.m[1][0] = T(sign) * h * ep;
    return p;
}

int spec_degree(const FullSpec& s) {
    if (s.var == SpecVariable::cos) return std::max({s.A.degree(), s.B.degree(), s.C.degree() + 1, s.D.degree() + 1});
    return std::max({s.C.degree(), s.D.degree(), s.A.degree() + 1, s.B.degree() + 1});
}

/// Spec with coefficients in T. P is the pair that is polynomial in the spec variable v,
/// Q the reduced pair: P1^2 + P2^2 + (1 - v^2)(Q1^2 + Q2^2) = 1.
template <class T>
struct SpecT {
    std::vector<T> P1, P2, Q1, Q2;
    SpecVariable var = SpecVariable::cos;
};

template <class T>
SpecT<T> lift(const FullSpec& s) {
    using detail::from_double;
    if (s.var == SpecVariable::cos)
        return {from_double<T>(s.A.coeffs()), from_double<T>(s.B.coeffs()), from_double<T>(s.C.coeffs()),
                from_double<T>(s.D.coeffs()), s.var};
    return {from_double<T>(s.C.coeffs()), from_double<T>(s.D.coeffs()), from_double<T>(s.A.coeffs()),
            from_double<T>(s.B.coeffs()), s.var};
}

template <class T>
CompT<T> spec_components_t(const SpecT<T>& s, const T& theta) {
    using std::cos;
    using std::sin;
    const T c = cos(theta), sn = sin(theta);
    const T v = s.var == SpecVariable::cos ? c : sn;
    const T f = s.var == SpecVariable::cos ? sn : c;
    T p1 = detail::clenshaw(s.P1, v), p2 = detail::clenshaw(s.P2, v);
    T q1 = f * detail::clenshaw(s.Q1, v), q2 = f * detail::clenshaw(s.Q2, v);
    if (s.var == SpecVariable::cos) return {p1, p2, q1, q2};
    return {q1, q2, p1, p2};
}

template <class T>
BasicPhaseSequence<T> strip(const SpecT<T>& spec, int N) {
    using std::atan2;
    using std::cos;
    using std::sin;
    const int M = 2 * N + 2;
    const T pi = detail::pi_v<T>();
    std::vector<M2<T>> U(M);
    std::vector<T> th(M);
    for (int j = 0; j < M; ++j) {
        th[j] = T(2) * pi * T(j) / T(M);
        auto c = spec_components_t<T>(spec, th[j]);
        M2<T>& u = U[j];
        u.m[0][0] = {c.A, c.B};
        u.m[0][1] = {c.D, c.C};
        u.m[1][0] = {-c.D, c.C};
        u.m[1][1] = {c.A, -c.B};
    }
    // coefficient of w^k stored at index k + N
    std::vector<M2<T>> co(2 * N + 1);
    for (int k = -N; k <= N; ++k) {
        M2<T> s;
        for (int j = 0; j < M; ++j) {
            Cx<T> e = detail::expi(T(-T(k) * th[j]));
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b) s.m[a][b] = s.m[a][b] + e * U[j].m[a][b];
        }
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b) s.m[a][b] = (T(1) / T(M)) * s.m[a][b];
        co[k + N] = s;
    }
    BasicPhaseSequence<T> out;
    for (int n = N; n >= 1; --n) {
        const M2<T>& top = co[n + N];
        const M2<T>& bot = co[-n + N];
        // Rows r of the top coefficient satisfy r1 e^{i phi} = -r0, rows of the bottom one r1 e^{i phi} = r0.
        // Summing r0 conj(r1) over all four rows weights each estimate by its magnitude.
        Cx<T> z;
        for (int row = 0; row < 2; ++row) {
            z = z - top.m[row][0] * detail::conj(top.m[row][1]);
            z = z + bot.m[row][0] * detail::conj(bot.m[row][1]);
        }
        const T phi = atan2(z.im, z.re);
        out.phases.push_back(phi);
        M2<T> Pm = projector(phi, -1), Pp = projector(phi, 1);
        std::vector<M2<T>> next(2 * N + 1);
        for (int k = -(n - 1); k <= n - 1; ++k) next[k + N] = co[k + 1 + N] * Pm + co[k - 1 + N] * Pp;
        co = next;
    }
    const Cx<T>& f = co[N].m[0][0];
    out.frame = -atan2(f.im, f.re);
    out.kind = PhaseKind::AB;
    return out;
}

/// Moves all four components by minimum-norm Gauss-Newton steps until
/// P1^2 + P2^2 + (1 - v^2)(Q1^2 + Q2^2) = 1 holds to extended precision at 2N+1 Chebyshev nodes.
/// A spec read from binary64 coefficients is unitary only to ~1e-16, which layer stripping can
/// amplify without bound; the correction is of that size.
template <class T>
SpecT<T> unitarize(const FullSpec& spec, int N) {
    SpecT<T> s = lift<T>(spec);
    const int dq = N - 1;
    s.P1.resize(N + 1, T(0));
    s.P2.resize(N + 1, T(0));
    s.Q1.resize(std::max(dq, 0) + 1, T(0));
    s.Q2.resize(std::max(dq, 0) + 1, T(0));
    // unknowns: (vector, coefficient index, is_reduced)
    struct Var {
        std::vector<T>* vec;
        int k;
        bool reduced;
    };
    std::vector<Var> vars;
    for (int k = parity_of(N); k <= N; k += 2) {
        vars.push_back({&s.P1, k, false});
        vars.push_back({&s.P2, k, false});
    }
    for (int k = parity_of(dq); dq >= 0 && k <= dq; k += 2) {
        vars.push_back({&s.Q1, k, true});
        vars.push_back({&s.Q2, k, true});
    }
    const int nv = static_cast<int>(vars.size());
    // the constraint is even in v, so nodes on (0, 1) suffice
    const int K = N + 1;
    const T pi = detail::pi_v<T>();
    std::vector<T> v(K), w(K);
    std::vector<std::vector<T>> Tk(K, std::vector<T>(N + 1));
    for (int j = 0; j < K; ++j) {
        v[j] = cos(pi * T(2 * j + 1) / T(4 * K));
        w[j] = T(1) - v[j] * v[j];
        Tk[j][0] = T(1);
        if (N >= 1) Tk[j][1] = v[j];
        for (int k = 2; k <= N; ++k) Tk[j][k] = T(2) * v[j] * Tk[j][k - 1] - Tk[j][k - 2];
    }
    // the Jacobian is as ill-conditioned as the spec, so it is formed and solved in T
    using Mat = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>;
    using Vec = Eigen::Matrix<T, Eigen::Dynamic, 1>;
    for (int it = 0; it < 12; ++it) {
        Vec F(K);
        Mat J(K, nv);
        T norm(0);
        for (int j = 0; j < K; ++j) {
            T p1 = detail::clenshaw(s.P1, v[j]), p2 = detail::clenshaw(s.P2, v[j]);
            T q1 = detail::clenshaw(s.Q1, v[j]), q2 = detail::clenshaw(s.Q2, v[j]);
            F(j) = p1 * p1 + p2 * p2 + w[j] * (q1 * q1 + q2 * q2) - T(1);
            norm = std::max(norm, T(abs(F(j))));
            for (int i = 0; i < nv; ++i) {
                const Var& var = vars[i];
                const T& val = var.vec == &s.P1 ? p1 : var.vec == &s.P2 ? p2 : var.vec == &s.Q1 ? q1 : q2;
                J(j, i) = T(2) * (var.reduced ? w[j] : T(1)) * val * Tk[j][var.k];
            }
        }
        if (norm < T(1e-90)) break;
        Vec step = J.completeOrthogonalDecomposition().solve(F);
        for (int i = 0; i < nv; ++i) (*vars[i].vec)[vars[i].k] -= step(i);
    }
    return s;
}

template <class T>
double full_residual(const BasicPhaseSequence<T>& phi, const FullSpec& spec) {
    using std::abs;
    const int n = 4 * phi.target_degree() + 8;
    const T pi = detail::pi_v<T>();
    double err = 0;
    for (int j = 0; j < n; ++j) {
        T th = T(2) * pi * T(j) / T(n);
        auto u = product_components<T>(phi, th);
        auto s = spec_components_t<T>(spec, th);
        err = std::max(err, static_cast<double>(std::max({abs(u.A - s.A), abs(u.B - s.B), abs(u.C - s.C), abs(u.D - s.D)})));
    }
    return err;
}

/// Gauss-Newton on all phases and the frame against the spec sampled on the circle.
/// Residuals are formed in T, the Jacobian in binary64.
template <class T>
double polish_toward(BasicPhaseSequence<T>& phi, const std::vector<T>& th, const std::vector<CompT<T>>& want,
                     int iters) {
    const int N = phi.target_degree();
    const int M = static_cast<int>(th.size());
    auto residual = [&](const BasicPhaseSequence<T>& p, Eigen::VectorXd& F) {
        F.resize(4 * M);
        for (int j = 0; j < M; ++j) {
            auto u = product_components<T>(p, th[j]);
            T d[4] = {u.A - want[j].A, u.B - want[j].B, u.C - want[j].C, u.D - want[j].D};
            for (int i = 0; i < 4; ++i) F(4 * j + i) = static_cast<double>(d[i]);
        }
        return F.norm();
    };
    Eigen::VectorXd F;
    double r = residual(phi, F);
    double mu = 1e-3;
    for (int it = 0; it < iters && r > 1e-30; ++it) {
        std::vector<double> ph = detail::to_double(phi.phases);
        const double om = static_cast<double>(phi.frame);
        Eigen::MatrixXd J(4 * M, N + 1);
        std::vector<Su2<double>> pre(N + 1), suf(N + 1);
        for (int j = 0; j < M; ++j) {
            const double c = std::cos(static_cast<double>(th[j])), sn = std::sin(static_cast<double>(th[j]));
            // U = F R_N ... R_1; pre[k] = F R_N ... R_{k+2}, suf[k] = R_k ... R_1 (0-based k)
            pre[N - 1] = detail::zframe(om);
            for (int k = N - 1; k >= 1; --k) pre[k - 1] = pre[k] * detail::rot(ph[k], c, sn);
            suf[0] = Su2<double>{};
            for (int k = 0; k < N; ++k) suf[k + 1] = detail::rot(ph[k], c, sn) * suf[k];
            for (int k = 0; k < N; ++k) {
                Su2<double> dr{{0.0, 0.0}, {-sn * std::cos(ph[k]), sn * std::sin(ph[k])}};
                Su2<double> du = pre[k] * dr * suf[k];
                J(4 * j, k) = du.a.re;
                J(4 * j + 1, k) = du.a.im;
                J(4 * j + 2, k) = du.b.im;
                J(4 * j + 3, k) = du.b.re;
            }
            Su2<double> dframe{{-std::sin(om), -std::cos(om)}, {0.0, 0.0}};
            Su2<double> du = dframe * suf[N];
            J(4 * j, N) = du.a.re;
            J(4 * j + 1, N) = du.a.im;
            J(4 * j + 2, N) = du.b.im;
            J(4 * j + 3, N) = du.b.re;
        }
        // Levenberg-Marquardt
        const Eigen::MatrixXd JtJ = J.transpose() * J;
        const Eigen::VectorXd g = J.transpose() * F;
        bool improved = false;
        for (int ls = 0; ls < 30 && !improved; ++ls) {
            Eigen::MatrixXd H = JtJ;
            for (int i = 0; i <= N; ++i) H(i, i) += mu * (1.0 + JtJ(i, i));
            Eigen::VectorXd step = H.ldlt().solve(g);
            if (!step.allFinite()) break;
            BasicPhaseSequence<T> trial = phi;
            for (int k = 0; k < N; ++k) trial.phases[k] -= T(step(k));
            trial.frame -= T(step(N));
            Eigen::VectorXd Ft;
            double rt = residual(trial, Ft);
            if (rt < r) {
                phi = trial;
                F = Ft;
                r = rt;
                improved = true;
                mu = std::max(mu / 5, 1e-15);
            } else {
                mu *= 4;
            }
        }
        if (!improved) break;
    }
    return r;
}

template <class T>
std::vector<T> polish_grid(int N) {
    const int M = 2 * N + 2;
    std::vector<T> th(M);
    for (int j = 0; j < M; ++j) th[j] = detail::pi_v<T>() * T(j) / T(M);
    return th;
}

template <class T>
void polish_phases(BasicPhaseSequence<T>& phi, const FullSpec& spec, int iters) {
    auto th = polish_grid<T>(phi.target_degree());
    std::vector<CompT<T>> want(th.size());
    for (std::size_t j = 0; j < th.size(); ++j) want[j] = spec_components_t<T>(spec, th[j]);
    polish_toward(phi, th, want, iters);
}

} // namespace

PhaseSequence detail::polish_full(PhaseSequence start, const FullSpec& spec, int iters) {
    polish_phases(start, spec, iters);
    return start;
}

PhaseSequenceX phases_from_full_extended(const FullSpec& spec, double tol) {
    const int N = spec_degree(spec);
    if (N < 1) throw PreconditionError("spec must have degree >= 1");
    // Stripping multiplies the unitarity defect by a data-dependent factor per layer, so the
    // data are made unitary and stripped with ~100 digits before rounding to the result type.
    auto us = unitarize<wide>(spec, N);
    auto wide_phi = strip<wide>(us, N);
    PhaseSequenceX phi;
    for (const auto& v : wide_phi.phases) phi.phases.push_back(xreal(v));
    phi.frame = xreal(wide_phi.frame);
    if (full_residual(phi, spec) > tol) polish_phases(phi, spec, 40);
    double r = full_residual(phi, spec);
    if (r > tol) throw NumericalError("layer stripping residual " + std::to_string(r));
    return phi;
}

namespace {

// rounding ill-conditioned phases to binary64 costs accuracy; a short polish in binary64 recovers it
PhaseSequence rounded_extended(const FullSpec& spec, double tol) {
    PhaseSequence phi = to_double(phases_from_full_extended(spec, tol));
    if (full_residual(phi, spec) > 0.01 * tol) polish_phases(phi, spec, 20);
    return phi;
}

} // namespace

PhaseSequence phases_from_full(const FullSpec& spec, double tol) {
    const int N = spec_degree(spec);
    if (N < 1) throw PreconditionError("spec must have degree >= 1");
    if (use_extended(N)) return rounded_extended(spec, tol);
    auto phi = strip<double>(lift<double>(spec), N);
    // margin for grids other than the one checked here
    double r = full_residual(phi, spec);
    if (r <= 0.01 * tol) return phi;
    if (precision_from_env() == Precision::f64 && r <= tol) return phi;
    if (precision_from_env() == Precision::f64)
        throw NumericalError("layer stripping residual " + std::to_string(r) + " exceeds " + std::to_string(tol));
    return rounded_extended(spec, tol);
}

// ---------------------------------------------------------------------------
// Serialization.

nlohmann::json to_json(const PhaseSequence& p) {
    return {{"phases", p.phases}, {"frame", p.frame}, {"kind", to_string(p.kind)}, {"degree", p.target_degree()}};
}

PhaseSequence phases_from_json(const nlohmann::json& j) {
    PhaseSequence p;
    p.phases = j.at("phases").get<std::vector<double>>();
    p.frame = j.value("frame", 0.0);
    p.kind = phase_kind_from_string(j.value("kind", std::string("AB")));
    return p;
}

nlohmann::json to_json(const FullSpec& s) {
    return {{"var", s.var == SpecVariable::cos ? "cos" : "sin"},
            {"A", to_json(s.A)},
            {"B", to_json(s.B)},
            {"C", to_json(s.C)},
            {"D", to_json(s.D)}};
}

FullSpec spec_from_json(const nlohmann::json& j) {
    FullSpec s;
    std::string v = j.value("var", std::string("cos"));
    if (v != "cos" && v != "sin") throw PreconditionError("spec var must be cos or sin");
    s.var = v == "cos" ? SpecVariable::cos : SpecVariable::sin;
    s.A = cheb_from_json(j.at("A"));
    s.B = cheb_from_json(j.at("B"));
    s.C = cheb_from_json(j.at("C"));
    s.D = cheb_from_json(j.at("D"));
    return s;
}

} // namespace spectramp

