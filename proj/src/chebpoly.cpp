#include "spectramp/chebpoly.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/math/special_functions/erf.hpp>

#include "spectramp/detail/cheb_core.hpp"

namespace spectramp {

using detail::xreal;
using std::numbers::pi;

std::string to_string(Parity p) {
    switch (p) {
    case Parity::even:
        return "even";
    case Parity::odd:
        return "odd";
    default:
        return "none";
    }
}

Parity parity_from_string(const std::string& s) {
    if (s == "even") return Parity::even;
    if (s == "odd") return Parity::odd;
    if (s == "none") return Parity::none;
    throw PreconditionError("unknown parity '" + s + "'");
}

ChebPoly::ChebPoly() : c_{0.0}, parity_(Parity::even) {}

ChebPoly::ChebPoly(std::vector<double> coeffs, Parity parity) : c_(std::move(coeffs)), parity_(parity) {
    if (parity_ == Parity::odd)
        for (std::size_t j = 0; j < c_.size(); j += 2) c_[j] = 0.0;
    if (parity_ == Parity::even)
        for (std::size_t j = 1; j < c_.size(); j += 2) c_[j] = 0.0;
    while (c_.size() > 1 && c_.back() == 0.0) c_.pop_back();
    if (c_.empty()) c_.push_back(0.0);
}

double ChebPoly::operator()(double x) const {
    if (!(std::abs(x) <= 1.0 + 1e-12)) throw std::domain_error("cheb_eval: |x| > 1");
    return detail::clenshaw(c_, x);
}

double ChebPoly::eval_any(double x) const { return detail::clenshaw(c_, x); }

cplx ChebPoly::eval_any(cplx z) const { return detail::clenshaw(c_, z); }

ChebPoly ChebPoly::T(int n) {
    std::vector<double> c(n + 1, 0.0);
    c[n] = 1.0;
    return ChebPoly(std::move(c), n % 2 ? Parity::odd : Parity::even);
}

double cheb_eval(const ChebPoly& p, double x) { return p(x); }

namespace {

Parity join(Parity a, Parity b) { return a == b ? a : Parity::none; }

Parity product_parity(Parity a, Parity b) {
    if (a == Parity::none || b == Parity::none) return Parity::none;
    return a == b ? Parity::even : Parity::odd;
}

Parity flip(Parity a) {
    if (a == Parity::even) return Parity::odd;
    if (a == Parity::odd) return Parity::even;
    return Parity::none;
}

} // namespace

ChebPoly operator+(const ChebPoly& a, const ChebPoly& b) {
    std::vector<double> c(std::max(a.coeffs().size(), b.coeffs().size()), 0.0);
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = a.coeff(i) + b.coeff(i);
    return ChebPoly(std::move(c), join(a.parity(), b.parity()));
}

ChebPoly operator-(const ChebPoly& a, const ChebPoly& b) { return a + (-1.0) * b; }

ChebPoly operator*(const ChebPoly& a, const ChebPoly& b) {
    return ChebPoly(detail::mul(a.coeffs(), b.coeffs()), product_parity(a.parity(), b.parity()));
}

ChebPoly operator*(double s, const ChebPoly& a) {
    auto c = a.coeffs();
    for (auto& v : c) v *= s;
    return ChebPoly(std::move(c), a.parity());
}

ChebPoly mul_x(const ChebPoly& a) { return ChebPoly(detail::mul_x(a.coeffs()), flip(a.parity())); }

ChebPoly integrate_from_zero(const ChebPoly& a) {
    return ChebPoly(detail::integrate_from_zero(a.coeffs()), flip(a.parity()));
}

ChebPoly odd_part(const ChebPoly& a) { return ChebPoly(a.coeffs(), Parity::odd); }

ChebPoly even_part(const ChebPoly& a) { return ChebPoly(a.coeffs(), Parity::even); }

ChebPoly compose_affine(const ChebPoly& p, double a, double b) {
    if (std::abs(a) + std::abs(b) > 1.0 + 1e-14)
        throw PreconditionError("compose_affine: |a| + |b| must not exceed 1");
    Parity par = (b == 0.0) ? p.parity() : Parity::none;
    if (use_extended(p.degree())) {
        auto c = detail::compose_affine(detail::from_double<xreal>(p.coeffs()), xreal(a), xreal(b));
        return ChebPoly(detail::to_double(c), par);
    }
    return ChebPoly(detail::compose_affine(p.coeffs(), a, b), par);
}

ChebPoly interpolate(const std::function<double(double)>& f, int n, Parity parity) {
    return ChebPoly(detail::interpolate<double>(f, n), parity);
}

double chop(ChebPoly& p, double budget) {
    auto c = p.coeffs();
    double dropped = 0.0;
    while (c.size() > 1 && dropped + std::abs(c.back()) <= budget) {
        dropped += std::abs(c.back());
        c.pop_back();
    }
    p = ChebPoly(std::move(c), p.parity());
    return dropped;
}

std::vector<double> to_monomial(const ChebPoly& p) {
    const int n = p.degree();
    std::vector<double> out(n + 1, 0.0);
    // Monomial forms of T_{k-1} and T_k, advanced by T_{k+1} = 2x T_k - T_{k-1}.
    std::vector<double> tm1(n + 1, 0.0), t0(n + 1, 0.0);
    t0[0] = 1.0;
    for (int k = 0; k <= n; ++k) {
        for (int i = 0; i <= n; ++i) out[i] += p.coeff(k) * t0[i];
        std::vector<double> tp1(n + 1, 0.0);
        for (int i = 0; i < n; ++i) tp1[i + 1] += (k == 0 ? 1.0 : 2.0) * t0[i];
        if (k > 0)
            for (int i = 0; i <= n; ++i) tp1[i] -= tm1[i];
        tm1 = t0;
        t0 = tp1;
    }
    return out;
}

namespace {

struct Peak {
    double value = 0.0;
    double x = 0.0;
};

/// Sup of g on I over 10*deg+1 Chebyshev-distributed points, then three golden-section rounds.
Peak grid_sup(const std::function<double(double)>& g, const Interval& I, int deg) {
    Peak best;
    if (I.hi < I.lo) return best;
    if (I.hi == I.lo) return {g(I.lo), I.lo};
    const int m = std::max(10 * deg + 1, 201);
    const double mid = 0.5 * (I.lo + I.hi), half = 0.5 * (I.hi - I.lo);
    std::vector<double> xs(m);
    int worst = 0;
    best.value = -1.0;
    for (int i = 0; i < m; ++i) {
        xs[i] = mid - half * std::cos(pi * i / (m - 1));
        double v = g(xs[i]);
        if (v > best.value) {
            best = {v, xs[i]};
            worst = i;
        }
    }
    double a = xs[std::max(worst - 1, 0)], b = xs[std::min(worst + 1, m - 1)];
    const double r = (std::sqrt(5.0) - 1.0) / 2.0;
    for (int round = 0; round < 3; ++round) {
        double lo = a, hi = b;
        double x1 = hi - r * (hi - lo), x2 = lo + r * (hi - lo);
        double f1 = g(x1), f2 = g(x2);
        for (int it = 0; it < 40 && hi - lo > 1e-15; ++it) {
            if (f1 > f2) {
                hi = x2;
                x2 = x1;
                f2 = f1;
                x1 = hi - r * (hi - lo);
                f1 = g(x1);
            } else {
                lo = x1;
                x1 = x2;
                f1 = f2;
                x2 = lo + r * (hi - lo);
                f2 = g(x2);
            }
        }
        double xs_ = f1 > f2 ? x1 : x2, vs = std::max(f1, f2);
        if (vs > best.value) best = {vs, xs_};
        double w = 0.25 * (b - a);
        a = std::max(I.lo, best.x - w);
        b = std::min(I.hi, best.x + w);
    }
    return best;
}

void rescale_to_unit(ChebPoly& p, double extra = 0.0) {
    double m = sup_abs(p);
    double s = std::max(m, 1.0) * (1.0 + extra);
    if (s > 1.0) p = (1.0 / s) * p;
}

} // namespace

double sup_abs(const ChebPoly& p) {
    return grid_sup([&](double x) { return std::abs(p.eval_any(x)); }, {-1.0, 1.0}, p.degree()).value;
}

nlohmann::json to_json(const ChebPoly& p) {
    return {{"parity", to_string(p.parity())}, {"coeffs", p.coeffs()}};
}

ChebPoly cheb_from_json(const nlohmann::json& j) {
    return ChebPoly(j.at("coeffs").get<std::vector<double>>(),
                    parity_from_string(j.value("parity", std::string("none"))));
}

std::vector<double> scaled_bessel_i(double beta, int jmax) {
    if (beta < 0) throw PreconditionError("scaled_bessel_i: beta < 0");
    return detail::scaled_bessel_i(beta, jmax);
}

std::vector<double> bessel_j(double tau, int jmax) { return detail::bessel_j(tau, jmax); }

ChebPoly jacobi_anger_exp(double beta, int n) {
    if (beta < 0) throw PreconditionError("jacobi_anger_exp: beta must be >= 0");
    if (n < 0) throw PreconditionError("jacobi_anger_exp: n must be >= 0");
    if (use_extended(n)) return ChebPoly(detail::to_double(detail::exp_coeffs(xreal(beta), n)));
    return ChebPoly(detail::exp_coeffs(beta, n));
}

double exp_tail(double beta, int n) {
    if (beta < 0) throw PreconditionError("exp_tail: beta must be >= 0");
    auto s = detail::scaled_bessel_i(beta, n + 1);
    double t = 0.0;
    for (std::size_t j = s.size() - 1; j > static_cast<std::size_t>(n); --j) t += s[j];
    return 2.0 * t;
}

int exp_degree(double beta, double eps) {
    if (!(eps > 0)) throw PreconditionError("exp_degree: eps must be positive");
    double m = std::ceil(std::max(beta * std::exp(2.0), std::log(2.0 / eps)));
    return static_cast<int>(std::ceil(std::sqrt(2.0 * m * std::log(4.0 / eps))));
}

ChebPoly gauss_poly(double gamma, int n) {
    if (n < 0 || n % 2) throw PreconditionError("gauss_poly: n must be even and >= 0");
    if (use_extended(n))
        return ChebPoly(detail::to_double(detail::gauss_coeffs(xreal(gamma), n)), Parity::even);
    return ChebPoly(detail::gauss_coeffs(gamma, n), Parity::even);
}

double gauss_tail(double gamma, int n) { return exp_tail(gamma * gamma / 2.0, n / 2); }

ChebPoly erf_poly(double k, int n) {
    if (!(k > 0)) throw PreconditionError("erf_poly: k must be positive");
    if (n < 1 || n % 2 == 0) throw PreconditionError("erf_poly: n must be odd");
    if (use_extended(n))
        return ChebPoly(detail::to_double(detail::erf_coeffs(xreal(k), n)), Parity::odd);
    return ChebPoly(detail::erf_coeffs(k, n), Parity::odd);
}

double erf_bound(double k, int n) {
    return 4.0 * k / (std::sqrt(pi) * n) * gauss_tail(k, n - 1);
}

int erf_degree(double k, double eps) {
    const double beta = k * k / 2.0;
    int jmax = static_cast<int>(std::ceil(std::sqrt(2.0 * beta * (std::log(1.0 / eps) + 10.0)))) + 40;
    for (;;) {
        auto s = detail::scaled_bessel_i(beta, jmax);
        std::vector<double> tail(s.size() + 1, 0.0);
        for (std::size_t j = s.size(); j-- > 0;) tail[j] = tail[j + 1] + s[j];
        for (int m = 0; m <= jmax; ++m) {
            int n = 2 * m + 1;
            double bound = 4.0 * k / (std::sqrt(pi) * n) * 2.0 * tail[m + 1];
            if (bound <= eps) return n;
        }
        jmax *= 2;
    }
}

ChebPoly cos_poly(double tau, int n) {
    auto J = detail::bessel_j(tau, n);
    std::vector<double> c(n + 1, 0.0);
    c[0] = J[0];
    for (int j = 2; j <= n; j += 2) c[j] = (j % 4 == 0 ? 2.0 : -2.0) * J[j];
    return ChebPoly(std::move(c), Parity::even);
}

ChebPoly sin_poly(double tau, int n) {
    auto J = detail::bessel_j(tau, n);
    std::vector<double> c(n + 1, 0.0);
    for (int j = 1; j <= n; j += 2) c[j] = (j % 4 == 1 ? 2.0 : -2.0) * J[j];
    return ChebPoly(std::move(c), Parity::odd);
}

double trig_tail(double tau, int n) {
    auto J = detail::bessel_j(tau, n + 1);
    double t = 0.0;
    for (std::size_t j = n + 1; j < J.size(); ++j) t += 2.0 * std::abs(J[j]);
    return t;
}

int trig_degree(double tau, double eps, int parity) {
    int jmax = static_cast<int>(std::ceil(std::abs(tau))) + 40;
    for (;;) {
        auto J = detail::bessel_j(tau, jmax);
        for (int n = parity; n <= jmax; n += 2) {
            // only coefficients of the matching parity are dropped
            double t = 0.0;
            for (std::size_t j = n + 2; j < J.size(); j += 2) t += 2.0 * std::abs(J[j]);
            if (t <= eps) return n;
        }
        jmax *= 2;
    }
}

ChebPoly sgn_poly(double kappa, double delta, double eps) {
    if (!(kappa > 0)) throw PreconditionError("sgn_poly: kappa must be positive");
    if (!(std::abs(delta) <= 1.0)) throw PreconditionError("sgn_poly: delta must lie in [-1,1]");
    if (!(eps > 0 && eps <= std::sqrt(2.0 / (std::exp(1.0) * pi))))
        throw PreconditionError("sgn_poly: eps must lie in (0, sqrt(2/(e pi))]");
    const double e1 = eps / 2.0;
    const double k = std::sqrt(2.0) / kappa * std::sqrt(std::log(2.0 / (pi * e1 * e1)));
    const int n = erf_degree(2.0 * k, eps / 8.0);
    const Parity par = delta == 0.0 ? Parity::odd : Parity::none;
    ChebPoly p;
    // erf(2k y) at y = (x - delta)/2
    if (use_extended(n)) {
        auto c = detail::erf_coeffs(xreal(2.0 * k), n);
        c = detail::compose_affine(c, xreal(0.5), xreal(-delta / 2.0));
        p = ChebPoly(detail::to_double(c), par);
    } else {
        auto c = detail::erf_coeffs(2.0 * k, n);
        c = detail::compose_affine(c, 0.5, -delta / 2.0);
        p = ChebPoly(std::move(c), par);
    }
    chop(p, eps / 8.0);
    rescale_to_unit(p);
    return p;
}

ChebPoly rect_poly(double w, double kappa, double eps) {
    if (!(kappa > 0 && kappa <= 2.0)) throw PreconditionError("rect_poly: kappa must lie in (0,2]");
    if (!(w >= 0 && w <= 2.0 - kappa)) throw PreconditionError("rect_poly: w must lie in [0, 2-kappa]");
    const double delta = (w + kappa) / 2.0;
    ChebPoly s = sgn_poly(kappa, delta, eps);
    // s(x) ~ sgn(x - delta), so -(s(x) + s(-x))/2 ~ rect(x/w)
    std::vector<double> c(s.coeffs().size(), 0.0);
    for (std::size_t j = 0; j < c.size(); j += 2) c[j] = -s.coeffs()[j];
    ChebPoly p(std::move(c), Parity::even);
    rescale_to_unit(p);
    return p;
}

ChebPoly lin_amp_poly(double Gamma, double eps) {
    if (!(Gamma > 0 && Gamma <= 0.5)) throw PreconditionError("lin_amp_poly: Gamma must lie in (0, 1/2]");
    if (!(eps > 0)) throw PreconditionError("lin_amp_poly: eps must be positive");
    if (eps > lin_amp_c * Gamma)
        throw PreconditionError("lin_amp_poly: eps exceeds " + std::to_string(lin_amp_c) + " * Gamma");
    ChebPoly r = rect_poly(2.0 * Gamma, 2.0 * Gamma, eps / 2.0);
    ChebPoly p = (1.0 / (2.0 * Gamma)) * mul_x(r);
    rescale_to_unit(p);
    return p;
}

namespace {

template <class T>
T gap_entire(const T& x, double Delta, double k) {
    const T d(Delta);
    return (x + T(1) - d) / d * boost::math::erfc(T(k) * (x + T(1) - T(1.5) * d)) / T(2);
}

} // namespace

ChebPoly gap_amp_poly(double Delta, double eps) {
    if (!(Delta > 0 && Delta <= 0.5)) throw PreconditionError("gap_amp_poly: Delta must lie in (0, 1/2]");
    if (!(eps > 0 && eps <= 0.5)) throw PreconditionError("gap_amp_poly: eps must lie in (0, 1/2]");
    const double e1 = std::min(eps / 5.0, std::sqrt(1.0 / (2.0 * std::exp(1.0) * pi)));
    const double e2 = eps / 5.0;
    const double k = std::sqrt(2.0) / Delta * std::sqrt(std::log(1.0 / (2.0 * pi * e1 * e1)));
    // Bernstein-ellipse estimate as the starting degree.
    int n = static_cast<int>(std::ceil(std::pow(Delta, -0.5) * std::pow(std::log(1.0 / (Delta * eps)), 1.5)));
    n = std::max(n, 15) | 1;
    for (;;) {
        std::vector<double> c;
        if (use_extended(n)) {
            auto cx = detail::interpolate<xreal>(
                [&](const xreal& x) { return gap_entire(x, Delta, k) - gap_entire(xreal(-x), Delta, k); }, n);
            c = detail::to_double(cx);
        } else {
            c = detail::interpolate<double>(
                [&](double x) { return gap_entire(x, Delta, k) - gap_entire(-x, Delta, k); }, n);
        }
        double last = 0.0;
        for (int j = 3 * n / 4; j <= n; ++j) last += std::abs(c[j]);
        if (last <= e2 / 100.0) {
            ChebPoly p(std::move(c), Parity::odd);
            chop(p, e2);
            // Pull the bound below 1 by a margin so downstream phase synthesis stays well conditioned.
            rescale_to_unit(p, eps / 4.0);
            return p;
        }
        n = 2 * n + 1;
    }
}

namespace {

/// arcsin(x) times an erf window flat on [-1/2,1/2]; width k is set by the window error.
template <class T>
T windowed_arcsin(const T& x, double k) {
    using std::asin;
    const double c = 0.67;
    T w = (boost::math::erf(T(k) * (x + T(c))) - boost::math::erf(T(k) * (x - T(c)))) / T(2);
    return asin(x) * w;
}

} // namespace

ChebPoly arcsin_poly(double eps) {
    if (!(eps > 0 && eps <= 0.1)) throw PreconditionError("arcsin_poly: eps must lie in (0, 0.1]");
    const double ew = eps / 4.0;
    const double k = std::sqrt(std::log(2.0 / ew)) / 0.17;
    auto build = [&](int n) {
        std::vector<double> c;
        if (use_extended(n)) {
            c = detail::to_double(detail::interpolate<xreal>([&](const xreal& x) { return windowed_arcsin(x, k); }, n));
        } else {
            c = detail::interpolate<double>([&](double x) { return windowed_arcsin(x, k); }, n);
        }
        ChebPoly p(std::move(c), Parity::odd);
        rescale_to_unit(p);
        return p;
    };
    auto ok = [&](const ChebPoly& p) { return certify_arcsin(p, eps).passed(); };
    // Double the degree until the certificate passes, then bisect down to the smallest passing odd degree.
    int hi = 7;
    ChebPoly best = build(hi);
    while (!ok(best)) {
        hi = 2 * hi + 1;
        if (hi > 4000) throw NumericalError("arcsin_poly: certificate did not pass below degree 4000");
        best = build(hi);
    }
    int lo = (hi - 1) / 2;  // known or assumed to fail
    while (hi - lo > 2) {
        int mid = ((lo + hi) / 2) | 1;
        if (mid >= hi) mid = hi - 2;
        if (mid <= lo) break;
        ChebPoly p = build(mid);
        if (ok(p)) {
            hi = mid;
            best = p;
        } else {
            lo = mid;
        }
    }
    return best;
}

// Targets and certificates.

Target target_exp(double beta) {
    return {"exp", {{"beta", beta}}, [beta](double x) { return std::exp(-beta * (x + 1.0)); }};
}

Target target_gauss(double gamma) {
    return {"gauss", {{"gamma", gamma}}, [gamma](double x) { return std::exp(-gamma * gamma * x * x); }};
}

Target target_erf(double k) {
    return {"erf", {{"k", k}}, [k](double x) { return std::erf(k * x); }};
}

Target target_sgn(double delta) {
    return {"sgn", {{"delta", delta}}, [delta](double x) { return x > delta ? 1.0 : (x < delta ? -1.0 : 0.0); }};
}

Target target_rect(double w) {
    return {"rect", {{"w", w}}, [w](double x) {
                double a = std::abs(x);
                return a <= w / 2 ? 1.0 : 0.0;
            }};
}

Target target_lin(double Gamma) {
    return {"lin", {{"Gamma", Gamma}}, [Gamma](double x) { return x / (2.0 * Gamma); }, true};
}

Target target_gap(double Delta) {
    return {"gap", {{"Delta", Delta}}, [Delta](double x) { return (x + 1.0 - Delta) / Delta; }};
}

Target target_arcsin() {
    return {"arcsin", nlohmann::json::object(), [](double x) { return std::asin(x); }};
}

Target target_cheb(int n) {
    return {"chebyshev_T", {{"n", n}}, [n](double x) { return std::cos(n * std::acos(std::clamp(x, -1.0, 1.0))); }};
}

nlohmann::json to_json(const ApproxCertificate& c) {
    nlohmann::json dom = nlohmann::json::array();
    for (const auto& I : c.domain) dom.push_back({I.lo, I.hi});
    return {{"target", c.target},           {"params", c.params},
            {"degree", c.degree},           {"measured_sup_error", c.measured_sup_error},
            {"requested_eps", c.requested_eps}, {"domain", dom},
            {"max_abs", c.max_abs},         {"bound_ok", c.bound_ok},
            {"passed", c.passed()}};
}

ApproxCertificate certify(const ChebPoly& p, const Target& target, const std::vector<Interval>& domain, double eps) {
    ApproxCertificate cert;
    cert.target = target.name;
    cert.params = target.params;
    cert.requested_eps = eps;
    cert.domain = domain;
    cert.degree = p.degree();
    double worst = 0.0;
    for (const auto& I : domain) {
        std::function<double(double)> err;
        if (target.relative) {
            // Relative error near the origin is read from the slope instead of a 0/0 quotient.
            const double cut = 1e-4 * std::max(std::abs(I.lo), std::abs(I.hi));
            err = [&, cut](double x) {
                if (std::abs(x) < cut) return 0.0;
                double f = target.f(x);
                return std::abs(p.eval_any(x) - f) / std::abs(f);
            };
            if (I.lo <= 0.0 && I.hi >= 0.0) {
                double slope = 0.0;
                for (int j = 1; j <= p.degree(); j += 2) slope += p.coeff(j) * j * ((j / 2) % 2 ? -1.0 : 1.0);
                double fslope = target.f(1e-3) / 1e-3;
                worst = std::max(worst, std::abs(slope - fslope) / std::abs(fslope));
            }
        } else {
            err = [&](double x) { return std::abs(p.eval_any(x) - target.f(x)); };
        }
        worst = std::max(worst, grid_sup(err, I, p.degree()).value);
    }
    cert.measured_sup_error = worst;
    cert.max_abs = sup_abs(p);
    cert.bound_ok = cert.max_abs <= 1.0 + 1e-9;
    return cert;
}

namespace {

void push_if(std::vector<Interval>& v, double lo, double hi) {
    lo = std::max(lo, -1.0);
    hi = std::min(hi, 1.0);
    if (lo <= hi) v.push_back({lo, hi});
}

} // namespace

std::vector<Interval> sgn_domain(double kappa, double delta) {
    std::vector<Interval> v;
    push_if(v, -1.0, delta - kappa / 2);
    push_if(v, delta + kappa / 2, 1.0);
    return v;
}

std::vector<Interval> rect_domain(double w, double kappa) {
    std::vector<Interval> v;
    push_if(v, -1.0, -w / 2 - kappa);
    push_if(v, -w / 2, w / 2);
    push_if(v, w / 2 + kappa, 1.0);
    return v;
}

std::vector<Interval> lin_domain(double Gamma) { return {{-Gamma, Gamma}}; }

std::vector<Interval> gap_domain(double Delta) { return {{-1.0, -1.0 + Delta}}; }

std::vector<Interval> arcsin_domain() { return {{-0.5, 0.5}}; }

ApproxCertificate certify_lin(const ChebPoly& p, double Gamma, double eps) {
    return certify(p, target_lin(Gamma), lin_domain(Gamma), eps);
}

ApproxCertificate certify_gap(const ChebPoly& p, double Delta, double eps) {
    return certify(p, target_gap(Delta), gap_domain(Delta), eps);
}

ApproxCertificate certify_arcsin(const ChebPoly& p, double eps) {
    return certify(p, target_arcsin(), arcsin_domain(), eps);
}

} // namespace spectramp
