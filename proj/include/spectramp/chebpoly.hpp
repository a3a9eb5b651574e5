#pragma once

#include <functional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "spectramp/types.hpp"

namespace spectramp {

enum class Parity { even, odd, none };

std::string to_string(Parity p);
Parity parity_from_string(const std::string& s);

/// Real polynomial in the Chebyshev-T basis with a declared parity.
/// Construction zeroes coefficients of the wrong parity and trims trailing zeros.
class ChebPoly {
  public:
    ChebPoly();
    ChebPoly(std::vector<double> coeffs, Parity parity = Parity::none);

    const std::vector<double>& coeffs() const { return c_; }
    Parity parity() const { return parity_; }
    int degree() const { return static_cast<int>(c_.size()) - 1; }
    double coeff(int j) const { return j < static_cast<int>(c_.size()) ? c_[j] : 0.0; }

    /// Clenshaw evaluation; throws std::domain_error for |x| > 1 + 1e-12.
    double operator()(double x) const;
    /// Clenshaw evaluation without the domain check.
    double eval_any(double x) const;
    cplx eval_any(cplx z) const;

    static ChebPoly T(int n);

  private:
    std::vector<double> c_;
    Parity parity_;
};

double cheb_eval(const ChebPoly& p, double x);

ChebPoly operator+(const ChebPoly& a, const ChebPoly& b);
ChebPoly operator-(const ChebPoly& a, const ChebPoly& b);
ChebPoly operator*(const ChebPoly& a, const ChebPoly& b);
ChebPoly operator*(double s, const ChebPoly& a);
ChebPoly mul_x(const ChebPoly& a);
ChebPoly integrate_from_zero(const ChebPoly& a);
ChebPoly odd_part(const ChebPoly& a);
ChebPoly even_part(const ChebPoly& a);
/// p(a x + b) for |a| + |b| <= 1.
ChebPoly compose_affine(const ChebPoly& p, double a, double b);
/// Chebyshev interpolant of f of degree n.
ChebPoly interpolate(const std::function<double(double)>& f, int n, Parity parity = Parity::none);
/// Drops trailing coefficients whose absolute sum stays within budget. Returns the dropped sum.
double chop(ChebPoly& p, double budget);

/// Monomial coefficients (low order first); only sensible at modest degree.
std::vector<double> to_monomial(const ChebPoly& p);

/// Sup of |p| on [-1,1] with the certificate grid and refinement.
double sup_abs(const ChebPoly& p);

nlohmann::json to_json(const ChebPoly& p);
ChebPoly cheb_from_json(const nlohmann::json& j);

// Bessel helpers (binary64 view of the shared kernels).
std::vector<double> scaled_bessel_i(double beta, int jmax);
std::vector<double> bessel_j(double tau, int jmax);

// Jacobi-Anger family.
ChebPoly jacobi_anger_exp(double beta, int n);
double exp_tail(double beta, int n);
int exp_degree(double beta, double eps);
ChebPoly gauss_poly(double gamma, int n);
double gauss_tail(double gamma, int n);
ChebPoly erf_poly(double k, int n);
double erf_bound(double k, int n);
int erf_degree(double k, double eps);

/// Truncations of cos(tau x) (even, degree n) and sin(tau x) (odd, degree n).
ChebPoly cos_poly(double tau, int n);
ChebPoly sin_poly(double tau, int n);
/// Sum of |coefficients| dropped by truncating the cos/sin series beyond degree n.
double trig_tail(double tau, int n);
/// Smallest degree with trig_tail <= eps; parity 0 for cos, 1 for sin.
int trig_degree(double tau, double eps, int parity);

// Certified approximants.
ChebPoly sgn_poly(double kappa, double delta, double eps);
ChebPoly rect_poly(double w, double kappa, double eps);
/// Thm A precondition constant: eps <= lin_amp_c * Gamma.
inline constexpr double lin_amp_c = 0.1;
ChebPoly lin_amp_poly(double Gamma, double eps);
ChebPoly gap_amp_poly(double Delta, double eps);
ChebPoly arcsin_poly(double eps);

struct Interval {
    double lo;
    double hi;
};

/// Named target with parameters, evaluated in binary64 or extended precision.
struct Target {
    std::string name;
    nlohmann::json params;
    std::function<double(double)> f;
    bool relative = false;
};

Target target_exp(double beta);
Target target_gauss(double gamma);
Target target_erf(double k);
Target target_sgn(double delta);
Target target_rect(double w);
Target target_lin(double Gamma);
Target target_gap(double Delta);
Target target_arcsin();
Target target_cheb(int n);

struct ApproxCertificate {
    std::string target;
    nlohmann::json params;
    double measured_sup_error = 0;
    double requested_eps = 0;
    std::vector<Interval> domain;
    bool bound_ok = false;
    double max_abs = 0;
    int degree = 0;
    bool passed() const { return bound_ok && measured_sup_error <= requested_eps; }
};

nlohmann::json to_json(const ApproxCertificate& c);

ApproxCertificate certify(const ChebPoly& p, const Target& target,
                          const std::vector<Interval>& domain, double eps);

// Contract domains of the factories.
std::vector<Interval> sgn_domain(double kappa, double delta);
std::vector<Interval> rect_domain(double w, double kappa);
std::vector<Interval> lin_domain(double Gamma);
std::vector<Interval> gap_domain(double Delta);
std::vector<Interval> arcsin_domain();

ApproxCertificate certify_lin(const ChebPoly& p, double Gamma, double eps);
ApproxCertificate certify_gap(const ChebPoly& p, double Delta, double eps);
ApproxCertificate certify_arcsin(const ChebPoly& p, double eps);

} // namespace spectramp
