#pragma once
// Precision-generic Chebyshev kernels shared by the binary64 and extended paths.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include <boost/math/constants/constants.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

namespace spectramp::detail {

using xreal = boost::multiprecision::cpp_bin_float_50;

template <class T>
T pi_v() {
    return boost::math::constants::pi<T>();
}

template <class T>
double to_double(const T& v) {
    return static_cast<double>(v);
}

template <class T>
std::vector<double> to_double(const std::vector<T>& v) {
    std::vector<double> out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = static_cast<double>(v[i]);
    return out;
}

template <class T>
std::vector<T> from_double(const std::vector<double>& v) {
    return std::vector<T>(v.begin(), v.end());
}

/// Clenshaw recurrence; X may be real, complex or extended.
template <class T, class X>
X clenshaw(const std::vector<T>& a, const X& x) {
    if (a.empty()) return X(0);
    X b1(0), b2(0);
    const X two_x = X(2) * x;
    for (std::size_t k = a.size() - 1; k >= 1; --k) {
        X b0 = X(a[k]) + two_x * b1 - b2;
        b2 = b1;
        b1 = b0;
    }
    return X(a[0]) + x * b1 - b2;
}

/// Interpolant of degree n at the n+1 Chebyshev points of the first kind.
template <class T, class F>
std::vector<T> interpolate(F&& f, int n) {
    using std::cos;
    const int m = n + 1;
    const T pi = pi_v<T>();
    // cos(i*pi/(2m)) for i in [0, 4m), so T_k(x_j) is a table lookup.
    std::vector<T> ctab(4 * m);
    for (int i = 0; i < 4 * m; ++i) ctab[i] = cos(T(i) * pi / T(2 * m));
    std::vector<T> fx(m);
    for (int j = 0; j < m; ++j) fx[j] = f(ctab[2 * j + 1]);
    std::vector<T> c(m, T(0));
    for (int k = 0; k < m; ++k) {
        T s(0);
        long long step = k;
        long long idx = step;  // k*(2j+1) mod 4m
        for (int j = 0; j < m; ++j) {
            s += fx[j] * ctab[idx];
            idx = (idx + 2 * step) % (4LL * m);
        }
        c[k] = T(2) * s / T(m);
    }
    c[0] /= T(2);
    return c;
}

template <class T>
std::vector<T> mul(const std::vector<T>& a, const std::vector<T>& b) {
    if (a.empty() || b.empty()) return {T(0)};
    std::vector<T> c(a.size() + b.size() - 1, T(0));
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (std::size_t j = 0; j < b.size(); ++j) {
            T h = a[i] * b[j] / T(2);
            c[i + j] += h;
            c[i > j ? i - j : j - i] += h;
        }
    }
    return c;
}

/// Coefficients of x * p(x).
template <class T>
std::vector<T> mul_x(const std::vector<T>& a) {
    std::vector<T> c(a.size() + 1, T(0));
    if (a.empty()) return c;
    c[1] += a[0];
    for (std::size_t j = 1; j < a.size(); ++j) {
        c[j + 1] += a[j] / T(2);
        c[j - 1] += a[j] / T(2);
    }
    return c;
}

/// Antiderivative vanishing at x = 0.
template <class T>
std::vector<T> integrate_from_zero(const std::vector<T>& a) {
    std::vector<T> c(a.size() + 1, T(0));
    for (std::size_t m = 0; m < a.size(); ++m) {
        if (a[m] == 0) continue;
        if (m == 0) {
            c[1] += a[0];
        } else if (m == 1) {
            c[2] += a[1] / T(4);
        } else {
            c[m + 1] += a[m] / T(2 * (m + 1));
            c[m - 1] -= a[m] / T(2 * (m - 1));
        }
    }
    // T_k(0) = cos(k pi / 2)
    T at0(0);
    for (std::size_t k = 0; k < c.size(); k += 2) at0 += (k % 4 == 0) ? c[k] : -c[k];
    c[0] -= at0;
    return c;
}

/// e^{-beta} I_j(beta) for j = 0..M with M >= jmax, by normalized backward recurrence.
/// The array runs past jmax so callers can sum tails.
template <class T>
std::vector<T> scaled_bessel_i(const T& beta, int jmax) {
    using std::ceil;
    using std::sqrt;
    if (beta == 0) {
        std::vector<T> out(jmax + 1, T(0));
        out[0] = T(1);
        return out;
    }
    const int m = jmax + 50 + static_cast<int>(ceil(16.0 * std::sqrt(to_double(beta) + 1.0)));
    std::vector<T> y(m + 2, T(0));
    y[m] = T(1e-30);
    const T big(1e200);
    for (int k = m; k >= 1; --k) {
        y[k - 1] = T(2 * k) / beta * y[k] + y[k + 1];
        if (y[k - 1] > big) {
            for (int i = k - 1; i <= m; ++i) y[i] /= big;
        }
    }
    T s = y[0];
    for (int k = 1; k <= m; ++k) s += T(2) * y[k];
    y.resize(m + 1);
    for (auto& v : y) v /= s;
    return y;
}

/// J_k(tau) for k = 0..M with M >= jmax, by normalized backward recurrence.
template <class T>
std::vector<T> bessel_j(const T& tau, int jmax) {
    using std::abs;
    if (tau == 0) {
        std::vector<T> out(jmax + 1, T(0));
        out[0] = T(1);
        return out;
    }
    const double td = to_double(tau);
    int m = std::max(jmax, static_cast<int>(std::ceil(td))) + 60 +
            static_cast<int>(std::ceil(10.0 * std::cbrt(td + 1.0)));
    if (m % 2) ++m;
    std::vector<T> y(m + 2, T(0));
    y[m] = T(1e-30);
    const T big(1e200);
    for (int k = m; k >= 1; --k) {
        y[k - 1] = T(2 * k) / tau * y[k] - y[k + 1];
        if (abs(y[k - 1]) > big) {
            for (int i = k - 1; i <= m; ++i) y[i] /= big;
        }
    }
    T s = y[0];
    for (int k = 2; k <= m; k += 2) s += T(2) * y[k];
    y.resize(m + 1);
    for (auto& v : y) v /= s;
    return y;
}

/// Chebyshev coefficients of e^{-beta(x+1)} truncated at degree n.
template <class T>
std::vector<T> exp_coeffs(const T& beta, int n) {
    auto s = scaled_bessel_i(beta, n);
    std::vector<T> c(n + 1);
    c[0] = s[0];
    for (int j = 1; j <= n; ++j) c[j] = (j % 2 ? T(-2) : T(2)) * s[j];
    return c;
}

/// Even coefficients of e^{-(gamma x)^2} truncated at even degree n.
template <class T>
std::vector<T> gauss_coeffs(const T& gamma, int n) {
    const T beta = gamma * gamma / T(2);
    auto s = scaled_bessel_i(beta, n / 2);
    std::vector<T> c(n + 1, T(0));
    c[0] = s[0];
    for (int j = 1; j <= n / 2; ++j) c[2 * j] = (j % 2 ? T(-2) : T(2)) * s[j];
    return c;
}

/// Odd coefficients of erf(k x) of odd degree n, integrating the Gaussian series.
template <class T>
std::vector<T> erf_coeffs(const T& k, int n) {
    using std::sqrt;
    auto g = gauss_coeffs(k, n - 1);
    auto c = integrate_from_zero(g);
    const T scale = T(2) * k / sqrt(pi_v<T>());
    for (auto& v : c) v *= scale;
    for (std::size_t i = 0; i < c.size(); i += 2) c[i] = T(0);
    return c;
}

/// Coefficients of p(a x + b), requiring |a| + |b| <= 1.
template <class T>
std::vector<T> compose_affine(const std::vector<T>& p, const T& a, const T& b) {
    const int n = static_cast<int>(p.size()) - 1;
    if (n <= 0) return p;
    return interpolate<T>([&](const T& x) { return clenshaw(p, T(a * x + b)); }, n);
}

} // namespace spectramp::detail
