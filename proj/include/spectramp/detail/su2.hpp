#pragma once
// Minimal complex and SU(2) arithmetic that works for double and cpp_bin_float.

#include <cmath>

namespace spectramp::detail {

template <class T>
struct Cx {
    T re{0}, im{0};
};

template <class T>
Cx<T> operator+(const Cx<T>& a, const Cx<T>& b) {
    return {a.re + b.re, a.im + b.im};
}
template <class T>
Cx<T> operator-(const Cx<T>& a, const Cx<T>& b) {
    return {a.re - b.re, a.im - b.im};
}
template <class T>
Cx<T> operator*(const Cx<T>& a, const Cx<T>& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}
template <class T>
Cx<T> operator*(const T& s, const Cx<T>& a) {
    return {s * a.re, s * a.im};
}
template <class T>
Cx<T> conj(const Cx<T>& a) {
    return {a.re, -a.im};
}
template <class T>
T norm2(const Cx<T>& a) {
    return a.re * a.re + a.im * a.im;
}
template <class T>
Cx<T> expi(const T& t) {
    using std::cos;
    using std::sin;
    return {cos(t), sin(t)};
}

/// [[a, b], [-conj(b), conj(a)]]
template <class T>
struct Su2 {
    Cx<T> a{T(1), T(0)}, b{T(0), T(0)};
};

template <class T>
Su2<T> operator*(const Su2<T>& x, const Su2<T>& y) {
    return {x.a * y.a - x.b * conj(y.b), x.a * y.b + x.b * conj(y.a)};
}

/// e^{-i sigma_phi theta} with sigma_phi = cos(phi) X + sin(phi) Y.
template <class T>
Su2<T> rot(const T& phi, const T& c, const T& s) {
    // b = -i s e^{-i phi}
    using std::cos;
    using std::sin;
    return {{c, T(0)}, {-s * sin(phi), -s * cos(phi)}};
}

/// e^{-i omega Z}
template <class T>
Su2<T> zframe(const T& omega) {
    using std::cos;
    using std::sin;
    return {{cos(omega), -sin(omega)}, {T(0), T(0)}};
}

/// e^{i phi Z}
template <class T>
Su2<T> zphase(const T& phi) {
    return {expi(phi), {T(0), T(0)}};
}

/// e^{i arccos(x) X} = [[x, i s], [i s, x]] with s = sqrt(1 - x^2).
template <class T>
Su2<T> wx(const T& x, const T& s) {
    return {{x, T(0)}, {T(0), s}};
}

} // namespace spectramp::detail
