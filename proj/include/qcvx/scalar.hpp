#pragma once

#include <cmath>

namespace qcvx {

enum class FieldTag { Real, Complex };

/// Complex scalar as an explicit re/im pair. The whole library runs on this
/// type; real-field data simply keeps im == 0 throughout, which the Jacobi
/// rotations and the interior point iterations preserve exactly.
struct Cx {
    double re = 0.0;
    double im = 0.0;

    constexpr Cx() = default;
    constexpr Cx(double r) : re(r), im(0.0) {}
    constexpr Cx(double r, double i) : re(r), im(i) {}

    friend constexpr Cx operator+(Cx a, Cx b) { return {a.re + b.re, a.im + b.im}; }
    friend constexpr Cx operator-(Cx a, Cx b) { return {a.re - b.re, a.im - b.im}; }
    friend constexpr Cx operator-(Cx a) { return {-a.re, -a.im}; }
    friend constexpr Cx operator*(Cx a, Cx b) {
        return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
    }
    friend constexpr Cx operator*(double s, Cx a) { return {s * a.re, s * a.im}; }
    friend constexpr Cx operator*(Cx a, double s) { return {s * a.re, s * a.im}; }
    friend Cx operator/(Cx a, double s) { return {a.re / s, a.im / s}; }
    friend Cx operator/(Cx a, Cx b) {
        double d = b.re * b.re + b.im * b.im;
        return {(a.re * b.re + a.im * b.im) / d, (a.im * b.re - a.re * b.im) / d};
    }
    Cx& operator+=(Cx b) { re += b.re; im += b.im; return *this; }
    Cx& operator-=(Cx b) { re -= b.re; im -= b.im; return *this; }
    Cx& operator*=(Cx b) { *this = *this * b; return *this; }
};

inline constexpr Cx conj(Cx a) { return {a.re, -a.im}; }
inline double abs(Cx a) { return std::hypot(a.re, a.im); }
inline constexpr double norm2(Cx a) { return a.re * a.re + a.im * a.im; }

} // namespace qcvx
