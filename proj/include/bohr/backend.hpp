#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <complex>
#include <ostream>

namespace bohr {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

/// Complex number with exact rational real and imaginary parts.
struct RationalComplex {
    Rational re{0};
    Rational im{0};

    RationalComplex() = default;
    RationalComplex(int v) : re(v) {} // NOLINT: implicit by design, mirrors std::complex
    RationalComplex(Rational r) : re(std::move(r)) {}
    RationalComplex(Rational r, Rational i) : re(std::move(r)), im(std::move(i)) {}

    friend RationalComplex operator+(const RationalComplex& a, const RationalComplex& b) {
        return {a.re + b.re, a.im + b.im};
    }
    friend RationalComplex operator-(const RationalComplex& a, const RationalComplex& b) {
        return {a.re - b.re, a.im - b.im};
    }
    friend RationalComplex operator-(const RationalComplex& a) { return {-a.re, -a.im}; }
    friend RationalComplex operator*(const RationalComplex& a, const RationalComplex& b) {
        return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
    }
    friend RationalComplex operator/(const RationalComplex& a, const RationalComplex& b) {
        Rational d = b.re * b.re + b.im * b.im;
        return {(a.re * b.re + a.im * b.im) / d, (a.im * b.re - a.re * b.im) / d};
    }
    RationalComplex& operator+=(const RationalComplex& o) { return *this = *this + o; }
    RationalComplex& operator-=(const RationalComplex& o) { return *this = *this - o; }
    RationalComplex& operator*=(const RationalComplex& o) { return *this = *this * o; }
    friend bool operator==(const RationalComplex& a, const RationalComplex& b) {
        return a.re == b.re && a.im == b.im;
    }
    friend std::ostream& operator<<(std::ostream& os, const RationalComplex& z) {
        return os << "(" << z.re << (z.im < 0 ? "" : "+") << z.im << "i)";
    }
};

inline RationalComplex conj(const RationalComplex& z) { return {z.re, -z.im}; }
inline Rational norm(const RationalComplex& z) { return z.re * z.re + z.im * z.im; }
inline Rational real(const RationalComplex& z) { return z.re; }
inline Rational imag(const RationalComplex& z) { return z.im; }

/// Exact backend: equality is literal, no tolerance anywhere.
struct RationalBackend {
    static constexpr bool exact = true;
    using Real = Rational;
    using Complex = RationalComplex;

    static bool real_eq(const Real& a, const Real& b) { return a == b; }
    static bool real_is_zero(const Real& a) { return a == 0; }
    static bool complex_eq(const Complex& a, const Complex& b) { return a == b; }
    static bool complex_is_zero(const Complex& a) { return a.re == 0 && a.im == 0; }
    static double to_double(const Real& a) { return a.template convert_to<double>(); }
    static const char* name() { return "rational"; }
};

/// Floating backend: two values are "equal" when they differ by at most
/// epsilon. The tolerance is fixed once per session (CLI --epsilon).
struct FloatBackend {
    static constexpr bool exact = false;
    using Real = double;
    using Complex = std::complex<double>;

    static inline double epsilon = 1e-9;

    static bool real_eq(Real a, Real b) { return std::abs(a - b) <= epsilon; }
    static bool real_is_zero(Real a) { return std::abs(a) <= epsilon; }
    static bool complex_eq(const Complex& a, const Complex& b) {
        return std::abs(a - b) <= epsilon;
    }
    static bool complex_is_zero(const Complex& a) { return std::abs(a) <= epsilon; }
    static double to_double(Real a) { return a; }
    static const char* name() { return "float"; }
};

} // namespace bohr
