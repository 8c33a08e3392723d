#pragma once

// Double-double arithmetic (~32 significant digits), used where a plain
// double accumulation loses too many digits to cancellation: the Kummer
// Maclaurin series at |z| up to the series/asymptotic switch radius has
// terms of size ~e^{|z|} while the sum is O(1).
//
// Error-free transforms follow Dekker/Knuth; products use std::fma so the
// results do not depend on compiler contraction settings.

#include <cmath>
#include <complex>

namespace tricomi {

struct DD {
    double hi = 0.0;
    double lo = 0.0;

    DD() = default;
    constexpr DD(double h) : hi(h), lo(0.0) {}
    constexpr DD(double h, double l) : hi(h), lo(l) {}

    double value() const { return hi + lo; }
};

namespace detail {

// Knuth two-sum: a + b = s + e exactly.
inline DD two_sum(double a, double b) {
    double s = a + b;
    double bb = s - a;
    double e = (a - (s - bb)) + (b - bb);
    return {s, e};
}

// Fast two-sum, requires |a| >= |b|.
inline DD quick_two_sum(double a, double b) {
    double s = a + b;
    double e = b - (s - a);
    return {s, e};
}

// a * b = p + e exactly.
inline DD two_prod(double a, double b) {
    double p = a * b;
    double e = std::fma(a, b, -p);
    return {p, e};
}

} // namespace detail

inline DD operator+(DD a, DD b) {
    DD s = detail::two_sum(a.hi, b.hi);
    double e = s.lo + a.lo + b.lo;
    return detail::quick_two_sum(s.hi, e);
}

inline DD operator-(DD a, DD b) { return a + DD(-b.hi, -b.lo); }
inline DD operator-(DD a) { return {-a.hi, -a.lo}; }

inline DD operator*(DD a, DD b) {
    DD p = detail::two_prod(a.hi, b.hi);
    p.lo += a.hi * b.lo + a.lo * b.hi;
    return detail::quick_two_sum(p.hi, p.lo);
}

inline DD operator*(DD a, double b) { return a * DD(b); }

inline DD operator/(DD a, DD b) {
    double q1 = a.hi / b.hi;
    DD r = a - b * DD(q1);
    double q2 = r.hi / b.hi;
    r = r - b * DD(q2);
    double q3 = r.hi / b.hi;
    DD q = detail::quick_two_sum(q1, q2);
    return q + DD(q3);
}

inline DD dd_from_sum(double a, double b) { return detail::two_sum(a, b); }

// Complex double-double, only what the series evaluators need.
struct DDComplex {
    DD re, im;

    DDComplex() = default;
    DDComplex(DD r, DD i) : re(r), im(i) {}
    DDComplex(double r, double i = 0.0) : re(r), im(i) {}
    DDComplex(std::complex<double> z) : re(z.real()), im(z.imag()) {}

    std::complex<double> value() const { return {re.value(), im.value()}; }
};

inline DDComplex operator+(DDComplex a, DDComplex b) { return {a.re + b.re, a.im + b.im}; }
inline DDComplex operator-(DDComplex a, DDComplex b) { return {a.re - b.re, a.im - b.im}; }

inline DDComplex operator*(DDComplex a, DDComplex b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}

inline DDComplex operator*(DDComplex a, DD s) { return {a.re * s, a.im * s}; }

inline DDComplex operator/(DDComplex a, DD s) { return {a.re / s, a.im / s}; }

inline double abs_estimate(DDComplex a) {
    return std::hypot(a.re.hi, a.im.hi);
}

} // namespace tricomi
