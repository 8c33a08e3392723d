#pragma once

// Confluent hypergeometric machinery for the mode propagators.
//
// The artifact only ever needs Phi(a, c; z) for z on (or numerically near)
// the positive imaginary axis, with the parameter pairs coming from the
// fundamental system of  u'' + t^m |xi|^2 u = 0  and their first shifts.
//
// Evaluation strategy:
//   |z| <= kZSwitch : Maclaurin series, accumulated in double-double; the
//                     terms reach ~e^{|z|} while the sum stays O(1), so a
//                     plain double sum loses ~|z|/ln(10) digits.
//   |z| >  kZSwitch : the split
//       e^{-z/2} Phi(a,c;z) = G(c)/G(a) e^{z/2} H+ + G(c)/G(c-a) e^{-z/2} H-
//                     with H+- evaluated from their loop integrals.
//
// For H+- themselves, the Hankel loop around the positive real axis reduces
// to a real-axis integral:
//   H-(a,c;z) = e^{i pi a} z^{-a} / G(a)   * I(a,   c-a-1, +1/z)
//   H+(a,c;z) =            z^{a-c} / G(c-a)* I(c-a, a-1,   -1/z)
//   I(p, e, w) = int_0^inf  e^{-t} t^{p-1} (1 + w t)^e dt
// whose expansion in 1/z is the superasymptotic series.  The series is used
// when its smallest term meets the accuracy target (|z| >~ 30 for our
// parameters), otherwise I() is integrated with exp-sinh quadrature, which
// handles the t^{p-1} endpoint and reaches ~1e-13 for all |z| >= 1.

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

#include "tricomi/dd.hpp"

namespace tricomi {

using cplx = std::complex<double>;

inline constexpr double kZSwitch = 30.0;      // series -> asymptotic handover
inline constexpr double kHSeriesTol = 1e-12;  // superasymptotic acceptance

struct HEvaluation {
    cplx value{0.0, 0.0};
    double error_estimate = 0.0;
    bool used_series = false;
};

namespace detail {

// exp-sinh nodes for int_0^inf f(t) dt with an algebraic singularity at 0.
// Fixed grid keeps every caller bit-deterministic.
template <class F>
cplx exp_sinh_integral(F&& f) {
    constexpr double h = 0.045;
    constexpr double u_lo = -6.0, u_hi = 1.8;
    cplx acc{0.0, 0.0};
    for (double u = u_lo; u <= u_hi; u += h) {
        double s = std::sinh(u);
        double t = std::exp(1.5707963267948966 * s);
        double w = 1.5707963267948966 * std::cosh(u) * t;
        acc += f(t) * w;
    }
    return acc * h;
}

// I(p, e, w) = int_0^inf e^{-t} t^{p-1} (1+w t)^e dt, w complex off the cut.
inline cplx hankel_integral(double p, double e, cplx w) {
    return exp_sinh_integral([&](double t) -> cplx {
        cplx base = 1.0 + w * t;
        cplx pw = std::exp(e * std::log(base));
        return std::exp(-t) * std::pow(t, p - 1.0) * pw;
    });
}

// Superasymptotic evaluation of  sum_s (A)_s (B)_s / (s! zeta^s),
// truncated at the smallest term. Returns the sum and the size of the
// smallest term as the error estimate.
inline HEvaluation poch_series(double A, double B, cplx zeta) {
    HEvaluation out;
    cplx term{1.0, 0.0};
    cplx sum = term;
    double smallest = 1.0;
    const int max_terms = 400;
    for (int s = 0; s < max_terms; ++s) {
        cplx next = term * ((A + s) * (B + s) / (double(s) + 1.0)) / zeta;
        if (std::abs(next) >= std::abs(term)) {
            out.error_estimate = std::abs(term);
            break;
        }
        term = next;
        sum += term;
        smallest = std::abs(term);
        out.error_estimate = smallest;
    }
    out.value = sum;
    out.used_series = true;
    return out;
}

} // namespace detail

// H±(a, c; z) from their Hankel loop integrals; |z| >= 1 required.
inline HEvaluation h_asymptotic(int sign, double a, double c, cplx z) {
    if (std::abs(z) < 1.0)
        throw std::domain_error("h_asymptotic: |z| >= 1 required");
    HEvaluation out;
    if (sign > 0) {
        // H+ = z^{a-c}/G(c-a) * I(c-a, a-1, -1/z); series in (c-a)_s (1-a)_s / (s! z^s)
        cplx pref = std::exp((a - c) * std::log(z));
        auto series = detail::poch_series(c - a, 1.0 - a, z);
        if (series.error_estimate < kHSeriesTol) {
            out = series;
            out.value *= pref;
            out.error_estimate *= std::abs(pref);
            return out;
        }
        cplx integral = detail::hankel_integral(c - a, a - 1.0, -1.0 / z);
        out.value = pref * integral / std::tgamma(c - a);
        out.error_estimate = 1e-13 * std::abs(out.value);
        return out;
    }
    // H- = e^{i pi a} z^{-a}/G(a) * I(a, c-a-1, 1/z); series in (a)_s (a-c+1)_s / (s! (-z)^s)
    cplx pref = std::polar(1.0, M_PI * a) * std::exp(-a * std::log(z));
    auto series = detail::poch_series(a, a - c + 1.0, -z);
    if (series.error_estimate < kHSeriesTol) {
        out = series;
        out.value *= pref;
        out.error_estimate *= std::abs(pref);
        return out;
    }
    cplx integral = detail::hankel_integral(a, c - a - 1.0, 1.0 / z);
    out.value = pref * integral / std::tgamma(a);
    out.error_estimate = 1e-13 * std::abs(out.value);
    return out;
}

// Kummer's function Phi(a, c; z).
//
// Maclaurin series in double-double below kZSwitch; the H± split above.
// The asymptotic branch requires z near the positive imaginary axis (the
// only place the propagators live); the series branch accepts any z.
inline cplx kummer_m(double a, double c, cplx z) {
    if (c <= 0.0 && c == std::floor(c))
        throw std::domain_error("kummer_m: c must not be a nonpositive integer");

    if (std::abs(z) <= kZSwitch) {
        DDComplex term{1.0, 0.0};
        DDComplex sum = term;
        DDComplex zdd{z};
        const int max_terms = 600;
        for (int k = 0; k < max_terms; ++k) {
            DD ratio = dd_from_sum(a, double(k)) / (dd_from_sum(c, double(k)) * DD(double(k) + 1.0));
            term = term * zdd * DDComplex{ratio, DD(0.0)};
            sum = sum + term;
            if (abs_estimate(term) < 1e-24 * (1.0 + abs_estimate(sum))) return sum.value();
        }
        throw std::runtime_error(
            "kummer_m: series did not converge at |z| = " + std::to_string(std::abs(z)) +
            " within 600 terms");
    }

    if (std::abs(z.real()) > 1e-9 * std::abs(z) || z.imag() <= 0.0)
        throw std::domain_error(
            "kummer_m: asymptotic branch implemented for z on the positive imaginary axis only");

    auto hp = h_asymptotic(+1, a, c, z);
    auto hm = h_asymptotic(-1, a, c, z);
    cplx ez2 = std::exp(z / 2.0);
    cplx g = std::tgamma(c);
    cplx val = g / std::tgamma(a) * ez2 * hp.value + g / std::tgamma(c - a) * (1.0 / ez2) * hm.value;
    // val = e^{-z/2} Phi, so Phi = e^{z/2} val
    return ez2 * val;
}

// d/dz Phi(a,c;z) = (a/c) Phi(a+1, c+1; z)
inline cplx kummer_m_derivative(double a, double c, cplx z) {
    return (a / c) * kummer_m(a + 1.0, c + 1.0, z);
}

} // namespace tricomi
