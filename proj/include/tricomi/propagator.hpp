#pragma once

// Fourier-side fundamental system of  u'' + t^m |xi|^2 u = 0:
//
//   V0(t,xi) = e^{-z/2} Phi( m/(2(m+2)),   m/(m+2);   z)
//   V1(t,xi) = t e^{-z/2} Phi((m+4)/(2(m+2)), (m+4)/(m+2); z)
//   z = 2 i phi(t) |xi|,   phi(t) = 2/(m+2) t^{(m+2)/2}
//
// with V0(0)=1, V0'(0)=0, V1(0)=0, V1'(0)=1 and Wronskian V0 V1' - V1 V0'
// identically 1 (the mode equation has no first-order term).
//
// Two evaluators are provided. `propagator` follows the display above
// literally through the complex Kummer function (and its H± split at
// large |z|); its imaginary parts and Wronskian drift are what the
// consistency tests measure. `propagator_real` is the production evaluator
// for grid sweeps: for c = 2a the same functions collapse to the real
// Bessel-type series  e^{-z/2} Phi(a,2a;z) = 0F1(; a+1/2; -x^2/4)  with
// x = phi(t)|xi|, and for x large to Hankel-style expansions. The two
// routes agree to ~1e-11 and are cross-checked in the unit tests.
//
// m = 0 is the wave equation; both evaluators special-case it to
// (cos(t|xi|), sin(t|xi|)/|xi|) for the Remark-style cross-checks.

#include <cmath>
#include <complex>
#include <stdexcept>

#include "tricomi/kummer.hpp"

namespace tricomi {

inline double phase_phi(double t, int m) {
    if (t < 0.0) throw std::domain_error("phase_phi: t >= 0 required");
    return 2.0 / (m + 2) * std::pow(t, 0.5 * (m + 2));
}

// d/dt phi(t) = t^{m/2}
inline double phase_phi_dt(double t, int m) { return std::pow(t, 0.5 * m); }

struct PropagatorSample {
    double t = 0.0;
    double xi_mag = 0.0;
    cplx v0{1.0, 0.0}, v1{0.0, 0.0};
    cplx dv0{0.0, 0.0}, dv1{1.0, 0.0};

    cplx wronskian() const { return v0 * dv1 - v1 * dv0; }
};

namespace detail_prop {

struct KummerParams {
    double a0, c0, a1, c1;
};

inline KummerParams kummer_params(int m) {
    return {m / (2.0 * (m + 2)), m / double(m + 2), (m + 4.0) / (2.0 * (m + 2)),
            (m + 4.0) / double(m + 2)};
}

inline PropagatorSample wave_sample(double t, double xi) {
    PropagatorSample s;
    s.t = t;
    s.xi_mag = xi;
    if (xi == 0.0) {
        s.v0 = 1.0; s.v1 = t; s.dv0 = 0.0; s.dv1 = 1.0;
        return s;
    }
    s.v0 = std::cos(t * xi);
    s.v1 = std::sin(t * xi) / xi;
    s.dv0 = -xi * std::sin(t * xi);
    s.dv1 = std::cos(t * xi);
    return s;
}

// e^{-z/2} Phi(a, c; z) through the series/H± split.
inline cplx exp_phi(double a, double c, cplx z) {
    if (std::abs(z) <= kZSwitch) return std::exp(-z / 2.0) * kummer_m(a, c, z);
    auto hp = h_asymptotic(+1, a, c, z);
    auto hm = h_asymptotic(-1, a, c, z);
    double g = std::tgamma(c);
    return g / std::tgamma(a) * std::exp(z / 2.0) * hp.value +
           g / std::tgamma(c - a) * std::exp(-z / 2.0) * hm.value;
}

// 0F1(; b; w) and the building blocks of the real fast path.
inline double hyp0f1(double b, double w) {
    double term = 1.0, sum = 1.0;
    for (int k = 0; k < 400; ++k) {
        term *= w / ((b + k) * (k + 1.0));
        sum += term;
        if (std::abs(term) < 1e-17 * (1.0 + std::abs(sum))) return sum;
    }
    throw std::runtime_error("hyp0f1: series did not converge");
}

// Re and the phase-derivative part of e^{ix} H+(a, 2a; 2ix) by the
// superasymptotic expansion; valid for x > kZSwitch/2.
struct HankelParts {
    double value;   // 2 Re(e^{ix} H+)
    double dvalue;  // 2 Re(i e^{ix} (H+ + 2 H+'))  = d/dx of value
};

inline HankelParts hankel_form(double a, double x) {
    const cplx z(0.0, 2.0 * x);
    cplx term{1.0, 0.0};
    cplx sum = term;        // sum c_s z^{-s}
    cplx dsum{0.0, 0.0};    // sum c_s (-a - s) z^{-s-1} relative pieces: see below
    // H+ = z^{-a} S,  S = sum_s (a)_s(1-a)_s/(s!) z^{-s}
    // H+' = z^{-a-1} ( -a S + S' * z ), with S' = sum_s c_s (-s) z^{-s-1}
    cplx sum_s{0.0, 0.0};   // sum c_s (-s) z^{-s}
    for (int s = 0; s < 200; ++s) {
        cplx next = term * ((a + s) * (1.0 - a + s) / (double(s) + 1.0)) / z;
        if (std::abs(next) >= std::abs(term)) break;
        term = next;
        sum += term;
        sum_s += term * double(-(s + 1));
    }
    cplx pref = std::exp(-a * std::log(z));  // z^{-a}
    cplx hp = pref * sum;
    cplx hp_prime = pref / z * (-a * sum + sum_s);
    cplx eix = std::polar(1.0, x);
    HankelParts out;
    out.value = 2.0 * std::real(eix * hp);
    out.dvalue = 2.0 * std::real(cplx(0.0, 1.0) * eix * (hp + 2.0 * hp_prime));
    return out;
}

} // namespace detail_prop

// Spec-literal evaluator: complex Kummer route, derivatives through the
// parameter-shift identity for d/dz Phi.
inline PropagatorSample propagator(double t, double xi_mag, int m) {
    if (t < 0.0 || xi_mag < 0.0)
        throw std::domain_error("propagator: t >= 0 and xi_mag >= 0 required");
    if (m == 0) return detail_prop::wave_sample(t, xi_mag);

    PropagatorSample s;
    s.t = t;
    s.xi_mag = xi_mag;
    const auto P = detail_prop::kummer_params(m);
    const double x = phase_phi(t, m) * xi_mag;
    const cplx z(0.0, 2.0 * x);
    const cplx zdot(0.0, 2.0 * phase_phi_dt(t, m) * xi_mag);

    using detail_prop::exp_phi;
    cplx E0 = exp_phi(P.a0, P.c0, z);
    cplx E0s = exp_phi(P.a0 + 1.0, P.c0 + 1.0, z);
    cplx E1 = exp_phi(P.a1, P.c1, z);
    cplx E1s = exp_phi(P.a1 + 1.0, P.c1 + 1.0, z);

    s.v0 = E0;
    s.v1 = t * E1;
    // d/dz (e^{-z/2} Phi) = e^{-z/2}( -Phi/2 + (a/c) Phi(a+1,c+1;z) )
    s.dv0 = zdot * (-0.5 * E0 + (P.a0 / P.c0) * E0s);
    s.dv1 = E1 + t * zdot * (-0.5 * E1 + (P.a1 / P.c1) * E1s);
    return s;
}

// Production evaluator: real arithmetic throughout, same values.
inline PropagatorSample propagator_real(double t, double xi_mag, int m) {
    if (t < 0.0 || xi_mag < 0.0)
        throw std::domain_error("propagator_real: t >= 0 and xi_mag >= 0 required");
    if (m == 0) return detail_prop::wave_sample(t, xi_mag);

    PropagatorSample s;
    s.t = t;
    s.xi_mag = xi_mag;
    const double x = phase_phi(t, m) * xi_mag;
    const double xdot = phase_phi_dt(t, m) * xi_mag;

    if (2.0 * x <= kZSwitch) {
        using detail_prop::hyp0f1;
        const double nu = 1.0 / (m + 2);
        const double b0 = 1.0 - nu, b1 = 1.0 + nu;
        const double w = -0.25 * x * x;
        const double wdot = -0.5 * x * xdot;
        s.v0 = hyp0f1(b0, w);
        s.v1 = t * hyp0f1(b1, w);
        s.dv0 = hyp0f1(b0 + 1.0, w) / b0 * wdot;
        s.dv1 = hyp0f1(b1, w) + t * hyp0f1(b1 + 1.0, w) / b1 * wdot;
        return s;
    }

    const auto P = detail_prop::kummer_params(m);
    const double g0 = std::tgamma(P.c0) / std::tgamma(P.a0);
    const double g1 = std::tgamma(P.c1) / std::tgamma(P.a1);
    auto h0 = detail_prop::hankel_form(P.a0, x);
    auto h1 = detail_prop::hankel_form(P.a1, x);
    s.v0 = g0 * h0.value;
    s.v1 = t * g1 * h1.value;
    s.dv0 = g0 * h0.dvalue * xdot;
    s.dv1 = g1 * h1.value + t * g1 * h1.dvalue * xdot;
    return s;
}

// ---------------------------------------------------------------------------
// Cutoff and the b1..b4 symbol pieces

// Smoothstep built from exp(-1/s): 1 on [0,1], 0 on [2,inf).
inline double eta_cutoff(double r) {
    if (r <= 1.0) return 1.0;
    if (r >= 2.0) return 0.0;
    auto g = [](double s) { return std::exp(-1.0 / s); };
    double s = 2.0 - r;  // in (0,1), eta = h(s) with h(1)=1, h(0)=0
    return g(s) / (g(s) + g(1.0 - s));
}

// b_ell(t, xi): the phase-split symbols of V0 (ell = 1,2) and V1 (ell = 3,4).
// The H-+ pieces carry the Gamma-ratio normalization that makes the
// reconstruction   b1 e^{-i phi |xi|} + b2 e^{+i phi |xi|} = V0   exact
// (and likewise b3, b4 against V1).
inline cplx symbol_b(int ell, double t, double xi_mag, int m) {
    if (ell < 1 || ell > 4) throw std::invalid_argument("symbol_b: ell in 1..4");
    if (m == 0) throw std::invalid_argument("symbol_b: m >= 1 required");
    const auto P = detail_prop::kummer_params(m);
    const double x = phase_phi(t, m) * xi_mag;
    const double e = eta_cutoff(x);
    const cplx z(0.0, 2.0 * x);
    const bool lower = (ell == 1 || ell == 2);  // V0 family
    const double a = lower ? P.a0 : P.a1;
    const double c = lower ? P.c0 : P.c1;
    const double tfac = lower ? 1.0 : t;
    const bool plus = (ell == 2 || ell == 4);

    if (plus) {
        if (e >= 1.0) return {0.0, 0.0};
        cplx hp = h_asymptotic(+1, a, c, z).value;
        return tfac * (1.0 - e) * (std::tgamma(c) / std::tgamma(a)) * hp;
    }
    cplx val{0.0, 0.0};
    if (e > 0.0) val += e * kummer_m(a, c, z);
    if (e < 1.0) {
        cplx hm = h_asymptotic(-1, a, c, z).value;
        val += (1.0 - e) * (std::tgamma(c) / std::tgamma(c - a)) * hm;
    }
    return tfac * val;
}

} // namespace tricomi
