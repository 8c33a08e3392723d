#pragma once

// Airy functions Ai, Bi on the real axis, accurate to ~1e-10 for the
// argument range the m = 1 propagator identity needs (x in [-40, 3]).
// Kept independent of the Kummer machinery on purpose: this is the cross
// check oracle for the m = 1 fundamental system.
//
//   series zone  |x| <= 8 : Maclaurin pair f, g (cancellation still mild)
//   oscillatory  x  < -8  : Hankel-type expansions in zeta = (2/3)|x|^{3/2}

#include <cmath>
#include <utility>

namespace tricomi {

struct AiryValues {
    double ai, bi, dai, dbi;
};

namespace detail_airy {

inline constexpr double kAi0 = 0.35502805388781723926;   // Ai(0)  = 3^{-2/3}/Gamma(2/3)
inline constexpr double kDai0 = -0.25881940379280679840; // Ai'(0) = -3^{-1/3}/Gamma(1/3)
inline constexpr double kBi0 = 0.61492662744600073515;   // Bi(0)  = 3^{-1/6}/Gamma(2/3)
inline constexpr double kDbi0 = 0.44828835735382635791;  // Bi'(0) = 3^{1/6}/Gamma(1/3)

// f(x) = sum 3^k (1/3)_k x^{3k}/(3k)!,  g(x) = sum 3^k (2/3)_k x^{3k+1}/(3k+1)!
inline AiryValues series(double x) {
    if (x == 0.0) return {kAi0, kBi0, kDai0, kDbi0};
    double f = 1.0, df = 0.0;   // f and f'
    double g = x, dg = 1.0;     // g and g'
    double tf = 1.0, tg = x;
    for (int k = 0; k < 200; ++k) {
        double k3 = 3.0 * k;
        tf *= x * x * x / ((k3 + 2.0) * (k3 + 3.0));
        tg *= x * x * x / ((k3 + 3.0) * (k3 + 4.0));
        f += tf;
        g += tg;
        df += tf * (k3 + 3.0) / x;
        dg += tg * (k3 + 4.0) / x;
        if (std::abs(tf) + std::abs(tg) < 1e-17 * (std::abs(f) + std::abs(g))) break;
    }
    AiryValues v;
    v.ai = kAi0 * f + kDai0 * g;
    v.dai = kAi0 * df + kDai0 * dg;
    v.bi = kBi0 * f + kDbi0 * g;
    v.dbi = kBi0 * df + kDbi0 * dg;
    return v;
}

// P/Q sums of the negative-axis expansion, truncated at the smallest term.
inline std::pair<double, double> pq(double zeta, bool derivative) {
    // u_k coefficients: u_0 = 1, u_{k+1} = u_k (6k+1)(6k+5)/(72(k+1));
    // v_k for derivatives: v_k = u_k (6k+1)/(1-6k) -> standard recurrence.
    double P = 0.0, Q = 0.0;
    double u = 1.0;
    double prev = 1e300;
    for (int k = 0; k < 60; ++k) {
        double c = derivative ? u * (6.0 * k + 1.0) / (1.0 - 6.0 * k) : u;
        double term = c / std::pow(zeta, k);
        if (std::abs(term) > prev) break;
        prev = std::abs(term);
        int r = k % 4;
        double sgn = (r == 2 || r == 3) ? -1.0 : 1.0;
        if (k % 2 == 0) P += sgn * term;
        else Q += sgn * term;
        u *= (6.0 * k + 1.0) * (6.0 * k + 5.0) / (72.0 * (k + 1.0));
    }
    return {P, Q};
}

inline AiryValues oscillatory(double x) {
    // x < 0, let y = -x, zeta = (2/3) y^{3/2}
    double y = -x;
    double zeta = (2.0 / 3.0) * std::pow(y, 1.5);
    double w = zeta + 0.25 * M_PI;
    double amp = 1.0 / (std::sqrt(M_PI) * std::pow(y, 0.25));
    double damp = std::pow(y, 0.25) / std::sqrt(M_PI);
    auto [P, Q] = pq(zeta, false);
    auto [Pd, Qd] = pq(zeta, true);
    AiryValues v;
    v.ai = amp * (std::sin(w) * P - std::cos(w) * Q);
    v.bi = amp * (std::cos(w) * P + std::sin(w) * Q);
    v.dai = -damp * (std::cos(w) * Pd + std::sin(w) * Qd);
    v.dbi = damp * (std::sin(w) * Pd - std::cos(w) * Qd);
    return v;
}

} // namespace detail_airy

inline AiryValues airy(double x) {
    if (x >= -8.0) return detail_airy::series(x);
    return detail_airy::oscillatory(x);
}

} // namespace tricomi
