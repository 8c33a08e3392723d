#pragma once

// Exponent calculus for the degenerate operator d_t^2 - t^m Laplace.
//
// Everything here is closed-form arithmetic in (m, n, kappa, mu): the
// homogeneous dimension mu* = ((m+2)n+2)/2, the power thresholds
// kappa0 < kappa1 < kappa* < kappa2 < kappa3, the Lebesgue families
// p0/p1/p2 and conjugates, the data regularity gamma(kappa, m, n), and the
// admissible space-time tuples (s, q, r, p, gamma) attached to each
// local-existence regime. Thresholds are computed in exact rationals when
// the inputs are rational; the double-facing API rounds at the end.

#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>

#include "tricomi/rational.hpp"

namespace tricomi {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// ---------------------------------------------------------------------------
// Problem parameters

struct ProblemParams {
    int m = 1;           // degeneracy order, t^m
    int n = 2;           // spatial dimension
    double kappa = 3.0;  // nonlinearity power, F(u) = sign*|u|^{kappa-1}u
    int sign = -1;

    void validate() const;
};

enum class Regime {
    BelowKnown,        // kappa below every covered window (or at the kappa1 boundary)
    Thm16Window,       // kappa0 <= kappa < kappa1, needs n>=3 or (n=2, m>=3)
    Thm11Sub,          // kappa1 < kappa < kappa*
    Conformal,         // kappa == kappa*
    Thm11Super,        // kappa > kappa*
    Thm15Window,       // s != q supplement on [kappa*, kappa2); tuple-only tag
    LargeIntegerKappa, // n>=3, kappa > kappa3, kappa integer
    Thm45CaseI,        // tuple-only tags for the q-window constructors
    Thm45CaseII,
    Thm45CaseIII,
};

inline const char* regime_name(Regime r) {
    switch (r) {
        case Regime::BelowKnown: return "BelowKnown";
        case Regime::Thm16Window: return "Thm16Window";
        case Regime::Thm11Sub: return "Thm11Sub";
        case Regime::Conformal: return "Conformal";
        case Regime::Thm11Super: return "Thm11Super";
        case Regime::Thm15Window: return "Thm15Window";
        case Regime::LargeIntegerKappa: return "LargeIntegerKappa";
        case Regime::Thm45CaseI: return "Thm45CaseI";
        case Regime::Thm45CaseII: return "Thm45CaseII";
        case Regime::Thm45CaseIII: return "Thm45CaseIII";
    }
    return "?";
}

// ---------------------------------------------------------------------------
// Exact-rational threshold layer

struct ThresholdsExact {
    Rational mu_star;
    Rational kappa_star;
    std::optional<Rational> kappa0;  // n>=3 or n=2,m>=3
    std::optional<Rational> kappa1;  // n>=3 or n=2,m>=2; special value 2 at n=2,m=1
    std::optional<Rational> kappa2;  // only when its denominator is positive
    std::optional<Rational> kappa3;  // n>=3 and mu*-m-4 > 0
};

inline ThresholdsExact thresholds_exact(int m, int n) {
    ThresholdsExact t;
    Rational M(m), N(n);
    t.mu_star = (Rational(m + 2) * N + Rational(2)) / Rational(2);
    const Rational& mu = t.mu_star;
    t.kappa_star = (mu + Rational(2)) / (mu - Rational(2));

    if (n >= 3 || (n == 2 && m >= 3))
        t.kappa0 = Rational(1) + (Rational(6) * mu + M) / (mu * Rational(m + 2) * N);

    if (n == 2 && m == 1) {
        t.kappa1 = Rational(2);
    } else if (n >= 3 || (n == 2 && m >= 2)) {
        Rational a = Rational(m + 2) * Rational(n - 1);
        t.kappa1 = ((mu + Rational(2)) * a + Rational(8)) / ((mu - Rational(2)) * a + Rational(8));
    }

    Rational den2 = mu * (mu - Rational(2)) * Rational(n - 1) - Rational(2) * Rational(n + 1);
    if (den2 > Rational(0))
        t.kappa2 = (mu * (mu + Rational(2)) * Rational(n - 1) - Rational(2) * Rational(n + 1)) / den2;

    if (n >= 3) {
        Rational den3 = mu - M - Rational(4);
        if (den3 > Rational(0)) t.kappa3 = (mu - M) / den3;
    }
    return t;
}

inline double mu_star(int m, int n) { return 0.5 * ((m + 2) * n + 2); }

inline void ProblemParams::validate() const {
    if (n < 2) throw std::invalid_argument("ProblemParams: n >= 2 required");
    if (m < 0) throw std::invalid_argument("ProblemParams: m >= 0 required");
    if (!(kappa > 1.0)) throw std::invalid_argument("ProblemParams: kappa > 1 required");
    if (sign != 1 && sign != -1) throw std::invalid_argument("ProblemParams: sign must be +-1");
    auto th = thresholds_exact(m, n);
    if (n >= 3 && th.kappa3 && kappa > th.kappa3->to_double() + 1e-12) {
        if (std::abs(kappa - std::round(kappa)) > 1e-9)
            throw std::invalid_argument(
                "ProblemParams: kappa > kappa3 with n >= 3 requires integer kappa");
    }
}

// ---------------------------------------------------------------------------
// Exponent table

struct ExponentTable {
    int m = 0, n = 0;
    double mu = 0;  // auxiliary parameter, >= max{2, m/2}

    double mu_star = 0;
    double kappa_star = 0;
    std::optional<double> kappa0, kappa1, kappa2, kappa3;

    double p0 = 0, p1 = 0, p2 = 0;  // p1 may equal 1 (then q1 = inf)
    double q0 = 0, q1 = 0, q2 = 0;
    double p0_star = 0, q0_star = 0;

    double gamma_star = 0;  // window center, case (i) of the q-range theorem
    double gamma_d = 0;     // window half-width, n>=3 or n=2,m>=2
    double gamma0 = 0;      // source-side shift gamma0(m,n,mu)
};

template <class T> double to_dbl(T v) { return v.to_double(); }
inline double to_dbl(double v) { return v; }

inline ExponentTable derive_exponents(const ProblemParams& params, double mu) {
    params.validate();
    const int m = params.m, n = params.n;
    if (!(mu >= std::max(2.0, 0.5 * m) - 1e-12))
        throw std::invalid_argument("derive_exponents: mu >= max{2, m/2} required");

    ExponentTable T;
    T.m = m; T.n = n; T.mu = mu;

    auto th = thresholds_exact(m, n);
    T.mu_star = th.mu_star.to_double();
    T.kappa_star = th.kappa_star.to_double();
    if (th.kappa0) T.kappa0 = th.kappa0->to_double();
    if (th.kappa1) T.kappa1 = th.kappa1->to_double();
    if (th.kappa2) T.kappa2 = th.kappa2->to_double();
    if (th.kappa3) T.kappa3 = th.kappa3->to_double();

    // Exact when mu is a small rational, double fallback otherwise.
    auto fill_p = [&](auto mu_v, auto half, auto one, auto two) {
        auto ms = decltype(mu_v)(th.mu_star.num()) / decltype(mu_v)(th.mu_star.den());
        auto ip0 = half + (two * mu_v - decltype(mu_v)(m)) / (mu_v * (two * ms - decltype(mu_v)(m)));
        auto ip1 = half + (two * mu_v - decltype(mu_v)(m)) /
                              (mu_v * decltype(mu_v)((m + 2) * (n - 1)));
        auto ip2 = two * ip0 - ip1;
        T.p0 = 1.0 / to_dbl(ip0);
        T.p1 = 1.0 / to_dbl(ip1);
        T.p2 = 1.0 / to_dbl(ip2);
        T.q0 = to_dbl(one - ip0) > 0 ? 1.0 / to_dbl(one - ip0) : kInf;
        T.q1 = to_dbl(one - ip1) > 0 ? 1.0 / to_dbl(one - ip1) : kInf;
        T.q2 = to_dbl(one - ip2) > 0 ? 1.0 / to_dbl(one - ip2) : kInf;
    };
    try {
        Rational mu_r = Rational::from_double(mu);
        fill_p(mu_r, Rational(1, 2), Rational(1), Rational(2));
    } catch (const std::exception&) {
        fill_p(mu, 0.5, 1.0, 2.0);
    }

    T.p0_star = 2.0 * T.mu_star / (T.mu_star + 2.0);
    T.q0_star = 2.0 * T.mu_star / (T.mu_star - 2.0);

    const double ms = T.mu_star;
    T.gamma_star = 2.0 / (m + 2) + m / (2.0 * mu * (m + 2)) -
                   (2.0 * mu - m) * (n + 1) / (2.0 * mu * (2.0 * ms - m));
    T.gamma_d = 2.0 * (2.0 * mu - m) * (n + 1) / (mu * (m + 2) * (n - 1) * (2.0 * ms - m));
    T.gamma0 = (1.0 / T.q0) * (n + 2.0 / (m + 2)) + 2.0 / (m + 2) - 0.5 * n;
    return T;
}

// ---------------------------------------------------------------------------
// Critical data regularity gamma(kappa, m, n)

struct GammaCritical {
    std::optional<double> gamma;
    std::string status;  // "ok" or the reason kappa is outside known ranges
};

// Sub-conformal branch, kappa1 < kappa <= kappa*.
inline double gamma_sub(int m, int n, double kappa) {
    double ms = mu_star(m, n);
    return 0.25 * (n + 1) - (n + 1) / (ms * (kappa - 1)) - m / (2.0 * ms * (m + 2));
}

// Super-conformal branch, kappa >= kappa*.
inline double gamma_super(int m, int n, double kappa) {
    return 0.5 * n - 4.0 / ((m + 2) * (kappa - 1));
}

// Low-power window, kappa0 <= kappa < kappa1 (n>=3 or n=2,m>=3).
inline double gamma_thm16(int m, int n, double kappa) {
    double ms = mu_star(m, n);
    double num = ms * (m + 2) * (n - 1) + 12.0 * ms + 2.0 * m;
    return 0.25 * (n + 1) - (n + 1) / (4.0 * ms * (m + 2)) * num / (2.0 * n * kappa - (n + 1)) -
           m / (2.0 * ms * (m + 2));
}

inline GammaCritical gamma_critical(const ProblemParams& params) {
    params.validate();
    auto th = thresholds_exact(params.m, params.n);
    const double k = params.kappa;
    const double ks = th.kappa_star.to_double();
    if (th.kappa1 && k > th.kappa1->to_double() + 1e-14) {
        double g = (k <= ks) ? gamma_sub(params.m, params.n, k)
                             : gamma_super(params.m, params.n, k);
        return {g, "ok"};
    }
    if (th.kappa0 && th.kappa1 && k >= th.kappa0->to_double() - 1e-14 &&
        k < th.kappa1->to_double() - 1e-14) {
        return {gamma_thm16(params.m, params.n, k), "ok"};
    }
    return {std::nullopt, "below known range"};
}

// ---------------------------------------------------------------------------
// Space-time tuples

struct StrichartzTuple {
    double s = 2, q = 2;   // solution norm L^s_t L^q_x
    double r = 2, p = 2;   // source norm L^r_t L^p_x
    double gamma = 0;      // data regularity
    double mu = 0;
    Regime regime = Regime::Conformal;
};

// Residual of the scaling identity; zero for every admissible tuple.
inline double scaling_defect(const StrichartzTuple& t, const ProblemParams& params) {
    auto inv = [](double v) { return std::isinf(v) ? 0.0 : 1.0 / v; };
    return 0.5 * (params.m + 2) * params.n * (inv(t.p) - inv(t.q)) + inv(t.r) - inv(t.s) - 2.0;
}

inline Regime classify_regime(const ProblemParams& params) {
    params.validate();
    auto th = thresholds_exact(params.m, params.n);
    const double k = params.kappa;
    const double ks = th.kappa_star.to_double();
    const double tol = 1e-12;

    if (params.n >= 3 && th.kappa3 && k > th.kappa3->to_double() + tol)
        return Regime::LargeIntegerKappa;
    if (std::abs(k - ks) <= tol) return Regime::Conformal;
    if (k > ks) return Regime::Thm11Super;
    if (th.kappa1) {
        double k1 = th.kappa1->to_double();
        if (k > k1 + tol) return Regime::Thm11Sub;
        if (std::abs(k - k1) <= tol) return Regime::BelowKnown;  // uncovered boundary point
    }
    if (th.kappa0 && th.kappa1 && k >= th.kappa0->to_double() - tol) return Regime::Thm16Window;
    return Regime::BelowKnown;
}

// Tuple attached to the regime of kappa. mu = mu* throughout. The source
// pair (r, p) is the admissible pair of the underlying linear estimate:
// 1/p = 1/q + 2/mu* and 1/r = 1/s + 2/mu* (equivalently p = q/kappa and r
// from the 1/r display whenever kappa sits in one of the q = mu*(kappa-1)/2
// regimes), r = 2 in the low-power window. The scaling identity holds
// exactly for each emitted tuple.
inline StrichartzTuple theorem_tuple(const ProblemParams& params) {
    Regime reg = classify_regime(params);
    const int m = params.m, n = params.n;
    const double k = params.kappa;
    const double ms = mu_star(m, n);
    const double A4 = 0.25 * (m + 2) * (n - 1);

    StrichartzTuple t;
    t.mu = ms;
    t.regime = reg;

    switch (reg) {
        case Regime::Thm11Sub: {
            t.q = 0.5 * ms * (k - 1);
            t.s = 1.0 / (A4 * (0.5 - 1.0 / t.q) + m / (4.0 * ms));
            t.gamma = gamma_sub(m, n, k);
            break;
        }
        case Regime::Conformal:
        case Regime::Thm11Super:
        case Regime::LargeIntegerKappa: {
            t.q = 0.5 * ms * (k - 1);
            t.s = t.q;
            t.gamma = gamma_super(m, n, k);
            break;
        }
        case Regime::Thm16Window: {
            double iq = (0.5 * (n - 1) + 6.0 / (m + 2) + m / (ms * (m + 2))) /
                        (2.0 * n * k - (n + 1));
            t.q = 1.0 / iq;
            t.s = 1.0 / (A4 * (0.5 - iq) + m / (4.0 * ms));
            t.gamma = gamma_thm16(m, n, k);
            t.p = t.q / k;
            t.r = 2.0;
            return t;
        }
        default:
            throw std::domain_error("theorem_tuple: kappa below the known ranges (regime " +
                                    std::string(regime_name(reg)) + ")");
    }
    t.p = 1.0 / (1.0 / t.q + 2.0 / ms);  // = q/kappa in the q = mu*(kappa-1)/2 regimes
    t.r = 1.0 / (1.0 / t.s + 2.0 / ms);
    return t;
}

// The s != q supplement on [kappa*, kappa2). Source pair from the linear
// estimate relations at mu = mu* (here p differs from q/kappa).
inline StrichartzTuple thm15_tuple(const ProblemParams& params) {
    params.validate();
    const int m = params.m, n = params.n;
    const double k = params.kappa;
    auto th = thresholds_exact(m, n);
    const double ms = th.mu_star.to_double();
    if (k < th.kappa_star.to_double() - 1e-12)
        throw std::domain_error("thm15_tuple: requires kappa >= kappa*");
    if (th.kappa2 && k >= th.kappa2->to_double() - 1e-12)
        throw std::domain_error("thm15_tuple: requires kappa < kappa2");

    StrichartzTuple t;
    t.mu = ms;
    t.regime = Regime::Thm15Window;
    double iq = (8.0 / (k - 1) - m / ms) / ((m + 2) * (n + 1)) - (n - 1) / (2.0 * (n + 1));
    t.q = 1.0 / iq;
    t.s = 1.0 / (0.25 * (m + 2) * (n - 1) * (0.5 - iq) + m / (4.0 * ms));
    t.gamma = gamma_super(m, n, k);
    t.p = 1.0 / (iq + 2.0 / ms);
    t.r = 1.0 / (1.0 / t.s + 2.0 / ms);
    return t;
}

// ---------------------------------------------------------------------------
// Admissible q-windows, cases (i)-(iii)

struct AdmissibleResult {
    bool admissible = false;
    double gamma = 0;
    double q_inv_lo = 0, q_inv_hi = 0;  // window in 1/q (lo < 1/q <= / < hi)
};

inline AdmissibleResult admissible_range_thm45(int which, const ProblemParams& params, double mu,
                                               double q) {
    params.validate();
    const int m = params.m, n = params.n;
    const double ms = mu_star(m, n);
    ExponentTable T = derive_exponents(params, mu);
    AdmissibleResult out;
    const double iq = 1.0 / q;

    switch (which) {
        case 1: {  // case (i)
            if (!(mu >= ms - 1e-12))
                throw std::invalid_argument("case (i) requires mu >= mu*");
            out.gamma = 0.5 * (n + 1) * (0.5 - iq) - m / (2.0 * mu * (m + 2));
            if (n == 2 && m == 1) {
                out.q_inv_lo = (8.0 / 63.0) * (1.0 - 4.0 / mu);
                out.q_inv_hi = 0.5;
                out.admissible = (iq > out.q_inv_lo && iq <= out.q_inv_hi + 1e-14);
            } else {
                double gap = 4.0 / ((m + 2) * (n + 1)) * (1.0 + m / (2.0 * mu));
                out.q_inv_lo = 1.0 / T.p2 - gap;
                out.q_inv_hi = 1.0 / T.p1 - gap;
                out.admissible = (iq > out.q_inv_lo && iq < out.q_inv_hi);
            }
            return out;
        }
        case 2: {  // case (ii), r = 2
            if (!(n >= 3 || (n == 2 && m >= 2)))
                throw std::invalid_argument("case (ii) requires n >= 3 or n = 2, m >= 2");
            if (!(mu >= std::max(2.0, 0.5 * m * n) - 1e-12))
                throw std::invalid_argument("case (ii) requires mu >= max{2, mn/2}");
            if (!(T.p1 > 1.0))
                throw std::invalid_argument("case (ii) requires p1 > 1");
            out.gamma = 0.5 * (n + 1) * (0.5 - iq) - m / (2.0 * mu * (m + 2));
            out.q_inv_lo = 2.0 * n / ((n + 1) * T.p1) - (n - 1) / (2.0 * (n + 1)) -
                           (6.0 + m / mu) / ((m + 2) * (n + 1));
            out.q_inv_hi = 0.5;
            out.admissible = (iq > out.q_inv_lo && iq <= out.q_inv_hi + 1e-14);
            return out;
        }
        case 3: {  // case (iii), s = 2
            if (!(n >= 3 || (n == 2 && m >= 2)))
                throw std::invalid_argument("case (iii) requires n >= 3 or n = 2, m >= 2");
            if (!(mu >= std::max(2.0, 0.5 * m * n) - 1e-12))
                throw std::invalid_argument("case (iii) requires mu >= max{2, mn/2}");
            if (!(T.p1 > 1.0))
                throw std::invalid_argument("case (iii) requires p1 > 1");
            out.gamma = n * (0.5 - iq) - 1.0 / (m + 2);
            out.q_inv_lo = 0.5 - (6.0 + m / mu) / (2.0 * (m + 2) * n);
            out.q_inv_hi = 1.0 / T.q1;
            out.admissible = (iq > out.q_inv_lo && iq < out.q_inv_hi);
            return out;
        }
        default:
            throw std::invalid_argument("admissible_range_thm45: case must be 1, 2 or 3");
    }
}

// Full space-time tuple for an admissible q in case (i)/(ii)/(iii); the
// source pair comes from the underlying dyadic-operator estimate of each
// case, so the scaling identity holds exactly.
inline StrichartzTuple thm45_tuple(int which, const ProblemParams& params, double mu, double q) {
    auto adm = admissible_range_thm45(which, params, mu, q);
    if (!adm.admissible)
        throw std::domain_error("thm45_tuple: q outside the case's admissible window");
    const int m = params.m, n = params.n;
    const double A4 = 0.25 * (m + 2) * (n - 1);
    StrichartzTuple t;
    t.mu = mu;
    t.q = q;
    t.gamma = adm.gamma;
    switch (which) {
        case 1: {
            t.regime = Regime::Thm45CaseI;
            t.p = 1.0 / (1.0 / q + 4.0 / ((m + 2) * (n + 1)) * (1.0 + m / (2.0 * mu)));
            t.s = 1.0 / (A4 * (0.5 - 1.0 / q) + m / (4.0 * mu));
            t.r = 1.0 / (1.0 - m / (4.0 * mu) - A4 * (1.0 / t.p - 0.5));
            break;
        }
        case 2: {
            t.regime = Regime::Thm45CaseII;
            t.r = 2.0;
            t.s = 1.0 / (A4 * (0.5 - 1.0 / q) + m / (4.0 * mu));
            double ip = (n + 1) / (2.0 * n) *
                        (1.0 / q + (n - 1) / (2.0 * (n + 1)) +
                         (m + 6.0 * mu) / (mu * (m + 2) * (n + 1)));
            t.p = 1.0 / ip;
            break;
        }
        case 3: {
            t.regime = Regime::Thm45CaseIII;
            t.s = 2.0;
            double ip = (2.0 * n / (n + 1)) *
                        (1.0 / q - (n - 1) / (4.0 * n) + (m + 6.0 * mu) / (2.0 * mu * (m + 2) * n));
            t.p = 1.0 / ip;
            t.r = 1.0 / (1.0 - m / (4.0 * mu) - A4 * (1.0 / t.p - 0.5));
            break;
        }
        default:
            throw std::invalid_argument("thm45_tuple: case must be 1, 2 or 3");
    }
    return t;
}

// ---------------------------------------------------------------------------
// Product-source exponents (bilinear estimate)

struct Cor46Exponents {
    double rho = 0, sigma = 0, delta = 0, s = 0;
};

inline Cor46Exponents corollary46_exponents(const ProblemParams& params, double mu, double q) {
    params.validate();
    const int m = params.m, n = params.n;
    const double ms = mu_star(m, n);
    if (!(mu >= ms - 1e-12)) throw std::invalid_argument("corollary46: mu >= mu* required");
    if (!(2.0 * mu > m * n)) throw std::invalid_argument("corollary46: 2 mu > m n required");
    Cor46Exponents e;
    e.rho = mu * (m + 2) * (n + 1) / (2.0 * (2.0 * mu + m));
    e.sigma = mu * (n + 1) / (2.0 * mu - m * n);
    e.s = 1.0 / (0.25 * (m + 2) * (n - 1) * (0.5 - 1.0 / q) + m / (4.0 * mu));
    e.delta = n / (n / q + (2.0 / (m + 2)) * (1.0 / e.s - m / (4.0 * mu)));
    return e;
}

// Exponent of the data-norm ratio under the dilation family: the Hdot^gamma
// norm of the dilated data scales as eps^E with
//   E = ((m+2)/2)(n/2 - gamma) - 2/(kappa - 1),
// which vanishes exactly at the super-conformal critical gamma.
inline double data_norm_scaling_exponent(const ProblemParams& params, double gamma) {
    return 0.5 * (params.m + 2) * (0.5 * params.n - gamma) - 2.0 / (params.kappa - 1);
}

} // namespace tricomi
