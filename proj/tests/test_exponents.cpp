#include "doctest.h"

#include <cmath>
#include <vector>

#include "tricomi/exponents.hpp"

using namespace tricomi;

namespace {
constexpr double kTol = 1e-12;

ProblemParams pp(int m, int n, double kappa, int sign = -1) {
    ProblemParams p;
    p.m = m; p.n = n; p.kappa = kappa; p.sign = sign;
    return p;
}
} // namespace

TEST_CASE("thresholds: direct values") {
    // (m=1, n=2): mu* = 4, kappa* = 3, kappa1 = 2
    auto th = thresholds_exact(1, 2);
    CHECK(th.mu_star == Rational(4));
    CHECK(th.kappa_star == Rational(3));
    REQUIRE(th.kappa1.has_value());
    CHECK(*th.kappa1 == Rational(2));
    CHECK(!th.kappa0.has_value());
    REQUIRE(th.kappa2.has_value());
    CHECK(*th.kappa2 == Rational(9));
    CHECK(!th.kappa3.has_value());
}

TEST_CASE("thresholds: m = 0 reduces to the wave-equation values") {
    // kappa* = (n+3)/(n-1), kappa2 = ((n+1)^2-6)/((n-1)^2-2),
    // kappa1 = (n+1)^2/((n-1)^2+4) for n>=3, kappa0 = 1+3/n,
    // kappa3 = (n+1)/(n-3) for n>=4.
    for (int n = 3; n <= 6; ++n) {
        auto th = thresholds_exact(0, n);
        CHECK(th.kappa_star == Rational(n + 3, n - 1));
        REQUIRE(th.kappa1.has_value());
        CHECK(*th.kappa1 == Rational((n + 1) * (n + 1), (n - 1) * (n - 1) + 4));
        REQUIRE(th.kappa0.has_value());
        CHECK(*th.kappa0 == Rational(n + 3, n));
        REQUIRE(th.kappa2.has_value());
        CHECK(*th.kappa2 == Rational((n + 1) * (n + 1) - 6, (n - 1) * (n - 1) - 2));
        if (n >= 4) {
            REQUIRE(th.kappa3.has_value());
            CHECK(*th.kappa3 == Rational(n + 1, n - 3));
        } else {
            CHECK(!th.kappa3.has_value());  // denominator vanishes at n = 3
        }
    }
}

TEST_CASE("threshold ordering 1 < k0 < k1 < k* < k2 < k3 on the sweep") {
    for (int m = 0; m <= 5; ++m) {
        for (int n = 2; n <= 6; ++n) {
            auto th = thresholds_exact(m, n);
            CHECK(th.kappa_star > Rational(1));
            if (th.kappa0 && th.kappa1) {
                if (m == 0) {
                    CHECK(*th.kappa0 <= *th.kappa1);  // coincidence at m=0, n=3
                } else {
                    CHECK(*th.kappa0 > Rational(1));
                    CHECK(*th.kappa0 < *th.kappa1);
                }
            }
            if (th.kappa1) CHECK(*th.kappa1 < th.kappa_star);
            if (th.kappa2) CHECK(th.kappa_star < *th.kappa2);
            if (th.kappa2 && th.kappa3) CHECK(*th.kappa2 < *th.kappa3);
        }
    }
}

TEST_CASE("branch continuity of gamma at kappa = kappa*, both equal 1/(m+2)") {
    for (int m = 0; m <= 5; ++m) {
        for (int n = 2; n <= 6; ++n) {
            double ks = thresholds_exact(m, n).kappa_star.to_double();
            double gs = gamma_sub(m, n, ks);
            double gp = gamma_super(m, n, ks);
            CHECK(std::abs(gs - gp) <= kTol);
            CHECK(std::abs(gs - 1.0 / (m + 2)) <= kTol);
        }
    }
}

TEST_CASE("m = 0 gamma formulas collapse to the classical wave values") {
    for (int n = 3; n <= 6; ++n) {
        auto th = thresholds_exact(0, n);
        double k1 = th.kappa1->to_double(), ks = th.kappa_star.to_double();
        for (double k : {k1 + 0.05, 0.5 * (k1 + ks), ks, ks + 0.5, ks + 2.0}) {
            double expect = (k <= ks) ? 0.25 * (n + 1) - 1.0 / (k - 1)
                                      : 0.5 * n - 2.0 / (k - 1);
            double got = (k <= ks) ? gamma_sub(0, n, k) : gamma_super(0, n, k);
            CHECK(std::abs(got - expect) <= kTol);
        }
        if (n >= 4) {
            double k0 = th.kappa0->to_double();
            for (double k : {k0, 0.5 * (k0 + k1)}) {
                double expect =
                    0.25 * (n + 1) - 0.25 * (n + 1) * (n + 5) / (2.0 * n * k - (n + 1));
                CHECK(std::abs(gamma_thm16(0, n, k) - expect) <= kTol);
            }
        }
    }
}

TEST_CASE("derive_exponents: (m=1, n=2, mu=4) reference values") {
    auto T = derive_exponents(pp(1, 2, 3.0), 4.0);
    CHECK(T.mu_star == doctest::Approx(4.0).epsilon(kTol));
    CHECK(T.kappa_star == doctest::Approx(3.0).epsilon(kTol));
    CHECK(*T.kappa1 == doctest::Approx(2.0).epsilon(kTol));
    CHECK(T.p0 == doctest::Approx(4.0 / 3.0).epsilon(kTol));
    CHECK(T.q0 == doctest::Approx(4.0).epsilon(kTol));
    CHECK(T.q0_star == doctest::Approx(4.0).epsilon(kTol));
    CHECK(T.p0_star == doctest::Approx(4.0 / 3.0).epsilon(kTol));
    CHECK(T.gamma0 == doctest::Approx(1.0 / 3.0).epsilon(kTol));  // 1/(m+2) at mu = mu*
}

TEST_CASE("derive_exponents: conjugate closure and p-ordering") {
    for (int m = 0; m <= 4; ++m) {
        for (int n = 2; n <= 5; ++n) {
            for (double mu : {std::max(2.0, 0.5 * m), mu_star(m, n), mu_star(m, n) + 1.5}) {
                auto T = derive_exponents(pp(m, n, 2.0), mu);
                for (auto [p, q] : {std::pair{T.p0, T.q0}, {T.p1, T.q1}, {T.p2, T.q2}}) {
                    if (!std::isinf(q) && p >= 1.0)
                        CHECK(1.0 / p + 1.0 / q == doctest::Approx(1.0).epsilon(kTol));
                }
                CHECK(1.0 / T.p2 == doctest::Approx(2.0 / T.p0 - 1.0 / T.p1).epsilon(kTol));
                // Strict ordering holds for m >= 1; m = 0 can hit p1 = 1 at mu = 2.
                if ((n >= 3 || (n == 2 && m >= 2)) && m >= 1) {
                    CHECK(T.p1 > 1.0);
                    CHECK(T.p1 <= T.p0 + kTol);
                    CHECK(T.p0 <= T.p2 + kTol);
                    CHECK(T.p2 <= 2.0 + kTol);
                }
            }
        }
    }
}

TEST_CASE("derive_exponents rejects mu below max{2, m/2}") {
    CHECK_THROWS(derive_exponents(pp(1, 2, 3.0), 1.5));
    CHECK_THROWS(derive_exponents(pp(6, 3, 2.0), 2.5));
}

TEST_CASE("gamma_critical: examples") {
    SUBCASE("conformal boundary, both branches forced") {
        auto g = gamma_critical(pp(1, 2, 3.0));
        REQUIRE(g.gamma.has_value());
        CHECK(*g.gamma == doctest::Approx(1.0 / 3.0).epsilon(kTol));
        CHECK(std::abs(gamma_sub(1, 2, 3.0) - gamma_super(1, 2, 3.0)) <= kTol);
    }
    SUBCASE("m=0, n=3, kappa=4 super-conformal") {
        auto g = gamma_critical(pp(0, 3, 4.0));
        REQUIRE(g.gamma.has_value());
        CHECK(*g.gamma == doctest::Approx(1.5 - 2.0 / 3.0).epsilon(kTol));
    }
    SUBCASE("Thm16Window left endpoint via two expression trees") {
        auto th = thresholds_exact(1, 3);
        double k0 = th.kappa0->to_double();
        auto g = gamma_critical(pp(1, 3, k0));
        REQUIRE(g.gamma.has_value());
        // Independent route: gamma = (n+1)/2 (1/2 - 1/q) - m/(2 mu* (m+2))
        // with 1/q from the same theorem.
        int m = 1, n = 3;
        double ms = mu_star(m, n);
        double iq = (0.5 * (n - 1) + 6.0 / (m + 2) + m / (ms * (m + 2))) /
                    (2.0 * n * k0 - (n + 1));
        double alt = 0.5 * (n + 1) * (0.5 - iq) - m / (2.0 * ms * (m + 2));
        CHECK(*g.gamma == doctest::Approx(alt).epsilon(kTol));
    }
    SUBCASE("below known range reported, never extrapolated") {
        auto g = gamma_critical(pp(1, 2, 1.5));
        CHECK(!g.gamma.has_value());
        CHECK(g.status == "below known range");
    }
}

TEST_CASE("classify_regime") {
    CHECK(classify_regime(pp(1, 2, 1.5)) == Regime::BelowKnown);
    CHECK(classify_regime(pp(1, 2, 2.0)) == Regime::BelowKnown);  // kappa = kappa1 boundary
    CHECK(classify_regime(pp(1, 2, 2.5)) == Regime::Thm11Sub);
    CHECK(classify_regime(pp(1, 2, 3.0)) == Regime::Conformal);
    CHECK(classify_regime(pp(1, 2, 5.0)) == Regime::Thm11Super);
    // (m=1, n=3): kappa0 = 1.687, kappa1 = 53/29 = 1.8276
    CHECK(classify_regime(pp(1, 3, 1.75)) == Regime::Thm16Window);
    CHECK(classify_regime(pp(1, 3, 2.0)) == Regime::Thm11Sub);
    auto th = thresholds_exact(1, 3);
    double k3 = th.kappa3->to_double();
    int k_large = static_cast<int>(std::ceil(k3)) + 1;
    CHECK(classify_regime(pp(1, 3, k_large)) == Regime::LargeIntegerKappa);
    CHECK_THROWS(pp(1, 3, k3 + 0.5).validate());  // non-integer above kappa3
}

TEST_CASE("theorem_tuple: examples and the scaling identity") {
    SUBCASE("conformal (1,2,3): s = q = 4, gamma = 1/3") {
        auto t = theorem_tuple(pp(1, 2, 3.0));
        CHECK(t.s == doctest::Approx(4.0).epsilon(kTol));
        CHECK(t.q == doctest::Approx(4.0).epsilon(kTol));
        CHECK(t.gamma == doctest::Approx(1.0 / 3.0).epsilon(kTol));
        CHECK(t.p == doctest::Approx(4.0 / 3.0).epsilon(kTol));  // q/kappa
    }
    SUBCASE("super-conformal (1,2,5): q = s = 8, gamma = 2/3") {
        auto t = theorem_tuple(pp(1, 2, 5.0));
        CHECK(t.q == doctest::Approx(8.0).epsilon(kTol));
        CHECK(t.s == doctest::Approx(8.0).epsilon(kTol));
        CHECK(t.gamma == doctest::Approx(1.0 - 4.0 / 12.0).epsilon(kTol));
        CHECK(t.p == doctest::Approx(8.0 / 5.0).epsilon(kTol));
    }
    SUBCASE("sub-conformal (1,2,2.5): q = 3, 1/s = (3/4)(1/2-1/3) + 1/16") {
        auto t = theorem_tuple(pp(1, 2, 2.5));
        CHECK(t.q == doctest::Approx(3.0).epsilon(kTol));
        CHECK(1.0 / t.s == doctest::Approx(0.75 * (0.5 - 1.0 / 3.0) + 1.0 / 16.0).epsilon(kTol));
        CHECK(t.p == doctest::Approx(t.q / 2.5).epsilon(kTol));
        // r agrees with the 1/r display at p = q/kappa
        double ir = 1.0 - 1.0 / 16.0 - 0.75 * (1.0 / t.p - 0.5);
        CHECK(1.0 / t.r == doctest::Approx(ir).epsilon(kTol));
    }
    SUBCASE("scaling identity on a parameter sweep") {
        for (int m = 0; m <= 4; ++m) {
            for (int n = 2; n <= 5; ++n) {
                auto th = thresholds_exact(m, n);
                double ks = th.kappa_star.to_double();
                std::vector<double> kappas = {ks, ks + 0.7, ks + 2.3};
                if (th.kappa1) {
                    double k1 = th.kappa1->to_double();
                    kappas.push_back(0.5 * (k1 + ks));
                    kappas.push_back(k1 + 0.9 * (ks - k1));
                }
                if (th.kappa0 && th.kappa1) {
                    kappas.push_back(th.kappa0->to_double());
                    kappas.push_back(0.5 * (th.kappa0->to_double() + th.kappa1->to_double()));
                }
                for (double k : kappas) {
                    if (n >= 3 && th.kappa3 && k > th.kappa3->to_double())
                        k = std::ceil(k);  // integer power required there
                    auto par = pp(m, n, k);
                    if (classify_regime(par) == Regime::BelowKnown) continue;
                    auto t = theorem_tuple(par);
                    CHECK(std::abs(scaling_defect(t, par)) <= kTol);
                    CHECK(t.s >= 2.0 - 1e-9);
                    CHECK(t.q >= 2.0 - 1e-9);
                }
            }
        }
    }
    SUBCASE("Thm15Window supplement satisfies the identity too") {
        for (auto [m, n] : {std::pair{2, 3}, {1, 3}, {3, 2}, {0, 4}}) {
            auto th = thresholds_exact(m, n);
            if (!th.kappa2) continue;
            double k = 0.5 * (th.kappa_star.to_double() + th.kappa2->to_double());
            auto par = pp(m, n, k);
            auto t = thm15_tuple(par);
            CHECK(std::abs(scaling_defect(t, par)) <= kTol);
        }
    }
    SUBCASE("below-known range is an explicit error") {
        CHECK_THROWS(theorem_tuple(pp(1, 2, 1.5)));
    }
}

TEST_CASE("scaling_defect: non-admissible witness and perturbation") {
    StrichartzTuple t;
    t.s = kInf; t.q = 2; t.r = 1; t.p = 2;
    CHECK(scaling_defect(t, pp(0, 2, 3.0)) == doctest::Approx(-1.0).epsilon(kTol));

    auto good = theorem_tuple(pp(1, 2, 3.0));
    auto par = pp(1, 2, 3.0);
    double base = scaling_defect(good, par);
    double prev = base;
    for (double dq : {0.1, 0.2, 0.3}) {
        auto t2 = good;
        t2.q = good.q + dq;
        double d = scaling_defect(t2, par);
        CHECK(std::abs(d) > 1e-6);
        CHECK(d > prev);  // monotone in 1/q perturbation direction
        prev = d;
    }
}

TEST_CASE("admissible_range_thm45") {
    SUBCASE("case (i), (1,2,mu=4,q=4) admissible with gamma = 1/3") {
        auto r = admissible_range_thm45(1, pp(1, 2, 3.0), 4.0, 4.0);
        CHECK(r.admissible);
        CHECK(r.gamma == doctest::Approx(1.0 / 3.0).epsilon(kTol));
    }
    SUBCASE("case (i), q = 2 endpoint included") {
        auto r = admissible_range_thm45(1, pp(1, 2, 3.0), 4.0, 2.0);
        CHECK(r.admissible);
    }
    SUBCASE("case (iii) window endpoints via two expression trees") {
        int m = 2, n = 3;
        double mu = 3.0;
        auto r = admissible_range_thm45(3, pp(m, n, 2.0), mu, 2.5);
        // lower bound tree #2: from the gamma window upper endpoint
        double g_hi = 2.0 / (m + 2) + m / (2.0 * mu * (m + 2));
        double lo_alt = 0.5 - (g_hi + 1.0 / (m + 2)) / n;
        CHECK(r.q_inv_lo == doctest::Approx(lo_alt).epsilon(kTol));
        // upper bound tree #2: 1/q1 from the gamma window lower endpoint
        double g_lo = (mu * (n + 1) - m * n) / (mu * (m + 2) * (n - 1));
        double hi_alt = 0.5 - (g_lo + 1.0 / (m + 2)) / n;
        CHECK(r.q_inv_hi == doctest::Approx(hi_alt).epsilon(kTol));
    }
    SUBCASE("hypothesis violations are named") {
        CHECK_THROWS(admissible_range_thm45(1, pp(1, 2, 3.0), 3.0, 4.0));   // mu < mu*
        CHECK_THROWS(admissible_range_thm45(2, pp(1, 2, 3.0), 4.0, 4.0));   // n=2, m=1 excluded
        CHECK_THROWS(admissible_range_thm45(3, pp(2, 3, 2.0), 2.0, 2.5));   // mu < mn/2
    }
}

TEST_CASE("thm45_tuple: scaling identity and window membership") {
    // case (i) at the conformal point reproduces the theorem tuple's pairs
    auto par = pp(1, 2, 3.0);
    auto t1 = thm45_tuple(1, par, 4.0, 4.0);
    CHECK(std::abs(scaling_defect(t1, par)) <= kTol);
    CHECK(t1.gamma == doctest::Approx(1.0 / 3.0).epsilon(kTol));
    CHECK(t1.s == doctest::Approx(4.0).epsilon(kTol));

    // cases (ii)/(iii) on an n = 3 configuration, several q inside the window
    auto par2 = pp(2, 3, 2.0);
    for (int which : {2, 3}) {
        for (double mu : {3.0, 4.5}) {
            auto probe = admissible_range_thm45(which, par2, mu, 2.5);
            double lo = probe.q_inv_lo, hi = probe.q_inv_hi;
            for (double f : {0.35, 0.65}) {
                double iq = lo + f * (hi - lo);
                if (!(iq > 0.0)) continue;
                double q = 1.0 / iq;
                auto adm = admissible_range_thm45(which, par2, mu, q);
                if (!adm.admissible) continue;
                auto t = thm45_tuple(which, par2, mu, q);
                CHECK(std::abs(scaling_defect(t, par2)) <= kTol);
                if (which == 2) CHECK(t.r == 2.0);
                if (which == 3) CHECK(t.s == 2.0);
            }
        }
    }
    // out-of-window q rejected
    CHECK_THROWS(thm45_tuple(1, par, 4.0, 1.2));
}

TEST_CASE("corollary46_exponents") {
    SUBCASE("mu = mu* collapse: rho = sigma = mu*/2") {
        auto e = corollary46_exponents(pp(1, 2, 3.0), 4.0, 4.0);
        CHECK(e.rho == doctest::Approx(2.0).epsilon(kTol));
        CHECK(e.sigma == doctest::Approx(2.0).epsilon(kTol));
        auto e2 = corollary46_exponents(pp(0, 3, 3.0), 4.0, 4.0);
        CHECK(e2.rho == doctest::Approx(2.0).epsilon(kTol));
        CHECK(e2.sigma == doctest::Approx(2.0).epsilon(kTol));
    }
    SUBCASE("(m=2,n=3): delta consistent with its defining identity") {
        // mu must sit at or above mu* = 7 here.
        const int m = 2, n = 3;
        const double mu = 7.0, q = 3.0;
        auto e = corollary46_exponents(pp(m, n, 2.0), mu, q);
        double lhs = n / e.delta;
        double rhs = n / q + (2.0 / (m + 2)) * (1.0 / e.s - m / (4.0 * mu));
        CHECK(lhs == doctest::Approx(rhs).epsilon(kTol));
    }
    SUBCASE("mu below mu* rejected") {
        CHECK_THROWS(corollary46_exponents(pp(2, 3, 2.0), 6.0, 3.0));
        CHECK_THROWS(corollary46_exponents(pp(4, 3, 2.0), 8.0, 3.0));  // mu* = 10
    }
}

TEST_CASE("data-norm scaling exponent vanishes exactly at critical gamma") {
    for (int m = 0; m <= 4; ++m) {
        for (int n = 2; n <= 5; ++n) {
            for (double k : {2.2, 3.0, 4.5}) {
                auto par = pp(m, n, k);
                double g = gamma_super(m, n, k);
                CHECK(std::abs(data_norm_scaling_exponent(par, g)) <= kTol);
                CHECK(data_norm_scaling_exponent(par, g - 0.3) > 0.0);
            }
        }
    }
}

TEST_CASE("rational layer basics") {
    CHECK(Rational(2, 4) == Rational(1, 2));
    CHECK((Rational(1, 3) + Rational(1, 6)) == Rational(1, 2));
    CHECK((Rational(3, 2) * Rational(4, 9)) == Rational(2, 3));
    CHECK(Rational::from_double(0.25) == Rational(1, 4));
    CHECK(Rational::from_double(4.0) == Rational(4));
    CHECK_THROWS(Rational::from_double(std::sqrt(2.0)));
    CHECK_THROWS(Rational(1, 0));
}
