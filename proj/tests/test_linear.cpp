#include "doctest.h"

#include <cmath>
#include <vector>

#include "tricomi/linear.hpp"
#include "tricomi/ode45.hpp"

using namespace tricomi;

namespace {

Grid make_grid(int dim, int n, double L, int nt, double T) {
    Grid g;
    g.dim = dim;
    g.points = n;
    g.extent = L;
    g.times.resize(nt);
    for (int i = 0; i < nt; ++i) g.times[i] = T * i / (nt - 1);
    g.validate();
    return g;
}

ProblemParams pp(int m, int n) {
    ProblemParams p;
    p.m = m;
    p.n = n;
    p.kappa = 3.0;
    p.sign = -1;
    return p;
}

// periodized Gaussian, zero imaginary part
PhysicalField gaussian(const Grid& g, double sigma, double amp = 1.0) {
    PhysicalField u(g.size());
    for (std::size_t i = 0; i < u.size(); ++i) {
        double x[3] = {0, 0, 0};
        g.coords(i, x);
        double r2 = 0.0;
        for (int d = 0; d < g.dim; ++d) {
            double dx = x[d] - 0.5 * g.extent;
            r2 += dx * dx;
        }
        u[i] = amp * std::exp(-0.5 * r2 / (sigma * sigma));
    }
    return u;
}

} // namespace

TEST_CASE("solve_homogeneous: single mode and the zero mode") {
    auto g = make_grid(2, 16, 2.0 * M_PI, 6, 1.5);
    auto par = pp(1, 2);
    auto table = PropagatorTable::build(g, par.m);

    LinearProblem prob;
    prob.params = par;
    prob.grid = &g;
    prob.phi_hat = SpectralField(g);
    prob.psi_hat = SpectralField(g);
    std::size_t idx = 3 * (std::size_t)g.points + 2;  // k = (3, 2)
    prob.phi_hat.coeffs[idx] = 1.0;
    prob.phi_hat.coeffs[0] = 0.5;
    prob.psi_hat.coeffs[0] = 0.25;
    prob.real_data = false;  // single complex mode on purpose

    auto u = solve_homogeneous(prob, table);
    double ximag = g.xi_mag(idx);
    for (std::size_t ti = 0; ti < g.times.size(); ++ti) {
        auto s = propagator_real(g.times[ti], ximag, par.m);
        CHECK(std::abs(u.slices[ti].coeffs[idx] - s.v0) <= 1e-12);
        // zero mode: free motion phi + t psi
        cplx want0 = 0.5 + g.times[ti] * 0.25;
        CHECK(std::abs(u.slices[ti].coeffs[0] - want0) <= 1e-12);
    }
}

TEST_CASE("solve_homogeneous: linearity to machine precision") {
    auto g = make_grid(2, 16, 10.0, 4, 1.0);
    auto par = pp(2, 2);
    auto table = PropagatorTable::build(g, par.m);
    auto phi1 = transform_forward(g, gaussian(g, 1.2));
    auto phi2 = transform_forward(g, gaussian(g, 0.7, 0.3));

    auto mk = [&](const SpectralField& ph) {
        LinearProblem p;
        p.params = par;
        p.grid = &g;
        p.phi_hat = ph;
        p.psi_hat = SpectralField(g);
        return solve_homogeneous(p, table);
    };
    SpectralField combo(g);
    const double alpha = 2.75;
    for (std::size_t i = 0; i < combo.coeffs.size(); ++i)
        combo.coeffs[i] = alpha * phi1.coeffs[i] + phi2.coeffs[i];
    auto ua = mk(phi1), ub = mk(phi2), uc = mk(combo);
    double worst = 0.0, scale = 0.0;
    for (std::size_t ti = 0; ti < g.times.size(); ++ti)
        for (std::size_t i = 0; i < g.size(); ++i) {
            cplx want = alpha * ua.slices[ti].coeffs[i] + ub.slices[ti].coeffs[i];
            worst = std::max(worst, std::abs(uc.slices[ti].coeffs[i] - want));
            scale = std::max(scale, std::abs(want));
        }
    CHECK(worst <= 1e-12 * scale);
}

TEST_CASE("solve_homogeneous: m = 0 reproduces the wave propagator per mode") {
    auto g = make_grid(2, 32, 2.0 * M_PI, 5, 1.0);
    auto par = pp(0, 2);
    auto table = PropagatorTable::build(g, par.m);
    LinearProblem prob;
    prob.params = par;
    prob.grid = &g;
    prob.phi_hat = transform_forward(g, gaussian(g, 0.8));
    prob.psi_hat = transform_forward(g, gaussian(g, 1.1, 0.2));
    auto u = solve_homogeneous(prob, table);
    double worst = 0.0;
    for (std::size_t ti = 0; ti < g.times.size(); ++ti) {
        double t = g.times[ti];
        for (std::size_t i = 0; i < g.size(); ++i) {
            double xi = g.xi_mag(i);
            cplx want = (xi == 0.0)
                            ? prob.phi_hat.coeffs[i] + t * prob.psi_hat.coeffs[i]
                            : std::cos(t * xi) * prob.phi_hat.coeffs[i] +
                                  std::sin(t * xi) / xi * prob.psi_hat.coeffs[i];
            worst = std::max(worst, std::abs(u.slices[ti].coeffs[i] - want));
        }
    }
    CHECK(worst <= 1e-8);
}

TEST_CASE("solve_duhamel: unit forcing Taylor law per mode") {
    // fhat == 1: what(t) = t^2/2 - |xi|^2 t^{m+4}/((m+3)(m+4)) + ...
    for (int m : {1, 2}) {
        auto g = make_grid(1, 8, 2.0 * M_PI, 11, 0.1);
        auto table = PropagatorTable::build(g, m);
        LinearProblem prob;
        prob.params = pp(m, 2);
        prob.grid = &g;
        prob.phi_hat = SpectralField(g);
        prob.psi_hat = SpectralField(g);
        prob.source = SpaceTimeField(g);
        prob.real_data = false;
        for (auto& s : prob.source->slices)
            for (auto& c : s.coeffs) c = 1.0;
        auto w = solve_duhamel(prob, table);
        for (std::size_t i = 0; i < g.size(); ++i) {
            double xi = g.xi_mag(i);
            double C = 1.5 * xi * xi / ((m + 3.0) * (m + 4.0));
            for (std::size_t ti = 0; ti < g.times.size(); ++ti) {
                double t = g.times[ti];
                CHECK(std::abs(w.slices[ti].coeffs[i] - 0.5 * t * t) <=
                      C * std::pow(t, m + 4) + 5e-12);  // epsilon: quadrature noise
            }
        }
        // initial data of w: w(0) = 0 exactly, dw(0) ~ quadrature zero
        CHECK(std::abs(w.slices[0].coeffs[3]) == 0.0);
    }
}

TEST_CASE("solve_duhamel: mode-ODE oracle at fixed frequency") {
    const int m = 1;
    auto g = make_grid(1, 4, 2.0 * M_PI, 201, 1.0);
    auto table = PropagatorTable::build(g, m);
    // drive mode k = 1 (|xi| = 1) with f(t) = sin(3t) e^{-t}
    auto force = [](double t) { return std::sin(3.0 * t) * std::exp(-t); };
    LinearProblem prob;
    prob.params = pp(m, 2);
    prob.grid = &g;
    prob.phi_hat = SpectralField(g);
    prob.psi_hat = SpectralField(g);
    prob.source = SpaceTimeField(g);
    prob.real_data = false;
    for (std::size_t ti = 0; ti < g.times.size(); ++ti)
        prob.source->slices[ti].coeffs[1] = force(g.times[ti]);
    auto w = solve_duhamel(prob, table);

    double xi = g.xi_mag(1);
    auto rhs = [&](double t, OdeState<2> y) -> OdeState<2> {
        return {y[1], -std::pow(t, m) * xi * xi * y[0] + force(t)};
    };
    auto oracle = ode45<2>(rhs, 0.0, 1.0, {0.0, 0.0}, g.times, 1e-11, 1e-14);
    double worst = 0.0;
    for (std::size_t ti = 0; ti < g.times.size(); ++ti)
        worst = std::max(worst, std::abs(w.slices[ti].coeffs[1] - oracle.y[ti][0]));
    CHECK(worst <= 1e-7);
}

TEST_CASE("manufactured solution: recovery and residual") {
    // g(t,x) = A(t) B(x), A = t^2 e^{-t}; f = A'' B - t^m A Lap B
    const int m = 1;
    auto g = make_grid(2, 32, 12.0, 101, 1.0);
    auto table = PropagatorTable::build(g, m);
    auto B = transform_forward(g, gaussian(g, 1.4));
    auto A = [](double t) { return t * t * std::exp(-t); };
    auto App = [](double t) { return (2.0 - 4.0 * t + t * t) * std::exp(-t); };

    LinearProblem prob;
    prob.params = pp(m, 2);
    prob.grid = &g;
    prob.phi_hat = SpectralField(g);
    prob.psi_hat = SpectralField(g);
    prob.source = SpaceTimeField(g);
    for (std::size_t ti = 0; ti < g.times.size(); ++ti) {
        double t = g.times[ti];
        auto& s = prob.source->slices[ti].coeffs;
        for (std::size_t i = 0; i < g.size(); ++i) {
            double xi2 = g.xi_mag(i) * g.xi_mag(i);
            s[i] = (App(t) + std::pow(t, m) * xi2 * A(t)) * B.coeffs[i];
        }
    }
    auto w = solve_duhamel(prob, table);

    // recovery of g to 1e-6 relative in l2
    double err2 = 0.0, ref2 = 0.0;
    for (std::size_t ti = 0; ti < g.times.size(); ++ti) {
        double a = A(g.times[ti]);
        for (std::size_t i = 0; i < g.size(); ++i) {
            err2 += std::norm(w.slices[ti].coeffs[i] - a * B.coeffs[i]);
            ref2 += std::norm(a * B.coeffs[i]);
        }
    }
    CHECK(std::sqrt(err2 / ref2) <= 1e-6);

    // residual of the recovered solution
    double r = residual(w, prob);
    CHECK(r <= 1e-6);

    // halving the step divides the residual by ~16 (4th order)
    auto g2 = make_grid(2, 32, 12.0, 51, 1.0);
    auto table2 = PropagatorTable::build(g2, m);
    LinearProblem prob2 = prob;
    prob2.grid = &g2;
    prob2.phi_hat = SpectralField(g2);
    prob2.psi_hat = SpectralField(g2);
    prob2.source = SpaceTimeField(g2);
    for (std::size_t ti = 0; ti < g2.times.size(); ++ti) {
        double t = g2.times[ti];
        auto& s = prob2.source->slices[ti].coeffs;
        for (std::size_t i = 0; i < g2.size(); ++i) {
            double xi2 = g2.xi_mag(i) * g2.xi_mag(i);
            s[i] = (App(t) + std::pow(t, m) * xi2 * A(t)) * B.coeffs[i];
        }
    }
    auto w2 = solve_duhamel(prob2, table2);
    double r2 = residual(w2, prob2);
    double order = std::log2(r2 / r);
    CHECK(order >= 3.2);
    CHECK(order <= 4.8);
}

TEST_CASE("solve_linear: u = v + w against the mode-ODE oracle with data and source") {
    const int m = 2;
    auto g = make_grid(1, 4, 2.0 * M_PI, 161, 1.2);
    auto table = PropagatorTable::build(g, m);
    auto force = [](double t) { return std::cos(2.0 * t); };
    LinearProblem prob;
    prob.params = pp(m, 2);
    prob.grid = &g;
    prob.phi_hat = SpectralField(g);
    prob.psi_hat = SpectralField(g);
    prob.source = SpaceTimeField(g);
    prob.real_data = false;
    prob.phi_hat.coeffs[1] = 0.8;
    prob.psi_hat.coeffs[1] = -0.4;
    for (std::size_t ti = 0; ti < g.times.size(); ++ti)
        prob.source->slices[ti].coeffs[1] = force(g.times[ti]);
    auto u = solve_linear(prob, table);

    double xi = g.xi_mag(1);
    auto rhs = [&](double t, OdeState<2> y) -> OdeState<2> {
        return {y[1], -std::pow(t, m) * xi * xi * y[0] + force(t)};
    };
    auto oracle = ode45<2>(rhs, 0.0, 1.2, {0.8, -0.4}, g.times, 1e-11, 1e-14);
    double worst = 0.0;
    for (std::size_t ti = 0; ti < g.times.size(); ++ti)
        worst = std::max(worst, std::abs(u.slices[ti].coeffs[1] - oracle.y[ti][0]));
    CHECK(worst <= 1e-7);
}

TEST_CASE("residual: zero field, zero source") {
    auto g = make_grid(2, 8, 5.0, 7, 1.0);
    LinearProblem prob;
    prob.params = pp(1, 2);
    prob.grid = &g;
    prob.phi_hat = SpectralField(g);
    prob.psi_hat = SpectralField(g);
    SpaceTimeField u(g);
    CHECK(residual(u, prob) == 0.0);
    auto g2 = make_grid(2, 8, 5.0, 4, 1.0);
    SpaceTimeField u2(g2);
    LinearProblem prob2 = prob;
    prob2.grid = &g2;
    CHECK_THROWS(residual(u2, prob2));  // too few samples
}

TEST_CASE("full PDE cross-check: n = 1 finite-difference time stepper") {
    // m = 1 Gaussian data; oracle: 4th-order FD Laplacian + RK4 on a refined
    // grid, entirely independent of the spectral path.
    const int m = 1;
    const double L = 20.0, T = 1.0;
    auto g = make_grid(1, 128, L, 11, T);
    auto table = PropagatorTable::build(g, m);
    LinearProblem prob;
    prob.params = pp(m, 2);
    prob.grid = &g;
    prob.phi_hat = transform_forward(g, gaussian(g, 1.0));
    prob.psi_hat = SpectralField(g);
    auto u = solve_homogeneous(prob, table);

    const int Nf = 2048;
    const double dxf = L / Nf;
    std::vector<double> yu(Nf), yv(Nf, 0.0);
    for (int i = 0; i < Nf; ++i) {
        double x = i * dxf - 0.5 * L;
        yu[i] = std::exp(-0.5 * x * x);
    }
    auto lap = [&](const std::vector<double>& f, int i) {
        auto at = [&](int j) { return f[(j + Nf) % Nf]; };
        return (-at(i - 2) + 16.0 * at(i - 1) - 30.0 * at(i) + 16.0 * at(i + 1) - at(i + 2)) /
               (12.0 * dxf * dxf);
    };
    const int steps = 16000;  // dt divides the sample spacing exactly
    const double dt = T / steps;
    std::vector<double> k1u(Nf), k1v(Nf), k2u(Nf), k2v(Nf), k3u(Nf), k3v(Nf), k4u(Nf), k4v(Nf),
        tu(Nf), tv(Nf);
    std::size_t next_check = 1;
    double worst = 0.0;
    auto compare = [&](double) {
        // spectral grid points are every 8th fine point
        double e2 = 0.0, r2 = 0.0;
        PhysicalField phys = transform_inverse(u.slices[next_check]);
        const int ratio = Nf / 128;
        for (int i = 0; i < 128; ++i) {
            double diff = phys[i].real() - yu[i * ratio];
            e2 += diff * diff;
            r2 += yu[i * ratio] * yu[i * ratio];
        }
        worst = std::max(worst, std::sqrt(e2 / r2));
    };
    for (int s = 0; s < steps; ++s) {
        double t = s * dt;
        auto deriv = [&](const std::vector<double>& uu, const std::vector<double>& vv, double tt,
                         std::vector<double>& du, std::vector<double>& dv) {
            double tm = std::pow(tt, m);
            for (int i = 0; i < Nf; ++i) {
                du[i] = vv[i];
                dv[i] = tm * lap(uu, i);
            }
        };
        deriv(yu, yv, t, k1u, k1v);
        for (int i = 0; i < Nf; ++i) {
            tu[i] = yu[i] + 0.5 * dt * k1u[i];
            tv[i] = yv[i] + 0.5 * dt * k1v[i];
        }
        deriv(tu, tv, t + 0.5 * dt, k2u, k2v);
        for (int i = 0; i < Nf; ++i) {
            tu[i] = yu[i] + 0.5 * dt * k2u[i];
            tv[i] = yv[i] + 0.5 * dt * k2v[i];
        }
        deriv(tu, tv, t + 0.5 * dt, k3u, k3v);
        for (int i = 0; i < Nf; ++i) {
            tu[i] = yu[i] + dt * k3u[i];
            tv[i] = yv[i] + dt * k3v[i];
        }
        deriv(tu, tv, t + dt, k4u, k4v);
        for (int i = 0; i < Nf; ++i) {
            yu[i] += dt / 6.0 * (k1u[i] + 2.0 * k2u[i] + 2.0 * k3u[i] + k4u[i]);
            yv[i] += dt / 6.0 * (k1v[i] + 2.0 * k2v[i] + 2.0 * k3v[i] + k4v[i]);
        }
        double tnew = (s + 1) * dt;
        if (next_check < g.times.size() && tnew >= g.times[next_check] - 1e-12) {
            compare(tnew);
            ++next_check;
        }
    }
    CHECK(worst <= 1e-5);
}

TEST_CASE("cone containment: compact bump stays in the curved cone") {
    const int m = 1;
    const double L = 16.0, T = 2.0, R0 = 2.0;
    auto g = make_grid(2, 256, L, 9, T);
    auto par = pp(m, 2);
    auto table = PropagatorTable::build(g, par.m);

    PhysicalField bump(g.size(), cplx{0.0, 0.0});
    for (std::size_t i = 0; i < g.size(); ++i) {
        double x[2];
        g.coords(i, x);
        double dx = x[0] - 0.5 * L, dy = x[1] - 0.5 * L;
        double r2 = (dx * dx + dy * dy) / (R0 * R0);
        if (r2 < 1.0) bump[i] = std::exp(1.0 - 1.0 / (1.0 - r2));
    }
    LinearProblem prob;
    prob.params = par;
    prob.grid = &g;
    prob.phi_hat = transform_forward(g, bump);
    prob.psi_hat = SpectralField(g);
    auto u = solve_homogeneous(prob, table);

    std::vector<double> center{0.5 * L, 0.5 * L};
    auto rep = cone_containment(u, par, R0, 1e-8, center);
    CHECK(rep.pass);
    CHECK(rep.worst_leakage <= 1e-8);
    // negative control: half propagation speed must fail
    auto bad = cone_containment(u, par, R0, 1e-8, center, 0.5);
    CHECK(!bad.pass);
    // zero field passes trivially
    SpaceTimeField z(g);
    CHECK(cone_containment(z, par, R0, 1e-8, center).pass);
}
