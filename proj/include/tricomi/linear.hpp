#pragma once

// Spectral solver for  d_t^2 u - t^m Lap u = f,  u(0) = phi, u_t(0) = psi,
// mode by mode through the exact fundamental system:
//
//   vhat(t, xi) = V0(t,|xi|) phihat(xi) + V1(t,|xi|) psihat(xi)
//   what(t, xi) = int_0^t [ V1(t)V0(tau) - V0(t)V1(tau) ](|xi|) fhat(tau, xi) dtau
//
// The Duhamel integral is evaluated with a cumulative 4-point panel rule
// (the implicit Adams corrector): unlike composite Simpson, every node sees
// the same panel weights, so the cumulative quadrature error is a smooth
// O(h^4) function of the upper limit and the 4th-order residual measurement
// survives differentiation in time.
//
// Propagator values are cached per (time sample, distinct |k|^2); modes of
// equal magnitude share one evaluation.

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "tricomi/exponents.hpp"
#include "tricomi/grid.hpp"
#include "tricomi/propagator.hpp"
#include "tricomi/spectral_ops.hpp"
#include "tricomi/threading.hpp"

namespace tricomi {

struct PropagatorTable {
    const Grid* grid = nullptr;
    int m = 0;
    std::vector<std::uint32_t> slot_of_norm2;  // lattice |k|^2 -> slot, ~0u if absent
    std::size_t n_distinct = 0;
    std::vector<double> scale;  // fundamental frequency, |xi| = scale * sqrt(norm2)
    // values laid out [time][slot]
    std::vector<double> v0, v1;

    static PropagatorTable build(const Grid& grid, int m) {
        grid.validate();
        PropagatorTable T;
        T.grid = &grid;
        T.m = m;
        std::int64_t half = grid.points / 2;
        std::int64_t max_norm2 = grid.dim * half * half;
        T.slot_of_norm2.assign(static_cast<std::size_t>(max_norm2) + 1, ~0u);
        const std::size_t size = grid.size();
        for (std::size_t i = 0; i < size; ++i)
            T.slot_of_norm2[static_cast<std::size_t>(grid.lattice_norm2(i))] = 0;
        std::uint32_t next = 0;
        std::vector<std::int64_t> norms;
        for (std::size_t v = 0; v < T.slot_of_norm2.size(); ++v) {
            if (T.slot_of_norm2[v] == 0) {
                T.slot_of_norm2[v] = next++;
                norms.push_back(static_cast<std::int64_t>(v));
            } else {
                T.slot_of_norm2[v] = ~0u;
            }
        }
        T.n_distinct = next;
        const std::size_t nt = grid.times.size();
        T.v0.resize(nt * T.n_distinct);
        T.v1.resize(nt * T.n_distinct);
        const double f0 = grid.fundamental();
        parallel_for(T.n_distinct, [&](std::size_t s) {
            double xi = f0 * std::sqrt(static_cast<double>(norms[s]));
            for (std::size_t ti = 0; ti < nt; ++ti) {
                auto p = propagator_real(grid.times[ti], xi, m);
                T.v0[ti * T.n_distinct + s] = p.v0.real();
                T.v1[ti * T.n_distinct + s] = p.v1.real();
            }
        });
        return T;
    }

    std::uint32_t slot(std::size_t flat) const {
        return slot_of_norm2[static_cast<std::size_t>(grid->lattice_norm2(flat))];
    }
};

struct LinearProblem {
    ProblemParams params;
    const Grid* grid = nullptr;
    SpectralField phi_hat;
    SpectralField psi_hat;
    std::optional<SpaceTimeField> source;
    bool real_data = true;  // re-impose conjugate symmetry after multipliers
};

inline SpaceTimeField solve_homogeneous(const LinearProblem& problem,
                                        const PropagatorTable& table) {
    const Grid& g = *problem.grid;
    SpaceTimeField u(g);
    const std::size_t size = g.size();
    parallel_for(g.times.size(), [&](std::size_t ti) {
        auto& out = u.slices[ti].coeffs;
        const double* v0 = &table.v0[ti * table.n_distinct];
        const double* v1 = &table.v1[ti * table.n_distinct];
        for (std::size_t i = 0; i < size; ++i) {
            std::uint32_t s = table.slot(i);
            out[i] = v0[s] * problem.phi_hat.coeffs[i] + v1[s] * problem.psi_hat.coeffs[i];
        }
        if (problem.real_data) enforce_conjugate_symmetry(u.slices[ti]);
    });
    return u;
}

namespace detail_linear {

inline bool uniform_times(const std::vector<double>& t) {
    if (t.size() < 2) return true;
    double h = t[1] - t[0];
    for (std::size_t i = 1; i < t.size(); ++i)
        if (std::abs((t[i] - t[i - 1]) - h) > 1e-9 * h) return false;
    return true;
}

// Panel integrals of a sampled function on a uniform grid, 4-point rule.
// I[k] = int_{t_k}^{t_{k+1}}; endpoints use one-sided stencils.
template <class T>
void panel_integrals(const std::vector<T>& gvals, double h, std::vector<T>& I) {
    const std::size_t n = gvals.size();
    I.assign(n - 1, T{});
    if (n == 2) {  // trapezoid is all we can do
        I[0] = 0.5 * h * (gvals[0] + gvals[1]);
        return;
    }
    if (n == 3) {
        I[0] = h / 12.0 * (5.0 * gvals[0] + 8.0 * gvals[1] - gvals[2]);
        I[1] = h / 12.0 * (-gvals[0] + 8.0 * gvals[1] + 5.0 * gvals[2]);
        return;
    }
    I[0] = h / 24.0 * (9.0 * gvals[0] + 19.0 * gvals[1] - 5.0 * gvals[2] + gvals[3]);
    for (std::size_t k = 1; k + 2 < n; ++k)
        I[k] = h / 24.0 *
               (-gvals[k - 1] + 13.0 * gvals[k] + 13.0 * gvals[k + 1] - gvals[k + 2]);
    I[n - 2] = h / 24.0 *
               (gvals[n - 4] - 5.0 * gvals[n - 3] + 19.0 * gvals[n - 2] + 9.0 * gvals[n - 1]);
}

} // namespace detail_linear

inline SpaceTimeField solve_duhamel(const LinearProblem& problem, const PropagatorTable& table) {
    if (!problem.source) throw std::invalid_argument("solve_duhamel: source required");
    const Grid& g = *problem.grid;
    const auto& times = g.times;
    const std::size_t nt = times.size();
    if (nt < 2) throw std::invalid_argument("solve_duhamel: need at least two time samples");
    const bool uniform = detail_linear::uniform_times(times);
    const double h = times[1] - times[0];
    const SpaceTimeField& f = *problem.source;

    SpaceTimeField w(g);
    const std::size_t size = g.size();
    parallel_for(size, [&](std::size_t i) {
        std::uint32_t s = table.slot(i);
        std::vector<cplx> g0(nt), g1(nt);
        for (std::size_t ti = 0; ti < nt; ++ti) {
            cplx fv = f.slices[ti].coeffs[i];
            g0[ti] = table.v0[ti * table.n_distinct + s] * fv;
            g1[ti] = table.v1[ti * table.n_distinct + s] * fv;
        }
        std::vector<cplx> I0, I1;
        if (uniform) {
            detail_linear::panel_integrals(g0, h, I0);
            detail_linear::panel_integrals(g1, h, I1);
        } else {
            I0.resize(nt - 1);
            I1.resize(nt - 1);
            for (std::size_t k = 0; k + 1 < nt; ++k) {
                double hk = times[k + 1] - times[k];
                I0[k] = 0.5 * hk * (g0[k] + g0[k + 1]);
                I1[k] = 0.5 * hk * (g1[k] + g1[k + 1]);
            }
        }
        cplx A{0.0, 0.0}, B{0.0, 0.0};
        w.slices[0].coeffs[i] = {0.0, 0.0};
        for (std::size_t ti = 1; ti < nt; ++ti) {
            A += I0[ti - 1];
            B += I1[ti - 1];
            w.slices[ti].coeffs[i] =
                table.v1[ti * table.n_distinct + s] * A - table.v0[ti * table.n_distinct + s] * B;
        }
    });
    if (problem.real_data)
        for (auto& slice : w.slices) enforce_conjugate_symmetry(slice);
    return w;
}

inline SpaceTimeField solve_linear(const LinearProblem& problem, const PropagatorTable& table) {
    SpaceTimeField u = solve_homogeneous(problem, table);
    if (problem.source) {
        SpaceTimeField w = solve_duhamel(problem, table);
        for (std::size_t ti = 0; ti < u.slices.size(); ++ti)
            for (std::size_t i = 0; i < u.slices[ti].coeffs.size(); ++i)
                u.slices[ti].coeffs[i] += w.slices[ti].coeffs[i];
    }
    return u;
}

// l2-relative defect of d_t^2 u - t^m Lap u - f over the interior time
// samples (5-point 4th-order stencil in t, exact multiplier in x).
inline double residual(const SpaceTimeField& u, const LinearProblem& problem) {
    const Grid& g = *problem.grid;
    const auto& times = g.times;
    const std::size_t nt = times.size();
    if (nt < 5) throw std::invalid_argument("residual: need at least 5 time samples");
    if (!detail_linear::uniform_times(times))
        throw std::invalid_argument("residual: uniform time samples required");
    const double h = times[1] - times[0];
    const int m = problem.params.m;
    const std::size_t size = g.size();

    std::vector<double> acc_r(nt, 0.0), acc_s(nt, 0.0);
    parallel_for(nt - 4, [&](std::size_t idx) {
        const std::size_t ti = idx + 2;
        double tm = std::pow(times[ti], m);
        double r2 = 0.0, s2 = 0.0;
        for (std::size_t i = 0; i < size; ++i) {
            cplx dtt = (-u.slices[ti - 2].coeffs[i] + 16.0 * u.slices[ti - 1].coeffs[i] -
                        30.0 * u.slices[ti].coeffs[i] + 16.0 * u.slices[ti + 1].coeffs[i] -
                        u.slices[ti + 2].coeffs[i]) /
                       (12.0 * h * h);
            double xi = g.xi_mag(i);
            cplx lap = -xi * xi * u.slices[ti].coeffs[i];
            cplx fv = problem.source ? problem.source->slices[ti].coeffs[i] : cplx{0.0, 0.0};
            cplx res = dtt - tm * lap - fv;
            r2 += std::norm(res);
            s2 += std::norm(dtt) + std::norm(tm * lap) + std::norm(fv);
        }
        acc_r[ti] = r2;
        acc_s[ti] = s2;
    });
    double r2 = 0.0, s2 = 0.0;
    for (std::size_t ti = 0; ti < nt; ++ti) {
        r2 += acc_r[ti];
        s2 += acc_s[ti];
    }
    if (s2 == 0.0) return 0.0;
    return std::sqrt(r2 / s2);
}

struct ConeReport {
    bool pass = true;
    double worst_leakage = 0.0;
    double worst_time = 0.0;
    double initial_containment = 1.0;  // mass fraction inside R0 at t = 0
};

// Fraction of squared mass outside |x - center| <= R0 + speed_factor*phi(t) + 3 dx,
// distances in the minimum-image metric of the torus.
inline ConeReport cone_containment(const SpaceTimeField& u, const ProblemParams& params,
                                   double support_radius, double tol,
                                   const std::vector<double>& center,
                                   double speed_factor = 1.0) {
    const Grid& g = *u.grid;
    ConeReport rep;
    for (std::size_t ti = 0; ti < u.slices.size(); ++ti) {
        double R = support_radius + speed_factor * phase_phi(g.times[ti], params.m) + 3.0 * g.dx();
        PhysicalField phys = transform_inverse(u.slices[ti]);
        double inside = 0.0, outside = 0.0;
        for (std::size_t i = 0; i < phys.size(); ++i) {
            double x[3] = {0, 0, 0};
            g.coords(i, x);
            double d2 = 0.0;
            for (int d = 0; d < g.dim; ++d) {
                double dx = std::abs(x[d] - center[d]);
                dx = std::min(dx, g.extent - dx);
                d2 += dx * dx;
            }
            double mass = std::norm(phys[i]);
            if (d2 <= R * R) inside += mass;
            else outside += mass;
        }
        double total = inside + outside;
        double leak = total > 0.0 ? outside / total : 0.0;
        if (ti == 0) rep.initial_containment = total > 0.0 ? inside / total : 1.0;
        if (leak > rep.worst_leakage) {
            rep.worst_leakage = leak;
            rep.worst_time = g.times[ti];
        }
    }
    rep.pass = rep.worst_leakage <= tol;
    return rep;
}

} // namespace tricomi
