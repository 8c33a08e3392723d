#pragma once

// Transforms, |D_x|^gamma multipliers, homogeneous Sobolev norms, and the
// mixed space-time norms L^s_t L^q_x. Space integrals treat grid values as
// cell averages; time integrals are trapezoidal on the sample times.
//
// Homogeneous-Sobolev semantics on the torus: the zero mode is annihilated
// by |D|^gamma for gamma > 0 and excluded for gamma < 0; norms with
// gamma < 0 reject fields with nonzero mean instead of inventing a value.

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "tricomi/grid.hpp"

namespace tricomi {

inline SpectralField transform_forward(const Grid& grid, const PhysicalField& u) {
    if (u.size() != grid.size()) throw std::invalid_argument("transform_forward: size mismatch");
    SpectralField f(grid);
    f.coeffs = u;
    fft_nd(f.coeffs, grid.dims(), true);
    return f;
}

inline PhysicalField transform_inverse(const SpectralField& f) {
    PhysicalField u = f.coeffs;
    fft_nd(u, f.grid->dims(), false);
    return u;
}

// c[k] <- (c[k] + conj(c[-k]))/2; idempotent, exact for real fields.
inline void enforce_conjugate_symmetry(SpectralField& f) {
    const Grid& g = *f.grid;
    for (std::size_t i = 0; i < f.coeffs.size(); ++i) {
        std::size_t r = g.reflect(i);
        if (r < i) continue;
        cplx a = f.coeffs[i], b = f.coeffs[r];
        cplx s = 0.5 * (a + std::conj(b));
        f.coeffs[i] = s;
        f.coeffs[r] = std::conj(s);
    }
}

inline SpectralField fractional_derivative(const SpectralField& f, double gamma) {
    SpectralField out = f;
    if (gamma == 0.0) return out;
    const Grid& g = *f.grid;
    for (std::size_t i = 0; i < out.coeffs.size(); ++i) {
        double xi = g.xi_mag(i);
        out.coeffs[i] = (xi == 0.0) ? cplx{0.0, 0.0} : out.coeffs[i] * std::pow(xi, gamma);
    }
    return out;
}

inline double sobolev_norm(const SpectralField& f, double gamma) {
    const Grid& g = *f.grid;
    double sum = 0.0;
    double zero_mode = 0.0;
    for (std::size_t i = 0; i < f.coeffs.size(); ++i) {
        double xi = g.xi_mag(i);
        double a2 = std::norm(f.coeffs[i]);
        if (xi == 0.0) {
            zero_mode = std::sqrt(a2);
            if (gamma == 0.0) sum += a2;
            continue;
        }
        sum += std::pow(xi, 2.0 * gamma) * a2;
    }
    if (gamma < 0.0) {
        double scale = std::sqrt(sum) + 1e-300;
        if (zero_mode > 1e-10 * scale)
            throw std::domain_error("sobolev_norm: gamma < 0 requires a zero-mean field");
    }
    return std::sqrt(std::pow(g.extent, g.dim) * sum);
}

// (sum |u|^q dx)^{1/q} over the box; q = inf -> max
inline double space_lq_norm(const Grid& grid, const PhysicalField& u, double q) {
    if (std::isinf(q)) {
        double m = 0.0;
        for (const auto& v : u) m = std::max(m, std::abs(v));
        return m;
    }
    double acc = 0.0;
    for (const auto& v : u) acc += std::pow(std::abs(v), q);
    return std::pow(acc * grid.cell(), 1.0 / q);
}

// trapezoidal (int g(t)^s dt)^{1/s}; s = inf -> max
inline double time_ls_norm(const std::vector<double>& times, const std::vector<double>& g,
                           double s) {
    if (times.size() != g.size()) throw std::invalid_argument("time_ls_norm: size mismatch");
    if (std::isinf(s)) return *std::max_element(g.begin(), g.end());
    double acc = 0.0;
    for (std::size_t i = 1; i < times.size(); ++i) {
        double h = times[i] - times[i - 1];
        acc += 0.5 * h * (std::pow(g[i - 1], s) + std::pow(g[i], s));
    }
    return std::pow(acc, 1.0 / s);
}

inline double mixed_norm(const SpaceTimeField& u, double s, double q) {
    const Grid& g = *u.grid;
    std::vector<double> per_time(u.slices.size());
    for (std::size_t i = 0; i < u.slices.size(); ++i)
        per_time[i] = space_lq_norm(g, transform_inverse(u.slices[i]), q);
    return time_ls_norm(g.times, per_time, s);
}

// sup_t of the Hdot^gamma norm over the slices (the C^0_t Hdot^gamma norm)
inline double sup_sobolev_norm(const SpaceTimeField& u, double gamma) {
    double m = 0.0;
    for (const auto& slice : u.slices) m = std::max(m, sobolev_norm(slice, gamma));
    return m;
}

} // namespace tricomi
