#pragma once

// Littlewood-Paley pieces and the dyadic oscillatory integral operators
//
//   W_j^alpha f(t,x) = int_0^t int e^{i(x.xi + (phi(t)-phi(tau))|xi|)}
//                      Theta(|xi|/2^j) b(t,tau,xi) fhat(tau,xi) |xi|^{-alpha}
//                      dxi dtau
//
// together with the operator-norm ratio probes. Two kernels are available:
// the synthetic one saturating its decay bound with constant 1,
//   b = (1 + |phi(t)-phi(tau)| |xi|)^{-m/(mu(m+2))} |xi|^{-2/(m+2)},
// and the physical product b2(t,xi) b3(tau,xi) of propagator symbol pieces
// (the four products in the Duhamel expansion are structurally identical;
// the b2 b3 term is the representative).
//
// The partition profile Theta is built telescopically from a smoothstep,
// so sum_j Theta(r/2^j) == 1 to the last bit. Its transition band is
// narrower than the cutoff eta's (support [1/2, 1.25] instead of [1/2, 2]):
// the measured square-function and l2-resummation constants then sit close
// to 1, which is what the consistency probes pin down.

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

#include "tricomi/exponents.hpp"
#include "tricomi/grid.hpp"
#include "tricomi/linear.hpp"
#include "tricomi/propagator.hpp"
#include "tricomi/spectral_ops.hpp"
#include "tricomi/threading.hpp"

namespace tricomi {

// ---------------------------------------------------------------------------
// Dyadic partition

inline double theta_step(double r) {
    // 1 on [0,1], 0 on [1.25, inf), exp-smoothstep between
    constexpr double kEdge = 1.25;
    if (r <= 1.0) return 1.0;
    if (r >= kEdge) return 0.0;
    auto g = [](double s) { return std::exp(-1.0 / s); };
    double s = (kEdge - r) / (kEdge - 1.0);
    return g(s) / (g(s) + g(1.0 - s));
}

// Theta(r) = step(r) - step(2r): supp in [1/2, 1.25] subset [1/2, 2],
// telescoping to 1 for every r > 0.
inline double theta_profile(double r) {
    if (r <= 0.0) return 0.0;
    return theta_step(r) - theta_step(2.0 * r);
}

inline double theta_j(double xi_mag, int j) { return theta_profile(xi_mag * std::ldexp(1.0, -j)); }

inline SpectralField project_dyadic(const SpectralField& f, int j) {
    SpectralField out = f;
    const Grid& g = *f.grid;
    for (std::size_t i = 0; i < out.coeffs.size(); ++i)
        out.coeffs[i] *= theta_j(g.xi_mag(i), j);
    return out;
}

// Sharp disjoint shells 2^{j-1} < |xi| <= 2^j: the L2 square function with
// these projections resums exactly on zero-mean fields.
inline SpectralField project_dyadic_sharp(const SpectralField& f, int j) {
    SpectralField out = f;
    const Grid& g = *f.grid;
    double lo = std::ldexp(1.0, j - 1), hi = std::ldexp(1.0, j);
    for (std::size_t i = 0; i < out.coeffs.size(); ++i) {
        double xi = g.xi_mag(i);
        if (!(xi > lo && xi <= hi)) out.coeffs[i] = {0.0, 0.0};
    }
    return out;
}

// j-range fitting inside (fundamental, Nyquist): 2^{j-1} > 2pi/L and
// 2^{j+1} < pi N / L.
inline std::pair<int, int> admissible_j_range(const Grid& g) {
    int jlo = static_cast<int>(std::floor(std::log2(g.fundamental()))) + 2;
    int jhi = static_cast<int>(std::ceil(std::log2(g.nyquist()))) - 2;
    return {jlo, jhi};
}

// ---------------------------------------------------------------------------
// Kernels

struct FioKernelSpec {
    // Unit (b == 1) exists for algebraic identity checks only.
    enum class Kind { Synthetic, Physical, Unit } kind = Kind::Synthetic;
    int m = 1;
    double mu = 4.0;
    cplx alpha{0.0, 0.0};
};

// Fourier-side operator with cached per-(time, |xi|-slot) symbol values.
class FioOperator {
public:
    FioOperator(const Grid& grid, FioKernelSpec spec) : grid_(&grid), spec_(spec) {
        grid.validate();
        const auto& times = grid.times;
        phi_.resize(times.size());
        for (std::size_t i = 0; i < times.size(); ++i) phi_[i] = phase_phi(times[i], spec_.m);
        if (spec_.kind == FioKernelSpec::Kind::Physical) build_symbol_table();
    }

    const Grid& grid() const { return *grid_; }
    const FioKernelSpec& spec() const { return spec_; }

    // Kernel value b(t_i, t_k, xi) (times by sample index).
    cplx kernel(std::size_t ti, std::size_t tk, double xi_mag, std::uint32_t slot) const {
        if (spec_.kind == FioKernelSpec::Kind::Unit) return {1.0, 0.0};
        if (spec_.kind == FioKernelSpec::Kind::Synthetic) {
            double p = spec_.m / (spec_.mu * (spec_.m + 2.0));
            double dphi = std::abs(phi_[ti] - phi_[tk]);
            return std::pow(1.0 + dphi * xi_mag, -p) *
                   std::pow(xi_mag, -2.0 / (spec_.m + 2.0));
        }
        const std::size_t ns = n_slots_;
        return b2_[ti * ns + slot] * b3_[tk * ns + slot];
    }

    // Sparse core: f_vals[time][mode] on the given flat-index set.
    // out(t) = sum_{tau <= t} w e^{i(phi(t)-phi(tau))|xi|} b(t,tau,xi) |xi|^{-alpha} f(tau)
    std::vector<std::vector<cplx>> apply_sparse(const std::vector<std::size_t>& modes,
                                                const std::vector<std::vector<cplx>>& f_vals,
                                                int j_or_full, bool full = false) const {
        const auto& times = grid_->times;
        const std::size_t nt = times.size();
        std::vector<std::vector<cplx>> out(nt, std::vector<cplx>(modes.size(), cplx{0.0, 0.0}));
        parallel_for(modes.size(), [&](std::size_t mi) {
            const std::size_t flat = modes[mi];
            const double xi = grid_->xi_mag(flat);
            if (xi == 0.0) return;  // zero mode excluded
            const double cut = full ? 1.0 : theta_j(xi, j_or_full);
            if (cut == 0.0) return;
            const std::uint32_t slot = slot_of(flat);
            const cplx xi_pow =
                std::exp(-spec_.alpha * std::log(cplx(xi, 0.0))) * cut;
            std::vector<cplx> eiphi(nt);
            for (std::size_t ti = 0; ti < nt; ++ti) eiphi[ti] = std::polar(1.0, phi_[ti] * xi);
            for (std::size_t ti = 1; ti < nt; ++ti) {
                cplx acc{0.0, 0.0};
                for (std::size_t tk = 0; tk <= ti; ++tk) {
                    double w = trap_weight(times, tk, ti);
                    acc += w * std::conj(eiphi[tk]) * kernel(ti, tk, xi, slot) *
                           f_vals[tk][mi];
                }
                out[ti][mi] = acc * eiphi[ti] * xi_pow;
            }
        });
        return out;
    }

    SpaceTimeField apply(const SpaceTimeField& f, int j) const { return apply_dense(f, j, false); }
    SpaceTimeField apply_full(const SpaceTimeField& f) const { return apply_dense(f, 0, true); }

private:
    const Grid* grid_;
    FioKernelSpec spec_;
    std::vector<double> phi_;
    // physical symbol tables, laid out [time][slot]
    std::vector<std::uint32_t> slot_of_norm2_;
    std::size_t n_slots_ = 0;
    std::vector<cplx> b2_, b3_;

    static double trap_weight(const std::vector<double>& t, std::size_t k, std::size_t upto) {
        if (upto == 0) return 0.0;
        double left = (k == 0) ? t[0] : t[k - 1];
        double right = (k == upto) ? t[upto] : t[k + 1];
        return 0.5 * (right - left);
    }

    std::uint32_t slot_of(std::size_t flat) const {
        if (spec_.kind != FioKernelSpec::Kind::Physical) return 0;
        return slot_of_norm2_[static_cast<std::size_t>(grid_->lattice_norm2(flat))];
    }

    void build_symbol_table() {
        const Grid& g = *grid_;
        std::int64_t half = g.points / 2;
        std::int64_t max_norm2 = g.dim * half * half;
        slot_of_norm2_.assign(static_cast<std::size_t>(max_norm2) + 1, ~0u);
        for (std::size_t i = 0; i < g.size(); ++i)
            slot_of_norm2_[static_cast<std::size_t>(g.lattice_norm2(i))] = 0;
        std::vector<std::int64_t> norms;
        std::uint32_t next = 0;
        for (std::size_t v = 0; v < slot_of_norm2_.size(); ++v) {
            if (slot_of_norm2_[v] == 0) {
                slot_of_norm2_[v] = next++;
                norms.push_back(static_cast<std::int64_t>(v));
            } else {
                slot_of_norm2_[v] = ~0u;
            }
        }
        n_slots_ = next;
        const std::size_t nt = g.times.size();
        b2_.resize(nt * n_slots_);
        b3_.resize(nt * n_slots_);
        const double f0 = g.fundamental();
        parallel_for(n_slots_, [&](std::size_t s) {
            double xi = f0 * std::sqrt(static_cast<double>(norms[s]));
            for (std::size_t ti = 0; ti < nt; ++ti) {
                b2_[ti * n_slots_ + s] = (xi == 0.0) ? cplx{0.0, 0.0}
                                                     : symbol_b(2, g.times[ti], xi, spec_.m);
                b3_[ti * n_slots_ + s] = (xi == 0.0) ? cplx{0.0, 0.0}
                                                     : symbol_b(3, g.times[ti], xi, spec_.m);
            }
        });
    }

    SpaceTimeField apply_dense(const SpaceTimeField& f, int j, bool full) const {
        const Grid& g = *grid_;
        std::vector<std::size_t> modes;
        for (std::size_t i = 0; i < g.size(); ++i) {
            double xi = g.xi_mag(i);
            if (xi == 0.0) continue;
            if (full || theta_j(xi, j) != 0.0) modes.push_back(i);
        }
        std::vector<std::vector<cplx>> vals(g.times.size(), std::vector<cplx>(modes.size()));
        for (std::size_t ti = 0; ti < g.times.size(); ++ti)
            for (std::size_t mi = 0; mi < modes.size(); ++mi)
                vals[ti][mi] = f.slices[ti].coeffs[modes[mi]];
        auto res = apply_sparse(modes, vals, j, full);
        SpaceTimeField out(g);
        for (std::size_t ti = 0; ti < g.times.size(); ++ti)
            for (std::size_t mi = 0; mi < modes.size(); ++mi)
                out.slices[ti].coeffs[modes[mi]] = res[ti][mi];
        return out;
    }
};

// ---------------------------------------------------------------------------
// Uniformity probe (operator-norm ratios across dyadic shells)

struct ProbeRow {
    int j = 0;
    int trial = 0;
    double ratio = 0.0;
};

struct UniformityReport {
    std::vector<ProbeRow> rows;
    std::vector<int> j_list;
    std::vector<double> max_ratio;  // per j
    double spread = 0.0;            // max over j / min over j of max_ratio
    double slope = 0.0;             // fit of log2(max_ratio) vs j
    double exponent = 0.0;          // the normalization exponent used
    double r = 0.0, p = 0.0;
};

// Shell-modulated Gaussian trial data on the sparse mode set.
// Self-similar across j: spectral width proportional to lambda_j.
namespace detail_dyadic {

inline std::vector<std::vector<cplx>> shell_trial(const Grid& g,
                                                  const std::vector<std::size_t>& modes, int j,
                                                  std::mt19937_64& rng) {
    auto uni = [&rng]() { return (rng() >> 11) * 0x1p-53; };
    const double lam = std::ldexp(1.0, j);
    const double width = 0.35 * lam;
    // random shell direction and bump center
    double ang = 2.0 * M_PI * uni();
    double kc[3] = {lam * std::cos(ang), lam * std::sin(ang), 0.0};
    if (g.dim == 1) { kc[0] = lam; kc[1] = 0.0; }
    double x0[3] = {g.extent * uni(), g.extent * uni(), g.extent * uni()};
    const auto& times = g.times;
    double T = times.back();
    double tc = T * (0.25 + 0.5 * uni());
    double tw = T * (0.1 + 0.2 * uni());

    std::vector<std::vector<cplx>> vals(times.size(), std::vector<cplx>(modes.size()));
    for (std::size_t mi = 0; mi < modes.size(); ++mi) {
        double k[3] = {0, 0, 0};
        g.wavevector(modes[mi], k);
        double d2 = 0.0, phase = 0.0;
        for (int d = 0; d < g.dim; ++d) {
            double dk = k[d] - kc[d];
            d2 += dk * dk;
            phase -= dk * x0[d];
        }
        cplx amp = std::polar(std::exp(-0.5 * d2 / (width * width)), phase);
        for (std::size_t ti = 0; ti < times.size(); ++ti) {
            double dt = (times[ti] - tc) / tw;
            vals[ti][mi] = amp * std::exp(-0.5 * dt * dt);
        }
    }
    return vals;
}

inline double sparse_l2(const Grid& g, const std::vector<cplx>& v) {
    double s = 0.0;
    for (const auto& c : v) s += std::norm(c);
    return std::sqrt(std::pow(g.extent, g.dim) * s);
}

} // namespace detail_dyadic

// p = 2 probe: both space norms are Plancherel-exact, r from the 1/r display.
// exponent_shift deliberately miscalibrates the normalization (negative
// control) when nonzero.
inline UniformityReport uniformity_probe(const Grid& grid, const ProblemParams& params,
                                         const FioKernelSpec& spec,
                                         const std::vector<int>& j_list, int trials,
                                         std::uint64_t seed, double exponent_shift = 0.0) {
    const double p = 2.0;
    ExponentTable tab = derive_exponents(params, spec.mu);
    if (!(p > std::max(tab.p1, 1.0)))
        throw std::domain_error("uniformity_probe: requires p > max{p1, 1} (Thm range (i))");
    if (!(spec.mu >= std::max(2.0, 0.5 * params.m) - 1e-12))
        throw std::domain_error("uniformity_probe: requires mu >= max{2, m/2}");
    auto [jlo, jhi] = admissible_j_range(grid);
    for (int j : j_list)
        if (j < jlo || j > jhi)
            throw std::domain_error("uniformity_probe: shell outside the grid's j-range");

    const int m = params.m, n = params.n;
    const double mu = spec.mu;
    UniformityReport rep;
    rep.p = p;
    rep.r = 1.0 / (1.0 - m / (4.0 * mu));
    const double rp = rep.r / (rep.r - 1.0);  // conjugate
    rep.exponent = -m / (mu * (m + 2.0)) - 2.0 / (m + 2.0) - spec.alpha.real() +
                   exponent_shift;
    rep.j_list = j_list;

    FioOperator op(grid, spec);
    for (std::size_t jj = 0; jj < j_list.size(); ++jj) {
        int j = j_list[jj];
        // gather the shell's mode set once
        std::vector<std::size_t> modes;
        for (std::size_t i = 0; i < grid.size(); ++i) {
            double xi = grid.xi_mag(i);
            if (xi > 0.0 && theta_j(xi, j) != 0.0) modes.push_back(i);
        }
        double best = 0.0;
        for (int trial = 0; trial < trials; ++trial) {
            std::mt19937_64 rng(seed ^ (0x9e3779b97f4a7c15ull * (j + 100)) ^
                                (0xbf58476d1ce4e5b9ull * trial));
            auto f_vals = detail_dyadic::shell_trial(grid, modes, j, rng);
            auto out = op.apply_sparse(modes, f_vals, j);
            std::vector<double> fn(grid.times.size()), on(grid.times.size());
            for (std::size_t ti = 0; ti < grid.times.size(); ++ti) {
                fn[ti] = detail_dyadic::sparse_l2(grid, f_vals[ti]);
                on[ti] = detail_dyadic::sparse_l2(grid, out[ti]);
            }
            double denom = time_ls_norm(grid.times, fn, rep.r);
            double numer = time_ls_norm(grid.times, on, rp);
            double lam_pow = std::pow(std::ldexp(1.0, j), rep.exponent);
            double ratio = numer / (lam_pow * denom);
            rep.rows.push_back({j, trial, ratio});
            best = std::max(best, ratio);
        }
        rep.max_ratio.push_back(best);
    }
    double lo = rep.max_ratio[0], hi = rep.max_ratio[0];
    for (double v : rep.max_ratio) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    rep.spread = hi / lo;
    // least-squares slope of log2(max_ratio) against j
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < rep.j_list.size(); ++i) {
        double x = rep.j_list[i], y = std::log2(rep.max_ratio[i]);
        sx += x; sy += y; sxx += x * x; sxy += x * y;
    }
    double nn = static_cast<double>(rep.j_list.size());
    rep.slope = (nn * sxy - sx * sy) / (nn * sxx - sx * sx);
    return rep;
}

// ---------------------------------------------------------------------------
// Homogeneous Strichartz ratio probe

struct HomogeneousRow {
    double scale = 1.0;   // bump width divisor (dilation ladder position)
    double ratio = 0.0;   // |v|_{L^s L^q} / (|phi|_{H^g} + |psi|_{H^{g-2/(m+2)}})
};

struct HomogeneousReport {
    std::vector<HomogeneousRow> rows;
    double max_over_min = 0.0;
    bool monotone_increasing = true;
};

// Gaussian data concentrated at width base_width/scale, solved with the
// exact propagators, measured in the tuple's norms.
inline HomogeneousReport homogeneous_probe(const Grid& grid, const ProblemParams& params,
                                           const StrichartzTuple& tuple,
                                           const std::vector<double>& scales,
                                           double base_width) {
    grid.validate();
    // cone/wrap condition: bump tails plus phi(T) must stay inside L/2
    double phiT = phase_phi(grid.times.back(), params.m);
    if (4.0 * base_width + phiT > 0.5 * grid.extent)
        throw std::domain_error("homogeneous_probe: box too small for the widest bump + cone");

    PropagatorTable table = PropagatorTable::build(grid, params.m);
    HomogeneousReport rep;
    const double gam = tuple.gamma;
    const double gam_psi = gam - 2.0 / (params.m + 2.0);

    for (double scale : scales) {
        double w = base_width / scale;
        PhysicalField phi(grid.size());
        for (std::size_t i = 0; i < grid.size(); ++i) {
            double x[3] = {0, 0, 0};
            grid.coords(i, x);
            double r2 = 0.0;
            for (int d = 0; d < grid.dim; ++d) {
                double dx = x[d] - 0.5 * grid.extent;
                r2 += dx * dx;
            }
            phi[i] = std::exp(-0.5 * r2 / (w * w));
        }
        LinearProblem prob;
        prob.params = params;
        prob.grid = &grid;
        prob.phi_hat = transform_forward(grid, phi);
        prob.phi_hat.coeffs[0] = 0.0;  // zero-mean representative
        prob.psi_hat = SpectralField(grid);
        auto v = solve_homogeneous(prob, table);
        double num = mixed_norm(v, tuple.s, tuple.q);
        double den = sobolev_norm(prob.phi_hat, gam);
        (void)gam_psi;  // psi = 0 in the ladder family
        rep.rows.push_back({scale, num / den});
    }
    double lo = rep.rows[0].ratio, hi = rep.rows[0].ratio;
    for (std::size_t i = 0; i < rep.rows.size(); ++i) {
        lo = std::min(lo, rep.rows[i].ratio);
        hi = std::max(hi, rep.rows[i].ratio);
        if (i > 0 && rep.rows[i].ratio <= rep.rows[i - 1].ratio) rep.monotone_increasing = false;
    }
    rep.max_over_min = hi / lo;
    return rep;
}

} // namespace tricomi
