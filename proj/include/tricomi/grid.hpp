#pragma once

// Periodic grid and field containers. The torus [0,L)^n with N points per
// axis stands in for R^n; every experiment validates its box against the
// light-cone condition before trusting that substitution.

#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "tricomi/fft.hpp"

namespace tricomi {

struct Grid {
    int dim = 2;                // 1..3
    int points = 64;            // per axis, power of two
    double extent = 2.0 * M_PI; // box edge L
    std::vector<double> times;  // sorted, times[0] == 0

    void validate() const {
        if (dim < 1 || dim > 3) throw std::invalid_argument("Grid: dim in 1..3");
        if (points < 2 || (points & (points - 1)) != 0)
            throw std::invalid_argument("Grid: points must be an even power of two");
        if (extent <= 0) throw std::invalid_argument("Grid: extent > 0");
        if (!times.empty()) {
            if (times.front() != 0.0) throw std::invalid_argument("Grid: times[0] must be 0");
            for (std::size_t i = 1; i < times.size(); ++i)
                if (times[i] <= times[i - 1])
                    throw std::invalid_argument("Grid: times must be strictly increasing");
        }
    }

    std::size_t size() const {
        std::size_t s = 1;
        for (int d = 0; d < dim; ++d) s *= points;
        return s;
    }

    double dx() const { return extent / points; }
    double cell() const { return std::pow(dx(), dim); }
    double fundamental() const { return 2.0 * M_PI / extent; }
    double nyquist() const { return M_PI * points / extent; }

    // signed lattice index of one axis from the storage index
    int signed_index(int k) const { return k < points / 2 ? k : k - points; }

    // physical wavenumber vector components of a flat index
    void wavevector(std::size_t flat, double* out) const {
        double f = fundamental();
        for (int d = dim - 1; d >= 0; --d) {
            int k = static_cast<int>(flat % points);
            flat /= points;
            out[d] = f * signed_index(k);
        }
    }

    double xi_mag(std::size_t flat) const {
        double k[3] = {0, 0, 0};
        wavevector(flat, k);
        return std::sqrt(k[0] * k[0] + k[1] * k[1] + k[2] * k[2]);
    }

    // squared lattice norm (integer) of a flat index; keys the propagator cache
    std::int64_t lattice_norm2(std::size_t flat) const {
        std::int64_t s = 0;
        for (int d = 0; d < dim; ++d) {
            int k = static_cast<int>(flat % points);
            flat /= points;
            std::int64_t sk = signed_index(k);
            s += sk * sk;
        }
        return s;
    }

    // physical coordinates of a flat index
    void coords(std::size_t flat, double* out) const {
        for (int d = dim - 1; d >= 0; --d) {
            int i = static_cast<int>(flat % points);
            flat /= points;
            out[d] = dx() * i;
        }
    }

    // flat index of the reflected lattice point -k (mod N per axis)
    std::size_t reflect(std::size_t flat) const {
        std::size_t out = 0;
        std::size_t mul = 1;
        for (int d = 0; d < dim; ++d) {
            int k = static_cast<int>(flat % points);
            flat /= points;
            int rk = (points - k) % points;
            out += static_cast<std::size_t>(rk) * mul;
            mul *= points;
        }
        return out;
    }

    std::vector<int> dims() const { return std::vector<int>(dim, points); }
};

struct SpectralField {
    const Grid* grid = nullptr;
    std::vector<cplx> coeffs;

    SpectralField() = default;
    explicit SpectralField(const Grid& g) : grid(&g), coeffs(g.size(), cplx{0.0, 0.0}) {}
};

using PhysicalField = std::vector<cplx>;

struct SpaceTimeField {
    const Grid* grid = nullptr;
    std::vector<SpectralField> slices;  // aligned with grid->times

    SpaceTimeField() = default;
    explicit SpaceTimeField(const Grid& g) : grid(&g) {
        slices.assign(g.times.size(), SpectralField(g));
    }
};

} // namespace tricomi
