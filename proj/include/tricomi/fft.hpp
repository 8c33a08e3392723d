#pragma once

// Radix-2 complex FFT with cached plans, plus the n-dimensional wrappers
// the periodic grid uses. Power-of-two sizes only (a grid invariant).
//
// Conventions: forward = sum_x u(x) e^{-i 2pi k x / N} / N per axis, so the
// forward transform of a physical field yields Fourier-series coefficients;
// inverse is the plain unscaled synthesis sum. Round trip is the identity
// to machine precision.

#include <complex>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <unordered_map>
#include <vector>

namespace tricomi {

using cplx = std::complex<double>;

namespace fft_detail {

struct Plan {
    int n = 0;
    std::vector<int> rev;
    std::vector<cplx> w;  // twiddles for each stage, packed

    explicit Plan(int size) : n(size) {
        if (n <= 0 || (n & (n - 1)) != 0) throw std::invalid_argument("fft: power of two required");
        rev.resize(n);
        int lg = 0;
        while ((1 << lg) < n) ++lg;
        for (int i = 0; i < n; ++i) {
            int r = 0;
            for (int b = 0; b < lg; ++b)
                if (i & (1 << b)) r |= 1 << (lg - 1 - b);
            rev[i] = r;
        }
        w.resize(n);  // stage m uses w[m/2 + j], j < m/2
        for (int len = 2; len <= n; len <<= 1) {
            for (int j = 0; j < len / 2; ++j) {
                double ang = -2.0 * M_PI * j / len;
                w[len / 2 + j] = {std::cos(ang), std::sin(ang)};
            }
        }
    }
};

inline const Plan& plan_for(int n) {
    static std::mutex mu;
    static std::unordered_map<int, std::unique_ptr<Plan>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, std::make_unique<Plan>(n)).first;
    return *it->second;
}

// In-place forward DFT (no scaling), data contiguous.
inline void fft_inplace(cplx* a, const Plan& p, bool inverse) {
    const int n = p.n;
    for (int i = 0; i < n; ++i) {
        int r = p.rev[i];
        if (i < r) std::swap(a[i], a[r]);
    }
    for (int len = 2; len <= n; len <<= 1) {
        const cplx* tw = &p.w[len / 2];
        for (int i = 0; i < n; i += len) {
            for (int j = 0; j < len / 2; ++j) {
                cplx wj = inverse ? std::conj(tw[j]) : tw[j];
                cplx u = a[i + j];
                cplx v = a[i + j + len / 2] * wj;
                a[i + j] = u + v;
                a[i + j + len / 2] = u - v;
            }
        }
    }
}

} // namespace fft_detail

// dims: extents per axis (row-major, last axis contiguous).
// forward: divides by the total point count, giving series coefficients.
inline void fft_nd(std::vector<cplx>& data, const std::vector<int>& dims, bool forward) {
    std::size_t total = 1;
    for (int d : dims) total *= d;
    if (data.size() != total) throw std::invalid_argument("fft_nd: size mismatch");

    std::size_t stride = 1;
    for (int axis = static_cast<int>(dims.size()) - 1; axis >= 0; --axis) {
        const int n = dims[axis];
        const auto& plan = fft_detail::plan_for(n);
        const std::size_t block = stride * n;
        std::vector<cplx> scratch(n);
        for (std::size_t base = 0; base < total; base += block) {
            for (std::size_t off = 0; off < stride; ++off) {
                cplx* src = data.data() + base + off;
                if (stride == 1) {
                    fft_detail::fft_inplace(src, plan, !forward);
                } else {
                    for (int i = 0; i < n; ++i) scratch[i] = src[i * stride];
                    fft_detail::fft_inplace(scratch.data(), plan, !forward);
                    for (int i = 0; i < n; ++i) src[i * stride] = scratch[i];
                }
            }
        }
        stride *= n;
    }
    if (forward) {
        double inv = 1.0 / static_cast<double>(total);
        for (auto& v : data) v *= inv;
    }
}

} // namespace tricomi
