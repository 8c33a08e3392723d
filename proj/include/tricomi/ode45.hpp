#pragma once

// Embedded Dormand-Prince 5(4) pair with PI step control. This is the
// independent oracle the propagator and Duhamel tests integrate against;
// production solvers never call it. Steps are clipped to land exactly on
// the requested sample points, so no dense-output interpolation degrades
// the reported values.

#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace tricomi {

template <int N>
using OdeState = std::array<double, N>;

template <int N>
struct OdeResult {
    std::vector<double> t;
    std::vector<OdeState<N>> y;
};

template <int N, class F>
OdeResult<N> ode45(F&& f, double t0, double t1, OdeState<N> y0,
                   const std::vector<double>& samples, double rtol = 1e-10,
                   double atol = 1e-13) {
    static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                            a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                            a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                            b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                            e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

    OdeResult<N> out;
    out.t = samples;
    out.y.reserve(samples.size());

    double t = t0;
    OdeState<N> y = y0;
    OdeState<N> k1 = f(t, y);
    double h_nat = (t1 - t0) * 1e-4;  // controller's preferred step
    std::size_t next = 0;
    double err_prev = 1.0;

    while (next < samples.size() && samples[next] <= t0 + 1e-15) {
        out.y.push_back(y0);
        ++next;
    }

    int max_steps = 50'000'000;
    while ((t < t1 - 1e-14 || next < samples.size()) && max_steps-- > 0) {
        double target = (next < samples.size()) ? samples[next] : t1;
        if (target <= t + 1e-14) {  // sample coincides with current t
            while (next < samples.size() && samples[next] <= t + 1e-14) {
                out.y.push_back(y);
                ++next;
            }
            continue;
        }
        bool clipped = (t + h_nat >= target - 1e-15);
        double h = clipped ? target - t : h_nat;

        OdeState<N> y2, y3, y4, y5, y6, ynew;
        for (int i = 0; i < N; ++i) y2[i] = y[i] + h * a21 * k1[i];
        OdeState<N> k2 = f(t + c2 * h, y2);
        for (int i = 0; i < N; ++i) y3[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
        OdeState<N> k3 = f(t + c3 * h, y3);
        for (int i = 0; i < N; ++i) y4[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
        OdeState<N> k4 = f(t + c4 * h, y4);
        for (int i = 0; i < N; ++i)
            y5[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
        OdeState<N> k5 = f(t + c5 * h, y5);
        for (int i = 0; i < N; ++i)
            y6[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
        OdeState<N> k6 = f(t + h, y6);
        for (int i = 0; i < N; ++i)
            ynew[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
        OdeState<N> k7 = f(t + h, ynew);

        double err = 0.0;
        for (int i = 0; i < N; ++i) {
            double e = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] +
                            e7 * k7[i]);
            double sc = atol + rtol * std::max(std::abs(y[i]), std::abs(ynew[i]));
            err += (e / sc) * (e / sc);
        }
        err = std::sqrt(err / N);

        if (err <= 1.0) {
            t += h;
            y = ynew;
            k1 = k7;  // FSAL
            while (next < samples.size() && samples[next] <= t + 1e-14) {
                out.y.push_back(y);
                ++next;
            }
            if (!clipped) {
                double fac = 0.9 * std::pow(err > 1e-300 ? err : 1e-300, -0.7 / 5.0) *
                             std::pow(err_prev, 0.4 / 5.0);
                h_nat = h * std::min(5.0, std::max(0.2, fac));
                err_prev = std::max(err, 1e-300);
            }
        } else {
            h_nat = h * std::max(0.1, 0.9 * std::pow(err, -1.0 / 5.0));
        }
        if (h_nat < 1e-15 * std::max(1.0, std::abs(t1)))
            throw std::runtime_error("ode45: step size underflow");
    }
    if (max_steps <= 0) throw std::runtime_error("ode45: step budget exhausted");
    while (next < samples.size()) {
        out.y.push_back(y);
        ++next;
    }
    return out;
}

} // namespace tricomi
