#pragma once

// Exact rational arithmetic for the exponent calculus. All thresholds and
// Lebesgue exponents of the theory are rational in (m, n, mu) for rational
// mu, and the identities they satisfy are exact; evaluating them in exact
// arithmetic keeps drift from masking formula bugs. Overflow is detected on
// every operation (numerators stay tiny here, but the guard is cheap).

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>

namespace tricomi {

class Rational {
public:
    Rational() = default;
    Rational(std::int64_t v) : num_(v), den_(1) {}
    Rational(std::int64_t num, std::int64_t den) : num_(num), den_(den) { normalize(); }

    static Rational from_double(double v, std::int64_t max_den = 1'000'000) {
        // Continued-fraction convergents; rejects values that are not close
        // to a small rational (callers fall back to double arithmetic).
        if (v != v) throw std::invalid_argument("Rational::from_double: NaN");
        std::int64_t p0 = 0, q0 = 1, p1 = 1, q1 = 0;
        double x = v;
        for (int it = 0; it < 64; ++it) {
            double fa = std::floor(x);
            if (fa > 9e17 || fa < -9e17) break;
            auto a = static_cast<std::int64_t>(fa);
            std::int64_t p2 = a * p1 + p0, q2 = a * q1 + q0;
            if (q2 > max_den) break;
            p0 = p1; q0 = q1; p1 = p2; q1 = q2;
            double r = x - fa;
            if (r < 1e-15 * std::max(1.0, std::abs(v))) break;
            x = 1.0 / r;
        }
        Rational out(p1, q1);
        if (std::abs(out.to_double() - v) > 1e-12 * std::max(1.0, std::abs(v)))
            throw std::domain_error("Rational::from_double: value is not a small rational");
        return out;
    }

    std::int64_t num() const { return num_; }
    std::int64_t den() const { return den_; }
    double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }

    friend Rational operator+(Rational a, Rational b) {
        return Rational(checked((__int128)a.num_ * b.den_ + (__int128)b.num_ * a.den_),
                        checked((__int128)a.den_ * b.den_));
    }
    friend Rational operator-(Rational a, Rational b) { return a + Rational(-b.num_, b.den_); }
    friend Rational operator-(Rational a) { return Rational(-a.num_, a.den_); }
    friend Rational operator*(Rational a, Rational b) {
        return Rational(checked((__int128)a.num_ * b.num_), checked((__int128)a.den_ * b.den_));
    }
    friend Rational operator/(Rational a, Rational b) {
        if (b.num_ == 0) throw std::domain_error("Rational: division by zero");
        return Rational(checked((__int128)a.num_ * b.den_), checked((__int128)a.den_ * b.num_));
    }

    friend bool operator==(Rational a, Rational b) { return a.num_ == b.num_ && a.den_ == b.den_; }
    friend bool operator!=(Rational a, Rational b) { return !(a == b); }
    friend bool operator<(Rational a, Rational b) {
        return (__int128)a.num_ * b.den_ < (__int128)b.num_ * a.den_;
    }
    friend bool operator<=(Rational a, Rational b) { return a < b || a == b; }
    friend bool operator>(Rational a, Rational b) { return b < a; }
    friend bool operator>=(Rational a, Rational b) { return b <= a; }

    Rational inv() const { return Rational(1) / *this; }

    std::string str() const {
        if (den_ == 1) return std::to_string(num_);
        return std::to_string(num_) + "/" + std::to_string(den_);
    }

private:
    std::int64_t num_ = 0;
    std::int64_t den_ = 1;

    static std::int64_t checked(__int128 v) {
        if (v > INT64_MAX || v < INT64_MIN) throw std::overflow_error("Rational overflow");
        return static_cast<std::int64_t>(v);
    }

    void normalize() {
        if (den_ == 0) throw std::domain_error("Rational: zero denominator");
        if (den_ < 0) { num_ = -num_; den_ = -den_; }
        std::int64_t g = std::gcd(num_ < 0 ? -num_ : num_, den_);
        if (g > 1) { num_ /= g; den_ /= g; }
    }
};

} // namespace tricomi
