#pragma once

#include <cstdint>
#include <numeric>
#include <ostream>
#include <string>

#include "dynascore/error.hpp"

namespace dynascore {

// Exact fraction over 64-bit integers, kept normalized: gcd(num, den) == 1,
// den > 0, and zero is 0/1. Intermediate products are evaluated in 128 bits,
// so any value whose reduced components fit in int64 is handled exactly.
class Rational {
public:
    constexpr Rational() = default;
    constexpr Rational(std::int64_t value) : num_(value) {} // NOLINT: implicit by design
    constexpr Rational(std::int64_t num, std::int64_t den) : num_(num), den_(den) {
        if (den_ == 0) {
            throw Error("rational with zero denominator");
        }
        normalize();
    }

    constexpr std::int64_t num() const { return num_; }
    constexpr std::int64_t den() const { return den_; }
    constexpr bool is_zero() const { return num_ == 0; }

    double to_double() const {
        return static_cast<double>(num_) / static_cast<double>(den_);
    }

    std::string to_string() const {
        if (den_ == 1) {
            return std::to_string(num_);
        }
        return std::to_string(num_) + "/" + std::to_string(den_);
    }

    constexpr Rational operator-() const {
        Rational r;
        r.num_ = -num_;
        r.den_ = den_;
        return r;
    }

    friend constexpr Rational operator+(const Rational& a, const Rational& b) {
        return from_wide(wide(a.num_) * b.den_ + wide(b.num_) * a.den_,
                         wide(a.den_) * b.den_);
    }
    friend constexpr Rational operator-(const Rational& a, const Rational& b) {
        return from_wide(wide(a.num_) * b.den_ - wide(b.num_) * a.den_,
                         wide(a.den_) * b.den_);
    }
    friend constexpr Rational operator*(const Rational& a, const Rational& b) {
        return from_wide(wide(a.num_) * b.num_, wide(a.den_) * b.den_);
    }
    friend constexpr Rational operator/(const Rational& a, const Rational& b) {
        if (b.num_ == 0) {
            throw Error("rational division by zero");
        }
        return from_wide(wide(a.num_) * b.den_, wide(a.den_) * b.num_);
    }

    constexpr Rational& operator+=(const Rational& o) { return *this = *this + o; }
    constexpr Rational& operator-=(const Rational& o) { return *this = *this - o; }
    constexpr Rational& operator*=(const Rational& o) { return *this = *this * o; }
    constexpr Rational& operator/=(const Rational& o) { return *this = *this / o; }

    friend constexpr bool operator==(const Rational& a, const Rational& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend constexpr bool operator!=(const Rational& a, const Rational& b) {
        return !(a == b);
    }
    friend constexpr bool operator<(const Rational& a, const Rational& b) {
        return wide(a.num_) * b.den_ < wide(b.num_) * a.den_;
    }
    friend constexpr bool operator>(const Rational& a, const Rational& b) { return b < a; }
    friend constexpr bool operator<=(const Rational& a, const Rational& b) { return !(b < a); }
    friend constexpr bool operator>=(const Rational& a, const Rational& b) { return !(a < b); }

    friend std::ostream& operator<<(std::ostream& os, const Rational& r) {
        return os << r.to_string();
    }

private:
    using wide = __int128;

    constexpr void normalize() {
        if (den_ < 0) {
            num_ = -num_;
            den_ = -den_;
        }
        const std::int64_t g = std::gcd(num_, den_);
        if (g > 1) {
            num_ /= g;
            den_ /= g;
        }
    }

    static constexpr Rational from_wide(wide num, wide den) {
        if (den < 0) {
            num = -num;
            den = -den;
        }
        const wide g = gcd_wide(num < 0 ? -num : num, den);
        if (g > 1) {
            num /= g;
            den /= g;
        }
        constexpr wide lo = wide(INT64_MIN);
        constexpr wide hi = wide(INT64_MAX);
        if (num < lo || num > hi || den > hi) {
            throw Error("rational overflow");
        }
        Rational r;
        r.num_ = static_cast<std::int64_t>(num);
        r.den_ = static_cast<std::int64_t>(den);
        return r;
    }

    static constexpr wide gcd_wide(wide a, wide b) {
        while (b != 0) {
            const wide t = a % b;
            a = b;
            b = t;
        }
        return a;
    }

    std::int64_t num_ = 0;
    std::int64_t den_ = 1;
};

constexpr Rational abs(const Rational& r) {
    return r.num() < 0 ? -r : r;
}

} // namespace dynascore
