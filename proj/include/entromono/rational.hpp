#pragma once

#include <cstdint>
#include <numeric>
#include <string>

#include "entromono/errors.hpp"

namespace entromono {

// Exact rational on 64-bit words. Denominators here are bounded by box sizes
// and group exponents, so word arithmetic suffices; intermediate products go
// through 128 bits and any escape past 63 bits throws instead of wrapping.
class Rational {
  public:
    Rational() : num_(0), den_(1) {}
    Rational(std::int64_t n) : num_(n), den_(1) {}
    Rational(std::int64_t n, std::int64_t d) : num_(n), den_(d) { normalize(); }

    std::int64_t num() const { return num_; }
    std::int64_t den() const { return den_; }

    Rational operator+(const Rational& o) const {
        return Rational(checked(__int128(num_) * o.den_ + __int128(o.num_) * den_),
                        checked(__int128(den_) * o.den_));
    }
    Rational operator-(const Rational& o) const {
        return Rational(checked(__int128(num_) * o.den_ - __int128(o.num_) * den_),
                        checked(__int128(den_) * o.den_));
    }
    Rational operator*(const Rational& o) const {
        return Rational(checked(__int128(num_) * o.num_), checked(__int128(den_) * o.den_));
    }
    bool operator==(const Rational& o) const { return num_ == o.num_ && den_ == o.den_; }
    bool operator!=(const Rational& o) const { return !(*this == o); }
    bool operator<(const Rational& o) const {
        return __int128(num_) * o.den_ < __int128(o.num_) * den_;
    }
    bool operator<=(const Rational& o) const { return *this < o || *this == o; }

    // Representative of the class mod Z in [0, 1); used for Q/Z pairing values.
    Rational frac() const {
        std::int64_t r = num_ % den_;
        if (r < 0) r += den_;
        return Rational(r, den_);
    }
    bool is_integer() const { return den_ == 1; }

    double to_double() const { return double(num_) / double(den_); }
    std::string str() const {
        return den_ == 1 ? std::to_string(num_) : std::to_string(num_) + "/" + std::to_string(den_);
    }

  private:
    static std::int64_t checked(__int128 v) {
        if (v > INT64_MAX || v < INT64_MIN) throw ResourceLimitError("rational overflow");
        return std::int64_t(v);
    }
    void normalize() {
        if (den_ == 0) throw Error("rational with zero denominator");
        if (den_ < 0) {
            num_ = -num_;
            den_ = -den_;
        }
        std::int64_t g = std::gcd(num_ < 0 ? -num_ : num_, den_);
        if (g > 1) {
            num_ /= g;
            den_ /= g;
        }
        if (num_ == 0) den_ = 1;
    }

    std::int64_t num_;
    std::int64_t den_;
};

}  // namespace entromono
