#pragma once

#include <quadmath.h>

#include <stdexcept>
#include <string>
#include <string_view>

namespace qpo {

// Immutable 128-bit binary floating-point scalar (113-bit significand,
// ~33.5 significant decimal digits).  All operations return new values.
// Division by zero and out-of-domain transcendental arguments throw
// std::domain_error instead of producing NaN/Inf silently.
class XReal {
public:
    constexpr XReal() : v_(0) {}
    constexpr XReal(double x) : v_(x) {}
    constexpr XReal(int x) : v_(x) {}
    constexpr XReal(long x) : v_(x) {}
    constexpr XReal(long long x) : v_(x) {}
    constexpr XReal(unsigned long x) : v_(x) {}
    constexpr XReal(unsigned long long x) : v_(x) {}
    constexpr explicit XReal(__float128 x) : v_(x) {}

    constexpr __float128 raw() const { return v_; }
    double to_double() const { return static_cast<double>(v_); }

    // Accepts [sign] digits [. digits] [eE [sign] digits]; whole string must
    // parse.  Throws std::invalid_argument otherwise.
    static XReal parse(std::string_view text);

    // Scientific notation with exactly 36 significant digits; round-trips
    // through parse() bit-exactly.
    std::string str() const;

    friend XReal operator-(const XReal& a) { return XReal(-a.v_); }
    friend XReal operator+(const XReal& a, const XReal& b) { return XReal(a.v_ + b.v_); }
    friend XReal operator-(const XReal& a, const XReal& b) { return XReal(a.v_ - b.v_); }
    friend XReal operator*(const XReal& a, const XReal& b) { return XReal(a.v_ * b.v_); }
    friend XReal operator/(const XReal& a, const XReal& b) {
        if (b.v_ == 0) throw std::domain_error("XReal: division by zero");
        return XReal(a.v_ / b.v_);
    }

    XReal& operator+=(const XReal& b) { v_ += b.v_; return *this; }
    XReal& operator-=(const XReal& b) { v_ -= b.v_; return *this; }
    XReal& operator*=(const XReal& b) { v_ *= b.v_; return *this; }
    XReal& operator/=(const XReal& b) { *this = *this / b; return *this; }

    friend bool operator==(const XReal& a, const XReal& b) { return a.v_ == b.v_; }
    friend bool operator!=(const XReal& a, const XReal& b) { return a.v_ != b.v_; }
    friend bool operator<(const XReal& a, const XReal& b) { return a.v_ < b.v_; }
    friend bool operator<=(const XReal& a, const XReal& b) { return a.v_ <= b.v_; }
    friend bool operator>(const XReal& a, const XReal& b) { return a.v_ > b.v_; }
    friend bool operator>=(const XReal& a, const XReal& b) { return a.v_ >= b.v_; }

private:
    __float128 v_;
};

XReal abs(const XReal& x);
XReal floor(const XReal& x);
// x - floor(x), always in [0, 1).
XReal frac(const XReal& x);

XReal sqrt(const XReal& x);   // domain_error for x < 0
XReal log(const XReal& x);    // domain_error for x <= 0
XReal exp(const XReal& x);
XReal sin(const XReal& x);
XReal cos(const XReal& x);

// base^k by binary exponentiation; k may be negative (base != 0 then).
XReal pow_int(const XReal& base, long k);

// Immutable complex value over XReal.
struct XComplex {
    XReal re;
    XReal im;

    constexpr XComplex() = default;
    constexpr XComplex(XReal r, XReal i = XReal()) : re(r), im(i) {}
    constexpr XComplex(double r) : re(r), im(0.0) {}

    friend XComplex operator-(const XComplex& a) { return {-a.re, -a.im}; }
    friend XComplex operator+(const XComplex& a, const XComplex& b) {
        return {a.re + b.re, a.im + b.im};
    }
    friend XComplex operator-(const XComplex& a, const XComplex& b) {
        return {a.re - b.re, a.im - b.im};
    }
    friend XComplex operator*(const XComplex& a, const XComplex& b) {
        return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
    }
    friend XComplex operator*(const XReal& s, const XComplex& b) {
        return {s * b.re, s * b.im};
    }
    friend XComplex operator*(const XComplex& a, const XReal& s) { return s * a; }
    friend XComplex operator/(const XComplex& a, const XComplex& b);

    XComplex& operator+=(const XComplex& b) { re += b.re; im += b.im; return *this; }
    XComplex& operator-=(const XComplex& b) { re -= b.re; im -= b.im; return *this; }
    XComplex& operator*=(const XComplex& b) { *this = *this * b; return *this; }

    friend bool operator==(const XComplex& a, const XComplex& b) {
        return a.re == b.re && a.im == b.im;
    }
    friend bool operator!=(const XComplex& a, const XComplex& b) { return !(a == b); }
};

XComplex conj(const XComplex& z);
XReal abs(const XComplex& z);
XReal norm_sq(const XComplex& z);

// e^{i 2 pi t}.  The argument is reduced mod 1 first, so |t| as large as
// ~1e30 loses no phase accuracy to the 2*pi multiply.
XComplex exp_i2pi(const XReal& t);

// Angle of (x, y) in turns, in [0, 1).  Throws std::domain_error at the
// origin.
XReal atan2_turns(const XReal& y, const XReal& x);

// Maps a value in [0, 1) to its representative in (-1/2, 1/2].
XReal half_turn_representative(const XReal& t);

namespace constants {
XReal pi();
XReal two_pi();
// (sqrt(5) - 1) / 2 = 0.618033...
XReal golden_mean();
// sqrt(3) / 2 = 0.866025...
XReal sqrt3_half();
}  // namespace constants

}  // namespace qpo
