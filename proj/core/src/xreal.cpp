#include "qpo/xreal.hpp"

#include <cstdlib>
#include <cstring>

namespace qpo {

XReal XReal::parse(std::string_view text) {
    std::string buf(text);
    if (buf.empty()) throw std::invalid_argument("XReal::parse: empty input");
    const char* begin = buf.c_str();
    char* end = nullptr;
    __float128 v = strtoflt128(begin, &end);
    if (end != begin + buf.size())
        throw std::invalid_argument("XReal::parse: not a decimal number: '" + buf + "'");
    return XReal(v);
}

std::string XReal::str() const {
    char buf[64];
    // 35 digits after the point = 36 significant digits, enough to
    // round-trip binary128 exactly.
    int n = quadmath_snprintf(buf, sizeof buf, "%.35Qe", v_);
    if (n < 0 || n >= static_cast<int>(sizeof buf))
        throw std::runtime_error("XReal::str: formatting failed");
    return std::string(buf, static_cast<std::size_t>(n));
}

XReal abs(const XReal& x) { return XReal(fabsq(x.raw())); }
XReal floor(const XReal& x) { return XReal(floorq(x.raw())); }

XReal frac(const XReal& x) {
    __float128 f = x.raw() - floorq(x.raw());
    // x just below an integer can round up to 1 after the subtraction.
    if (f >= 1) f = 0;
    return XReal(f);
}

XReal sqrt(const XReal& x) {
    if (x.raw() < 0) throw std::domain_error("sqrt: negative argument");
    return XReal(sqrtq(x.raw()));
}

XReal log(const XReal& x) {
    if (x.raw() <= 0) throw std::domain_error("log: non-positive argument");
    return XReal(logq(x.raw()));
}

XReal exp(const XReal& x) { return XReal(expq(x.raw())); }
XReal sin(const XReal& x) { return XReal(sinq(x.raw())); }
XReal cos(const XReal& x) { return XReal(cosq(x.raw())); }

XReal pow_int(const XReal& base, long k) {
    if (k < 0) {
        if (base.raw() == 0) throw std::domain_error("pow_int: 0 to a negative power");
        return XReal(1) / pow_int(base, -k);
    }
    __float128 acc = 1;
    __float128 b = base.raw();
    unsigned long e = static_cast<unsigned long>(k);
    while (e != 0) {
        if (e & 1UL) acc *= b;
        b *= b;
        e >>= 1;
    }
    return XReal(acc);
}

XComplex operator/(const XComplex& a, const XComplex& b) {
    __float128 den = b.re.raw() * b.re.raw() + b.im.raw() * b.im.raw();
    if (den == 0) throw std::domain_error("XComplex: division by zero");
    XComplex num = a * conj(b);
    return {XReal(num.re.raw() / den), XReal(num.im.raw() / den)};
}

XComplex conj(const XComplex& z) { return {z.re, -z.im}; }

XReal abs(const XComplex& z) { return XReal(hypotq(z.re.raw(), z.im.raw())); }

XReal norm_sq(const XComplex& z) {
    return z.re * z.re + z.im * z.im;
}

XComplex exp_i2pi(const XReal& t) {
    __float128 r = t.raw() - floorq(t.raw());
    if (r >= 1) r = 0;
    // Centering on 0 keeps the trig argument within [-pi, pi].
    if (r > 0.5Q) r -= 1;
    __float128 s, c;
    sincosq(2 * M_PIq * r, &s, &c);
    return {XReal(c), XReal(s)};
}

XReal atan2_turns(const XReal& y, const XReal& x) {
    if (x.raw() == 0 && y.raw() == 0)
        throw std::domain_error("atan2_turns: undefined at the origin");
    __float128 a = atan2q(y.raw(), x.raw()) / (2 * M_PIq);
    if (a < 0) a += 1;
    if (a >= 1) a = 0;
    return XReal(a);
}

XReal half_turn_representative(const XReal& t) {
    if (t.raw() > 0.5Q) return t - XReal(1);
    return t;
}

namespace constants {

XReal pi() { return XReal(M_PIq); }
XReal two_pi() { return XReal(2 * M_PIq); }

XReal golden_mean() {
    static const __float128 v = (sqrtq(5) - 1) / 2;
    return XReal(v);
}

XReal sqrt3_half() {
    static const __float128 v = sqrtq(3) / 2;
    return XReal(v);
}

}  // namespace constants
}  // namespace qpo
