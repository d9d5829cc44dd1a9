#include "qpo/maps.hpp"

namespace qpo {
namespace {

const XReal kEscapeRadiusSq = XReal(1e12);  // |z| > 1e6

void check_bounded(const XComplex& z, std::size_t index) {
    XReal m = norm_sq(z);
    if (!(m <= kEscapeRadiusSq)) throw escaped_orbit_error(index, sqrt(m));
}

std::string fmt(const XReal& v) { return v.str(); }
std::string fmt(const XComplex& v) { return v.re.str() + " " + v.im.str(); }

}  // namespace

escaped_orbit_error::escaped_orbit_error(std::size_t index, const XReal& magnitude)
    : std::runtime_error("escaped orbit at iterate " + std::to_string(index) +
                         " (|point| = " + magnitude.str() + ")"),
      index_(index) {}

SiegelMapParams::SiegelMapParams(const XReal& rho_turns) : rho(rho_turns) {
    if (!(rho > XReal(0) && rho < XReal(1)))
        throw std::domain_error("SiegelMapParams: rotation number must be in (0, 1)");
    // Reject exact p/q with small q; those have no rotation disk at all.
    for (long q = 2; q <= 64; ++q) {
        XReal scaled = rho * XReal(q);
        if (scaled == floor(scaled))
            throw std::domain_error("SiegelMapParams: rotation number is rational (" +
                                    floor(scaled).str() + "/" + std::to_string(q) + ")");
    }
}

XComplex siegel_step(const SiegelMapParams& p, const XComplex& z) {
    return z * (z + p.multiplier());
}

HenonParams::HenonParams(const XReal& theta_rad, const XReal& phi_rad)
    : theta(theta_rad), phi(phi_rad) {
    const XReal ct = cos(theta), cp = cos(phi);
    alpha = XReal(2) * ct * cp - cp * cp;
    beta = {ct, sin(theta)};
    beta_sq = beta * beta;
}

std::pair<XComplex, XComplex> henon_step(const HenonParams& p, const XComplex& x,
                                         const XComplex& y) {
    return {y, p.beta * (y * y + XComplex(p.alpha)) - p.beta_sq * x};
}

std::pair<XComplex, XComplex> henon_fixed_point(const HenonParams& p) {
    const XReal cp = cos(p.phi);
    return {XComplex(cp), XComplex(cp)};
}

std::pair<XComplex, XComplex> henon_eigenvalues(const HenonParams& p) {
    const XReal rad2pi = constants::two_pi();
    return {exp_i2pi((p.theta + p.phi) / rad2pi), exp_i2pi((p.theta - p.phi) / rad2pi)};
}

void iterate_stream(const SiegelMapParams& p, const XComplex& z0, std::size_t n,
                    std::size_t stride,
                    const std::function<void(std::size_t, const XComplex&)>& sink) {
    if (n == 0) throw std::invalid_argument("iterate: need at least one point");
    if (stride == 0) throw std::invalid_argument("iterate: stride must be >= 1");
    const XComplex lambda = p.multiplier();
    XComplex z = z0;
    check_bounded(z, 0);
    sink(0, z);
    std::size_t iterates = (n - 1) * stride;
    for (std::size_t i = 1; i <= iterates; ++i) {
        z = z * (z + lambda);
        check_bounded(z, i);
        if (i % stride == 0) sink(i / stride, z);
    }
}

void iterate_stream(const HenonParams& p, const XComplex& x0, const XComplex& y0,
                    std::size_t n, std::size_t stride,
                    const std::function<void(std::size_t, const XComplex&, const XComplex&)>& sink) {
    if (n == 0) throw std::invalid_argument("iterate: need at least one point");
    if (stride == 0) throw std::invalid_argument("iterate: stride must be >= 1");
    XComplex x = x0, y = y0;
    check_bounded(x, 0);
    check_bounded(y, 0);
    sink(0, x, y);
    std::size_t iterates = (n - 1) * stride;
    for (std::size_t i = 1; i <= iterates; ++i) {
        XComplex nx = y;
        XComplex ny = p.beta * (y * y + XComplex(p.alpha)) - p.beta_sq * x;
        x = nx;
        y = ny;
        check_bounded(y, i);
        if (i % stride == 0) sink(i / stride, x, y);
    }
}

Trajectory iterate(const SiegelMapParams& p, const XComplex& z0, std::size_t n,
                   std::size_t stride) {
    Trajectory t;
    t.meta.generator = "siegel";
    t.meta.params = {{"rho", fmt(p.rho)}, {"z0", fmt(z0)}};
    t.meta.n_requested = n;
    t.meta.stride = stride;
    t.x.reserve(n);
    iterate_stream(p, z0, n, stride,
                   [&](std::size_t, const XComplex& z) { t.x.push_back(z); });
    return t;
}

Trajectory iterate(const HenonParams& p, const XComplex& x0, const XComplex& y0,
                   std::size_t n, std::size_t stride) {
    Trajectory t;
    t.meta.generator = "henon";
    t.meta.params = {{"theta", fmt(p.theta)},
                     {"phi", fmt(p.phi)},
                     {"alpha", fmt(p.alpha)},
                     {"x0", fmt(x0)},
                     {"y0", fmt(y0)}};
    t.meta.n_requested = n;
    t.meta.stride = stride;
    t.x.reserve(n);
    t.y.reserve(n);
    iterate_stream(p, x0, y0, n, stride, [&](std::size_t, const XComplex& x, const XComplex& y) {
        t.x.push_back(x);
        t.y.push_back(y);
    });
    return t;
}

}  // namespace qpo
