#pragma once

#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qpo/xreal.hpp"

namespace qpo {

// Orbit point left the working region |z| <= 1e6; index is the iterate at
// which that happened.
class escaped_orbit_error : public std::runtime_error {
public:
    escaped_orbit_error(std::size_t index, const XReal& magnitude);
    std::size_t index() const { return index_; }

private:
    std::size_t index_;
};

// z -> z^2 + lambda z with lambda = e^{i 2 pi rho}.  rho is in turns and
// must lie strictly inside (0, 1); exact small-denominator rationals are
// rejected since the linearization about 0 needs an irrational rotation.
struct SiegelMapParams {
    XReal rho;

    explicit SiegelMapParams(const XReal& rho_turns);
    XComplex multiplier() const { return exp_i2pi(rho); }
};

XComplex siegel_step(const SiegelMapParams& p, const XComplex& z);

// (x, y) -> (y, beta (y^2 + alpha) - beta^2 x) with beta = e^{i theta},
// alpha = 2 cos(theta) cos(phi) - cos^2(phi); theta, phi in radians.
// Linearized at the fixed point (cos phi, cos phi) the map rotates by
// angles theta + phi and theta - phi.
struct HenonParams {
    XReal theta;
    XReal phi;
    XReal alpha;
    XComplex beta;
    XComplex beta_sq;

    HenonParams(const XReal& theta_rad, const XReal& phi_rad);
};

std::pair<XComplex, XComplex> henon_step(const HenonParams& p, const XComplex& x,
                                         const XComplex& y);
std::pair<XComplex, XComplex> henon_fixed_point(const HenonParams& p);
// Eigenvalues of the derivative at the fixed point: e^{i(theta + phi)},
// e^{i(theta - phi)}.
std::pair<XComplex, XComplex> henon_eigenvalues(const HenonParams& p);

struct TrajectoryMeta {
    std::string generator;  // "siegel" or "henon"
    std::vector<std::pair<std::string, std::string>> params;
    std::size_t n_requested = 0;
    std::size_t stride = 1;
    // Iterates dropped before recording starts.  Always 0 here: the
    // averaging windows vanish at the orbit ends, so startup transients
    // carry negligible weight and nothing is discarded.
    std::size_t transient_discard = 0;
};

// Recorded orbit.  x holds the first coordinate; y is empty for
// one-complex-dimensional systems and parallel to x otherwise.
struct Trajectory {
    TrajectoryMeta meta;
    std::vector<XComplex> x;
    std::vector<XComplex> y;

    int dim() const { return y.empty() ? 1 : 2; }
    std::size_t size() const { return x.size(); }
};

// Records n points z_0, z_stride, z_2*stride, ...  Throws
// escaped_orbit_error if any computed iterate (recorded or skipped)
// leaves |z| <= 1e6.
Trajectory iterate(const SiegelMapParams& p, const XComplex& z0, std::size_t n,
                   std::size_t stride = 1);
Trajectory iterate(const HenonParams& p, const XComplex& x0, const XComplex& y0,
                   std::size_t n, std::size_t stride = 1);

// Streaming variants: sink is called once per recorded point and no orbit
// storage is kept.
void iterate_stream(const SiegelMapParams& p, const XComplex& z0, std::size_t n,
                    std::size_t stride,
                    const std::function<void(std::size_t, const XComplex&)>& sink);
void iterate_stream(const HenonParams& p, const XComplex& x0, const XComplex& y0,
                    std::size_t n, std::size_t stride,
                    const std::function<void(std::size_t, const XComplex&, const XComplex&)>& sink);

}  // namespace qpo
