#include "qpo/projection.hpp"

#include <algorithm>

#include "qpo/summation.hpp"

namespace qpo {
namespace {

const XReal kDegenerateRadius = XReal(1e-12);
const XReal kNoLiftHalfwidth = XReal(0.4999);

// Representative of y in (-1/2, 1/2].
XReal centered_rep(const XReal& y) {
    XReal r = y - XReal(ceilq(y.raw() - 0.5Q));
    // Guard the half-open boundary against rounding in the subtraction.
    if (r.raw() <= -0.5Q) r += XReal(1);
    if (r.raw() > 0.5Q) r -= XReal(1);
    return r;
}

const std::vector<XComplex>& component_of(const Trajectory& traj, int component) {
    if (component == 0) return traj.x;
    if (component == 1) {
        if (traj.dim() < 2)
            throw std::invalid_argument("projection: trajectory has no second coordinate");
        return traj.y;
    }
    throw std::invalid_argument("projection: component index must be 0 or 1");
}

XReal angle_about(const XReal& u, const XReal& v, const XReal& ref_u, const XReal& ref_v,
                  std::size_t index) {
    const XReal du = u - ref_u;
    const XReal dv = v - ref_v;
    if (du == XReal(0) && dv == XReal(0))
        throw degenerate_projection_error(index, "projected point equals the angle reference");
    return atan2_turns(dv, du);
}

}  // namespace

degenerate_projection_error::degenerate_projection_error(std::size_t index,
                                                         const std::string& what_happened)
    : std::runtime_error("degenerate projection at sample " + std::to_string(index) + ": " +
                         what_happened),
      index_(index) {}

no_lift_error::no_lift_error(const XReal& halfwidth)
    : std::runtime_error("projection admits no lift: angle differences fill the circle "
                         "(branch halfwidth " +
                         halfwidth.str() + ")"),
      halfwidth_(halfwidth) {}

std::vector<XReal> project_to_angles(const Trajectory& traj, const ProjectionSpec& spec) {
    if (traj.size() == 0) throw std::invalid_argument("projection: empty trajectory");

    std::vector<XReal> angles;
    if (const auto* planar = std::get_if<PlanarProjection>(&spec.kind)) {
        const auto& pts = component_of(traj, planar->component);
        angles.reserve(pts.size());
        for (std::size_t n = 0; n < pts.size(); ++n)
            angles.push_back(angle_about(pts[n].re, pts[n].im, spec.ref_u, spec.ref_v, n));
        return angles;
    }

    const auto& rd = std::get<RadiusDelayProjection>(spec.kind);
    if (rd.lag == 0) throw std::invalid_argument("projection: lag must be >= 1");
    const auto& pts = component_of(traj, rd.component);
    if (pts.size() <= rd.lag)
        throw std::invalid_argument("projection: trajectory shorter than the delay lag");

    std::vector<XReal> radii;
    radii.reserve(pts.size());
    const XComplex origin{rd.radius_u, rd.radius_v};
    for (std::size_t n = 0; n < pts.size(); ++n) {
        XReal r = abs(pts[n] - origin);
        if (r < kDegenerateRadius)
            throw degenerate_projection_error(n, "radius below 1e-12, angle ill-defined");
        radii.push_back(r);
    }

    angles.reserve(pts.size() - rd.lag);
    for (std::size_t n = 0; n + rd.lag < pts.size(); ++n)
        angles.push_back(angle_about(radii[n + rd.lag], radii[n], spec.ref_u, spec.ref_v, n));
    return angles;
}

LiftedSeries lift_angle_differences(std::span<const XReal> angles) {
    if (angles.size() < 2)
        throw std::invalid_argument("lift: need at least two angles");

    const std::size_t count = angles.size() - 1;
    std::vector<XReal> reps(count);
    for (std::size_t n = 0; n < count; ++n)
        reps[n] = centered_rep(angles[n + 1] - angles[n]);

    const std::size_t m = std::min<std::size_t>(1000, count);
    std::vector<XReal> head(reps.begin(), reps.begin() + m);
    std::nth_element(head.begin(), head.begin() + (m - 1) / 2, head.end());
    const XReal center = head[(m - 1) / 2];

    LiftedSeries out;
    out.branch_center = center;
    out.deltas.resize(count);
    XReal halfwidth(0);
    for (std::size_t n = 0; n < count; ++n) {
        const XReal offset = centered_rep(reps[n] - center);
        out.deltas[n] = center + offset;
        XReal dist = abs(offset);
        if (dist > halfwidth) halfwidth = dist;
    }
    out.branch_halfwidth = halfwidth;
    if (halfwidth >= kNoLiftHalfwidth) throw no_lift_error(halfwidth);
    return out;
}

RotationEstimate rotation_rate(const Trajectory& traj, const ProjectionSpec& spec,
                               WeightKind kind) {
    return rotation_rate(traj, spec, kind, {});
}

RotationEstimate rotation_rate(const Trajectory& traj, const ProjectionSpec& spec,
                               WeightKind kind, std::span<const std::size_t> checkpoints) {
    const std::vector<XReal> angles = project_to_angles(traj, spec);
    const LiftedSeries lift = lift_angle_differences(angles);

    RotationEstimate est;
    est.kind = kind;
    est.n_points = traj.size();
    est.n_deltas = lift.deltas.size();
    est.branch_center = lift.branch_center;
    est.branch_halfwidth = lift.branch_halfwidth;

    WeightTable table(kind, lift.deltas.size());
    est.rate = frac(wb_average(std::span<const XReal>(lift.deltas), table));

    for (std::size_t n : checkpoints) {
        if (n < 2 || n > lift.deltas.size())
            throw std::invalid_argument("rotation_rate: checkpoint outside the difference series");
        WeightTable sub(kind, n);
        est.profile.emplace_back(
            n, frac(wb_average(std::span<const XReal>(lift.deltas.data(), n), sub)));
    }
    return est;
}

}  // namespace qpo
