#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <utility>
#include <variant>
#include <vector>

#include "qpo/maps.hpp"
#include "qpo/weights.hpp"
#include "qpo/xreal.hpp"

namespace qpo {

// A projected point landed on (or within 1e-12 of, for radii) the
// reference, so its angle is undefined.
class degenerate_projection_error : public std::runtime_error {
public:
    degenerate_projection_error(std::size_t index, const std::string& what_happened);
    std::size_t index() const { return index_; }

private:
    std::size_t index_;
};

// The angle-difference branch representatives fill the whole circle: the
// projection winds inconsistently and admits no lift.
class no_lift_error : public std::runtime_error {
public:
    explicit no_lift_error(const XReal& halfwidth);
    const XReal& branch_halfwidth() const { return halfwidth_; }

private:
    XReal halfwidth_;
};

// Angle of one complex coordinate about the reference point.
struct PlanarProjection {
    int component = 0;  // 0 = first coordinate, 1 = second
};

// Angle of (r_{n+lag}, r_n) about the reference, where r_n is the distance
// of the selected coordinate from (radius_u, radius_v).  Radii below 1e-12
// are degenerate.  Output is lag points shorter than the input.
struct RadiusDelayProjection {
    int component = 0;
    std::size_t lag = 1;
    XReal radius_u;
    XReal radius_v;
};

struct ProjectionSpec {
    std::variant<PlanarProjection, RadiusDelayProjection> kind = PlanarProjection{};
    // Angle reference: angles are measured about this point of the
    // projection plane.
    XReal ref_u;
    XReal ref_v;
};

// Angle sequence in turns, each in [0, 1).
std::vector<XReal> project_to_angles(const Trajectory& traj, const ProjectionSpec& spec);

// Consecutive angle differences moved to a common branch.  The branch
// center is the median of the first min(1000, count) naive (-1/2, 1/2]
// representatives; every difference is then represented in
// (center - 1/2, center + 1/2].  A halfwidth >= 0.4999 means the
// representatives fill the circle and no_lift_error is thrown.
struct LiftedSeries {
    std::vector<XReal> deltas;
    XReal branch_center;
    XReal branch_halfwidth;
};

LiftedSeries lift_angle_differences(std::span<const XReal> angles);

struct RotationEstimate {
    XReal rate;  // in [0, 1); the lift's weighted average mod 1
    WeightKind kind;
    std::size_t n_points = 0;       // orbit points consumed
    std::size_t n_deltas = 0;       // angle differences averaged
    XReal branch_center;
    XReal branch_halfwidth;
    // (differences used, rate estimate) per requested checkpoint.
    std::vector<std::pair<std::size_t, XReal>> profile;
};

// Project, lift, and average.  Checkpoints (optional) count angle
// differences; each profile entry re-averages the first N differences with
// a fresh window, so it is a true size-N estimate.
RotationEstimate rotation_rate(const Trajectory& traj, const ProjectionSpec& spec,
                               WeightKind kind = WeightKind::bump(2));
RotationEstimate rotation_rate(const Trajectory& traj, const ProjectionSpec& spec,
                               WeightKind kind, std::span<const std::size_t> checkpoints);

}  // namespace qpo
