#pragma once

#include "lmc/vec.hpp"

namespace lmc {

// Straight one-sided pathway. The anchor is the top end; arc position
// grows downhill. dir is +1 for a ramp descending toward +x, -1 toward -x.
struct RampSegment {
    Vec2 anchor;
    double slope_deg = 16.0;     // below horizontal
    int dir = +1;
    double length_mm = 0.0;
    double rolling_factor = 5.0 / 7.0;

    bool operator==(const RampSegment&) const = default;

    Vec2 tangent() const;        // unit, pointing downhill
    Vec2 up_normal() const;      // unit, away from the surface, y > 0
    Vec2 point_at(double arc_mm) const;
    Vec2 center_at(double arc_mm, double radius_mm) const;
    // Signed arc coordinate of the perpendicular foot of p.
    double project_arc(Vec2 p) const;
    // Signed distance of p from the surface line, positive on the up side.
    double surface_distance(Vec2 p) const;
};

// Downhill acceleration of a rolling marble, m/s^2.
// k is the rolling factor (5/7 for a solid sphere rolling without slip).
double ramp_acceleration(double slope_deg, double k, double g_mps2);

} // namespace lmc
