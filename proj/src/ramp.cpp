#include "lmc/ramp.hpp"

#include <cmath>
#include <numbers>

namespace lmc {

namespace {
constexpr double kDegToRad = std::numbers::pi / 180.0;
}

Vec2 RampSegment::tangent() const {
    const double c = std::cos(slope_deg * kDegToRad);
    const double s = std::sin(slope_deg * kDegToRad);
    // Downhill unit vector; dir flips the horizontal sense only.
    return dir > 0 ? Vec2{c, -s} : Vec2{-c, -s};
}

Vec2 RampSegment::up_normal() const {
    const double c = std::cos(slope_deg * kDegToRad);
    const double s = std::sin(slope_deg * kDegToRad);
    return dir > 0 ? Vec2{s, c} : Vec2{-s, c};
}

Vec2 RampSegment::point_at(double arc_mm) const {
    return anchor + arc_mm * tangent();
}

Vec2 RampSegment::center_at(double arc_mm, double radius_mm) const {
    return point_at(arc_mm) + radius_mm * up_normal();
}

double RampSegment::project_arc(Vec2 p) const {
    return (p - anchor).dot(tangent());
}

double RampSegment::surface_distance(Vec2 p) const {
    return (p - anchor).dot(up_normal());
}

double ramp_acceleration(double slope_deg, double k, double g_mps2) {
    return k * g_mps2 * std::sin(slope_deg * kDegToRad);
}

} // namespace lmc
