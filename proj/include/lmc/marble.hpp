#pragma once

#include <string>
#include <variant>

#include "lmc/vec.hpp"

namespace lmc {

enum class CoatingKind { Bare, Ni, Uhdpe, NiUhdpe };

// Powder shell around the droplet. magnetic_fraction > 0 means an
// electromagnet can grab the marble. Grain sizes are informational.
struct CoatingSpec {
    CoatingKind kind = CoatingKind::Bare;
    double magnetic_fraction = 0.0;
    double ni_grain_um = 0.0;
    double uhdpe_grain_um = 0.0;

    bool operator==(const CoatingSpec&) const = default;

    static CoatingSpec from_kind(CoatingKind kind);
};

const char* coating_name(CoatingKind kind);

// Motion states. A marble is exactly one of these at any tick. The
// velocity always lives on the marble itself; OnRamp constrains it to
// the ramp tangent.
struct OnRamp {
    int ramp = -1;
    double arc_mm = 0.0;          // distance from the ramp anchor (top end)
    bool operator==(const OnRamp&) const = default;
};
struct Ballistic {
    bool operator==(const Ballistic&) const = default;
};
struct Held {
    int latch = -1;
    bool operator==(const Held&) const = default;
};
struct Merged {
    int into = -1;                // id of the coalesced successor
    bool operator==(const Merged&) const = default;
};
struct Sunk {
    int sink = -1;                // -1: fell below every sink interval
    bool operator==(const Sunk&) const = default;
};
struct Evaporated {
    bool operator==(const Evaporated&) const = default;
};
struct Annihilated {
    bool operator==(const Annihilated&) const = default;
};

using MotionState =
    std::variant<OnRamp, Ballistic, Held, Merged, Sunk, Evaporated, Annihilated>;

const char* state_name(const MotionState& s);

struct Marble {
    int id = -1;
    Vec2 pos;                     // center, mm
    Vec2 vel;                     // mm/ms
    double volume_ul = 0.0;
    CoatingSpec coating;
    double coating_mass_mg = 0.0;
    MotionState state = Ballistic{};

    double radius_mm() const;
    // Water at 1 mg/uL plus the powder shell.
    double mass_mg() const { return volume_ul + coating_mass_mg; }
    bool terminal() const;
};

// Radius of a spherical droplet of the given volume (uL -> mm).
// Throws std::domain_error for volume <= 0.
double marble_radius(double volume_ul);

// Shell mass of a freshly coated marble, mg; bare droplets carry none.
double default_coating_mass_mg(CoatingKind kind);

} // namespace lmc
