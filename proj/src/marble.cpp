#include "lmc/marble.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace lmc {

CoatingSpec CoatingSpec::from_kind(CoatingKind kind) {
    switch (kind) {
    case CoatingKind::Bare:
        return {kind, 0.0, 0.0, 0.0};
    case CoatingKind::Ni:
        return {kind, 1.0, 5.0, 0.0};
    case CoatingKind::Uhdpe:
        return {kind, 0.0, 0.0, 100.0};
    case CoatingKind::NiUhdpe:
        return {kind, 0.5, 5.0, 100.0};
    }
    throw std::logic_error("unknown coating kind");
}

const char* coating_name(CoatingKind kind) {
    switch (kind) {
    case CoatingKind::Bare:    return "bare";
    case CoatingKind::Ni:      return "ni";
    case CoatingKind::Uhdpe:   return "uhdpe";
    case CoatingKind::NiUhdpe: return "ni_uhdpe";
    }
    return "?";
}

const char* state_name(const MotionState& state) {
    struct Named {
        const char* operator()(const OnRamp&) const { return "on_ramp"; }
        const char* operator()(const Ballistic&) const { return "ballistic"; }
        const char* operator()(const Held&) const { return "held"; }
        const char* operator()(const Merged&) const { return "merged"; }
        const char* operator()(const Sunk&) const { return "sunk"; }
        const char* operator()(const Evaporated&) const { return "evaporated"; }
        const char* operator()(const Annihilated&) const { return "annihilated"; }
    };
    return std::visit(Named{}, state);
}

double marble_radius(double volume_ul) {
    if (!(volume_ul > 0.0))
        throw std::domain_error("marble volume must be positive");
    // V in uL is V in mm^3, so r comes out in mm.
    return std::cbrt(3.0 * volume_ul / (4.0 * std::numbers::pi));
}

double default_coating_mass_mg(CoatingKind kind) {
    return kind == CoatingKind::Bare ? 0.0 : 2.5;
}

double Marble::radius_mm() const { return marble_radius(volume_ul); }

bool Marble::terminal() const {
    return std::holds_alternative<Merged>(state) ||
           std::holds_alternative<Sunk>(state) ||
           std::holds_alternative<Evaporated>(state) ||
           std::holds_alternative<Annihilated>(state);
}

} // namespace lmc
