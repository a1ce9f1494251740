#pragma once

#include <stdexcept>

#include "lmc/marble.hpp"

namespace lmc {

// How a pair in contact is resolved.
//   SoftSphere   finite compression: bounce holds the pair for contact_duration
//   BilliardBall instantaneous rebound
//   FusionOnly   every contact coalesces regardless of speed
//   Annihilate   both marbles vanish on contact
enum class CollisionModel { SoftSphere, BilliardBall, FusionOnly, Annihilate };

const char* model_name(CollisionModel model);

struct PhysicsConfig {
    double dt_ms = 0.05;
    double g_mps2 = 9.81;
    double v_coalesce_mps = 0.29;     // relative normal speed threshold
    double restitution = 0.8;
    double contact_duration_ms = 10.0; // soft-sphere compression hold
    CollisionModel model = CollisionModel::SoftSphere;
    double rolling_factor = 5.0 / 7.0; // default for ramps that do not set k

    bool operator==(const PhysicsConfig&) const = default;
};

enum class CollisionRegime { Bounce, Coalesce };

// Hard threshold on the relative normal speed at contact.
CollisionRegime classify_regime(double rel_normal_speed_mps, const PhysicsConfig& config);

struct ContactEvent {
    int a = -1;                  // marble ids, a < b
    int b = -1;
    Vec2 normal;                 // unit, from a toward b
    double rel_normal_speed = 0.0;
    double time_ms = 0.0;
};

struct CollisionOutcome {
    enum class Kind { Bounced, Coalesced, Annihilated };
    Kind kind = Kind::Bounced;
    // Bounced
    Vec2 vel_a_after;
    Vec2 vel_b_after;
    double hold_until_ms = 0.0;  // > event time only under SoftSphere
    // Coalesced; merged.id is assigned by the caller
    Marble merged;
};

// Pure collision resolution; applying the outcome to a world is the
// stepper's job. Restitution acts along the contact normal only.
CollisionOutcome resolve_collision(const Marble& a, const Marble& b,
                                   const ContactEvent& event,
                                   const PhysicsConfig& config);

// Merge two marbles: volumes and coating masses add, velocity is the
// mass-weighted mean, position the mass-weighted center.
Marble coalesce_marbles(const Marble& a, const Marble& b, int merged_id);

// Raised when the integrator produces a non-finite state.
struct SimulationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace lmc
