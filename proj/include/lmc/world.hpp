#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "lmc/actuation.hpp"
#include "lmc/lifetime.hpp"
#include "lmc/marble.hpp"
#include "lmc/physics.hpp"
#include "lmc/ramp.hpp"

namespace lmc {

// Horizontal capture strip. A marble whose center crosses floor_y from
// above while inside [x_lo, x_hi] is absorbed and tagged with the label.
struct SinkRegion {
    std::string label;
    double x_lo = 0.0;
    double x_hi = 0.0;
    double floor_y = 0.0;

    bool operator==(const SinkRegion&) const = default;
};

// One scheduled droplet release.
struct PendingEmission {
    int source = -1;
    double time_ms = 0.0;
};

// Soft-sphere compression: the pair keeps its separation along the
// stored normal until the hold expires or one marble leaves free
// flight. Expiry is tick-based so that time-shifted schedules shift
// the motion by a whole number of ticks.
struct ContactHold {
    int a = -1;
    int b = -1;
    Vec2 normal;                // unit, from a toward b, fixed at contact
    double separation_mm = 0.0; // center distance along normal at contact
    std::int64_t until_tick = 0;
};

struct World {
    PhysicsConfig config;
    EvaporationTable evaporation;
    bool evaporation_enabled = false;
    double horizon_ms = 5000.0;

    std::vector<RampSegment> ramps;
    std::vector<ElectromagnetLatch> latches;
    std::vector<DropletSource> sources;
    std::vector<SinkRegion> sinks;

    double time_ms = 0.0;
    std::int64_t tick = 0;
    std::vector<Marble> marbles;
    int next_marble_id = 0;

    std::vector<PendingEmission> pending;   // sorted by time, earliest last
    std::vector<ContactHold> holds;
    std::vector<std::pair<int, int>> pairs_in_contact; // latched until separation
    std::vector<ContactEvent> collision_log;

    Marble* find_marble(int id);
    const Marble* find_marble(int id) const;

    // Spawn a marble at the source entry point, at rest on the ramp.
    Marble& emit(int source_index);

    // True once every marble is terminal and no emission is pending.
    bool settled() const;
};

using StepObserver = std::function<void(const World&)>;

// All pairs with center distance <= r1 + r2 that are approaching and
// not already latched as in-contact. Order follows the marble list.
std::vector<ContactEvent> detect_contacts(const World& world);

// Advance one tick: emissions, latch releases, integration, landings,
// captures, contacts, sinks, evaporation, in that order. Throws
// SimulationError if any marble state goes non-finite.
void step(World& world);

// Step until settled or the horizon is reached. The observer, when set,
// runs after every tick. Returns true when the world settled.
bool run_to_quiescence(World& world, const StepObserver& observer = nullptr);

} // namespace lmc
