#include "lmc/physics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "lmc/world.hpp"

namespace lmc {

namespace {

// 1 m/s^2 = 1e-3 mm/ms^2; velocities need no scaling (mm/ms = m/s).
constexpr double kAccelScale = 1e-3;

bool in_free_motion(const Marble& m) {
    return std::holds_alternative<OnRamp>(m.state) ||
           std::holds_alternative<Ballistic>(m.state);
}

bool pair_latched(const World& world, int a, int b) {
    for (const auto& [pa, pb] : world.pairs_in_contact)
        if ((pa == a && pb == b) || (pa == b && pb == a))
            return true;
    return false;
}

} // namespace

const char* model_name(CollisionModel model) {
    switch (model) {
    case CollisionModel::SoftSphere:   return "ssm";
    case CollisionModel::BilliardBall: return "bbm";
    case CollisionModel::FusionOnly:   return "fusion";
    case CollisionModel::Annihilate:   return "annihilate";
    }
    return "?";
}

CollisionRegime classify_regime(double rel_normal_speed_mps,
                                const PhysicsConfig& config) {
    return rel_normal_speed_mps >= config.v_coalesce_mps
               ? CollisionRegime::Coalesce
               : CollisionRegime::Bounce;
}

Marble coalesce_marbles(const Marble& a, const Marble& b, int merged_id) {
    if (a.terminal() || b.terminal())
        throw std::logic_error("coalescing a terminal marble");
    const double ma = a.mass_mg();
    const double mb = b.mass_mg();
    Marble merged;
    merged.id = merged_id;
    merged.volume_ul = a.volume_ul + b.volume_ul;
    // Both powder shells end up on the merged marble. The kind tag
    // follows the heavier shell; a tie keeps the first marble's.
    merged.coating = b.coating_mass_mg > a.coating_mass_mg ? b.coating : a.coating;
    merged.coating_mass_mg = a.coating_mass_mg + b.coating_mass_mg;
    merged.pos = (1.0 / (ma + mb)) * (ma * a.pos + mb * b.pos);
    merged.vel = (1.0 / (ma + mb)) * (ma * a.vel + mb * b.vel);
    merged.state = Ballistic{};
    return merged;
}

CollisionOutcome resolve_collision(const Marble& a, const Marble& b,
                                   const ContactEvent& event,
                                   const PhysicsConfig& config) {
    if (event.rel_normal_speed < 0.0)
        throw std::logic_error("resolving a separating pair");
    CollisionOutcome out;
    if (config.model == CollisionModel::Annihilate) {
        out.kind = CollisionOutcome::Kind::Annihilated;
        return out;
    }
    const bool fuse =
        config.model == CollisionModel::FusionOnly ||
        classify_regime(event.rel_normal_speed, config) == CollisionRegime::Coalesce;
    if (fuse) {
        out.kind = CollisionOutcome::Kind::Coalesced;
        out.merged = coalesce_marbles(a, b, -1);
        return out;
    }
    out.kind = CollisionOutcome::Kind::Bounced;
    const double ma = a.mass_mg();
    const double mb = b.mass_mg();
    const double reduced = ma * mb / (ma + mb);
    const double impulse =
        (1.0 + config.restitution) * reduced * event.rel_normal_speed;
    out.vel_a_after = a.vel - (impulse / ma) * event.normal;
    out.vel_b_after = b.vel + (impulse / mb) * event.normal;
    // The compression hold only makes sense for a pair in free flight;
    // a rolling participant stays constrained to its ramp instead.
    const bool soft = config.model == CollisionModel::SoftSphere &&
                      std::holds_alternative<Ballistic>(a.state) &&
                      std::holds_alternative<Ballistic>(b.state);
    out.hold_until_ms =
        event.time_ms + (soft ? config.contact_duration_ms : 0.0);
    return out;
}

Marble* World::find_marble(int id) {
    for (Marble& m : marbles)
        if (m.id == id)
            return &m;
    return nullptr;
}

const Marble* World::find_marble(int id) const {
    for (const Marble& m : marbles)
        if (m.id == id)
            return &m;
    return nullptr;
}

Marble& World::emit(int source_index) {
    const DropletSource& source = sources[source_index];
    const RampSegment& ramp = ramps[source.ramp];
    Marble m;
    m.id = next_marble_id++;
    m.volume_ul = source.volume_ul;
    m.coating = source.coating;
    m.coating_mass_mg = default_coating_mass_mg(source.coating.kind);
    m.state = OnRamp{source.ramp, source.entry_arc_mm};
    m.pos = ramp.center_at(source.entry_arc_mm, m.radius_mm());
    m.vel = {0.0, 0.0};
    marbles.push_back(m);
    return marbles.back();
}

bool World::settled() const {
    if (!pending.empty())
        return false;
    for (const Marble& m : marbles)
        if (!m.terminal())
            return false;
    return true;
}

std::vector<ContactEvent> detect_contacts(const World& world) {
    std::vector<ContactEvent> events;
    for (std::size_t i = 0; i < world.marbles.size(); ++i) {
        const Marble& a = world.marbles[i];
        if (!in_free_motion(a))
            continue;
        for (std::size_t j = i + 1; j < world.marbles.size(); ++j) {
            const Marble& b = world.marbles[j];
            if (!in_free_motion(b))
                continue;
            if (pair_latched(world, a.id, b.id))
                continue;
            const Vec2 delta = b.pos - a.pos;
            const double dist = delta.norm();
            if (dist <= 0.0 || dist > a.radius_mm() + b.radius_mm())
                continue;
            const Vec2 normal = (1.0 / dist) * delta;
            const double rel = (a.vel - b.vel).dot(normal);
            if (rel <= 0.0)
                continue;
            events.push_back({a.id, b.id, normal, rel, world.time_ms});
        }
    }
    return events;
}

namespace {

// A bounced rolling marble stays on its ramp unless the impulse points
// away from the surface, in which case it lifts off.
void apply_bounce_velocity(World& world, Marble& m, Vec2 vel_after) {
    if (const OnRamp* on = std::get_if<OnRamp>(&m.state)) {
        const RampSegment& ramp = world.ramps[on->ramp];
        if (vel_after.dot(ramp.up_normal()) > 0.0) {
            m.state = Ballistic{};
            m.vel = vel_after;
        } else {
            m.vel = vel_after.dot(ramp.tangent()) * ramp.tangent();
        }
    } else {
        m.vel = vel_after;
    }
}

void run_contacts(World& world) {
    // Contact latches persist across an extended touch; drop the ones
    // whose pair has separated or left free motion.
    std::erase_if(world.pairs_in_contact, [&world](const std::pair<int, int>& p) {
        const Marble* a = world.find_marble(p.first);
        const Marble* b = world.find_marble(p.second);
        if (!a || !b || !in_free_motion(*a) || !in_free_motion(*b))
            return true;
        return (b->pos - a->pos).norm() > a->radius_mm() + b->radius_mm();
    });

    for (const ContactEvent& candidate : detect_contacts(world)) {
        Marble* a = world.find_marble(candidate.a);
        Marble* b = world.find_marble(candidate.b);
        if (!a || !b || !in_free_motion(*a) || !in_free_motion(*b))
            continue;
        // Re-derive the geometry: an earlier event this tick may have
        // changed a participant.
        const Vec2 delta = b->pos - a->pos;
        const double dist = delta.norm();
        if (dist <= 0.0 || dist > a->radius_mm() + b->radius_mm())
            continue;
        const Vec2 normal = (1.0 / dist) * delta;
        const double rel = (a->vel - b->vel).dot(normal);
        if (rel <= 0.0)
            continue;
        const ContactEvent event{a->id, b->id, normal, rel, world.time_ms};
        const CollisionOutcome outcome = resolve_collision(*a, *b, event, world.config);
        world.collision_log.push_back(event);
        switch (outcome.kind) {
        case CollisionOutcome::Kind::Annihilated:
            a->state = Annihilated{};
            b->state = Annihilated{};
            break;
        case CollisionOutcome::Kind::Coalesced: {
            Marble merged = outcome.merged;
            merged.id = world.next_marble_id++;
            a->state = Merged{merged.id};
            b->state = Merged{merged.id};
            world.marbles.push_back(merged); // invalidates a and b
            break;
        }
        case CollisionOutcome::Kind::Bounced:
            apply_bounce_velocity(world, *a, outcome.vel_a_after);
            apply_bounce_velocity(world, *b, outcome.vel_b_after);
            if (outcome.hold_until_ms > world.time_ms) {
                const auto ticks = std::llround(
                    (outcome.hold_until_ms - world.time_ms) / world.config.dt_ms);
                world.holds.push_back(
                    {a->id, b->id, normal, dist, world.tick + ticks});
            }
            world.pairs_in_contact.emplace_back(a->id, b->id);
            break;
        }
    }
}

} // namespace

void step(World& world) {
    const PhysicsConfig& cfg = world.config;
    const double dt = cfg.dt_ms;
    const double t_now = world.time_ms;

    // Emissions first so a droplet born this tick also moves this tick.
    while (!world.pending.empty() && world.pending.back().time_ms <= t_now) {
        const int source = world.pending.back().source;
        world.pending.pop_back();
        world.emit(source);
    }

    // A latch that has gone inactive frees its marble from rest.
    for (Marble& m : world.marbles) {
        const Held* held = std::get_if<Held>(&m.state);
        if (!held)
            continue;
        const ElectromagnetLatch& latch = world.latches[held->latch];
        if (latch_active(latch, t_now))
            continue;
        m.state = OnRamp{latch.ramp, latch.hold_arc_mm};
        m.pos = world.ramps[latch.ramp].center_at(latch.hold_arc_mm, m.radius_mm());
        m.vel = {0.0, 0.0};
    }

    // Integration, semi-implicit: velocity first, then position. Old
    // positions feed the landing and sink crossing tests.
    std::vector<Vec2> pos_before(world.marbles.size());
    for (std::size_t i = 0; i < world.marbles.size(); ++i) {
        Marble& m = world.marbles[i];
        pos_before[i] = m.pos;
        if (OnRamp* on = std::get_if<OnRamp>(&m.state)) {
            const RampSegment& ramp = world.ramps[on->ramp];
            const double accel =
                ramp_acceleration(ramp.slope_deg, ramp.rolling_factor, cfg.g_mps2) *
                kAccelScale;
            double v_t = m.vel.dot(ramp.tangent());
            v_t += accel * dt;
            const double arc = on->arc_mm + v_t * dt;
            m.vel = v_t * ramp.tangent();
            m.pos = ramp.center_at(arc, m.radius_mm());
            if (arc < 0.0 || arc > ramp.length_mm)
                m.state = Ballistic{}; // rolled off an end, velocity kept
            else
                on->arc_mm = arc;
        } else if (std::holds_alternative<Ballistic>(m.state)) {
            m.vel.y -= cfg.g_mps2 * kAccelScale * dt;
            m.pos += dt * m.vel;
        }
    }

    // Soft-sphere compression: hold each pair at its contact separation
    // along the stored normal, splitting the correction evenly.
    for (std::size_t h = 0; h < world.holds.size();) {
        const ContactHold& hold = world.holds[h];
        Marble* a = world.find_marble(hold.a);
        Marble* b = world.find_marble(hold.b);
        const bool live = a && b && std::holds_alternative<Ballistic>(a->state) &&
                          std::holds_alternative<Ballistic>(b->state);
        if (!live || world.tick >= hold.until_tick) {
            world.holds.erase(world.holds.begin() + h);
            continue;
        }
        const double d = (b->pos - a->pos).dot(hold.normal);
        const double shift = 0.5 * (hold.separation_mm - d);
        a->pos -= shift * hold.normal;
        b->pos += shift * hold.normal;
        ++h;
    }

    // Landings: a falling marble that crosses a ramp surface from above,
    // within the segment and moving into it, starts rolling. If two
    // ramps are crossed in one tick the earlier crossing wins.
    for (std::size_t i = 0; i < pos_before.size(); ++i) {
        Marble& m = world.marbles[i];
        if (!std::holds_alternative<Ballistic>(m.state))
            continue;
        const double radius = m.radius_mm();
        int best_ramp = -1;
        double best_frac = 2.0;
        for (std::size_t r = 0; r < world.ramps.size(); ++r) {
            const RampSegment& ramp = world.ramps[r];
            if (m.vel.dot(ramp.up_normal()) >= 0.0)
                continue;
            const double gap_before = ramp.surface_distance(pos_before[i]) - radius;
            const double gap_after = ramp.surface_distance(m.pos) - radius;
            if (!(gap_before > 0.0 && gap_after <= 0.0))
                continue;
            const double arc = ramp.project_arc(m.pos);
            if (arc < 0.0 || arc > ramp.length_mm)
                continue;
            const double frac = gap_before / (gap_before - gap_after);
            if (frac < best_frac) {
                best_frac = frac;
                best_ramp = static_cast<int>(r);
            }
        }
        if (best_ramp < 0)
            continue;
        const RampSegment& ramp = world.ramps[best_ramp];
        const double arc = ramp.project_arc(m.pos);
        m.state = OnRamp{best_ramp, arc};
        m.vel = m.vel.dot(ramp.tangent()) * ramp.tangent();
        m.pos = ramp.center_at(arc, radius);
    }

    // Electromagnet captures.
    for (std::size_t li = 0; li < world.latches.size(); ++li) {
        const ElectromagnetLatch& latch = world.latches[li];
        for (Marble& m : world.marbles)
            try_capture(latch, static_cast<int>(li), world.ramps[latch.ramp], m, t_now);
    }

    run_contacts(world);

    // Sinks absorb a marble whose center crosses their floor line from
    // above inside the x-interval. Marbles that fall well below every
    // sink are flagged as lost.
    double lost_floor = -1000.0;
    if (!world.sinks.empty()) {
        lost_floor = world.sinks.front().floor_y;
        for (const SinkRegion& sink : world.sinks)
            lost_floor = std::min(lost_floor, sink.floor_y);
        lost_floor -= 50.0;
    }
    for (std::size_t i = 0; i < pos_before.size(); ++i) {
        Marble& m = world.marbles[i];
        if (!in_free_motion(m))
            continue;
        for (std::size_t s = 0; s < world.sinks.size(); ++s) {
            const SinkRegion& sink = world.sinks[s];
            if (!(pos_before[i].y > sink.floor_y && m.pos.y <= sink.floor_y))
                continue;
            if (m.pos.x < sink.x_lo || m.pos.x > sink.x_hi)
                continue;
            m.state = Sunk{static_cast<int>(s)};
            break;
        }
        if (!m.terminal() && m.pos.y < lost_floor)
            m.state = Sunk{-1};
    }

    if (world.evaporation_enabled) {
        const double minutes = dt / 60000.0;
        for (Marble& m : world.marbles)
            apply_evaporation(m, minutes, world.evaporation);
    }

    for (const Marble& m : world.marbles)
        if (!m.terminal() && (!m.pos.finite() || !m.vel.finite()))
            throw SimulationError("non-finite state on marble " +
                                  std::to_string(m.id) + " at t=" +
                                  std::to_string(t_now) + " ms");

    world.tick += 1;
    // Recomputed from the tick count so long runs do not accumulate
    // rounding drift in the clock.
    world.time_ms = static_cast<double>(world.tick) * dt;
}

bool run_to_quiescence(World& world, const StepObserver& observer) {
    if (observer)
        observer(world);
    while (!world.settled() && world.time_ms < world.horizon_ms) {
        step(world);
        if (observer)
            observer(world);
    }
    return world.settled();
}

} // namespace lmc
