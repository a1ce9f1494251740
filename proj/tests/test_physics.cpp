#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>
#include <vector>

#include "lmc/marble.hpp"
#include "lmc/physics.hpp"
#include "lmc/ramp.hpp"
#include "lmc/world.hpp"

using namespace lmc;

namespace {

Marble bare_marble(int id, double volume, Vec2 pos, Vec2 vel) {
    Marble m;
    m.id = id;
    m.volume_ul = volume;
    m.coating = CoatingSpec::from_kind(CoatingKind::Bare);
    m.coating_mass_mg = 0.0;
    m.pos = pos;
    m.vel = vel;
    m.state = Ballistic{};
    return m;
}

// Two equal marbles drifting together head-on along x, no ramps or
// sinks nearby, so only the collision machinery acts on them.
World head_on_world(CollisionModel model, double speed) {
    World w;
    w.config.model = model;
    w.marbles.push_back(bare_marble(0, 11.6, {-1.5, 0.0}, {speed, 0.0}));
    w.marbles.push_back(bare_marble(1, 11.6, {1.5, 0.0}, {-speed, 0.0}));
    return w;
}

} // namespace

TEST_CASE("marble radius comes from the sphere volume") {
    // Independent oracle: V = 4/3 pi r^3, so r = cbrt(3V / 4pi).
    const auto oracle = [](double v) { return std::cbrt(3.0 * v / (4.0 * std::numbers::pi)); };
    for (const double v : {0.5, 1.0, 4.1887902047863905, 10.0, 11.6, 23.2, 100.0}) {
        CHECK(marble_radius(v) == doctest::Approx(oracle(v)).epsilon(1e-12));
    }
    CHECK(marble_radius(11.6) == doctest::Approx(1.404288890081379).epsilon(1e-12));
    CHECK(marble_radius(23.2) == doctest::Approx(1.7692931327470371).epsilon(1e-12));
    CHECK(marble_radius(10.0) == doctest::Approx(1.3365046175719757).epsilon(1e-12));
    CHECK(marble_radius(4.0 * std::numbers::pi / 3.0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK_THROWS_AS(marble_radius(0.0), std::domain_error);
    CHECK_THROWS_AS(marble_radius(-1.0), std::domain_error);
}

TEST_CASE("marble mass is water plus shell") {
    Marble m = bare_marble(0, 11.6, {}, {});
    CHECK(m.mass_mg() == doctest::Approx(11.6).epsilon(1e-12));
    m.coating = CoatingSpec::from_kind(CoatingKind::NiUhdpe);
    m.coating_mass_mg = default_coating_mass_mg(CoatingKind::NiUhdpe);
    CHECK(m.mass_mg() == doctest::Approx(14.1).epsilon(1e-12));
    CHECK(default_coating_mass_mg(CoatingKind::Bare) == 0.0);
}

TEST_CASE("rolling acceleration scales gravity by k sin(slope)") {
    // Oracle recomputed from first principles next to the frozen value.
    const double oracle = (5.0 / 7.0) * 9.81 * std::sin(16.0 * std::numbers::pi / 180.0);
    CHECK(ramp_acceleration(16.0, 5.0 / 7.0, 9.81) == doctest::Approx(oracle).epsilon(1e-12));
    CHECK(ramp_acceleration(16.0, 5.0 / 7.0, 9.81) ==
          doctest::Approx(1.93143032897483).epsilon(1e-12));
    CHECK(ramp_acceleration(16.0, 1.0, 9.81) ==
          doctest::Approx(2.7040024605647619).epsilon(1e-12));
    // The rolling factor enters linearly.
    CHECK(ramp_acceleration(16.0, 5.0 / 7.0, 9.81) / ramp_acceleration(16.0, 1.0, 9.81) ==
          doctest::Approx(5.0 / 7.0).epsilon(1e-12));
    CHECK(ramp_acceleration(0.0, 5.0 / 7.0, 9.81) == doctest::Approx(0.0));
}

TEST_CASE("ramp frames are orthonormal and projections invert point_at") {
    for (const int dir : {+1, -1}) {
        RampSegment ramp;
        ramp.anchor = {12.5, 80.0};
        ramp.slope_deg = 16.0;
        ramp.dir = dir;
        ramp.length_mm = 100.0;
        CHECK(ramp.tangent().norm() == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(ramp.up_normal().norm() == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(ramp.tangent().dot(ramp.up_normal()) == doctest::Approx(0.0).epsilon(1e-12));
        CHECK(ramp.tangent().y < 0.0);
        CHECK(ramp.up_normal().y > 0.0);

        for (const double arc : {0.0, 13.7, 99.0}) {
            const Vec2 p = ramp.point_at(arc) + 2.5 * ramp.up_normal();
            CHECK(ramp.project_arc(p) == doctest::Approx(arc).epsilon(1e-12));
            CHECK(ramp.surface_distance(p) == doctest::Approx(2.5).epsilon(1e-12));
            CHECK((ramp.center_at(arc, 2.5) - p).norm() == doctest::Approx(0.0));
        }
    }
}

TEST_CASE("a marble rolling from rest follows the discrete constant-acceleration law") {
    World w;
    RampSegment ramp;
    ramp.anchor = {0.0, 100.0};
    ramp.length_mm = 500.0;
    w.ramps.push_back(ramp);

    Marble m = bare_marble(0, 11.6, {}, {});
    m.state = OnRamp{0, 0.0};
    m.pos = ramp.center_at(0.0, m.radius_mm());
    w.marbles.push_back(m);

    double worst_gap = 0.0;
    for (int i = 0; i < 2000; ++i) {
        step(w);
        const Marble& rolling = w.marbles[0];
        worst_gap = std::max(worst_gap,
                             std::abs(ramp.surface_distance(rolling.pos) - rolling.radius_mm()));
    }
    const Marble& rolled = w.marbles[0];
    REQUIRE(std::holds_alternative<OnRamp>(rolled.state));
    const double arc = std::get<OnRamp>(rolled.state).arc_mm;

    // Velocity after n steps is exactly n a dt; distance is the series
    // sum a dt^2 n(n+1)/2, slightly above the continuous a t^2 / 2.
    const double a_mm = ramp_acceleration(16.0, 5.0 / 7.0, 9.81) * 1e-3;
    CHECK(rolled.vel.norm() == doctest::Approx(2000.0 * a_mm * 0.05).epsilon(1e-9));
    CHECK(rolled.vel.norm() == doctest::Approx(0.19314303289748302).epsilon(1e-9));
    CHECK(arc == doctest::Approx(a_mm * 0.05 * 0.05 * 2000.0 * 2001.0 / 2.0).epsilon(1e-9));
    CHECK(arc == doctest::Approx(9.6619802206965879).epsilon(1e-9));
    CHECK(std::abs(arc - 9.6571516448741495) < 0.01);

    // The center never leaves the surface by more than float noise.
    CHECK(worst_gap <= 1e-9);
}

TEST_CASE("a ballistic marble falls with the discrete gravity series") {
    World w;
    w.marbles.push_back(bare_marble(0, 11.6, {0.0, 0.0}, {0.0, 0.0}));
    for (int i = 0; i < 2000; ++i)
        step(w);
    const Marble& m = w.marbles[0];
    CHECK(m.vel.y == doctest::Approx(-0.981).epsilon(1e-9));
    CHECK(m.pos.y == doctest::Approx(-9.81e-3 * 0.05 * 0.05 * 2000.0 * 2001.0 / 2.0).epsilon(1e-9));
    CHECK(m.pos.y == doctest::Approx(-49.074524999999994).epsilon(1e-9));
    // Continuous oracle g t^2 / 2 = 49.05 mm, matched to first order.
    CHECK(std::abs(-m.pos.y - 49.05) / 49.05 < 1e-3);
    CHECK(m.pos.x == 0.0);
}

TEST_CASE("equal masses at e = 1 exchange their normal velocities") {
    PhysicsConfig config;
    config.restitution = 1.0;
    Marble a = bare_marble(0, 11.6, {-1.0, 0.0}, {0.15, 0.1});
    Marble b = bare_marble(1, 11.6, {1.0, 0.0}, {-0.1, -0.4});
    ContactEvent event{0, 1, {1.0, 0.0}, (a.vel - b.vel).dot({1.0, 0.0}), 0.0};
    const CollisionOutcome out = resolve_collision(a, b, event, config);
    REQUIRE(out.kind == CollisionOutcome::Kind::Bounced);
    CHECK(out.vel_a_after.x == doctest::Approx(-0.1).epsilon(1e-12));
    CHECK(out.vel_b_after.x == doctest::Approx(0.15).epsilon(1e-12));
    // Tangential components ride through untouched.
    CHECK(out.vel_a_after.y == doctest::Approx(0.1).epsilon(1e-12));
    CHECK(out.vel_b_after.y == doctest::Approx(-0.4).epsilon(1e-12));
}

TEST_CASE("restitution reverses the approach at rate e") {
    PhysicsConfig config;
    config.restitution = 0.8;
    Marble a = bare_marble(0, 9.0, {-1.0, 0.0}, {0.11, 0.0});
    Marble b = bare_marble(1, 17.0, {1.0, 0.0}, {-0.10, 0.0});
    const Vec2 normal{1.0, 0.0};
    const double rel = (a.vel - b.vel).dot(normal);
    ContactEvent event{0, 1, normal, rel, 0.0};
    const CollisionOutcome out = resolve_collision(a, b, event, config);
    REQUIRE(out.kind == CollisionOutcome::Kind::Bounced);
    const double rel_after = (out.vel_a_after - out.vel_b_after).dot(normal);
    CHECK(rel_after == doctest::Approx(-0.8 * rel).epsilon(1e-12));
    // Momentum is conserved exactly, normal and tangential alike.
    const Vec2 p_before = a.mass_mg() * a.vel + b.mass_mg() * b.vel;
    const Vec2 p_after = a.mass_mg() * out.vel_a_after + b.mass_mg() * out.vel_b_after;
    CHECK((p_after - p_before).norm() <= 1e-12);
}

TEST_CASE("regime split sits exactly at the coalescence speed") {
    const PhysicsConfig config;
    CHECK(classify_regime(0.21, config) == CollisionRegime::Bounce);
    CHECK(classify_regime(0.2899, config) == CollisionRegime::Bounce);
    CHECK(classify_regime(0.29, config) == CollisionRegime::Coalesce);
    CHECK(classify_regime(0.35, config) == CollisionRegime::Coalesce);
    CHECK(classify_regime(0.0, config) == CollisionRegime::Bounce);
}

TEST_CASE("coalesced marbles pool volume, shell, and momentum") {
    Marble a = bare_marble(0, 11.6, {-1.0, 2.0}, {0.25, -0.05});
    Marble b = bare_marble(1, 23.2, {1.0, 2.0}, {-0.10, -0.15});
    a.coating = CoatingSpec::from_kind(CoatingKind::Ni);
    a.coating_mass_mg = 2.5;
    b.coating = CoatingSpec::from_kind(CoatingKind::Uhdpe);
    b.coating_mass_mg = 2.5;

    const Marble merged = coalesce_marbles(a, b, 7);
    CHECK(merged.id == 7);
    CHECK(merged.volume_ul == doctest::Approx(34.8).epsilon(1e-12));
    CHECK(merged.coating_mass_mg == doctest::Approx(5.0).epsilon(1e-12));
    const double ma = a.mass_mg();
    const double mb = b.mass_mg();
    const Vec2 want_vel = (1.0 / (ma + mb)) * (ma * a.vel + mb * b.vel);
    CHECK((merged.vel - want_vel).norm() <= 1e-12);
    // Kinetic energy cannot grow in a perfectly inelastic merge.
    const double ke_before = 0.5 * ma * a.vel.dot(a.vel) + 0.5 * mb * b.vel.dot(b.vel);
    const double ke_after = 0.5 * merged.mass_mg() * merged.vel.dot(merged.vel);
    CHECK(ke_after <= ke_before + 1e-15);

    Marble dead = b;
    dead.state = Evaporated{};
    CHECK_THROWS_AS(coalesce_marbles(a, dead, 8), std::logic_error);
}

TEST_CASE("resolve_collision rejects separating pairs and honors the model") {
    const PhysicsConfig config;
    Marble a = bare_marble(0, 11.6, {-1.0, 0.0}, {0.1, 0.0});
    Marble b = bare_marble(1, 11.6, {1.0, 0.0}, {-0.1, 0.0});
    ContactEvent separating{0, 1, {1.0, 0.0}, -0.1, 0.0};
    CHECK_THROWS_AS(resolve_collision(a, b, separating, config), std::logic_error);

    ContactEvent slow{0, 1, {1.0, 0.0}, 0.2, 0.0};
    PhysicsConfig fusion = config;
    fusion.model = CollisionModel::FusionOnly;
    CHECK(resolve_collision(a, b, slow, fusion).kind == CollisionOutcome::Kind::Coalesced);

    PhysicsConfig annihilate = config;
    annihilate.model = CollisionModel::Annihilate;
    CHECK(resolve_collision(a, b, slow, annihilate).kind ==
          CollisionOutcome::Kind::Annihilated);
}

TEST_CASE("contact detection wants touching, approaching, free marbles") {
    World w = head_on_world(CollisionModel::SoftSphere, 0.1);
    // 3 mm apart, radii sum to about 2.81: not touching yet.
    CHECK(detect_contacts(w).empty());

    w.marbles[0].pos = {-1.4, 0.0};
    w.marbles[1].pos = {1.4, 0.0};
    const auto events = detect_contacts(w);
    REQUIRE(events.size() == 1);
    CHECK(events[0].a == 0);
    CHECK(events[0].b == 1);
    CHECK(events[0].normal.x == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(events[0].rel_normal_speed == doctest::Approx(0.2).epsilon(1e-12));

    // Separating pair: no event.
    std::swap(w.marbles[0].vel, w.marbles[1].vel);
    CHECK(detect_contacts(w).empty());
    std::swap(w.marbles[0].vel, w.marbles[1].vel);

    // A pair already latched in contact does not retrigger.
    w.pairs_in_contact.emplace_back(0, 1);
    CHECK(detect_contacts(w).empty());
    w.pairs_in_contact.clear();

    // Held marbles are out of the collision set.
    w.marbles[1].state = Held{0};
    CHECK(detect_contacts(w).empty());
}

TEST_CASE("soft spheres stay compressed for the contact duration") {
    World w = head_on_world(CollisionModel::SoftSphere, 0.1);
    // Approach at 0.2 mm/ms closing 0.01 mm per tick; first touch at
    // separation 2.80 on step 20 (radii sum 2.8086).
    for (int i = 0; i < 20; ++i)
        step(w);
    REQUIRE(w.collision_log.size() == 1);
    const double held_sep = (w.marbles[1].pos - w.marbles[0].pos).x;
    CHECK(held_sep <= w.marbles[0].radius_mm() + w.marbles[1].radius_mm());

    // Velocities reverse at contact start, but the pair keeps its
    // normal separation for tau = 10 ms (200 ticks) before drifting.
    CHECK(w.marbles[0].vel.x == doctest::Approx(-0.08).epsilon(1e-12));
    CHECK(w.marbles[1].vel.x == doctest::Approx(0.08).epsilon(1e-12));
    for (int i = 0; i < 199; ++i) {
        step(w);
        CHECK((w.marbles[1].pos - w.marbles[0].pos).x ==
              doctest::Approx(held_sep).epsilon(1e-12));
        // Both fall together; the y components stay bitwise equal.
        CHECK(w.marbles[0].pos.y == w.marbles[1].pos.y);
    }
    step(w);
    CHECK((w.marbles[1].pos - w.marbles[0].pos).x > held_sep + 0.005);
    CHECK(w.collision_log.size() == 1);
}

TEST_CASE("billiard balls separate immediately after the exchange") {
    World w = head_on_world(CollisionModel::BilliardBall, 0.1);
    for (int i = 0; i < 20; ++i)
        step(w);
    REQUIRE(w.collision_log.size() == 1);
    const double sep = (w.marbles[1].pos - w.marbles[0].pos).x;
    step(w);
    CHECK((w.marbles[1].pos - w.marbles[0].pos).x > sep + 0.005);
}

TEST_CASE("fast head-on contact merges in a running world") {
    World w = head_on_world(CollisionModel::SoftSphere, 0.2);
    for (int i = 0; i < 20 && w.marbles.size() == 2; ++i)
        step(w);
    REQUIRE(w.marbles.size() == 3);
    CHECK(std::holds_alternative<Merged>(w.marbles[0].state));
    CHECK(std::holds_alternative<Merged>(w.marbles[1].state));
    CHECK(w.marbles[2].volume_ul == doctest::Approx(23.2).epsilon(1e-12));
    CHECK(std::abs(w.marbles[2].vel.x) <= 1e-12);

    World ann = head_on_world(CollisionModel::Annihilate, 0.1);
    for (int i = 0; i < 25; ++i)
        step(ann);
    CHECK(std::holds_alternative<Annihilated>(ann.marbles[0].state));
    CHECK(std::holds_alternative<Annihilated>(ann.marbles[1].state));
    CHECK(ann.settled());
}

TEST_CASE("two identical worlds stay bitwise identical step for step") {
    World a = head_on_world(CollisionModel::SoftSphere, 0.13);
    World b = head_on_world(CollisionModel::SoftSphere, 0.13);
    for (int i = 0; i < 400; ++i) {
        step(a);
        step(b);
        for (std::size_t k = 0; k < a.marbles.size(); ++k) {
            CHECK(a.marbles[k].pos == b.marbles[k].pos);
            CHECK(a.marbles[k].vel == b.marbles[k].vel);
        }
    }
}

TEST_CASE("non-finite state is reported, not propagated") {
    World w;
    w.marbles.push_back(bare_marble(0, 11.6, {0.0, 0.0}, {std::nan(""), 0.0}));
    CHECK_THROWS_AS(step(w), SimulationError);
}
