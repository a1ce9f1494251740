#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>
#include <string>

#include "lmc/netlist.hpp"
#include "lmc/physics.hpp"

using namespace lmc;

namespace {

Marble random_marble(int id, std::mt19937& rng) {
    std::uniform_real_distribution<double> volume(1.0, 30.0);
    std::uniform_real_distribution<double> speed(0.0, 1.0);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * 3.141592653589793);
    Marble m;
    m.id = id;
    m.volume_ul = volume(rng);
    m.coating = CoatingSpec::from_kind(CoatingKind::Bare);
    m.coating_mass_mg = 0.0;
    const double s = speed(rng);
    const double a = angle(rng);
    m.vel = {s * std::cos(a), s * std::sin(a)};
    m.state = Ballistic{};
    return m;
}

} // namespace

TEST_CASE("a thousand random collisions conserve momentum and shed energy") {
    std::mt19937 rng(20240817);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * 3.141592653589793);

    int bounced = 0;
    int coalesced = 0;
    int checked = 0;
    for (int iter = 0; iter < 1000; ++iter) {
        PhysicsConfig config;
        config.model =
            iter % 2 == 0 ? CollisionModel::SoftSphere : CollisionModel::BilliardBall;

        Marble a = random_marble(0, rng);
        Marble b = random_marble(1, rng);
        const double phi = angle(rng);
        const Vec2 normal{std::cos(phi), std::sin(phi)};
        a.pos = {0.0, 0.0};
        b.pos = (a.radius_mm() + b.radius_mm()) * normal;
        if ((a.vel - b.vel).dot(normal) < 0.0)
            std::swap(a.vel, b.vel);
        const double rel = (a.vel - b.vel).dot(normal);
        if (rel <= 0.0)
            continue;
        checked += 1;

        const ContactEvent event{0, 1, normal, rel, 0.0};
        const CollisionOutcome out = resolve_collision(a, b, event, config);

        const double ma = a.mass_mg();
        const double mb = b.mass_mg();
        const Vec2 p_before = ma * a.vel + mb * b.vel;
        const double ke_before =
            0.5 * ma * a.vel.dot(a.vel) + 0.5 * mb * b.vel.dot(b.vel);
        const double p_scale = std::max(1e-9, p_before.norm());

        if (out.kind == CollisionOutcome::Kind::Bounced) {
            bounced += 1;
            const Vec2 p_after = ma * out.vel_a_after + mb * out.vel_b_after;
            CHECK((p_after - p_before).norm() / p_scale <= 1e-9);
            const Vec2 tangent{-normal.y, normal.x};
            CHECK(std::abs((out.vel_a_after - a.vel).dot(tangent)) <= 1e-12);
            CHECK(std::abs((out.vel_b_after - b.vel).dot(tangent)) <= 1e-12);
            const double ke_after = 0.5 * ma * out.vel_a_after.dot(out.vel_a_after) +
                                    0.5 * mb * out.vel_b_after.dot(out.vel_b_after);
            CHECK(ke_after <= ke_before * (1.0 + 1e-12) + 1e-15);
        } else {
            REQUIRE(out.kind == CollisionOutcome::Kind::Coalesced);
            coalesced += 1;
            const Marble& merged = out.merged;
            CHECK(merged.volume_ul ==
                  doctest::Approx(a.volume_ul + b.volume_ul).epsilon(1e-12));
            const Vec2 p_after = merged.mass_mg() * merged.vel;
            CHECK((p_after - p_before).norm() / p_scale <= 1e-9);
            const double ke_after = 0.5 * merged.mass_mg() * merged.vel.dot(merged.vel);
            CHECK(ke_after <= ke_before * (1.0 + 1e-12) + 1e-15);
        }
    }
    // The draw must exercise both regimes to mean anything.
    CHECK(checked > 900);
    CHECK(bounced > 100);
    CHECK(coalesced > 100);
}

namespace {

CircuitSpec random_spec(std::mt19937& rng) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const auto in = [&](double lo, double hi) { return lo + (hi - lo) * unit(rng); };
    const auto pick = [&](int n) { return static_cast<int>(unit(rng) * n) % n; };

    CircuitSpec spec;
    spec.config.dt_ms = in(0.01, 1.0);
    spec.config.g_mps2 = in(1.0, 20.0);
    spec.config.v_coalesce_mps = in(0.05, 1.0);
    spec.config.restitution = in(0.0, 1.0);
    spec.config.contact_duration_ms = in(0.0, 20.0);
    spec.config.rolling_factor = in(0.1, 1.0);
    const CollisionModel models[] = {CollisionModel::SoftSphere, CollisionModel::BilliardBall,
                                     CollisionModel::FusionOnly, CollisionModel::Annihilate};
    spec.config.model = models[pick(4)];
    spec.horizon_ms = in(100.0, 10000.0);
    spec.evaporation_enabled = unit(rng) < 0.5;
    spec.evaporation.bare = in(0.01, 1.0);
    spec.evaporation.ni = in(0.01, 1.0);
    spec.evaporation.uhdpe = in(0.01, 1.0);
    spec.evaporation.ni_uhdpe = in(0.01, 1.0);

    const int ramps = 1 + pick(4);
    for (int i = 0; i < ramps; ++i) {
        RampDecl ramp;
        ramp.name = "r" + std::to_string(i);
        ramp.anchor = {in(-200.0, 200.0), in(0.0, 300.0)};
        ramp.slope_deg = in(1.0, 89.0);
        ramp.dir = unit(rng) < 0.5 ? -1 : +1;
        ramp.length_mm = in(10.0, 300.0);
        if (unit(rng) < 0.5)
            ramp.rolling_factor = in(0.1, 1.0);
        spec.ramps.push_back(ramp);
    }
    const int latches = pick(4);
    for (int i = 0; i < latches; ++i) {
        LatchDecl latch;
        latch.name = "em" + std::to_string(i);
        latch.ramp = spec.ramps[pick(ramps)].name;
        latch.hold_arc_mm = in(0.0, 10.0);
        if (unit(rng) < 0.5)
            latch.capture_radius_mm = in(0.5, 10.0);
        double t = in(0.0, 50.0);
        const int windows = 1 + pick(3);
        for (int w = 0; w < windows; ++w) {
            const double off = t + in(1.0, 300.0);
            latch.windows.push_back({t, off});
            t = off + in(1.0, 50.0);
        }
        spec.latches.push_back(latch);
    }
    const int sources = 1 + pick(3);
    for (int i = 0; i < sources; ++i) {
        SourceDecl source;
        source.name = "src" + std::to_string(i);
        source.input = std::string(1, static_cast<char>('A' + i));
        source.ramp = spec.ramps[pick(ramps)].name;
        source.entry_arc_mm = in(0.0, 5.0);
        source.volume_ul = in(1.0, 40.0);
        const CoatingKind kinds[] = {CoatingKind::Bare, CoatingKind::Ni,
                                     CoatingKind::Uhdpe, CoatingKind::NiUhdpe};
        source.coating = kinds[pick(4)];
        if (unit(rng) < 0.5) {
            source.rate_ml_per_h = in(0.5, 400.0);
        } else {
            double t = in(0.0, 10.0);
            const int times = 1 + pick(4);
            for (int k = 0; k < times; ++k) {
                source.times_ms.push_back(t);
                t += in(1.0, 500.0);
            }
        }
        spec.sources.push_back(source);
    }
    const int sinks = 1 + pick(4);
    double lo = in(-200.0, -100.0);
    for (int i = 0; i < sinks; ++i) {
        SinkDecl sink;
        sink.name = "s" + std::to_string(i);
        sink.label = "L" + std::to_string(pick(3));
        sink.x_lo = lo;
        sink.x_hi = lo + in(1.0, 80.0);
        sink.floor_y = in(0.0, 50.0);
        lo = sink.x_hi + in(0.0, 20.0);
        spec.sinks.push_back(sink);
    }
    return spec;
}

} // namespace

TEST_CASE("generated specs survive a serialize / parse round trip exactly") {
    std::mt19937 rng(424242);
    for (int iter = 0; iter < 200; ++iter) {
        CAPTURE(iter);
        const CircuitSpec spec = random_spec(rng);
        const std::string text = serialize(spec);
        const ParseResult reparsed = parse_circuit(text);
        REQUIRE(reparsed.ok());
        CHECK(reparsed.spec == spec);
    }
}

TEST_CASE("the parser survives ten thousand hostile inputs") {
    std::mt19937 rng(31337);
    std::uniform_int_distribution<int> byte(0, 255);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::mt19937 seed_rng(1);
    const std::string seed_text = serialize(random_spec(seed_rng));

    int survived = 0;
    for (int iter = 0; iter < 10000; ++iter) {
        std::string text;
        if (iter % 2 == 0) {
            const auto length = static_cast<std::size_t>(unit(rng) * 300.0);
            for (std::size_t i = 0; i < length; ++i)
                text.push_back(static_cast<char>(byte(rng)));
        } else {
            text = seed_text;
            const int edits = 1 + static_cast<int>(unit(rng) * 8.0);
            for (int e = 0; e < edits; ++e) {
                const auto at =
                    static_cast<std::size_t>(unit(rng) * static_cast<double>(text.size()));
                text[std::min(at, text.size() - 1)] = static_cast<char>(byte(rng));
            }
        }
        try {
            const ParseResult result = parse_circuit(text);
            (void)result;
            survived += 1;
        } catch (...) {
            CAPTURE(iter);
            FAIL_CHECK("parser threw on fuzzed input");
        }
    }
    CHECK(survived == 10000);
}
