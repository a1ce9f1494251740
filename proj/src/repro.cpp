#include "lmc/repro.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <functional>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "lmc/lifetime.hpp"
#include "lmc/logic.hpp"
#include "lmc/netlist.hpp"
#include "lmc/physics.hpp"
#include "lmc/trace.hpp"

namespace lmc {

namespace {

#if defined(__GNUC__)
__attribute__((format(printf, 1, 2)))
#endif
std::string format(const char* fmt, ...) {
    char buf[512];
    va_list args;
    va_start(args, fmt);
    std::vsnprintf(buf, sizeof buf, fmt, args);
    va_end(args);
    return buf;
}

CircuitSpec load_fixture(const std::string& dir, const std::string& name) {
    ParseResult parsed = parse_circuit_file(dir + "/" + name);
    if (!parsed.ok()) {
        throw std::runtime_error("fixture " + name + ": " + parsed.errors.front().message);
    }
    const std::vector<std::string> problems = validate(parsed.spec);
    if (!problems.empty()) {
        throw std::runtime_error("fixture " + name + ": " + problems.front());
    }
    return parsed.spec;
}

// Final x positions of every marble that reached a sink, ascending.
std::vector<double> sunk_xs(const World& world) {
    std::vector<double> xs;
    for (const Marble& m : world.marbles) {
        if (const auto* sunk = std::get_if<Sunk>(&m.state); sunk && sunk->sink >= 0) {
            xs.push_back(m.pos.x);
        }
    }
    std::sort(xs.begin(), xs.end());
    return xs;
}

// ---------------------------------------------------------------- 1

std::pair<bool, std::string> gate_truth_table(const CircuitSpec& spec) {
    const auto t0 = std::chrono::steady_clock::now();
    const TruthTable table = evaluate_truth_table(spec);
    const auto t1 = std::chrono::steady_clock::now();
    const double seconds = std::chrono::duration<double>(t1 - t0).count();

    int matched = 0;
    for (const TruthTableRow& row : table.rows) {
        const GateBits want = gate_semantics(row.bits.at(0), row.bits.at(1));
        const bool ok = row.exits.ok() &&
                        row.exits.channel.at("Ab") == want.pass_a &&
                        row.exits.channel.at("aB") == want.pass_b &&
                        row.exits.channel.at("AB") == want.collide;
        matched += ok ? 1 : 0;
    }
    const bool pass = matched == 4 && seconds < 10.0;
    return {pass, format("%d/4 rows match a AND b / a AND NOT b / NOT a AND b in %.2f s", matched, seconds)};
}

// ---------------------------------------------------------------- 2

std::string regime_netlist(const char* hold_arc) {
    std::string s;
    s += "config dt=0.05ms v_coalesce=0.29mps e=0.8 tau=10ms model=ssm\n";
    s += "ramp left anchor=(-161.802,184.102)mm slope=16deg dir=+x length=160mm\n";
    s += "ramp right anchor=(161.802,184.102)mm slope=16deg dir=-x length=160mm\n";
    s += std::string("em em_a ramp=left at=") + hold_arc + "mm window=[0,800]ms\n";
    s += std::string("em em_b ramp=right at=") + hold_arc + "mm window=[0,800]ms\n";
    s += "source src_a ramp=left input=A volume=11.6uL coating=ni_uhdpe t=0ms\n";
    s += "source src_b ramp=right input=B volume=11.6uL coating=ni_uhdpe t=0ms\n";
    s += "sink out label=OUT x=[-40,40]mm y=5mm\n";
    return s;
}

struct RegimeProbe {
    bool ran = false;
    bool merged = false;
    double rel = 0;
};

RegimeProbe probe_regime(const std::string& text) {
    ParseResult parsed = parse_circuit(text);
    if (!parsed.ok() || !validate(parsed.spec).empty()) {
        throw std::runtime_error("regime netlist failed to parse");
    }
    RunResult run = run_circuit(parsed.spec, {{"A", 1}, {"B", 1}});
    RegimeProbe probe;
    probe.ran = run.quiesced && !run.world.collision_log.empty();
    if (probe.ran) {
        probe.rel = run.world.collision_log.front().rel_normal_speed;
    }
    for (const Marble& m : run.world.marbles) {
        probe.merged = probe.merged || std::holds_alternative<Merged>(m.state);
    }
    return probe;
}

std::pair<bool, std::string> regime_thresholds() {
    // Release points tuned so the head-on approach speed lands just
    // below and just above the coalescence threshold.
    const RegimeProbe slow = probe_regime(regime_netlist("156.911"));
    const RegimeProbe fast = probe_regime(regime_netlist("154.028"));

    const bool slow_ok = slow.ran && !slow.merged && std::abs(slow.rel - 0.21) < 0.005;
    const bool fast_ok = fast.ran && fast.merged && fast.rel >= 0.29 && fast.rel < 0.30;
    return {slow_ok && fast_ok,
            format("approach %.4f m/s bounces, %.4f m/s coalesces (threshold 0.29)",
                   slow.rel, fast.rel)};
}

// ---------------------------------------------------------------- 3

std::pair<bool, std::string> model_ordering(const CircuitSpec& spec) {
    const auto finals = [&spec](int a, int b, CollisionModel model) {
        RunOptions options;
        options.model_override = model;
        RunResult run = run_circuit(spec, {{"A", a}, {"B", b}}, options);
        return sunk_xs(run.world);
    };

    const std::vector<double> soft_pair = finals(1, 1, CollisionModel::SoftSphere);
    const std::vector<double> hard_pair = finals(1, 1, CollisionModel::BilliardBall);
    const std::vector<double> lone_a = finals(1, 0, CollisionModel::SoftSphere);
    const std::vector<double> lone_b = finals(0, 1, CollisionModel::SoftSphere);

    const ObservedModel soft = classify_model(spec);
    RunOptions hard_options;
    hard_options.model_override = CollisionModel::BilliardBall;
    const ObservedModel hard = classify_model(spec, hard_options);

    const bool pass = soft == ObservedModel::SoftSphere && hard == ObservedModel::BilliardBall;
    std::string details = format("finite-contact pair rests at %.2f/%.2f, instant-swap pair at %.2f/%.2f,",
                                 soft_pair.empty() ? 0.0 : soft_pair.front(),
                                 soft_pair.size() < 2 ? 0.0 : soft_pair.back(),
                                 hard_pair.empty() ? 0.0 : hard_pair.front(),
                                 hard_pair.size() < 2 ? 0.0 : hard_pair.back());
    details += format(" singles at %.2f/%.2f mm",
                      lone_b.empty() ? 0.0 : lone_b.front(),
                      lone_a.empty() ? 0.0 : lone_a.back());
    return {pass, details};
}

// ---------------------------------------------------------------- 4

std::pair<bool, std::string> coalescence_bookkeeping() {
    const PhysicsConfig config;
    const CoatingSpec coating = CoatingSpec::from_kind(CoatingKind::NiUhdpe);

    Marble a;
    a.id = 0;
    a.volume_ul = 11.6;
    a.coating = coating;
    a.coating_mass_mg = default_coating_mass_mg(coating.kind);
    a.vel = {0.15, -0.10};
    a.pos = {-1.404, 50.0};
    a.state = Ballistic{};

    Marble b = a;
    b.id = 1;
    b.vel = {-0.15, -0.10};
    b.pos = {1.404, 50.0};

    ContactEvent event;
    event.a = 0;
    event.b = 1;
    event.normal = {1.0, 0.0};
    event.rel_normal_speed = (a.vel - b.vel).dot(event.normal);
    event.time_ms = 0.0;

    const Vec2 momentum_before = a.mass_mg() * a.vel + b.mass_mg() * b.vel;
    const CollisionOutcome outcome = resolve_collision(a, b, event, config);
    if (outcome.kind != CollisionOutcome::Kind::Coalesced) {
        return {false, "head-on pair above threshold failed to coalesce"};
    }
    const Marble& merged = outcome.merged;
    const Vec2 momentum_after = merged.mass_mg() * merged.vel;

    const double volume_err = std::abs(merged.volume_ul - 23.2);
    const double momentum_err = (momentum_after - momentum_before).norm() / momentum_before.norm();
    const double vx = std::abs(merged.vel.x);
    const double shell_err = std::abs(merged.coating_mass_mg - 5.0);

    const bool pass = volume_err <= 1e-9 && momentum_err <= 1e-9 && vx < 1e-9 && shell_err <= 1e-9;
    return {pass, format("volume err %.1e uL, momentum err %.1e rel, |vx| %.1e m/s, shell err %.1e mg",
                         volume_err, momentum_err, vx, shell_err)};
}

// ---------------------------------------------------------------- 5

std::pair<bool, std::string> half_adder_table(const CircuitSpec& spec) {
    const TruthTable table = evaluate_truth_table(spec);
    int matched = 0;
    for (const TruthTableRow& row : table.rows) {
        const AdderBits want = half_adder(row.bits.at(0), row.bits.at(1));
        const bool ok = row.exits.ok() &&
                        row.exits.channel.at("SUM") == want.sum &&
                        row.exits.channel.at("CARRY") == want.carry;
        matched += ok ? 1 : 0;
    }
    return {matched == 4, format("%d/4 rows match sum = a XOR b, carry = a AND b", matched)};
}

// ---------------------------------------------------------------- 6

std::pair<bool, std::string> full_adder_table(const CircuitSpec& spec) {
    const TruthTable table = evaluate_truth_table(spec);

    int matched = 0;
    bool carry_exclusive = true;
    std::string spotlight;
    for (const TruthTableRow& row : table.rows) {
        const AdderBits want = full_adder(row.bits.at(0), row.bits.at(1), row.bits.at(2));
        const bool ok = row.exits.ok() &&
                        row.exits.channel.at("SUM") == want.sum &&
                        row.exits.channel.at("CARRY") == want.carry;
        matched += ok ? 1 : 0;

        // Two sinks share the CARRY label; at most one may ever fire.
        int carry_sinks_hit = 0;
        for (std::size_t i = 0; i < spec.sinks.size(); ++i) {
            if (spec.sinks[i].label == "CARRY" && row.exits.sink_count.at(i) > 0) {
                carry_sinks_hit += 1;
            }
        }
        carry_exclusive = carry_exclusive && carry_sinks_hit <= 1;

        const auto is = [&row](int a, int b, int c) {
            return row.bits.at(0) == a && row.bits.at(1) == b && row.bits.at(2) == c;
        };
        if (is(1, 1, 0) || is(0, 1, 1) || is(0, 1, 0) || is(1, 1, 1)) {
            spotlight += format(" %d+%d+%d=%d%d%s", row.bits[0], row.bits[1], row.bits[2],
                                row.exits.channel.at("CARRY"), row.exits.channel.at("SUM"),
                                ok ? "" : "(wrong)");
        }
    }
    const bool pass = matched == 8 && carry_exclusive;
    return {pass, format("%d/8 rows match; carry sinks %s; spotlight:%s", matched,
                         carry_exclusive ? "never overlap" : "OVERLAP", spotlight.c_str())};
}

// ---------------------------------------------------------------- 7

std::pair<bool, std::string> synchronization(const CircuitSpec& spec) {
    // Mirror symmetry of the (1,1) run, sampled every tick.
    double worst = 0.0;
    RunOptions mirror_options;
    mirror_options.observer = [&worst](const World& w) {
        const Marble* a = w.find_marble(0);
        const Marble* b = w.find_marble(1);
        if (a == nullptr || b == nullptr || a->terminal() || b->terminal()) {
            return;
        }
        worst = std::max(worst, std::abs(a->pos.x + b->pos.x));
        worst = std::max(worst, std::abs(a->pos.y - b->pos.y));
    };
    run_circuit(spec, {{"A", 1}, {"B", 1}}, mirror_options);
    const bool mirror_ok = worst <= 1e-9;

    // Delaying one release window by 100 ms must shift the trajectory
    // by exactly 100 ms worth of ticks and change nothing else.
    CircuitSpec delayed = spec;
    for (LatchDecl& latch : delayed.latches) {
        if (latch.name == "em_b") {
            latch.windows.at(0).off_ms += 100.0;
        }
    }

    const auto record = [](const CircuitSpec& s) {
        std::vector<Vec2> trace;
        RunOptions options;
        options.observer = [&trace](const World& w) {
            const Marble* m = w.find_marble(0);
            trace.push_back(m != nullptr ? m->pos : Vec2{});
        };
        run_circuit(s, {{"A", 0}, {"B", 1}}, options);
        return trace;
    };
    const std::vector<Vec2> base = record(spec);
    const std::vector<Vec2> late = record(delayed);

    const double dt = spec.config.dt_ms;
    const auto release_tick = static_cast<std::size_t>(std::llround(600.0 / dt));
    const auto shift = static_cast<std::size_t>(std::llround(100.0 / dt));

    bool shift_ok = late.size() == base.size() + shift;
    for (std::size_t k = release_tick; shift_ok && k < base.size(); ++k) {
        shift_ok = base[k] == late[k + shift];
    }
    return {mirror_ok && shift_ok,
            format("mirror error %.2e mm; +100 ms window shifts the path by %zu ticks exactly",
                   worst, shift)};
}

// ---------------------------------------------------------------- 8

std::pair<bool, std::string> evaporation_clock() {
    const EvaporationTable table;
    const bool rates_ok = table.bare == 0.1392 && table.ni == 0.1133 &&
                          table.uhdpe == 0.1107 && table.ni_uhdpe == 0.0998;

    const auto dryout = [&table](CoatingKind kind) {
        Marble m;
        m.volume_ul = 10.0;
        m.coating = CoatingSpec::from_kind(kind);
        m.coating_mass_mg = default_coating_mass_mg(kind);
        return time_to_dryout(m, table);
    };
    const double bare = dryout(CoatingKind::Bare);
    const double ni = dryout(CoatingKind::Ni);
    const double uhdpe = dryout(CoatingKind::Uhdpe);
    const double hybrid = dryout(CoatingKind::NiUhdpe);

    const bool dryout_ok = std::abs(bare - 71.84) <= 0.01 && std::abs(ni - 88.26) <= 0.01 &&
                           std::abs(uhdpe - 90.33) <= 0.01 && std::abs(hybrid - 100.20) <= 0.01;
    const bool hybrid_longest = hybrid > uhdpe && uhdpe > ni && ni > bare;

    return {rates_ok && dryout_ok && hybrid_longest,
            format("10 uL dries out in %.2f/%.2f/%.2f/%.2f min, hybrid shell slowest",
                   bare, ni, uhdpe, hybrid)};
}

// ---------------------------------------------------------------- 9

std::pair<bool, std::string> dispense_cadence() {
    const double slow = emission_period_ms(11.6, 7.0);
    const double fast = emission_period_ms(11.6, 334.08);
    const bool slow_ok = std::abs(slow - 5966.0) <= 1.0;
    const bool fast_ok = std::abs(fast - 125.0) <= 1e-9;

    DropletSource source;
    source.volume_ul = 11.6;
    source.rate_ml_per_h = 7.0;
    const std::vector<double> times = emission_times(source, 30000.0);
    bool spacing_ok = times.size() == 6 && times.front() == 0.0;
    for (std::size_t i = 1; spacing_ok && i < times.size(); ++i) {
        spacing_ok = std::abs((times[i] - times[i - 1]) - slow) <= 1e-9;
    }

    return {slow_ok && fast_ok && spacing_ok,
            format("7 mL/h gives one marble per %.2f ms, 334.08 mL/h one per %.0f ms",
                   slow, fast)};
}

// ---------------------------------------------------------------- 10

std::pair<bool, std::string> determinism_csv(const CircuitSpec& spec) {
    const auto run_csv = [&spec]() {
        TraceRecorder recorder(120.0);
        RunOptions options;
        options.observer = [&recorder](const World& w) { recorder.observe(w); };
        run_circuit(spec, {{"A", 1}, {"B", 1}}, options);
        return to_csv(recorder.records());
    };
    const std::string first = run_csv();
    const std::string second = run_csv();
    const bool pass = !first.empty() && first == second;
    return {pass, format("two cold runs, %zu bytes of trace, byte-identical: %s",
                         first.size(), first == second ? "yes" : "NO")};
}

// ---------------------------------------------------------------- 11

std::pair<bool, std::string> collision_properties() {
    std::mt19937 rng(12345);
    std::uniform_real_distribution<double> volume_dist(1.0, 30.0);
    std::uniform_real_distribution<double> speed_dist(0.0, 1.0);
    std::uniform_real_distribution<double> angle_dist(0.0, 6.283185307179586);

    int failures = 0;
    int bounced = 0;
    int coalesced = 0;
    for (int iter = 0; iter < 1000; ++iter) {
        PhysicsConfig config;
        config.model = (iter % 2 == 0) ? CollisionModel::SoftSphere : CollisionModel::BilliardBall;

        Marble a;
        a.id = 0;
        a.volume_ul = volume_dist(rng);
        a.coating = CoatingSpec::from_kind(CoatingKind::Bare);
        a.coating_mass_mg = 0.0;
        a.state = Ballistic{};
        Marble b = a;
        b.id = 1;
        b.volume_ul = volume_dist(rng);

        const double phi = angle_dist(rng);
        const Vec2 normal{std::cos(phi), std::sin(phi)};
        a.pos = {0.0, 0.0};
        b.pos = (a.radius_mm() + b.radius_mm()) * normal;

        const auto draw_velocity = [&]() {
            const double speed = speed_dist(rng);
            const double dir = angle_dist(rng);
            return Vec2{speed * std::cos(dir), speed * std::sin(dir)};
        };
        a.vel = draw_velocity();
        b.vel = draw_velocity();
        if ((a.vel - b.vel).dot(normal) < 0.0) {
            std::swap(a.vel, b.vel);
        }
        const double rel = (a.vel - b.vel).dot(normal);
        if (rel <= 0.0) {
            continue;
        }

        ContactEvent event{0, 1, normal, rel, 0.0};
        const CollisionOutcome outcome = resolve_collision(a, b, event, config);

        const double ma = a.mass_mg();
        const double mb = b.mass_mg();
        const Vec2 p_before = ma * a.vel + mb * b.vel;
        const double ke_before = 0.5 * ma * a.vel.dot(a.vel) + 0.5 * mb * b.vel.dot(b.vel);
        const double p_scale = std::max(1e-12, p_before.norm());

        bool ok = true;
        if (outcome.kind == CollisionOutcome::Kind::Bounced) {
            bounced += 1;
            const Vec2 p_after = ma * outcome.vel_a_after + mb * outcome.vel_b_after;
            ok = ok && (p_after - p_before).norm() / p_scale <= 1e-9;
            const Vec2 tangent{-normal.y, normal.x};
            ok = ok && std::abs((outcome.vel_a_after - a.vel).dot(tangent)) <= 1e-12;
            ok = ok && std::abs((outcome.vel_b_after - b.vel).dot(tangent)) <= 1e-12;
            const double ke_after = 0.5 * ma * outcome.vel_a_after.dot(outcome.vel_a_after) +
                                    0.5 * mb * outcome.vel_b_after.dot(outcome.vel_b_after);
            ok = ok && ke_after <= ke_before * (1.0 + 1e-12) + 1e-15;
        } else if (outcome.kind == CollisionOutcome::Kind::Coalesced) {
            coalesced += 1;
            const Marble& merged = outcome.merged;
            const Vec2 p_after = merged.mass_mg() * merged.vel;
            ok = ok && (p_after - p_before).norm() / p_scale <= 1e-9;
            ok = ok && std::abs(merged.volume_ul - (a.volume_ul + b.volume_ul)) <= 1e-12;
            const double ke_after = 0.5 * merged.mass_mg() * merged.vel.dot(merged.vel);
            ok = ok && ke_after <= ke_before * (1.0 + 1e-12) + 1e-15;
        } else {
            ok = false;
        }
        failures += ok ? 0 : 1;
    }
    return failures == 0
               ? std::make_pair(true, format("%d bounces + %d merges conserve momentum, never gain energy",
                                             bounced, coalesced))
               : std::make_pair(false, format("%d of 1000 random collisions broke an invariant", failures));
}

CircuitSpec random_spec(std::mt19937& rng) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const auto in = [&](double lo, double hi) { return lo + (hi - lo) * unit(rng); };
    const auto count = [&](int lo, int hi) {
        return lo + static_cast<int>(unit(rng) * (hi - lo + 1)) % (hi - lo + 1);
    };

    CircuitSpec spec;
    spec.config.dt_ms = in(0.01, 1.0);
    spec.config.g_mps2 = in(1.0, 20.0);
    spec.config.v_coalesce_mps = in(0.05, 1.0);
    spec.config.restitution = in(0.0, 1.0);
    spec.config.contact_duration_ms = in(0.0, 20.0);
    spec.config.rolling_factor = in(0.1, 1.0);
    const CollisionModel models[] = {CollisionModel::SoftSphere, CollisionModel::BilliardBall,
                                     CollisionModel::FusionOnly, CollisionModel::Annihilate};
    spec.config.model = models[count(0, 3)];
    spec.horizon_ms = in(100.0, 10000.0);
    spec.evaporation_enabled = unit(rng) < 0.5;
    spec.evaporation.bare = in(0.01, 1.0);
    spec.evaporation.ni = in(0.01, 1.0);
    spec.evaporation.uhdpe = in(0.01, 1.0);
    spec.evaporation.ni_uhdpe = in(0.01, 1.0);

    const int ramps = count(1, 4);
    for (int i = 0; i < ramps; ++i) {
        RampDecl ramp;
        ramp.name = "r" + std::to_string(i);
        ramp.anchor = {in(-200.0, 200.0), in(0.0, 300.0)};
        ramp.slope_deg = in(1.0, 89.0);
        ramp.dir = unit(rng) < 0.5 ? -1 : 1;
        ramp.length_mm = in(10.0, 300.0);
        if (unit(rng) < 0.5) {
            ramp.rolling_factor = in(0.1, 1.0);
        }
        spec.ramps.push_back(ramp);
    }
    const int latches = count(0, 3);
    for (int i = 0; i < latches; ++i) {
        LatchDecl latch;
        latch.name = "em" + std::to_string(i);
        latch.ramp = spec.ramps[static_cast<std::size_t>(count(0, ramps - 1))].name;
        latch.hold_arc_mm = in(0.0, 10.0);
        if (unit(rng) < 0.5) {
            latch.capture_radius_mm = in(0.5, 10.0);
        }
        double t = in(0.0, 50.0);
        const int windows = count(1, 3);
        for (int w = 0; w < windows; ++w) {
            const double off = t + in(1.0, 300.0);
            latch.windows.push_back({t, off});
            t = off + in(1.0, 50.0);
        }
        spec.latches.push_back(latch);
    }
    const int sources = count(1, 3);
    for (int i = 0; i < sources; ++i) {
        SourceDecl source;
        source.name = "src" + std::to_string(i);
        source.input = std::string(1, static_cast<char>('A' + i));
        source.ramp = spec.ramps[static_cast<std::size_t>(count(0, ramps - 1))].name;
        source.entry_arc_mm = in(0.0, 5.0);
        source.volume_ul = in(1.0, 40.0);
        const CoatingKind kinds[] = {CoatingKind::Bare, CoatingKind::Ni, CoatingKind::Uhdpe,
                                     CoatingKind::NiUhdpe};
        source.coating = kinds[count(0, 3)];
        if (unit(rng) < 0.5) {
            source.rate_ml_per_h = in(0.5, 400.0);
        } else {
            double t = in(0.0, 10.0);
            const int times = count(1, 4);
            for (int k = 0; k < times; ++k) {
                source.times_ms.push_back(t);
                t += in(1.0, 500.0);
            }
        }
        spec.sources.push_back(source);
    }
    const int sinks = count(1, 4);
    double lo = in(-200.0, -100.0);
    for (int i = 0; i < sinks; ++i) {
        SinkDecl sink;
        sink.name = "s" + std::to_string(i);
        sink.label = "L" + std::to_string(count(0, 2));
        sink.x_lo = lo;
        sink.x_hi = lo + in(1.0, 80.0);
        sink.floor_y = in(0.0, 50.0);
        lo = sink.x_hi + in(0.0, 20.0);
        spec.sinks.push_back(sink);
    }
    return spec;
}

std::pair<bool, std::string> roundtrip_properties() {
    std::mt19937 rng(777);
    int failures = 0;
    for (int iter = 0; iter < 200; ++iter) {
        const CircuitSpec spec = random_spec(rng);
        const std::string text = serialize(spec);
        const ParseResult parsed = parse_circuit(text);
        if (!parsed.ok() || !(parsed.spec == spec)) {
            failures += 1;
        }
    }
    return {failures == 0, format("%d spec round-trip failures in 200", failures)};
}

std::pair<bool, std::string> fuzz_properties(const std::string& dir) {
    const std::string seed_text = serialize(load_fixture(dir, "gate.lmc"));
    std::mt19937 rng(999);
    std::uniform_int_distribution<int> byte_dist(0, 255);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    int crashes = 0;
    for (int iter = 0; iter < 10000; ++iter) {
        std::string text;
        if (iter % 2 == 0) {
            const auto length = static_cast<std::size_t>(unit(rng) * 300.0);
            text.reserve(length);
            for (std::size_t i = 0; i < length; ++i) {
                text.push_back(static_cast<char>(byte_dist(rng)));
            }
        } else {
            text = seed_text;
            const int edits = 1 + static_cast<int>(unit(rng) * 8.0);
            for (int e = 0; e < edits && !text.empty(); ++e) {
                const auto at = static_cast<std::size_t>(unit(rng) * static_cast<double>(text.size()));
                text[std::min(at, text.size() - 1)] = static_cast<char>(byte_dist(rng));
            }
        }
        try {
            const ParseResult parsed = parse_circuit(text);
            (void)parsed;
        } catch (...) {
            crashes += 1;
        }
    }
    return {crashes == 0, format("%d parser escapes in 10000 fuzz inputs", crashes)};
}

std::pair<bool, std::string> property_suites(const std::string& dir) {
    const auto collisions = collision_properties();
    const auto roundtrip = roundtrip_properties();
    const auto fuzz = fuzz_properties(dir);
    const bool pass = collisions.first && roundtrip.first && fuzz.first;
    return {pass, collisions.second + "; " + roundtrip.second + "; " + fuzz.second};
}

bool wants(const std::string& filter, int id, const std::string& name) {
    if (filter.empty()) {
        return true;
    }
    std::size_t start = 0;
    while (start <= filter.size()) {
        std::size_t comma = filter.find(',', start);
        if (comma == std::string::npos) {
            comma = filter.size();
        }
        std::string token = filter.substr(start, comma - start);
        const auto strip = [](std::string s) {
            while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.erase(s.begin());
            while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
            return s;
        };
        token = strip(token);
        if (!token.empty()) {
            if (token == std::to_string(id) || name.find(token) != std::string::npos) {
                return true;
            }
        }
        start = comma + 1;
    }
    return false;
}

}  // namespace

std::vector<CriterionResult> run_criteria(const std::string& fixture_dir, const std::string& filter) {
    std::vector<CriterionResult> results;
    const auto add = [&](int id, const char* name,
                         const std::function<std::pair<bool, std::string>()>& fn) {
        if (!wants(filter, id, name)) {
            return;
        }
        CriterionResult result{id, name, false, {}};
        try {
            const auto [pass, details] = fn();
            result.pass = pass;
            result.details = details;
        } catch (const std::exception& e) {
            result.details = std::string("exception: ") + e.what();
        }
        results.push_back(result);
    };

    add(1, "gate-truth-table", [&] { return gate_truth_table(load_fixture(fixture_dir, "gate.lmc")); });
    add(2, "regime-thresholds", [&] { return regime_thresholds(); });
    add(3, "model-ordering", [&] { return model_ordering(load_fixture(fixture_dir, "gate.lmc")); });
    add(4, "coalescence-bookkeeping", [&] { return coalescence_bookkeeping(); });
    add(5, "half-adder", [&] { return half_adder_table(load_fixture(fixture_dir, "half_adder.lmc")); });
    add(6, "full-adder", [&] { return full_adder_table(load_fixture(fixture_dir, "full_adder.lmc")); });
    add(7, "synchronization", [&] { return synchronization(load_fixture(fixture_dir, "gate.lmc")); });
    add(8, "evaporation", [&] { return evaporation_clock(); });
    add(9, "cadence", [&] { return dispense_cadence(); });
    add(10, "determinism-csv", [&] { return determinism_csv(load_fixture(fixture_dir, "gate.lmc")); });
    add(11, "property-suites", [&] { return property_suites(fixture_dir); });
    return results;
}

}  // namespace lmc
