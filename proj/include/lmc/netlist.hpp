#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lmc/world.hpp"

namespace lmc {

// Declaration-level mirror of the .lmc text format. Cross references
// stay symbolic (ramp names as strings) so a spec can be parsed,
// validated, edited and re-serialized without losing information.

struct RampDecl {
    std::string name;
    Vec2 anchor;                // top end
    double slope_deg = 16.0;
    int dir = +1;               // +1 descends toward +x
    double length_mm = 0.0;
    std::optional<double> rolling_factor;

    bool operator==(const RampDecl&) const = default;
};

struct LatchDecl {
    std::string name;
    std::string ramp;
    double hold_arc_mm = 0.0;
    std::optional<double> capture_radius_mm;
    std::vector<LatchWindow> windows;

    bool operator==(const LatchDecl&) const = default;
};

struct SourceDecl {
    std::string name;
    std::string input;          // logical input bit this source carries
    std::string ramp;
    double entry_arc_mm = 0.0;
    double volume_ul = 11.6;
    CoatingKind coating = CoatingKind::NiUhdpe;
    std::vector<double> times_ms;
    double rate_ml_per_h = 0.0; // 0 = unset

    bool operator==(const SourceDecl&) const = default;
};

struct SinkDecl {
    std::string name;
    std::string label;
    double x_lo = 0.0;
    double x_hi = 0.0;
    double floor_y = 0.0;

    bool operator==(const SinkDecl&) const = default;
};

struct CircuitSpec {
    PhysicsConfig config;
    bool evaporation_enabled = false;
    EvaporationTable evaporation;
    double horizon_ms = 5000.0;

    std::vector<RampDecl> ramps;
    std::vector<LatchDecl> latches;
    std::vector<SourceDecl> sources;
    std::vector<SinkDecl> sinks;

    // Distinct input names in declaration order; first is the high bit
    // of a truth-table row index.
    std::vector<std::string> input_order() const;

    int ramp_index(const std::string& name) const; // -1 if absent

    bool operator==(const CircuitSpec&) const = default;
};

struct ParseError {
    int line = 0;               // 1-based
    int column = 0;             // 1-based, 0 when the whole line is at fault
    std::string message;
    std::string token;
};

struct ParseResult {
    CircuitSpec spec;
    std::vector<ParseError> errors;

    bool ok() const { return errors.empty(); }
};

// Total: never throws, collects every error it can attribute to a line.
// The spec is usable only when ok().
ParseResult parse_circuit(const std::string& text);

ParseResult parse_circuit_file(const std::string& path);

// Semantic checks on a parsed spec: dangling ramp references, arcs past
// ramp ends, overlapping sink intervals, sources with no schedule.
std::vector<std::string> validate(const CircuitSpec& spec);

// Canonical text form: config, ramps, latches, sources, sinks, each in
// declaration order, numbers in shortest round-trip form.
std::string serialize(const CircuitSpec& spec);

// Instantiate a world for one assignment of input bits. Sources whose
// input bit is 0 are dropped; emissions due at t=0 spawn immediately.
World build_world(const CircuitSpec& spec,
                  const std::vector<std::pair<std::string, int>>& assignment);

} // namespace lmc
