#pragma once

#include <string>
#include <vector>

#include "lmc/netlist.hpp"
#include "lmc/trace.hpp"

namespace lmc {

// Static picture of one run: ramp lines, sink strips, one polyline per
// marble id. World y points up, SVG y points down, so the scene is
// flipped once at the top. Self-contained, no scripts.
std::string render_svg(const CircuitSpec& spec,
                       const std::vector<TraceRecord>& records);

void write_svg(const std::string& path, const CircuitSpec& spec,
               const std::vector<TraceRecord>& records);

} // namespace lmc
