#include "lmc/trace.hpp"

#include <cstdio>
#include <fstream>
#include <set>
#include <stdexcept>

namespace lmc {

TraceRecorder::TraceRecorder(double sample_hz)
    : interval_ms_(1000.0 / sample_hz) {
    if (!(sample_hz > 0.0))
        throw std::invalid_argument("sample rate must be positive");
}

void TraceRecorder::observe(const World& world) {
    const bool on_grid = world.time_ms >= next_sample_ms_;
    if (on_grid)
        next_sample_ms_ = world.time_ms + interval_ms_;
    for (const Marble& m : world.marbles) {
        // Terminal marbles get one closing record so a path ends where
        // the marble actually stopped, then drop out of the trace. The
        // closing row bypasses the sampling grid: a run can quiesce
        // between frames and the final state must still be on record.
        if (m.terminal()) {
            if (retired_.count(m.id))
                continue;
            retired_.insert(m.id);
        } else if (!on_grid) {
            continue;
        }
        records_.push_back({world.time_ms, m.id, m.pos, m.vel, state_name(m.state)});
    }
}

std::string to_csv(const std::vector<TraceRecord>& records) {
    std::string out = "t_ms,id,x_mm,y_mm,vx_mps,vy_mps,state\n";
    char buf[160];
    for (const TraceRecord& r : records) {
        std::snprintf(buf, sizeof buf, "%.9g,%d,%.9g,%.9g,%.9g,%.9g,%s\n", r.t_ms,
                      r.id, r.pos.x, r.pos.y, r.vel.x, r.vel.y, r.state.c_str());
        out += buf;
    }
    return out;
}

void write_csv(const std::string& path, const std::vector<TraceRecord>& records) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot write " + path);
    out << to_csv(records);
}

} // namespace lmc
