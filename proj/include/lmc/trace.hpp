#pragma once

#include <set>
#include <string>
#include <vector>

#include "lmc/world.hpp"

namespace lmc {

struct TraceRecord {
    double t_ms = 0.0;
    int id = 0;
    Vec2 pos;
    Vec2 vel;
    std::string state;
};

// Samples every live marble at a fixed rate; tick 0 is always taken.
// Rows come out in (time, id) order, ready for write_csv.
class TraceRecorder {
public:
    explicit TraceRecorder(double sample_hz = 120.0);

    // Bind into RunOptions::observer or call directly per tick.
    void observe(const World& world);

    const std::vector<TraceRecord>& records() const { return records_; }

private:
    double interval_ms_;
    double next_sample_ms_ = 0.0;
    std::vector<TraceRecord> records_;
    std::set<int> retired_; // terminal marbles already given a last record
};

// Header: t_ms,id,x_mm,y_mm,vx_mps,vy_mps,state. Numbers are printed
// with %.9g so identical runs serialize to identical bytes.
std::string to_csv(const std::vector<TraceRecord>& records);

void write_csv(const std::string& path, const std::vector<TraceRecord>& records);

} // namespace lmc
