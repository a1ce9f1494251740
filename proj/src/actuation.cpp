#include "lmc/actuation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "lmc/ramp.hpp"

namespace lmc {

bool latch_active(const ElectromagnetLatch& latch, double t_ms) {
    for (const LatchWindow& w : latch.windows)
        if (t_ms >= w.on_ms && t_ms < w.off_ms)
            return true;
    return false;
}

bool try_capture(const ElectromagnetLatch& latch, int latch_index,
                 const RampSegment& ramp, Marble& marble, double t_ms) {
    if (!latch_active(latch, t_ms))
        return false;
    if (marble.coating.magnetic_fraction <= 0.0)
        return false;
    const OnRamp* on = std::get_if<OnRamp>(&marble.state);
    if (!on || on->ramp != latch.ramp)
        return false;
    if (std::abs(on->arc_mm - latch.hold_arc_mm) > latch.capture_radius_mm)
        return false;
    marble.state = Held{latch_index};
    marble.pos = ramp.center_at(latch.hold_arc_mm, marble.radius_mm());
    marble.vel = {0.0, 0.0};
    return true;
}

double emission_period_ms(double volume_ul, double rate_ml_per_h) {
    if (!(volume_ul > 0.0) || !(rate_ml_per_h > 0.0))
        throw std::invalid_argument("emission period needs positive volume and rate");
    // 1 mL/h = 1000 uL / 3.6e6 ms; invert for the per-drop spacing.
    return volume_ul * 3600.0 / rate_ml_per_h;
}

std::vector<double> emission_times(const DropletSource& source, double horizon_ms) {
    std::vector<double> times;
    if (!source.times_ms.empty()) {
        for (double t : source.times_ms)
            if (t <= horizon_ms)
                times.push_back(t);
        std::sort(times.begin(), times.end());
        return times;
    }
    if (source.rate_ml_per_h > 0.0) {
        const double period = emission_period_ms(source.volume_ul, source.rate_ml_per_h);
        for (double t = 0.0; t <= horizon_ms; t += period)
            times.push_back(t);
        return times;
    }
    throw std::invalid_argument("source needs explicit times or a flow rate");
}

} // namespace lmc
