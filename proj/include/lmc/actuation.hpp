#pragma once

#include <vector>

#include "lmc/marble.hpp"
#include "lmc/ramp.hpp"

namespace lmc {

// Activity window, half-open: active for on_ms <= t < off_ms.
struct LatchWindow {
    double on_ms = 0.0;
    double off_ms = 0.0;
    bool operator==(const LatchWindow&) const = default;
};

// Electromagnet mounted behind a ramp. While active it snaps a magnetic
// marble rolling within capture_radius of the hold point; the marble is
// released, at rest at the hold point, on the first tick the latch is off.
struct ElectromagnetLatch {
    int ramp = -1;
    double hold_arc_mm = 0.0;
    double capture_radius_mm = 5.0;
    std::vector<LatchWindow> windows;

    bool operator==(const ElectromagnetLatch&) const = default;
};

bool latch_active(const ElectromagnetLatch& latch, double t_ms);

// Snap the marble to the hold point if every capture condition holds:
// on the latch's ramp, latch active, magnetic coating, within radius.
// Returns true when captured.
bool try_capture(const ElectromagnetLatch& latch, int latch_index,
                 const RampSegment& ramp, Marble& marble, double t_ms);

// Needle feed. Either a list of explicit emission times or a steady
// volumetric rate; one of the two must be present.
struct DropletSource {
    int ramp = -1;
    double entry_arc_mm = 0.0;
    double volume_ul = 11.6;
    CoatingSpec coating;
    std::vector<double> times_ms;
    double rate_ml_per_h = 0.0;  // 0 = unset

    bool operator==(const DropletSource&) const = default;
};

// Emission instants up to and including horizon_ms. With a rate, one
// droplet every volume/rate starting at t = 0. Throws
// std::invalid_argument if the source has neither times nor a rate.
std::vector<double> emission_times(const DropletSource& source, double horizon_ms);

// Cadence of a rate-fed source, ms per droplet.
double emission_period_ms(double volume_ul, double rate_ml_per_h);

} // namespace lmc
