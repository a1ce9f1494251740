#include "lmc/svg.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <stdexcept>

namespace lmc {

namespace {

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#17becf", "#8c564b", "#e377c2"};

struct Bounds {
    double min_x = 0.0, max_x = 0.0, min_y = 0.0, max_y = 0.0;
    bool any = false;

    void add(Vec2 p) {
        if (!any) {
            min_x = max_x = p.x;
            min_y = max_y = p.y;
            any = true;
            return;
        }
        min_x = std::min(min_x, p.x);
        max_x = std::max(max_x, p.x);
        min_y = std::min(min_y, p.y);
        max_y = std::max(max_y, p.y);
    }
};

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", v);
    return buf;
}

} // namespace

std::string render_svg(const CircuitSpec& spec,
                       const std::vector<TraceRecord>& records) {
    // World y points up; flip once so the page shows the scene upright.
    Bounds bounds;
    std::vector<RampSegment> ramps;
    for (const RampDecl& decl : spec.ramps) {
        RampSegment ramp{decl.anchor, decl.slope_deg, decl.dir, decl.length_mm,
                         decl.rolling_factor.value_or(spec.config.rolling_factor)};
        bounds.add(ramp.point_at(0.0));
        bounds.add(ramp.point_at(ramp.length_mm));
        ramps.push_back(ramp);
    }
    for (const SinkDecl& sink : spec.sinks) {
        bounds.add({sink.x_lo, sink.floor_y});
        bounds.add({sink.x_hi, sink.floor_y});
    }
    for (const TraceRecord& r : records)
        bounds.add(r.pos);
    if (!bounds.any)
        bounds.add({0.0, 0.0});

    const double pad = 8.0;
    const double width = bounds.max_x - bounds.min_x + 2.0 * pad;
    const double height = bounds.max_y - bounds.min_y + 2.0 * pad;
    const auto sx = [&](double x) { return x - bounds.min_x + pad; };
    const auto sy = [&](double y) { return bounds.max_y - y + pad; };

    std::string out;
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 " + fmt(width) +
           " " + fmt(height) + "\" width=\"900\">\n";
    out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

    for (const RampSegment& ramp : ramps) {
        const Vec2 a = ramp.point_at(0.0);
        const Vec2 b = ramp.point_at(ramp.length_mm);
        out += "<line x1=\"" + fmt(sx(a.x)) + "\" y1=\"" + fmt(sy(a.y)) + "\" x2=\"" +
               fmt(sx(b.x)) + "\" y2=\"" + fmt(sy(b.y)) +
               "\" stroke=\"#555\" stroke-width=\"1.2\"/>\n";
    }
    for (const SinkDecl& sink : spec.sinks) {
        out += "<rect x=\"" + fmt(sx(sink.x_lo)) + "\" y=\"" + fmt(sy(sink.floor_y)) +
               "\" width=\"" + fmt(sink.x_hi - sink.x_lo) +
               "\" height=\"1.5\" fill=\"#bbb\"/>\n";
        out += "<text x=\"" + fmt(sx(0.5 * (sink.x_lo + sink.x_hi))) + "\" y=\"" +
               fmt(sy(sink.floor_y) + 5.5) +
               "\" font-size=\"4\" text-anchor=\"middle\" fill=\"#333\">" +
               sink.label + "</text>\n";
    }

    std::map<int, std::vector<const TraceRecord*>> paths;
    for (const TraceRecord& r : records)
        paths[r.id].push_back(&r);
    std::size_t color = 0;
    for (const auto& [id, path] : paths) {
        std::string points;
        for (const TraceRecord* r : path) {
            points += fmt(sx(r->pos.x)) + "," + fmt(sy(r->pos.y)) + " ";
        }
        const char* stroke = kPalette[color++ % (sizeof kPalette / sizeof *kPalette)];
        out += "<polyline points=\"" + points +
               "\" fill=\"none\" stroke-width=\"0.6\" stroke=\"" + stroke + "\"/>\n";
        const TraceRecord* last = path.back();
        out += "<circle cx=\"" + fmt(sx(last->pos.x)) + "\" cy=\"" +
               fmt(sy(last->pos.y)) + "\" r=\"1.4\" fill=\"" + stroke +
               "\" fill-opacity=\"0.5\"/>\n";
        out += "<!-- marble " + std::to_string(id) + " ends " + last->state + " -->\n";
    }
    out += "</svg>\n";
    return out;
}

void write_svg(const std::string& path, const CircuitSpec& spec,
               const std::vector<TraceRecord>& records) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot write " + path);
    out << render_svg(spec, records);
}

} // namespace lmc
