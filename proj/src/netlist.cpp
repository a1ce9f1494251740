#include "lmc/netlist.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string_view>

namespace lmc {

namespace {

struct Token {
    std::string_view text;
    int column = 0; // 1-based offset into the line
};

std::vector<Token> tokenize(std::string_view line) {
    std::vector<Token> tokens;
    std::size_t i = 0;
    while (i < line.size()) {
        if (std::isspace(static_cast<unsigned char>(line[i]))) {
            ++i;
            continue;
        }
        const std::size_t start = i;
        while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i])))
            ++i;
        tokens.push_back({line.substr(start, i - start), static_cast<int>(start) + 1});
    }
    return tokens;
}

// Collects declarations and errors in one pass; never throws on input.
class Parser {
public:
    ParseResult run(const std::string& text) {
        std::istringstream stream(text);
        std::string line;
        int line_no = 0;
        while (std::getline(stream, line))
            parse_line(line, ++line_no);
        return std::move(result_);
    }

private:
    ParseResult result_;

    void error(int line, const Token& token, std::string message) {
        result_.errors.push_back(
            {line, token.column, std::move(message), std::string(token.text)});
    }

    void missing(int line, const Token& keyword, const char* key) {
        result_.errors.push_back(
            {line, keyword.column, "missing required key", key});
    }

    void parse_line(std::string_view raw, int line) {
        const std::size_t hash = raw.find('#');
        const std::string_view body =
            hash == std::string_view::npos ? raw : raw.substr(0, hash);
        const std::vector<Token> tokens = tokenize(body);
        if (tokens.empty())
            return;
        const std::string_view keyword = tokens[0].text;
        if (keyword == "config")
            parse_config(tokens, line);
        else if (keyword == "ramp")
            parse_ramp(tokens, line);
        else if (keyword == "em")
            parse_em(tokens, line);
        else if (keyword == "source")
            parse_source(tokens, line);
        else if (keyword == "sink")
            parse_sink(tokens, line);
        else
            error(line, tokens[0], "unknown keyword");
    }

    // --- value parsers ----------------------------------------------------

    std::optional<double> number(std::string_view text, std::string_view unit,
                                 int line, const Token& token) {
        if (text.size() <= unit.size() ||
            text.substr(text.size() - unit.size()) != unit) {
            error(line, token,
                  unit.empty() ? "expected a plain number"
                               : "expected a number with unit '" + std::string(unit) + "'");
            return std::nullopt;
        }
        const std::string_view digits = text.substr(0, text.size() - unit.size());
        double value = 0.0;
        const auto [end, ec] =
            std::from_chars(digits.data(), digits.data() + digits.size(), value);
        if (ec != std::errc{} || end != digits.data() + digits.size() ||
            !std::isfinite(value)) {
            error(line, token, "malformed number");
            return std::nullopt;
        }
        return value;
    }

    // (x,y)<unit>
    std::optional<Vec2> point(std::string_view text, std::string_view unit,
                              int line, const Token& token) {
        if (text.size() < unit.size() + 2 ||
            text.substr(text.size() - unit.size()) != unit || text.front() != '(' ||
            text[text.size() - unit.size() - 1] != ')') {
            error(line, token, "expected (x,y)" + std::string(unit));
            return std::nullopt;
        }
        const std::string_view inner = text.substr(1, text.size() - unit.size() - 2);
        const std::size_t comma = inner.find(',');
        if (comma == std::string_view::npos) {
            error(line, token, "expected (x,y)" + std::string(unit));
            return std::nullopt;
        }
        const auto x = number(inner.substr(0, comma), "", line, token);
        const auto y = number(inner.substr(comma + 1), "", line, token);
        if (!x || !y)
            return std::nullopt;
        return Vec2{*x, *y};
    }

    // [lo,hi]<unit>
    std::optional<std::pair<double, double>> interval(std::string_view text,
                                                      std::string_view unit,
                                                      int line, const Token& token) {
        if (text.size() < unit.size() + 2 ||
            text.substr(text.size() - unit.size()) != unit || text.front() != '[' ||
            text[text.size() - unit.size() - 1] != ']') {
            error(line, token, "expected [lo,hi]" + std::string(unit));
            return std::nullopt;
        }
        const std::string_view inner = text.substr(1, text.size() - unit.size() - 2);
        const std::size_t comma = inner.find(',');
        if (comma == std::string_view::npos) {
            error(line, token, "expected [lo,hi]" + std::string(unit));
            return std::nullopt;
        }
        const auto lo = number(inner.substr(0, comma), "", line, token);
        const auto hi = number(inner.substr(comma + 1), "", line, token);
        if (!lo || !hi)
            return std::nullopt;
        return std::pair{*lo, *hi};
    }

    std::optional<int> direction(std::string_view text, int line, const Token& token) {
        if (text == "+x")
            return +1;
        if (text == "-x")
            return -1;
        error(line, token, "expected dir=+x or dir=-x");
        return std::nullopt;
    }

    std::optional<CoatingKind> coating(std::string_view text, int line,
                                       const Token& token) {
        if (text == "bare")
            return CoatingKind::Bare;
        if (text == "ni")
            return CoatingKind::Ni;
        if (text == "uhdpe")
            return CoatingKind::Uhdpe;
        if (text == "ni_uhdpe")
            return CoatingKind::NiUhdpe;
        error(line, token, "unknown coating");
        return std::nullopt;
    }

    std::optional<CollisionModel> model(std::string_view text, int line,
                                        const Token& token) {
        if (text == "ssm")
            return CollisionModel::SoftSphere;
        if (text == "bbm")
            return CollisionModel::BilliardBall;
        if (text == "fusion")
            return CollisionModel::FusionOnly;
        if (text == "annihilate")
            return CollisionModel::Annihilate;
        error(line, token, "unknown collision model");
        return std::nullopt;
    }

    std::optional<bool> on_off(std::string_view text, int line, const Token& token) {
        if (text == "on")
            return true;
        if (text == "off")
            return false;
        error(line, token, "expected on or off");
        return std::nullopt;
    }

    // --- declaration parsers ------------------------------------------------

    struct KeyValue {
        std::string_view key;
        std::string_view value;
        Token token;
    };

    std::vector<KeyValue> key_values(const std::vector<Token>& tokens,
                                     std::size_t first, int line) {
        std::vector<KeyValue> pairs;
        for (std::size_t i = first; i < tokens.size(); ++i) {
            const std::size_t eq = tokens[i].text.find('=');
            if (eq == std::string_view::npos || eq == 0) {
                error(line, tokens[i], "expected key=value");
                continue;
            }
            pairs.push_back({tokens[i].text.substr(0, eq),
                             tokens[i].text.substr(eq + 1), tokens[i]});
        }
        return pairs;
    }

    bool take_name(const std::vector<Token>& tokens, int line, std::string& out) {
        if (tokens.size() < 2 ||
            tokens[1].text.find('=') != std::string_view::npos) {
            error(line, tokens[0], "declaration needs a name");
            return false;
        }
        out = std::string(tokens[1].text);
        return true;
    }

    // Flags a key that appeared twice on one line; returns true when new.
    bool once(bool& seen, int line, const KeyValue& kv) {
        if (seen) {
            error(line, kv.token, "duplicate key");
            return false;
        }
        seen = true;
        return true;
    }

    void parse_config(const std::vector<Token>& tokens, int line) {
        CircuitSpec& spec = result_.spec;
        for (const KeyValue& kv : key_values(tokens, 1, line)) {
            if (kv.key == "dt") {
                if (auto v = number(kv.value, "ms", line, kv.token))
                    spec.config.dt_ms = *v;
            } else if (kv.key == "g") {
                if (auto v = number(kv.value, "mps2", line, kv.token))
                    spec.config.g_mps2 = *v;
            } else if (kv.key == "v_coalesce") {
                if (auto v = number(kv.value, "mps", line, kv.token))
                    spec.config.v_coalesce_mps = *v;
            } else if (kv.key == "e") {
                if (auto v = number(kv.value, "", line, kv.token))
                    spec.config.restitution = *v;
            } else if (kv.key == "tau") {
                if (auto v = number(kv.value, "ms", line, kv.token))
                    spec.config.contact_duration_ms = *v;
            } else if (kv.key == "k") {
                if (auto v = number(kv.value, "", line, kv.token))
                    spec.config.rolling_factor = *v;
            } else if (kv.key == "model") {
                if (auto v = model(kv.value, line, kv.token))
                    spec.config.model = *v;
            } else if (kv.key == "horizon") {
                if (auto v = number(kv.value, "ms", line, kv.token))
                    spec.horizon_ms = *v;
            } else if (kv.key == "evap") {
                if (auto v = on_off(kv.value, line, kv.token))
                    spec.evaporation_enabled = *v;
            } else if (kv.key == "evap_bare") {
                if (auto v = number(kv.value, "mgpm", line, kv.token))
                    spec.evaporation.bare = *v;
            } else if (kv.key == "evap_ni") {
                if (auto v = number(kv.value, "mgpm", line, kv.token))
                    spec.evaporation.ni = *v;
            } else if (kv.key == "evap_uhdpe") {
                if (auto v = number(kv.value, "mgpm", line, kv.token))
                    spec.evaporation.uhdpe = *v;
            } else if (kv.key == "evap_ni_uhdpe") {
                if (auto v = number(kv.value, "mgpm", line, kv.token))
                    spec.evaporation.ni_uhdpe = *v;
            } else {
                error(line, kv.token, "unknown config key");
            }
        }
    }

    void parse_ramp(const std::vector<Token>& tokens, int line) {
        RampDecl decl;
        if (!take_name(tokens, line, decl.name))
            return;
        for (const RampDecl& other : result_.spec.ramps)
            if (other.name == decl.name)
                error(line, tokens[1], "duplicate ramp name");
        bool has_anchor = false, has_slope = false, has_dir = false,
             has_length = false, has_k = false;
        for (const KeyValue& kv : key_values(tokens, 2, line)) {
            if (kv.key == "anchor" && once(has_anchor, line, kv)) {
                if (auto v = point(kv.value, "mm", line, kv.token))
                    decl.anchor = *v;
            } else if (kv.key == "slope" && once(has_slope, line, kv)) {
                if (auto v = number(kv.value, "deg", line, kv.token))
                    decl.slope_deg = *v;
            } else if (kv.key == "dir" && once(has_dir, line, kv)) {
                if (auto v = direction(kv.value, line, kv.token))
                    decl.dir = *v;
            } else if (kv.key == "length" && once(has_length, line, kv)) {
                if (auto v = number(kv.value, "mm", line, kv.token))
                    decl.length_mm = *v;
            } else if (kv.key == "k" && once(has_k, line, kv)) {
                if (auto v = number(kv.value, "", line, kv.token))
                    decl.rolling_factor = *v;
            } else if (kv.key != "anchor" && kv.key != "slope" && kv.key != "dir" &&
                       kv.key != "length" && kv.key != "k") {
                error(line, kv.token, "unknown ramp key");
            }
        }
        if (!has_anchor)
            missing(line, tokens[0], "anchor");
        if (!has_slope)
            missing(line, tokens[0], "slope");
        if (!has_dir)
            missing(line, tokens[0], "dir");
        if (!has_length)
            missing(line, tokens[0], "length");
        result_.spec.ramps.push_back(std::move(decl));
    }

    void parse_em(const std::vector<Token>& tokens, int line) {
        LatchDecl decl;
        if (!take_name(tokens, line, decl.name))
            return;
        for (const LatchDecl& other : result_.spec.latches)
            if (other.name == decl.name)
                error(line, tokens[1], "duplicate em name");
        bool has_ramp = false, has_at = false, has_radius = false;
        for (const KeyValue& kv : key_values(tokens, 2, line)) {
            if (kv.key == "ramp" && once(has_ramp, line, kv)) {
                decl.ramp = std::string(kv.value);
            } else if (kv.key == "at" && once(has_at, line, kv)) {
                if (auto v = number(kv.value, "mm", line, kv.token))
                    decl.hold_arc_mm = *v;
            } else if (kv.key == "radius" && once(has_radius, line, kv)) {
                if (auto v = number(kv.value, "mm", line, kv.token))
                    decl.capture_radius_mm = *v;
            } else if (kv.key == "window") {
                if (auto v = interval(kv.value, "ms", line, kv.token))
                    decl.windows.push_back({v->first, v->second});
            } else if (kv.key != "ramp" && kv.key != "at" && kv.key != "radius") {
                error(line, kv.token, "unknown em key");
            }
        }
        if (!has_ramp)
            missing(line, tokens[0], "ramp");
        if (!has_at)
            missing(line, tokens[0], "at");
        if (decl.windows.empty())
            missing(line, tokens[0], "window");
        result_.spec.latches.push_back(std::move(decl));
    }

    void parse_source(const std::vector<Token>& tokens, int line) {
        SourceDecl decl;
        if (!take_name(tokens, line, decl.name))
            return;
        for (const SourceDecl& other : result_.spec.sources)
            if (other.name == decl.name)
                error(line, tokens[1], "duplicate source name");
        bool has_ramp = false, has_input = false, has_at = false,
             has_volume = false, has_coating = false, has_rate = false;
        for (const KeyValue& kv : key_values(tokens, 2, line)) {
            if (kv.key == "ramp" && once(has_ramp, line, kv)) {
                decl.ramp = std::string(kv.value);
            } else if (kv.key == "input" && once(has_input, line, kv)) {
                decl.input = std::string(kv.value);
            } else if (kv.key == "at" && once(has_at, line, kv)) {
                if (auto v = number(kv.value, "mm", line, kv.token))
                    decl.entry_arc_mm = *v;
            } else if (kv.key == "volume" && once(has_volume, line, kv)) {
                if (auto v = number(kv.value, "uL", line, kv.token))
                    decl.volume_ul = *v;
            } else if (kv.key == "coating" && once(has_coating, line, kv)) {
                if (auto v = coating(kv.value, line, kv.token))
                    decl.coating = *v;
            } else if (kv.key == "t") {
                if (auto v = number(kv.value, "ms", line, kv.token))
                    decl.times_ms.push_back(*v);
            } else if (kv.key == "rate" && once(has_rate, line, kv)) {
                if (auto v = number(kv.value, "mLph", line, kv.token))
                    decl.rate_ml_per_h = *v;
            } else if (kv.key != "ramp" && kv.key != "input" && kv.key != "at" &&
                       kv.key != "volume" && kv.key != "coating" && kv.key != "rate") {
                error(line, kv.token, "unknown source key");
            }
        }
        if (!has_ramp)
            missing(line, tokens[0], "ramp");
        if (!has_input)
            missing(line, tokens[0], "input");
        if (!has_volume)
            missing(line, tokens[0], "volume");
        if (!has_coating)
            missing(line, tokens[0], "coating");
        result_.spec.sources.push_back(std::move(decl));
    }

    void parse_sink(const std::vector<Token>& tokens, int line) {
        SinkDecl decl;
        if (!take_name(tokens, line, decl.name))
            return;
        for (const SinkDecl& other : result_.spec.sinks)
            if (other.name == decl.name)
                error(line, tokens[1], "duplicate sink name");
        bool has_label = false, has_x = false, has_y = false;
        for (const KeyValue& kv : key_values(tokens, 2, line)) {
            if (kv.key == "label" && once(has_label, line, kv)) {
                decl.label = std::string(kv.value);
            } else if (kv.key == "x" && once(has_x, line, kv)) {
                if (auto v = interval(kv.value, "mm", line, kv.token)) {
                    decl.x_lo = v->first;
                    decl.x_hi = v->second;
                }
            } else if (kv.key == "y" && once(has_y, line, kv)) {
                if (auto v = number(kv.value, "mm", line, kv.token))
                    decl.floor_y = *v;
            } else if (kv.key != "label" && kv.key != "x" && kv.key != "y") {
                error(line, kv.token, "unknown sink key");
            }
        }
        if (!has_label)
            missing(line, tokens[0], "label");
        if (!has_x)
            missing(line, tokens[0], "x");
        if (!has_y)
            missing(line, tokens[0], "y");
        result_.spec.sinks.push_back(std::move(decl));
    }
};

std::string num(double v) {
    char buf[64];
    const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    (void)ec;
    return std::string(buf, end);
}

} // namespace

std::vector<std::string> CircuitSpec::input_order() const {
    std::vector<std::string> order;
    for (const SourceDecl& source : sources)
        if (std::find(order.begin(), order.end(), source.input) == order.end())
            order.push_back(source.input);
    return order;
}

int CircuitSpec::ramp_index(const std::string& name) const {
    for (std::size_t i = 0; i < ramps.size(); ++i)
        if (ramps[i].name == name)
            return static_cast<int>(i);
    return -1;
}

ParseResult parse_circuit(const std::string& text) {
    return Parser{}.run(text);
}

ParseResult parse_circuit_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        ParseResult result;
        result.errors.push_back({0, 0, "cannot open file", path});
        return result;
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_circuit(buffer.str());
}

std::vector<std::string> validate(const CircuitSpec& spec) {
    std::vector<std::string> errors;
    const auto err = [&errors](std::string message) {
        errors.push_back(std::move(message));
    };

    if (!(spec.config.dt_ms > 0.0))
        err("config: dt must be positive");
    if (!(spec.config.v_coalesce_mps > 0.0))
        err("config: v_coalesce must be positive");
    if (spec.config.restitution < 0.0 || spec.config.restitution > 1.0)
        err("config: e must lie in [0,1]");
    if (spec.config.contact_duration_ms < 0.0)
        err("config: tau must be non-negative");
    if (!(spec.config.rolling_factor > 0.0) || spec.config.rolling_factor > 1.0)
        err("config: k must lie in (0,1]");
    if (!(spec.horizon_ms > 0.0))
        err("config: horizon must be positive");
    for (double rate : {spec.evaporation.bare, spec.evaporation.ni,
                        spec.evaporation.uhdpe, spec.evaporation.ni_uhdpe})
        if (!(rate > 0.0))
            err("config: evaporation rates must be positive");

    for (const RampDecl& ramp : spec.ramps) {
        if (!(ramp.slope_deg > 0.0) || !(ramp.slope_deg < 90.0))
            err("ramp " + ramp.name + ": slope must lie in (0,90) degrees");
        if (!(ramp.length_mm > 0.0))
            err("ramp " + ramp.name + ": length must be positive");
        if (ramp.rolling_factor &&
            (!(*ramp.rolling_factor > 0.0) || *ramp.rolling_factor > 1.0))
            err("ramp " + ramp.name + ": k must lie in (0,1]");
    }

    for (const LatchDecl& latch : spec.latches) {
        const int ramp = spec.ramp_index(latch.ramp);
        if (ramp < 0) {
            err("em " + latch.name + ": unknown ramp '" + latch.ramp + "'");
        } else if (latch.hold_arc_mm < 0.0 ||
                   latch.hold_arc_mm > spec.ramps[ramp].length_mm) {
            err("em " + latch.name + ": hold position lies off the ramp");
        }
        if (latch.capture_radius_mm && !(*latch.capture_radius_mm > 0.0))
            err("em " + latch.name + ": radius must be positive");
        double prev_off = -1.0;
        for (const LatchWindow& w : latch.windows) {
            if (w.on_ms < 0.0 || !(w.off_ms > w.on_ms))
                err("em " + latch.name + ": window must satisfy 0 <= on < off");
            if (w.on_ms < prev_off)
                err("em " + latch.name + ": windows must be ordered and disjoint");
            prev_off = w.off_ms;
        }
    }

    if (spec.sources.empty())
        err("circuit needs at least one source");
    std::vector<std::string> inputs;
    for (const SourceDecl& source : spec.sources) {
        const int ramp = spec.ramp_index(source.ramp);
        if (ramp < 0) {
            err("source " + source.name + ": unknown ramp '" + source.ramp + "'");
        } else if (source.entry_arc_mm < 0.0 ||
                   source.entry_arc_mm > spec.ramps[ramp].length_mm) {
            err("source " + source.name + ": entry position lies off the ramp");
        }
        if (!(source.volume_ul > 0.0))
            err("source " + source.name + ": volume must be positive");
        if (std::find(inputs.begin(), inputs.end(), source.input) != inputs.end())
            err("source " + source.name + ": duplicate input '" + source.input + "'");
        inputs.push_back(source.input);
        if (source.times_ms.empty() && !(source.rate_ml_per_h > 0.0))
            err("source " + source.name + ": needs t= times or a rate");
        if (!source.times_ms.empty() && source.rate_ml_per_h > 0.0)
            err("source " + source.name + ": t= times and rate are exclusive");
        for (std::size_t i = 0; i + 1 < source.times_ms.size(); ++i)
            if (!(source.times_ms[i] < source.times_ms[i + 1])) {
                err("source " + source.name + ": times must be strictly increasing");
                break;
            }
        for (double t : source.times_ms)
            if (t < 0.0) {
                err("source " + source.name + ": times must be non-negative");
                break;
            }
    }

    if (spec.sinks.empty())
        err("circuit needs at least one sink");
    for (const SinkDecl& sink : spec.sinks)
        if (!(sink.x_lo < sink.x_hi))
            err("sink " + sink.name + ": interval must satisfy lo < hi");
    for (std::size_t i = 0; i < spec.sinks.size(); ++i)
        for (std::size_t j = i + 1; j < spec.sinks.size(); ++j) {
            const SinkDecl& a = spec.sinks[i];
            const SinkDecl& b = spec.sinks[j];
            if (a.x_lo < b.x_hi && b.x_lo < a.x_hi)
                err("sinks " + a.name + " and " + b.name + " overlap");
        }

    return errors;
}

std::string serialize(const CircuitSpec& spec) {
    std::string out;
    out += "config dt=" + num(spec.config.dt_ms) + "ms";
    out += " g=" + num(spec.config.g_mps2) + "mps2";
    out += " v_coalesce=" + num(spec.config.v_coalesce_mps) + "mps";
    out += " e=" + num(spec.config.restitution);
    out += " tau=" + num(spec.config.contact_duration_ms) + "ms";
    out += " k=" + num(spec.config.rolling_factor);
    out += std::string(" model=") + model_name(spec.config.model);
    out += " horizon=" + num(spec.horizon_ms) + "ms";
    out += std::string(" evap=") + (spec.evaporation_enabled ? "on" : "off");
    out += " evap_bare=" + num(spec.evaporation.bare) + "mgpm";
    out += " evap_ni=" + num(spec.evaporation.ni) + "mgpm";
    out += " evap_uhdpe=" + num(spec.evaporation.uhdpe) + "mgpm";
    out += " evap_ni_uhdpe=" + num(spec.evaporation.ni_uhdpe) + "mgpm";
    out += "\n";
    for (const RampDecl& ramp : spec.ramps) {
        out += "ramp " + ramp.name;
        out += " anchor=(" + num(ramp.anchor.x) + "," + num(ramp.anchor.y) + ")mm";
        out += " slope=" + num(ramp.slope_deg) + "deg";
        out += std::string(" dir=") + (ramp.dir > 0 ? "+x" : "-x");
        out += " length=" + num(ramp.length_mm) + "mm";
        if (ramp.rolling_factor)
            out += " k=" + num(*ramp.rolling_factor);
        out += "\n";
    }
    for (const LatchDecl& latch : spec.latches) {
        out += "em " + latch.name;
        out += " ramp=" + latch.ramp;
        out += " at=" + num(latch.hold_arc_mm) + "mm";
        if (latch.capture_radius_mm)
            out += " radius=" + num(*latch.capture_radius_mm) + "mm";
        for (const LatchWindow& w : latch.windows)
            out += " window=[" + num(w.on_ms) + "," + num(w.off_ms) + "]ms";
        out += "\n";
    }
    for (const SourceDecl& source : spec.sources) {
        out += "source " + source.name;
        out += " ramp=" + source.ramp;
        out += " input=" + source.input;
        out += " at=" + num(source.entry_arc_mm) + "mm";
        out += " volume=" + num(source.volume_ul) + "uL";
        out += std::string(" coating=") + coating_name(source.coating);
        for (double t : source.times_ms)
            out += " t=" + num(t) + "ms";
        if (source.rate_ml_per_h > 0.0)
            out += " rate=" + num(source.rate_ml_per_h) + "mLph";
        out += "\n";
    }
    for (const SinkDecl& sink : spec.sinks) {
        out += "sink " + sink.name;
        out += " label=" + sink.label;
        out += " x=[" + num(sink.x_lo) + "," + num(sink.x_hi) + "]mm";
        out += " y=" + num(sink.floor_y) + "mm";
        out += "\n";
    }
    return out;
}

World build_world(const CircuitSpec& spec,
                  const std::vector<std::pair<std::string, int>>& assignment) {
    World world;
    world.config = spec.config;
    world.evaporation = spec.evaporation;
    world.evaporation_enabled = spec.evaporation_enabled;
    world.horizon_ms = spec.horizon_ms;

    for (const RampDecl& decl : spec.ramps) {
        RampSegment ramp;
        ramp.anchor = decl.anchor;
        ramp.slope_deg = decl.slope_deg;
        ramp.dir = decl.dir;
        ramp.length_mm = decl.length_mm;
        ramp.rolling_factor = decl.rolling_factor.value_or(spec.config.rolling_factor);
        world.ramps.push_back(ramp);
    }
    for (const LatchDecl& decl : spec.latches) {
        ElectromagnetLatch latch;
        latch.ramp = spec.ramp_index(decl.ramp);
        if (latch.ramp < 0)
            throw std::invalid_argument("em " + decl.name + ": unknown ramp '" +
                                        decl.ramp + "'");
        latch.hold_arc_mm = decl.hold_arc_mm;
        if (decl.capture_radius_mm)
            latch.capture_radius_mm = *decl.capture_radius_mm;
        latch.windows = decl.windows;
        world.latches.push_back(latch);
    }
    for (const SourceDecl& decl : spec.sources) {
        DropletSource source;
        source.ramp = spec.ramp_index(decl.ramp);
        if (source.ramp < 0)
            throw std::invalid_argument("source " + decl.name + ": unknown ramp '" +
                                        decl.ramp + "'");
        source.entry_arc_mm = decl.entry_arc_mm;
        source.volume_ul = decl.volume_ul;
        source.coating = CoatingSpec::from_kind(decl.coating);
        source.times_ms = decl.times_ms;
        source.rate_ml_per_h = decl.rate_ml_per_h;
        world.sources.push_back(source);
    }
    for (const SinkDecl& decl : spec.sinks)
        world.sinks.push_back({decl.label, decl.x_lo, decl.x_hi, decl.floor_y});

    const std::vector<std::string> inputs = spec.input_order();
    for (const auto& [name, bit] : assignment) {
        (void)bit;
        if (std::find(inputs.begin(), inputs.end(), name) == inputs.end())
            throw std::invalid_argument("assignment names unknown input '" + name + "'");
    }
    const auto bit_of = [&assignment](const std::string& input) {
        for (const auto& [name, bit] : assignment)
            if (name == input)
                return bit;
        throw std::invalid_argument("assignment misses input '" + input + "'");
    };

    for (std::size_t si = 0; si < spec.sources.size(); ++si) {
        if (bit_of(spec.sources[si].input) == 0)
            continue;
        for (double t : emission_times(world.sources[si], world.horizon_ms))
            world.pending.push_back({static_cast<int>(si), t});
    }
    std::sort(world.pending.begin(), world.pending.end(),
              [](const PendingEmission& a, const PendingEmission& b) {
                  if (a.time_ms != b.time_ms)
                      return a.time_ms > b.time_ms;
                  return a.source > b.source;
              });
    // Droplets due at t = 0 exist from the start.
    while (!world.pending.empty() && world.pending.back().time_ms <= 0.0) {
        const int source = world.pending.back().source;
        world.pending.pop_back();
        world.emit(source);
    }
    return world;
}

} // namespace lmc
