// Command line front end: simulate one assignment, sweep a truth
// table, or re-run the built-in acceptance checks.

#include <cstdio>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "lmc/logic.hpp"
#include "lmc/netlist.hpp"
#include "lmc/physics.hpp"
#include "lmc/repro.hpp"
#include "lmc/svg.hpp"
#include "lmc/trace.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitBadInput = 1;
constexpr int kExitRuntime = 2;

struct ParsedCircuit {
    lmc::CircuitSpec spec;
    bool ok = false;
};

ParsedCircuit load_or_complain(const std::string& path) {
    ParsedCircuit out;
    const lmc::ParseResult parsed = lmc::parse_circuit_file(path);
    if (!parsed.ok()) {
        for (const lmc::ParseError& e : parsed.errors) {
            std::fprintf(stderr, "%s:%d:%d: %s", path.c_str(), e.line, e.column, e.message.c_str());
            if (!e.token.empty()) {
                std::fprintf(stderr, " (near '%s')", e.token.c_str());
            }
            std::fprintf(stderr, "\n");
        }
        return out;
    }
    const std::vector<std::string> problems = lmc::validate(parsed.spec);
    if (!problems.empty()) {
        for (const std::string& p : problems) {
            std::fprintf(stderr, "%s: %s\n", path.c_str(), p.c_str());
        }
        return out;
    }
    out.spec = parsed.spec;
    out.ok = true;
    return out;
}

bool parse_assignment(const std::string& text, lmc::Assignment& out) {
    std::size_t start = 0;
    while (start < text.size()) {
        std::size_t comma = text.find(',', start);
        if (comma == std::string::npos) {
            comma = text.size();
        }
        const std::string item = text.substr(start, comma - start);
        const std::size_t eq = item.find('=');
        if (eq == std::string::npos || eq == 0 || eq + 1 >= item.size()) {
            std::fprintf(stderr, "bad --in entry '%s', want NAME=0 or NAME=1\n", item.c_str());
            return false;
        }
        const std::string name = item.substr(0, eq);
        const std::string bit = item.substr(eq + 1);
        if (bit != "0" && bit != "1") {
            std::fprintf(stderr, "bad --in bit '%s' for %s, want 0 or 1\n", bit.c_str(), name.c_str());
            return false;
        }
        out.emplace_back(name, bit == "1" ? 1 : 0);
        start = comma + 1;
    }
    return true;
}

std::optional<lmc::CollisionModel> model_from_name(const std::string& name) {
    static const std::map<std::string, lmc::CollisionModel> table = {
        {"ssm", lmc::CollisionModel::SoftSphere},
        {"bbm", lmc::CollisionModel::BilliardBall},
        {"fusion", lmc::CollisionModel::FusionOnly},
        {"annihilate", lmc::CollisionModel::Annihilate},
    };
    const auto it = table.find(name);
    if (it == table.end()) {
        return std::nullopt;
    }
    return it->second;
}

int run_simulate(const std::string& path, const std::string& in, const std::string& trace_path,
                 const std::string& svg_path, double until_ms, const std::string& model_name,
                 double sample_hz) {
    const ParsedCircuit circuit = load_or_complain(path);
    if (!circuit.ok) {
        return kExitBadInput;
    }

    lmc::Assignment assignment;
    if (in.empty()) {
        for (const std::string& input : circuit.spec.input_order()) {
            assignment.emplace_back(input, 1);
        }
    } else if (!parse_assignment(in, assignment)) {
        return kExitBadInput;
    }

    lmc::RunOptions options;
    if (!model_name.empty()) {
        options.model_override = model_from_name(model_name);
        if (!options.model_override) {
            std::fprintf(stderr, "unknown model '%s'\n", model_name.c_str());
            return kExitBadInput;
        }
    }
    if (until_ms > 0.0) {
        options.horizon_ms = until_ms;
    }

    lmc::TraceRecorder recorder(sample_hz);
    const bool tracing = !trace_path.empty() || !svg_path.empty();
    if (tracing) {
        options.observer = [&recorder](const lmc::World& w) { recorder.observe(w); };
    }

    lmc::RunResult run;
    try {
        run = lmc::run_circuit(circuit.spec, assignment, options);
    } catch (const lmc::SimulationError& e) {
        std::fprintf(stderr, "simulation failed: %s\n", e.what());
        return kExitRuntime;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "%s\n", e.what());
        return kExitBadInput;
    }

    if (!trace_path.empty()) {
        lmc::write_csv(trace_path, recorder.records());
    }
    if (!svg_path.empty()) {
        lmc::write_svg(svg_path, circuit.spec, recorder.records());
    }

    const lmc::ExitReport report = lmc::classify_exit(run.world, circuit.spec);
    if (run.quiesced) {
        std::printf("quiesced at %.2f ms after %lld ticks\n", run.world.time_ms,
                    static_cast<long long>(run.world.tick));
    } else {
        std::printf("hit the %.2f ms horizon with marbles still moving\n", run.world.horizon_ms);
    }
    for (const auto& [label, occupied] : report.channel) {
        std::printf("channel %s: %d\n", label.c_str(), occupied);
    }
    for (const lmc::Marble& m : run.world.marbles) {
        std::printf("marble %d: %s at (%.3f, %.3f) mm\n", m.id, lmc::state_name(m.state),
                    m.pos.x, m.pos.y);
    }
    for (const std::string& e : report.errors) {
        std::printf("error: %s\n", e.c_str());
    }
    return report.ok() ? kExitOk : kExitRuntime;
}

int run_truthtable(const std::string& path, const std::string& expect, const std::string& csv_path) {
    const ParsedCircuit circuit = load_or_complain(path);
    if (!circuit.ok) {
        return kExitBadInput;
    }

    const lmc::TruthTable table = lmc::evaluate_truth_table(circuit.spec);
    std::fputs(lmc::render_text(table).c_str(), stdout);
    if (!csv_path.empty()) {
        std::FILE* f = std::fopen(csv_path.c_str(), "wb");
        if (f == nullptr) {
            std::fprintf(stderr, "cannot write %s\n", csv_path.c_str());
            return kExitRuntime;
        }
        const std::string csv = lmc::render_csv(table);
        std::fwrite(csv.data(), 1, csv.size(), f);
        std::fclose(f);
    }

    bool clean = true;
    for (const lmc::TruthTableRow& row : table.rows) {
        clean = clean && row.exits.ok();
    }

    int mismatches = 0;
    if (!expect.empty()) {
        for (const lmc::TruthTableRow& row : table.rows) {
            bool ok = true;
            if (expect == "gate") {
                const lmc::GateBits want = lmc::gate_semantics(row.bits.at(0), row.bits.at(1));
                ok = row.exits.channel.count("Ab") != 0 && row.exits.channel.count("aB") != 0 &&
                     row.exits.channel.count("AB") != 0 &&
                     row.exits.channel.at("Ab") == want.pass_a &&
                     row.exits.channel.at("aB") == want.pass_b &&
                     row.exits.channel.at("AB") == want.collide;
            } else {
                const lmc::AdderBits want =
                    expect == "half" ? lmc::half_adder(row.bits.at(0), row.bits.at(1))
                                     : lmc::full_adder(row.bits.at(0), row.bits.at(1), row.bits.at(2));
                ok = row.exits.channel.count("SUM") != 0 && row.exits.channel.count("CARRY") != 0 &&
                     row.exits.channel.at("SUM") == want.sum &&
                     row.exits.channel.at("CARRY") == want.carry;
            }
            if (!ok) {
                std::string bits;
                for (const int b : row.bits) {
                    bits += b ? '1' : '0';
                }
                std::fprintf(stderr, "row %s does not match the %s reference\n", bits.c_str(),
                             expect.c_str());
                mismatches += 1;
            }
        }
    }

    if (!clean) {
        return kExitRuntime;
    }
    return mismatches == 0 ? kExitOk : kExitBadInput;
}

int run_repro(const std::string& fixtures, const std::string& only, bool as_json) {
    const std::vector<lmc::CriterionResult> results = lmc::run_criteria(fixtures, only);
    if (as_json) {
        nlohmann::json doc = nlohmann::json::array();
        for (const lmc::CriterionResult& r : results) {
            doc.push_back({{"id", r.id}, {"name", r.name}, {"pass", r.pass}, {"details", r.details}});
        }
        std::printf("%s\n", doc.dump(2).c_str());
    } else {
        for (const lmc::CriterionResult& r : results) {
            std::printf("%2d %-24s %s  %s\n", r.id, r.name.c_str(), r.pass ? "PASS" : "FAIL",
                        r.details.c_str());
        }
    }
    int failed = 0;
    for (const lmc::CriterionResult& r : results) {
        failed += r.pass ? 0 : 1;
    }
    if (!as_json) {
        std::printf("%zu/%zu passed\n", results.size() - static_cast<std::size_t>(failed),
                    results.size());
    }
    return failed == 0 ? kExitOk : kExitBadInput;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"liquid marble circuit simulator"};
    app.require_subcommand(1);

    std::string sim_file;
    std::string sim_in;
    std::string sim_trace;
    std::string sim_svg;
    std::string sim_model;
    double sim_until = 0.0;
    double sim_sample_hz = 120.0;
    bool sim_seedless = false;
    CLI::App* sim = app.add_subcommand("simulate", "run one input assignment");
    sim->add_option("netlist", sim_file, "circuit description file")->required();
    sim->add_option("--in", sim_in, "input bits, e.g. A=1,B=0 (default: all 1)");
    sim->add_option("--trace", sim_trace, "write a CSV trace to this path");
    sim->add_option("--svg", sim_svg, "write an SVG trajectory plot to this path");
    sim->add_option("--until", sim_until, "override the settle horizon in ms");
    sim->add_option("--model", sim_model, "collision model: ssm, bbm, fusion, annihilate");
    sim->add_option("--sample-hz", sim_sample_hz, "trace sampling rate (default 120)");
    sim->add_flag("--seedless", sim_seedless,
                  "accepted for compatibility; every run is already deterministic");

    std::string tt_file;
    std::string tt_expect;
    std::string tt_csv;
    CLI::App* tt = app.add_subcommand("truthtable", "evaluate every input assignment");
    tt->add_option("netlist", tt_file, "circuit description file")->required();
    tt->add_option("--expect", tt_expect, "check against a reference: gate, half, full")
        ->check(CLI::IsMember({"gate", "half", "full"}));
    tt->add_option("--csv", tt_csv, "also write the table as CSV to this path");

    std::string rep_only;
    std::string rep_fixtures = LMC_FIXTURE_DIR;
    bool rep_json = false;
    CLI::App* rep = app.add_subcommand("repro", "re-run the acceptance checks");
    rep->add_option("--only", rep_only, "comma-separated criterion ids or name fragments");
    rep->add_option("--fixtures", rep_fixtures, "fixture directory");
    rep->add_flag("--json", rep_json, "emit results as JSON");

    CLI11_PARSE(app, argc, argv);

    try {
        if (sim->parsed()) {
            (void)sim_seedless;
            return run_simulate(sim_file, sim_in, sim_trace, sim_svg, sim_until, sim_model,
                               sim_sample_hz);
        }
        if (tt->parsed()) {
            return run_truthtable(tt_file, tt_expect, tt_csv);
        }
        if (rep->parsed()) {
            return run_repro(rep_fixtures, rep_only, rep_json);
        }
    } catch (const lmc::SimulationError& e) {
        std::fprintf(stderr, "simulation failed: %s\n", e.what());
        return kExitRuntime;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "%s\n", e.what());
        return kExitBadInput;
    }
    return kExitOk;
}
