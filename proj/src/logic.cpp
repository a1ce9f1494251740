#include "lmc/logic.hpp"

#include <algorithm>
#include <cstdio>
#include <future>

namespace lmc {

GateBits gate_semantics(int a, int b) {
    GateBits bits;
    bits.pass_a = (a && !b) ? 1 : 0;
    bits.pass_b = (!a && b) ? 1 : 0;
    bits.collide = (a && b) ? 1 : 0;
    return bits;
}

AdderBits half_adder(int a, int b) {
    const GateBits g = gate_semantics(a, b);
    return {g.pass_a | g.pass_b, g.collide};
}

AdderBits full_adder(int a, int b, int c_in) {
    // Cascade of two collision gates; the survivor of the first gate
    // carries a XOR b into the second. OR stands in for XOR on the
    // carry side because both collide channels can never fire at once.
    const GateBits g1 = gate_semantics(a, b);
    const int survivor = g1.pass_a | g1.pass_b;
    const GateBits g2 = gate_semantics(survivor, c_in);
    return {g2.pass_a | g2.pass_b, g1.collide | g2.collide};
}

RunResult run_circuit(const CircuitSpec& spec, const Assignment& assignment,
                      const RunOptions& options) {
    World world = build_world(spec, assignment);
    if (options.model_override)
        world.config.model = *options.model_override;
    if (options.horizon_ms)
        world.horizon_ms = *options.horizon_ms;
    RunResult result;
    result.quiesced = run_to_quiescence(world, options.observer);
    result.world = std::move(world);
    return result;
}

namespace {

std::string lost_message(const Marble& m) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "marble %d left the circuit at (%.3f, %.3f)",
                  m.id, m.pos.x, m.pos.y);
    return buf;
}

} // namespace

ExitReport classify_exit(const World& world, const CircuitSpec& spec) {
    ExitReport report;
    for (const SinkDecl& sink : spec.sinks)
        report.channel.emplace(sink.label, 0);
    report.sink_count.assign(spec.sinks.size(), 0);
    for (const Marble& m : world.marbles) {
        if (const Sunk* sunk = std::get_if<Sunk>(&m.state)) {
            if (sunk->sink < 0) {
                report.errors.push_back(lost_message(m));
            } else {
                report.sink_count[sunk->sink] += 1;
                report.channel[spec.sinks[sunk->sink].label] = 1;
            }
        } else if (!m.terminal()) {
            // Merged inputs are carried by their successor; anything
            // still moving at the end of the run is a timeout.
            report.timeout = true;
        }
    }
    return report;
}

TruthTable evaluate_truth_table(const CircuitSpec& spec, const RunOptions& options) {
    TruthTable table;
    table.inputs = spec.input_order();
    for (const SinkDecl& sink : spec.sinks)
        if (std::find(table.channels.begin(), table.channels.end(), sink.label) ==
            table.channels.end())
            table.channels.push_back(sink.label);

    const std::size_t n = table.inputs.size();
    const std::size_t rows = std::size_t{1} << n;
    const auto run_row = [&spec, &options, &table, n](std::size_t row) {
        Assignment assignment;
        for (std::size_t j = 0; j < n; ++j)
            assignment.emplace_back(table.inputs[j],
                                    static_cast<int>((row >> (n - 1 - j)) & 1));
        RunOptions row_options;
        row_options.model_override = options.model_override;
        row_options.horizon_ms = options.horizon_ms;
        const RunResult result = run_circuit(spec, assignment, row_options);
        TruthTableRow out;
        for (const auto& [name, bit] : assignment) {
            (void)name;
            out.bits.push_back(bit);
        }
        out.exits = classify_exit(result.world, spec);
        if (!result.quiesced)
            out.exits.timeout = true;
        return out;
    };

    if (rows > 16) {
        for (std::size_t row = 0; row < rows; ++row)
            table.rows.push_back(run_row(row));
        return table;
    }
    std::vector<std::future<TruthTableRow>> futures;
    futures.reserve(rows);
    for (std::size_t row = 0; row < rows; ++row)
        futures.push_back(std::async(std::launch::async, run_row, row));
    for (auto& future : futures)
        table.rows.push_back(future.get());
    return table;
}

namespace {

std::string row_status(const ExitReport& exits) {
    if (!exits.errors.empty())
        return "lost";
    if (exits.timeout)
        return "timeout";
    return "ok";
}

} // namespace

std::string render_text(const TruthTable& table) {
    std::string out;
    const auto pad = [](const std::string& text, std::size_t width) {
        std::string cell = text;
        while (cell.size() < width)
            cell.insert(cell.begin(), ' ');
        return cell;
    };
    for (const std::string& input : table.inputs)
        out += " " + input;
    out += " |";
    for (const std::string& channel : table.channels)
        out += " " + channel;
    out += " | status\n";
    for (const TruthTableRow& row : table.rows) {
        for (std::size_t j = 0; j < table.inputs.size(); ++j)
            out += " " + pad(std::to_string(row.bits[j]), table.inputs[j].size());
        out += " |";
        for (const std::string& channel : table.channels) {
            const auto it = row.exits.channel.find(channel);
            const int bit = it == row.exits.channel.end() ? 0 : it->second;
            out += " " + pad(std::to_string(bit), channel.size());
        }
        out += " | " + row_status(row.exits) + "\n";
    }
    for (const TruthTableRow& row : table.rows)
        for (const std::string& error : row.exits.errors) {
            out += "  row";
            for (int bit : row.bits)
                out += " " + std::to_string(bit);
            out += ": " + error + "\n";
        }
    return out;
}

std::string render_csv(const TruthTable& table) {
    std::string out;
    for (const std::string& input : table.inputs)
        out += input + ",";
    for (const std::string& channel : table.channels)
        out += channel + ",";
    out += "status\n";
    for (const TruthTableRow& row : table.rows) {
        for (int bit : row.bits)
            out += std::to_string(bit) + ",";
        for (const std::string& channel : table.channels) {
            const auto it = row.exits.channel.find(channel);
            out += std::to_string(it == row.exits.channel.end() ? 0 : it->second) + ",";
        }
        out += row_status(row.exits) + "\n";
    }
    return out;
}

const char* observed_model_name(ObservedModel model) {
    switch (model) {
    case ObservedModel::SoftSphere:    return "ssm";
    case ObservedModel::BilliardBall:  return "bbm";
    case ObservedModel::Indeterminate: return "indeterminate";
    }
    return "?";
}

ObservedModel classify_model(const FinalPair& collided, const FinalPair& single_a,
                             const FinalPair& single_b) {
    if (collided.xs.empty() || single_a.xs.size() != 1 || single_b.xs.size() != 1)
        return ObservedModel::Indeterminate;
    const double lo = std::min(single_a.xs.front(), single_b.xs.front());
    const double hi = std::max(single_a.xs.front(), single_b.xs.front());
    const bool inside =
        std::all_of(collided.xs.begin(), collided.xs.end(),
                    [lo, hi](double x) { return x > lo && x < hi; });
    if (inside)
        return ObservedModel::SoftSphere;
    if (collided.xs.size() >= 2) {
        const auto [mn, mx] =
            std::minmax_element(collided.xs.begin(), collided.xs.end());
        if (*mn < lo && *mx > hi)
            return ObservedModel::BilliardBall;
    }
    return ObservedModel::Indeterminate;
}

namespace {

FinalPair sunk_positions(const World& world) {
    FinalPair finals;
    for (const Marble& m : world.marbles)
        if (const Sunk* sunk = std::get_if<Sunk>(&m.state); sunk && sunk->sink >= 0)
            finals.xs.push_back(m.pos.x);
    std::sort(finals.xs.begin(), finals.xs.end());
    return finals;
}

} // namespace

ObservedModel classify_model(const CircuitSpec& spec, const RunOptions& options) {
    const std::vector<std::string> inputs = spec.input_order();
    if (inputs.size() != 2)
        throw std::invalid_argument("model classification needs a two-input circuit");
    const auto finals = [&](int a, int b) {
        RunOptions row_options;
        row_options.model_override = options.model_override;
        row_options.horizon_ms = options.horizon_ms;
        return sunk_positions(
            run_circuit(spec, {{inputs[0], a}, {inputs[1], b}}, row_options).world);
    };
    return classify_model(finals(1, 1), finals(1, 0), finals(0, 1));
}

} // namespace lmc
