#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lmc/netlist.hpp"

namespace lmc {

// Reference Boolean semantics the fixtures are checked against. A bit
// is marble presence on a channel, so the collision gate computes all
// three minterm-ish outputs at once.

struct GateBits {
    int pass_a = 0;  // a AND NOT b
    int pass_b = 0;  // NOT a AND b
    int collide = 0; // a AND b

    bool operator==(const GateBits&) const = default;
};

struct AdderBits {
    int sum = 0;
    int carry = 0;

    bool operator==(const AdderBits&) const = default;
};

GateBits gate_semantics(int a, int b);
AdderBits half_adder(int a, int b);
AdderBits full_adder(int a, int b, int c_in);

using Assignment = std::vector<std::pair<std::string, int>>;

struct RunOptions {
    std::optional<CollisionModel> model_override;
    std::optional<double> horizon_ms;
    StepObserver observer;
};

struct RunResult {
    World world;
    bool quiesced = false;
};

RunResult run_circuit(const CircuitSpec& spec, const Assignment& assignment,
                      const RunOptions& options = {});

// Where every marble ended up, folded to channel occupancy. Channels
// are sink labels; several sinks may feed one channel.
struct ExitReport {
    std::map<std::string, int> channel;      // label -> occupied (0/1)
    std::vector<int> sink_count;             // per sink, spec order
    std::vector<std::string> errors;         // marbles lost off-circuit
    bool timeout = false;                    // horizon hit, marbles live

    bool ok() const { return errors.empty() && !timeout; }
};

ExitReport classify_exit(const World& world, const CircuitSpec& spec);

struct TruthTableRow {
    std::vector<int> bits;                   // input_order() order
    ExitReport exits;
};

struct TruthTable {
    std::vector<std::string> inputs;
    std::vector<std::string> channels;       // sorted distinct sink labels
    std::vector<TruthTableRow> rows;
};

// Runs all 2^n assignments, possibly in parallel; rows come back in
// ascending row-index order regardless of completion order.
TruthTable evaluate_truth_table(const CircuitSpec& spec,
                                const RunOptions& options = {});

std::string render_text(const TruthTable& table);
std::string render_csv(const TruthTable& table);

// Collision-model identification from final positions: the collided
// pair settles between the two undisturbed singles under soft spheres
// and outside them under billiard balls.
enum class ObservedModel { SoftSphere, BilliardBall, Indeterminate };

const char* observed_model_name(ObservedModel model);

// Final sunk x positions of the a-marble and b-marble for a run of the
// given assignment, merged marbles followed to the survivor.
struct FinalPair {
    std::vector<double> xs;                  // sunk centers, ascending
};

ObservedModel classify_model(const FinalPair& collided,
                             const FinalPair& single_a,
                             const FinalPair& single_b);

// Convenience: run (1,1), (1,0), (0,1) on a two-input spec and classify.
ObservedModel classify_model(const CircuitSpec& spec, const RunOptions& options = {});

} // namespace lmc
