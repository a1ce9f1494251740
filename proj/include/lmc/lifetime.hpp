#pragma once

#include "lmc/marble.hpp"

namespace lmc {

// Constant evaporation rates, mg/min, per coating kind.
// A bare droplet loses water fastest; the hybrid shell slowest.
struct EvaporationTable {
    double bare = 0.1392;
    double ni = 0.1133;
    double uhdpe = 0.1107;
    double ni_uhdpe = 0.0998;

    bool operator==(const EvaporationTable&) const = default;
};

double evaporation_rate(const EvaporationTable& table, CoatingKind kind);

// Remove water for the elapsed minutes. Volume floors at zero, at which
// point the marble becomes Evaporated. The coating never evaporates.
void apply_evaporation(Marble& marble, double minutes, const EvaporationTable& table);

// Minutes until the marble dries out at its current volume.
// Throws std::domain_error for a marble with no water left.
double time_to_dryout(const Marble& marble, const EvaporationTable& table);

} // namespace lmc
