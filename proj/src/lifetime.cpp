#include "lmc/lifetime.hpp"

#include <stdexcept>

namespace lmc {

double evaporation_rate(const EvaporationTable& table, CoatingKind kind) {
    switch (kind) {
    case CoatingKind::Bare:    return table.bare;
    case CoatingKind::Ni:      return table.ni;
    case CoatingKind::Uhdpe:   return table.uhdpe;
    case CoatingKind::NiUhdpe: return table.ni_uhdpe;
    }
    throw std::logic_error("unknown coating kind");
}

void apply_evaporation(Marble& marble, double minutes, const EvaporationTable& table) {
    if (marble.terminal() || minutes <= 0.0)
        return;
    // Water leaves at 1 mg/uL; the powder shell stays behind.
    const double lost_ul = evaporation_rate(table, marble.coating.kind) * minutes;
    marble.volume_ul -= lost_ul;
    if (marble.volume_ul <= 0.0) {
        marble.volume_ul = 0.0;
        marble.state = Evaporated{};
    }
}

double time_to_dryout(const Marble& marble, const EvaporationTable& table) {
    if (!(marble.volume_ul > 0.0))
        throw std::domain_error("marble has no water left");
    return marble.volume_ul / evaporation_rate(table, marble.coating.kind);
}

} // namespace lmc
