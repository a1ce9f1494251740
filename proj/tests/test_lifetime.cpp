#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <stdexcept>

#include "lmc/lifetime.hpp"
#include "lmc/marble.hpp"

using namespace lmc;

namespace {

Marble fresh(double volume, CoatingKind kind) {
    Marble m;
    m.id = 0;
    m.volume_ul = volume;
    m.coating = CoatingSpec::from_kind(kind);
    m.coating_mass_mg = default_coating_mass_mg(kind);
    m.state = Ballistic{};
    return m;
}

} // namespace

TEST_CASE("loss rates per shell are the calibrated constants") {
    const EvaporationTable table;
    CHECK(table.bare == 0.1392);
    CHECK(table.ni == 0.1133);
    CHECK(table.uhdpe == 0.1107);
    CHECK(table.ni_uhdpe == 0.0998);
    CHECK(evaporation_rate(table, CoatingKind::Bare) == 0.1392);
    CHECK(evaporation_rate(table, CoatingKind::Ni) == 0.1133);
    CHECK(evaporation_rate(table, CoatingKind::Uhdpe) == 0.1107);
    CHECK(evaporation_rate(table, CoatingKind::NiUhdpe) == 0.0998);
}

TEST_CASE("water loss is linear in exposure time") {
    const EvaporationTable table;
    Marble m = fresh(10.0, CoatingKind::Bare);
    apply_evaporation(m, 10.0, table);
    // 10 uL lose 0.1392 uL per minute: 10 - 1.392.
    CHECK(m.volume_ul == doctest::Approx(8.608).epsilon(1e-12));
    CHECK(std::holds_alternative<Ballistic>(m.state));

    apply_evaporation(m, 0.0, table);
    CHECK(m.volume_ul == doctest::Approx(8.608).epsilon(1e-12));

    // Two half exposures equal one full exposure.
    Marble split = fresh(10.0, CoatingKind::Bare);
    apply_evaporation(split, 5.0, table);
    apply_evaporation(split, 5.0, table);
    CHECK(split.volume_ul == doctest::Approx(m.volume_ul).epsilon(1e-12));
}

TEST_CASE("the shell is left behind when the water is gone") {
    const EvaporationTable table;
    Marble m = fresh(10.0, CoatingKind::NiUhdpe);
    apply_evaporation(m, 200.0, table);
    CHECK(m.volume_ul == 0.0);
    CHECK(std::holds_alternative<Evaporated>(m.state));
    CHECK(m.coating_mass_mg == doctest::Approx(2.5).epsilon(1e-12));
    CHECK(m.terminal());

    // Terminal marbles take no further losses.
    Marble sunk = fresh(10.0, CoatingKind::Bare);
    sunk.state = Sunk{0};
    apply_evaporation(sunk, 50.0, table);
    CHECK(sunk.volume_ul == 10.0);
}

TEST_CASE("dry-out horizons for a 10 uL marble") {
    const EvaporationTable table;
    const auto dryout = [&table](CoatingKind kind) {
        return time_to_dryout(fresh(10.0, kind), table);
    };
    // Oracle: volume / rate, frozen values alongside.
    CHECK(dryout(CoatingKind::Bare) == doctest::Approx(10.0 / 0.1392).epsilon(1e-12));
    CHECK(dryout(CoatingKind::Bare) == doctest::Approx(71.839080459770116).epsilon(1e-12));
    CHECK(dryout(CoatingKind::Ni) == doctest::Approx(88.261253309796999).epsilon(1e-12));
    CHECK(dryout(CoatingKind::Uhdpe) == doctest::Approx(90.334236675700083).epsilon(1e-12));
    CHECK(dryout(CoatingKind::NiUhdpe) == doctest::Approx(100.20040080160321).epsilon(1e-12));

    // Rounded figures used in bench notes.
    CHECK(std::abs(dryout(CoatingKind::Bare) - 71.84) <= 0.01);
    CHECK(std::abs(dryout(CoatingKind::Ni) - 88.26) <= 0.01);
    CHECK(std::abs(dryout(CoatingKind::Uhdpe) - 90.33) <= 0.01);
    CHECK(std::abs(dryout(CoatingKind::NiUhdpe) - 100.20) <= 0.01);

    // The hybrid shell shields longest, bare water shortest.
    CHECK(dryout(CoatingKind::NiUhdpe) > dryout(CoatingKind::Uhdpe));
    CHECK(dryout(CoatingKind::Uhdpe) > dryout(CoatingKind::Ni));
    CHECK(dryout(CoatingKind::Ni) > dryout(CoatingKind::Bare));

    Marble dry = fresh(10.0, CoatingKind::Bare);
    dry.volume_ul = 0.0;
    CHECK_THROWS_AS(time_to_dryout(dry, table), std::domain_error);
}

TEST_CASE("volume decreases strictly until dry, never below zero") {
    const EvaporationTable table;
    Marble m = fresh(5.0, CoatingKind::Uhdpe);
    double last = m.volume_ul;
    for (int minute = 0; minute < 60; ++minute) {
        apply_evaporation(m, 1.0, table);
        CHECK(m.volume_ul >= 0.0);
        if (std::holds_alternative<Evaporated>(m.state))
            break;
        CHECK(m.volume_ul < last);
        last = m.volume_ul;
    }
    CHECK(std::holds_alternative<Evaporated>(m.state));
}

TEST_CASE("shell composition presets") {
    const CoatingSpec bare = CoatingSpec::from_kind(CoatingKind::Bare);
    CHECK(bare.magnetic_fraction == 0.0);
    const CoatingSpec ni = CoatingSpec::from_kind(CoatingKind::Ni);
    CHECK(ni.magnetic_fraction == 1.0);
    CHECK(ni.ni_grain_um == 5.0);
    const CoatingSpec poly = CoatingSpec::from_kind(CoatingKind::Uhdpe);
    CHECK(poly.magnetic_fraction == 0.0);
    CHECK(poly.uhdpe_grain_um == 100.0);
    const CoatingSpec hybrid = CoatingSpec::from_kind(CoatingKind::NiUhdpe);
    CHECK(hybrid.magnetic_fraction == 0.5);
    CHECK(hybrid.ni_grain_um == 5.0);
    CHECK(hybrid.uhdpe_grain_um == 100.0);
}
