#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>

#include "lmc/repro.hpp"

// Runs every numbered verification criterion against the bundled
// fixtures and prints one line per criterion so the ctest log doubles
// as a sign-off sheet.
TEST_CASE("all verification criteria hold") {
    const std::vector<lmc::CriterionResult> results = lmc::run_criteria(LMC_FIXTURE_DIR);
    REQUIRE(results.size() == 11);
    for (const lmc::CriterionResult& r : results) {
        std::printf("ACCEPTANCE %2d %-26s %s  %s\n", r.id, r.name.c_str(),
                    r.pass ? "PASS" : "FAIL", r.details.c_str());
        std::fflush(stdout);
        CAPTURE(r.id);
        CAPTURE(r.name);
        CAPTURE(r.details);
        CHECK(r.pass);
    }
}
