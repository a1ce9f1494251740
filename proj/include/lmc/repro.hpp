#pragma once

#include <string>
#include <vector>

namespace lmc {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string details; // one line, the measured numbers
};

// Run the numbered verification criteria against the bundled circuit
// files in fixture_dir. The filter is a comma-separated list of ids
// or name fragments; empty runs everything.
std::vector<CriterionResult> run_criteria(const std::string& fixture_dir,
                                          const std::string& filter = {});

} // namespace lmc
