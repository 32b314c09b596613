// acceptance.hpp — end-to-end verification suite; one pass/fail line per
// criterion, shared by the CLI `verify` subcommand and the test harness.

#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace conelab {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool passed = false;
    std::string detail;
    double seconds = 0.0;
};

std::vector<CriterionResult> run_acceptance(std::ostream& out, std::uint64_t seed = 2024,
                                            int threads = 1);

bool acceptance_passed(const std::vector<CriterionResult>& results);

}  // namespace conelab
