#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace rankone {

struct CheckResult {
    std::string name;
    bool        passed = false;
    std::string detail;
};

/// Quick oracle-versus-bound validation suite.
std::vector<CheckResult> run_selftest(std::uint64_t seed = 20240601);

} // namespace rankone
