#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace pmom {

struct SuiteResult {
    std::string name;
    int passed = 0;
    int failed = 0;
    std::vector<std::string> failures;

    bool ok() const { return failed == 0; }
};

// Exact property suites, deterministic for a fixed seed.
SuiteResult verify_digit(uint64_t seed);
SuiteResult verify_measure(uint64_t seed);
SuiteResult verify_symbols(uint64_t seed);
std::vector<SuiteResult> verify_all(uint64_t seed);

}  // namespace pmom
