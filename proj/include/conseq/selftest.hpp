#pragma once

#include <string>
#include <vector>

namespace conseq {

// One acceptance check.  The suite is the contract for a release build:
// every check encodes frozen expected values or exact identities, and a
// failing check prints enough numbers to reproduce the failure by hand.
struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string detail;
};

inline constexpr int kCriterionCount = 12;

CriterionResult run_criterion(int id);  // 1..kCriterionCount
std::vector<CriterionResult> run_all();

}  // namespace conseq
