#pragma once

#include <stdexcept>

namespace conseq {

inline constexpr const char* kVersion = "0.1.0";

// enumeration caps / state budgets exceeded (CLI exit code 3)
struct budget_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// an invariant or cross-check failed (CLI exit code 2)
struct verification_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace conseq
