#pragma once

// Property and invariant suites run by `verify-ops` and the acceptance tests.
// Each check reports pass/fail plus the measured quantity it was judged on.

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace sacfem {

struct CheckResult {
    std::string module;
    std::string name;
    bool passed = false;
    std::string detail;
};

/// Operator and model invariants: spectral, fem, model, noise.
std::vector<CheckResult> verify_operator_suite(std::uint64_t seed = 1);

/// Variation equations, Malliavin derivatives, DU estimates, integration by parts.
std::vector<CheckResult> verify_sensitivity_suite(std::uint64_t seed = 1, std::size_t workers = 1);

bool all_passed(const std::vector<CheckResult>& results);

}  // namespace sacfem
