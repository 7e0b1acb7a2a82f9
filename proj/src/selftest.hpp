#pragma once

#include <functional>
#include <string>

namespace edgelaw {

struct CheckResult {
    std::string name;
    bool passed = false;
    double measured = 0.0;
    double tolerance = 0.0;
    std::string detail;
};

struct SelftestOptions {
    std::string filter;              // substring of check names; empty runs everything
    double zeta_perturbation = 0.0;  // added to zeta'(-1) in the left-tail check
};

// Runs the invariant suite; returns the number of failed checks.
int run_selftest(const SelftestOptions& opts, const std::function<void(const CheckResult&)>& report);

}  // namespace edgelaw
