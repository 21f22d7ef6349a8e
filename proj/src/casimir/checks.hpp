// checks.hpp - built-in invariant suite exposed through the CLI
//
// Four identities that must hold on shipped defaults: the two algebraic
// routes to the cavity lifetime, the coupling/lifetime coefficient identity,
// the field memory kernel's own ODE, and excitation conservation of a
// lossless run.

#pragma once

#include <string>
#include <vector>

namespace casimir {

struct CheckResult {
    std::string name;
    double metric = 0.0;  // worst observed error
    double limit = 0.0;
    bool passed = false;
};

std::vector<CheckResult> run_self_checks();

}  // namespace casimir
