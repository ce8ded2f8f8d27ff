#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace dsm {

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

/// Runs the cross-module invariant suite at matrix sizes bounded by
/// size_cap (1..64). Deterministic for a fixed seed. Returns one result
/// per check; a check that throws is reported as failed with the message.
std::vector<CheckResult> run_invariant_checks(std::uint64_t seed, std::size_t size_cap);

}  // namespace dsm
