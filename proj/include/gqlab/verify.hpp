#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace gqlab {

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

// Runs the full invariant suite across modules (metric structure, bundle
// enumeration, lattice assembly, eigensolver contracts, limit-model algebra,
// analysis verdicts, curvature identities). Each entry is independent; a
// thrown error is converted into a failed check.
std::vector<CheckResult> run_verify_suite(std::uint64_t seed = 42);

}  // namespace gqlab
