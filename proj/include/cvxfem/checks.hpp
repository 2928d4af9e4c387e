#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace cvxfem {

struct CheckResult {
  std::string name;
  bool passed = false;
  double worst = 0.0;  // largest defect seen
  std::string detail;
};

/// Invariant suite on random data: element geometry, zero-sum and
/// fluctuation identities, limiter constraints, weight reconstruction and a
/// low-order IDP step. `samples` scales the number of random cases.
std::vector<CheckResult> run_checks(std::uint64_t seed, int samples = 1000);

}  // namespace cvxfem
