#pragma once

// Identity suite behind `sibuya verify`: every exact cross-route identity at
// one alpha, up to a size bound, plus the float thermo/rescaling invariants.

#include <string>
#include <vector>

#include "sibuya/numerics.hpp"

namespace sibuya {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct VerifyReport {
  std::string alpha;
  unsigned n_max = 0;
  std::vector<CheckResult> checks;

  bool all_passed() const;
};

/// Requires a rational alpha and 1 <= n_max <= 60.
VerifyReport run_identity_suite(const AlphaParam& alpha, unsigned n_max);

}  // namespace sibuya
