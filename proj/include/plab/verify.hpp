#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace plab {

struct VerifyCheck {
  std::string name;
  bool passed = false;
  std::string detail;  // failure reason; empty on pass
};

struct VerifyReport {
  std::vector<VerifyCheck> checks;
  int passed = 0;
  int failed = 0;
};

// Runs every module's invariant and property checks at desk scale.
// Exceptions inside a check are caught and reported as failures.
VerifyReport run_verify_suite(std::uint64_t seed);

}  // namespace plab
