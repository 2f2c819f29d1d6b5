#pragma once

#include <stdexcept>
#include <string>

namespace plab {

// Which admissibility condition an exponent tuple (n, p, q, r) violates.
enum class Hypothesis {
  kDimension,
  kPTooSmall,
  kQTooSmall,
  kRIncompatible,
};

// Rejection of an exponent tuple. The message names the violated inequality
// verbatim (e.g. "q > n/2 failed"); the CLI maps this to exit code 2.
class HypothesisError : public std::invalid_argument {
 public:
  HypothesisError(Hypothesis code, const std::string& message)
      : std::invalid_argument(message), code_(code) {}

  Hypothesis code() const { return code_; }

 private:
  Hypothesis code_;
};

}  // namespace plab
