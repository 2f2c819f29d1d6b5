#pragma once

#include <string>

#include "plab/calculus.hpp"
#include "plab/errors.hpp"
#include "plab/grid.hpp"

namespace plab {

// Validated exponent tuple with its derived quantities. Admissible region:
//   n in {2, 3},  p >= n/(n-1),  q > n/2,  r in (1, inf],
//   and 1/r >= 1/p - 1/n whenever p < n.
// Derived: t = (n-1)p/n, alpha = 1/t, p_prime the Sobolev conjugate.
struct ExponentConfig {
  int dim = 0;
  double p = 0.0;
  double q = 0.0;
  double r = 0.0;        // kInf allowed
  double t = 0.0;
  double alpha = 0.0;    // scaling exponent n/((n-1)p) = 1/t
  double p_prime = 0.0;  // kInf when p > n
};

struct ExponentCheck {
  bool ok = false;
  Hypothesis code = Hypothesis::kDimension;
  std::string message;  // names the violated inequality, e.g. "q > n/2 failed"
};

// Non-throwing admissibility test. Comparisons are arranged in product form
// (p*(n-1) >= n, 2q > n, n*p >= r*(n-p)) so boundary tuples with rational
// entries are decided exactly.
ExponentCheck check_exponents(int n, double p, double q, double r);

// Returns the derived config or throws HypothesisError naming the violated
// hypothesis.
ExponentConfig validate_exponents(int n, double p, double q, double r);

// np/(n-p) for p < n, kInf for p > n, and 2p at p = n (a deterministic
// choice from the admissible range (p, inf)).
double sobolev_conjugate(int n, double p);

// The unique theta in (0,1) with 1/p = theta/t + (1-theta)/p_prime.
// Requires t < p < p_prime (p_prime may be kInf).
double interpolation_theta(double t, double p, double p_prime);

// || f - E_omega[f] ||_{L^r}.
double deficit(const ScalarField& f, const Density& omega, double r);

struct RatioReport {
  double deficit = 0.0;
  double omega_q_norm = 0.0;
  double grad_p_norm = 0.0;
  double alpha = 0.0;
  double ratio = 0.0;
};

// deficit / (||omega||_q^alpha * ||df||_p). Rejects constant f
// (zero gradient norm).
RatioReport ratio_report(const ScalarField& f, const Density& omega,
                         const ExponentConfig& cfg);
double ratio(const ScalarField& f, const Density& omega,
             const ExponentConfig& cfg);

// Direct t-norm inequality probe on a box grid:
//   lhs      = integral of |f - E_omega[f]|^t
//   rhs_core = ||omega||_q * (integral of |df|^p)^(t/p)
// implied_c = lhs / rhs_core is measured, never asserted against a fixed
// threshold; it is 0 when rhs_core vanishes (constant f).
struct TnormReport {
  double lhs = 0.0;
  double rhs_core = 0.0;
  double implied_c = 0.0;
};

TnormReport tnorm_check(const ScalarField& f, const Density& omega,
                        const ExponentConfig& cfg);

std::string ratio_report_json(const RatioReport& r);
std::string tnorm_report_json(const TnormReport& r);

}  // namespace plab
