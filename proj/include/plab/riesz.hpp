#pragma once

#include <string>

#include "plab/calculus.hpp"
#include "plab/grid.hpp"

namespace plab {

// Truncated kernel x -> chi_{|x| <= d} / |x|^(n-1). For n = 1 the kernel is
// the plain indicator of [-d, d].
struct RieszKernelSpec {
  int dim = 0;
  double d = 0.0;  // truncation radius
};

RieszKernelSpec make_kernel_spec(int dim, double d);

// Surface area of the unit (n-1)-sphere: 2, 2*pi, 4*pi for n = 1, 2, 3.
double sphere_area(int n);

// Convolution exponent r* with 1/r* = 1 + 1/n - 1/q, the kernel exponent
// that lands the smoothed density in L^n. Requires q > n/2, which forces
// r* < n/(n-1).
double young_exponent(int n, double q);

// Closed form (sigma_{n-1} d^(n-(n-1)s) / (n-(n-1)s))^(1/s) for the kernel's
// L^s norm; the integral diverges at s = n/(n-1).
double kernel_lr_norm(const RieszKernelSpec& spec, double s);

// Direct O(N^2) quadrature convolution of the density with the kernel on a
// box grid. The singular self-cell uses the kernel's exact average over a
// ball of radius min(d, h_min/2) divided by the cell volume, which keeps the
// quadrature first-order consistent at the singularity. Node counts per axis
// are capped (129 for n = 2, 33 for n = 3).
ScalarField riesz_potential(const Density& omega, const RieszKernelSpec& spec);
ScalarField riesz_potential_serial(const Density& omega,
                                   const RieszKernelSpec& spec);

// Certificate of || K * omega ||_{L^n} <= ||K||_{L^r*} ||omega||_{L^q}.
// slack = lhs/rhs stays below 1 + quadrature tolerance when the hypotheses
// hold.
struct YoungReport {
  double lhs = 0.0;
  double kernel_norm = 0.0;
  double rhs = 0.0;
  double slack = 0.0;
  int dim = 0;
  double q = 0.0;
  double d = 0.0;
};

YoungReport young_check(const Density& omega, double q,
                        const RieszKernelSpec& spec);

std::string young_report_json(const YoungReport& r);

}  // namespace plab
