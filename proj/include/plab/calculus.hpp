#pragma once

#include <limits>
#include <vector>

#include "plab/grid.hpp"

namespace plab {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Tensorized quadrature: uniform weight h per node on periodic axes,
// trapezoid weights (h/2 at the endpoints, h inside) on non-periodic axes.
// Weights are strictly positive and sum to the box volume.
struct QuadratureRule {
  Grid grid;
  std::vector<double> weights;
};

QuadratureRule make_quadrature(const Grid& grid);

// Non-negative scalar field with unit quadrature integral,
// |integral - 1| <= 1e-12.
class Density {
 public:
  explicit Density(ScalarField base);

  const ScalarField& field() const { return base_; }
  const Grid& grid() const { return base_.grid; }

 private:
  ScalarField base_;
};

// Quadrature integral, accumulated with fixed-tree pairwise summation.
double integral(const ScalarField& field);

// (sum_k w_k |v_k|^p)^(1/p); p = kInf gives the max norm.
double lp_norm(const ScalarField& field, double p);

// integral divided by the box volume.
double mean(const ScalarField& field);

// Integral of the pointwise product f * omega, clamped into [min f, max f].
double weighted_mean(const ScalarField& field, const Density& density);

// Divides by the integral. Rejects negative entries and identically-zero
// fields.
Density normalize_density(const ScalarField& field);

// Central differences on interior/periodic nodes, second-order one-sided
// stencils at non-periodic boundaries. Exact on affine fields.
VectorField gradient(const ScalarField& field);
VectorField gradient_serial(const ScalarField& field);

// Pointwise Euclidean magnitude of a vector field.
ScalarField magnitude_field(const VectorField& vf);

// lp_norm of the pointwise Euclidean magnitude.
double gradient_lp_norm(const VectorField& vf, double p);

namespace detail {
// Per-axis quadrature weights; the product over axes is the node weight.
std::array<std::vector<double>, kMaxDim> axis_weights(const Grid& grid);
}  // namespace detail

}  // namespace plab
