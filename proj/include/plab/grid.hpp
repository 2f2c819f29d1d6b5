#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <vector>

namespace plab {

inline constexpr int kMaxDim = 3;

// Uniform node-centered grid over a box or flat torus in dimensions 1-3.
// Periodic axes place nodes on the half-open interval [0, L); non-periodic
// axes include both endpoints. Linearization is row-major with axis 0
// slowest, so CSV dumps are reproducible byte for byte.
struct Grid {
  int dim = 0;
  std::array<int, kMaxDim> nodes{};
  std::array<double, kMaxDim> lengths{};
  std::array<bool, kMaxDim> periodic{};
  std::array<double, kMaxDim> spacing{};

  std::int64_t node_count() const;
  double volume() const;
  double min_spacing() const;
  double max_spacing() const;
  // Euclidean diameter of the bounding box [0,L0] x ... x [0,L_{n-1}].
  double diameter() const;

  double coordinate(int axis, int index) const;
  std::array<std::int64_t, kMaxDim> strides() const;
  void unflatten(std::int64_t k, std::array<int, kMaxDim>& index) const;
  std::int64_t flatten(const std::array<int, kMaxDim>& index) const;
  void node_coordinates(std::int64_t k, std::array<double, kMaxDim>& x) const;

  bool is_torus() const;
  bool is_box() const;
};

bool operator==(const Grid& a, const Grid& b);
inline bool operator!=(const Grid& a, const Grid& b) { return !(a == b); }

// Periodic axes need m >= 2 nodes, non-periodic axes m >= 3 so the one-sided
// second-order boundary stencils are admissible.
Grid make_grid(int dim, const std::vector<int>& nodes,
               const std::vector<double>& lengths,
               const std::vector<bool>& periodic);

// One real value per grid node, row-major. Values are finite by construction.
struct ScalarField {
  Grid grid;
  std::vector<double> values;
};

// dim components per node, stored component-major.
struct VectorField {
  Grid grid;
  std::array<std::vector<double>, kMaxDim> comp;
};

ScalarField make_field(const Grid& grid, std::vector<double> values);
ScalarField constant_field(const Grid& grid, double value);

using Sampler = std::function<double(const std::array<double, kMaxDim>&)>;

// Samples a pointwise function at every node. Deterministic: equal inputs
// yield bitwise-equal fields. Rejects samplers that return non-finite values.
ScalarField field_from_function(const Grid& grid, const Sampler& sampler);

// Flat CSV, one value per line, with the header row
//   # grid n=<n> m=<m0,...> lengths=<...> periodic=<...>
void write_field_csv(const ScalarField& field, std::ostream& out);
ScalarField read_field_csv(std::istream& in);
void write_field_csv_file(const ScalarField& field, const std::string& path);
ScalarField read_field_csv_file(const std::string& path);

// Shortest round-trip decimal rendering; used by every CSV/JSON writer so
// repeated runs produce byte-identical artifacts.
std::string format_double(double v);

}  // namespace plab
