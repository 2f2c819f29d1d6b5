#pragma once

#include <string>
#include <utility>
#include <vector>

#include "plab/calculus.hpp"
#include "plab/grid.hpp"

namespace plab {

// Integer-wrapping covering map of flat tori: Psi folds the source torus
// (lengths w_i * L_i, w_i * m_i nodes per axis) onto the target torus by
// reducing node indices mod m_i. Every fiber has exactly prod(w_i) points
// and |det dPsi| = 1, so the discrete coarea identities are exact
// rearrangements.
struct CoveringMapSpec {
  int dim = 0;
  std::array<int, kMaxDim> wrap{};
  Grid target;
  Grid source;

  std::int64_t fiber_cardinality() const;
};

CoveringMapSpec make_covering_map(const Grid& target,
                                  const std::vector<int>& wrap);

// f composed with the covering map: exact index arithmetic, no interpolation.
ScalarField pullback_field(const ScalarField& f, const CoveringMapSpec& spec);

// omega composed with the covering map divided by the fiber cardinality;
// total mass is preserved exactly.
Density pullback_density(const Density& omega, const CoveringMapSpec& spec);

// (integral of h over the source, integral over the target of the fiber
// sums). Equal up to summation-tree rounding.
std::pair<double, double> coarea_check(const ScalarField& h,
                                       const CoveringMapSpec& spec);

// (E_{pullback omega}[pullback f], E_omega[f]).
std::pair<double, double> pullback_mean_check(const ScalarField& f,
                                              const Density& omega,
                                              const CoveringMapSpec& spec);

// (||pullback omega||_q, ||omega||_q); the first equals
// prod(w)^(1/q - 1) times the second. Requires q > 1.
std::pair<double, double> pullback_lq_check(const Density& omega, double q,
                                            const CoveringMapSpec& spec);

// Finite metric-space sample: coordinates plus either the Euclidean metric
// or the per-axis wrapped torus metric.
struct PointCloud {
  int dim = 0;
  bool torus = false;
  std::array<double, kMaxDim> lengths{};  // wrap lengths when torus
  std::vector<std::array<double, kMaxDim>> points;

  double distance(int i, int j) const;
};

// CSV: header "# metric=torus lengths=1,1" or "# metric=euclidean", then one
// comma-separated coordinate row per point.
PointCloud read_point_cloud_csv(std::istream& in);
PointCloud read_point_cloud_csv_file(const std::string& path);

// centers[s] is a point index; assignment[i] lists the center slots whose
// radius-ball contains point i.
struct BallCover {
  double radius = 0.0;
  std::vector<int> centers;
  std::vector<std::vector<int>> assignment;
};

// Greedy farthest-point cover: start from point 0, repeatedly promote the
// uncovered point farthest from the current centers (ties to the lowest
// index) until every point is covered.
BallCover ball_cover(const PointCloud& cloud, double radius);

// Vertices are center slots; an edge joins two centers when some sample
// point lies within the radius of both.
struct IncidenceGraph {
  int k = 0;
  std::vector<std::pair<int, int>> edges;
};

IncidenceGraph incidence_graph(const PointCloud& cloud, const BallCover& cover);

// Breadth-first spanning tree rooted at vertex 0 (neighbors in index order)
// plus the elimination schedule obtained by repeatedly removing the
// lowest-index current leaf.
struct SpanningTreeReport {
  int k = 0;
  std::vector<std::pair<int, int>> edges;
  std::vector<int> leaf_order;
};

SpanningTreeReport spanning_tree(const IncidenceGraph& graph);

// Replays leaf_order against the tree, checking one current leaf is removed
// at each step.
bool valid_leaf_order(const SpanningTreeReport& report);

std::string spanning_tree_json(const SpanningTreeReport& report);

}  // namespace plab
