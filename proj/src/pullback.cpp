#include "plab/pullback.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace plab {

std::int64_t CoveringMapSpec::fiber_cardinality() const {
  std::int64_t k = 1;
  for (int a = 0; a < dim; ++a) k *= wrap[a];
  return k;
}

CoveringMapSpec make_covering_map(const Grid& target,
                                  const std::vector<int>& wrap) {
  if (!target.is_torus())
    throw std::invalid_argument("make_covering_map: target must be a flat torus");
  if (static_cast<int>(wrap.size()) != target.dim)
    throw std::invalid_argument("make_covering_map: wrap factor count mismatch");

  CoveringMapSpec spec;
  spec.dim = target.dim;
  spec.target = target;
  std::vector<int> nodes(target.dim);
  std::vector<double> lengths(target.dim);
  std::vector<bool> periodic(target.dim, true);
  for (int a = 0; a < target.dim; ++a) {
    if (wrap[a] < 1)
      throw std::invalid_argument("make_covering_map: wrap factors must be positive");
    spec.wrap[a] = wrap[a];
    nodes[a] = wrap[a] * target.nodes[a];
    lengths[a] = wrap[a] * target.lengths[a];
  }
  spec.source = make_grid(target.dim, nodes, lengths, periodic);
  return spec;
}

namespace {

void check_target(const Grid& g, const CoveringMapSpec& spec, const char* op) {
  if (g != spec.target)
    throw std::invalid_argument(std::string(op) + ": grid mismatch (target expected)");
}

// Source node index -> target node index by per-axis index wrap.
std::int64_t wrap_index(const CoveringMapSpec& spec,
                        const std::array<int, kMaxDim>& src_idx) {
  std::array<int, kMaxDim> tgt{};
  for (int a = 0; a < spec.dim; ++a)
    tgt[a] = src_idx[a] % spec.target.nodes[a];
  return spec.target.flatten(tgt);
}

}  // namespace

ScalarField pullback_field(const ScalarField& f, const CoveringMapSpec& spec) {
  check_target(f.grid, spec, "pullback_field");
  const std::int64_t n = spec.source.node_count();
  std::vector<double> values(n);
#pragma omp parallel for schedule(static)
  for (std::int64_t k = 0; k < n; ++k) {
    std::array<int, kMaxDim> idx{};
    spec.source.unflatten(k, idx);
    values[k] = f.values[wrap_index(spec, idx)];
  }
  return ScalarField{spec.source, std::move(values)};
}

Density pullback_density(const Density& omega, const CoveringMapSpec& spec) {
  check_target(omega.grid(), spec, "pullback_density");
  const double fiber = static_cast<double>(spec.fiber_cardinality());
  const std::int64_t n = spec.source.node_count();
  std::vector<double> values(n);
  const std::vector<double>& src = omega.field().values;
#pragma omp parallel for schedule(static)
  for (std::int64_t k = 0; k < n; ++k) {
    std::array<int, kMaxDim> idx{};
    spec.source.unflatten(k, idx);
    values[k] = src[wrap_index(spec, idx)] / fiber;
  }
  return Density(ScalarField{spec.source, std::move(values)});
}

std::pair<double, double> coarea_check(const ScalarField& h,
                                       const CoveringMapSpec& spec) {
  if (h.grid != spec.source)
    throw std::invalid_argument("coarea_check: grid mismatch (source expected)");
  const double lhs = integral(h);

  // Fiber sums on the target; unit Jacobian so no determinant factor.
  const std::int64_t nt = spec.target.node_count();
  std::vector<double> fiber_sum(nt, 0.0);
  const std::int64_t ns = spec.source.node_count();
  for (std::int64_t k = 0; k < ns; ++k) {
    std::array<int, kMaxDim> idx{};
    spec.source.unflatten(k, idx);
    fiber_sum[wrap_index(spec, idx)] += h.values[k];
  }
  const double rhs = integral(ScalarField{spec.target, std::move(fiber_sum)});
  return {lhs, rhs};
}

std::pair<double, double> pullback_mean_check(const ScalarField& f,
                                              const Density& omega,
                                              const CoveringMapSpec& spec) {
  const ScalarField fs = pullback_field(f, spec);
  const Density os = pullback_density(omega, spec);
  return {weighted_mean(fs, os), weighted_mean(f, omega)};
}

std::pair<double, double> pullback_lq_check(const Density& omega, double q,
                                            const CoveringMapSpec& spec) {
  if (!(q > 1.0))
    throw std::invalid_argument("pullback_lq_check: q > 1 required");
  const Density os = pullback_density(omega, spec);
  return {lp_norm(os.field(), q), lp_norm(omega.field(), q)};
}

double PointCloud::distance(int i, int j) const {
  double s = 0.0;
  for (int a = 0; a < dim; ++a) {
    double d = std::abs(points[i][a] - points[j][a]);
    if (torus) {
      d = std::fmod(d, lengths[a]);
      d = std::min(d, lengths[a] - d);
    }
    s += d * d;
  }
  return std::sqrt(s);
}

PointCloud read_point_cloud_csv(std::istream& in) {
  std::string header;
  if (!std::getline(in, header) || header.rfind("# metric=", 0) != 0)
    throw std::invalid_argument("point cloud CSV: missing '# metric=' header");

  PointCloud cloud;
  std::istringstream hs(header.substr(1));
  std::string token;
  std::vector<double> lengths;
  while (hs >> token) {
    if (token.rfind("metric=", 0) == 0) {
      const std::string metric = token.substr(7);
      if (metric == "torus")
        cloud.torus = true;
      else if (metric == "euclidean")
        cloud.torus = false;
      else
        throw std::invalid_argument("point cloud CSV: unknown metric '" + metric + "'");
    } else if (token.rfind("lengths=", 0) == 0) {
      std::istringstream ls(token.substr(8));
      std::string part;
      while (std::getline(ls, part, ',')) lengths.push_back(std::stod(part));
    }
  }

  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::array<double, kMaxDim> p{};
    int a = 0;
    std::istringstream ls(line);
    std::string part;
    while (std::getline(ls, part, ',')) {
      if (a >= kMaxDim)
        throw std::invalid_argument("point cloud CSV: more than 3 coordinates");
      p[a++] = std::stod(part);
    }
    if (cloud.points.empty()) {
      cloud.dim = a;
    } else if (a != cloud.dim) {
      throw std::invalid_argument("point cloud CSV: inconsistent coordinate count");
    }
    cloud.points.push_back(p);
  }
  if (cloud.points.empty())
    throw std::invalid_argument("point cloud CSV: no points");

  for (int a = 0; a < cloud.dim; ++a) cloud.lengths[a] = 1.0;
  for (size_t i = 0; i < lengths.size() && i < kMaxDim; ++i)
    cloud.lengths[i] = lengths[i];
  return cloud;
}

PointCloud read_point_cloud_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open for reading: " + path);
  return read_point_cloud_csv(in);
}

BallCover ball_cover(const PointCloud& cloud, double radius) {
  if (cloud.points.empty())
    throw std::invalid_argument("ball_cover: empty point set");
  if (!(radius > 0.0))
    throw std::invalid_argument("ball_cover: radius > 0 required");

  const int n = static_cast<int>(cloud.points.size());
  BallCover cover;
  cover.radius = radius;

  // min distance to the selected centers; kInf until the first center.
  std::vector<double> dist(n, kInf);
  int next = 0;
  while (true) {
    cover.centers.push_back(next);
#pragma omp parallel for schedule(static)
    for (int i = 0; i < n; ++i)
      dist[i] = std::min(dist[i], cloud.distance(i, next));

    int best = -1;
    double best_dist = radius;
    for (int i = 0; i < n; ++i) {
      if (dist[i] > best_dist) {
        best = i;
        best_dist = dist[i];
      }
    }
    if (best < 0) break;
    next = best;
  }

  cover.assignment.resize(n);
  for (int i = 0; i < n; ++i)
    for (int s = 0; s < static_cast<int>(cover.centers.size()); ++s)
      if (cloud.distance(i, cover.centers[s]) <= radius)
        cover.assignment[i].push_back(s);
  return cover;
}

IncidenceGraph incidence_graph(const PointCloud& cloud, const BallCover& cover) {
  (void)cloud;
  IncidenceGraph graph;
  graph.k = static_cast<int>(cover.centers.size());
  std::set<std::pair<int, int>> edges;
  for (const auto& slots : cover.assignment)
    for (size_t a = 0; a < slots.size(); ++a)
      for (size_t b = a + 1; b < slots.size(); ++b)
        edges.emplace(std::min(slots[a], slots[b]), std::max(slots[a], slots[b]));
  graph.edges.assign(edges.begin(), edges.end());
  return graph;
}

SpanningTreeReport spanning_tree(const IncidenceGraph& graph) {
  const int k = graph.k;
  if (k <= 0) throw std::invalid_argument("spanning_tree: empty graph");

  std::vector<std::vector<int>> adj(k);
  for (const auto& [a, b] : graph.edges) {
    adj[a].push_back(b);
    adj[b].push_back(a);
  }
  for (auto& nb : adj) std::sort(nb.begin(), nb.end());

  SpanningTreeReport rep;
  rep.k = k;
  std::vector<bool> seen(k, false);
  std::vector<int> queue{0};
  seen[0] = true;
  for (size_t head = 0; head < queue.size(); ++head) {
    const int u = queue[head];
    for (int w : adj[u]) {
      if (seen[w]) continue;
      seen[w] = true;
      rep.edges.emplace_back(u, w);
      queue.push_back(w);
    }
  }
  if (static_cast<int>(queue.size()) != k)
    throw std::invalid_argument(
        "spanning_tree: disconnected graph (radius too small or sample disconnected)");

  // Elimination schedule: repeatedly remove the lowest-index current leaf.
  std::vector<int> degree(k, 0);
  std::vector<std::vector<int>> tree(k);
  for (const auto& [a, b] : rep.edges) {
    tree[a].push_back(b);
    tree[b].push_back(a);
    ++degree[a];
    ++degree[b];
  }
  std::vector<bool> removed(k, false);
  for (int step = 0; step < k; ++step) {
    int leaf = -1;
    for (int v = 0; v < k; ++v) {
      if (!removed[v] && degree[v] <= 1) {
        leaf = v;
        break;
      }
    }
    removed[leaf] = true;
    rep.leaf_order.push_back(leaf);
    for (int w : tree[leaf])
      if (!removed[w]) --degree[w];
  }
  return rep;
}

bool valid_leaf_order(const SpanningTreeReport& report) {
  const int k = report.k;
  if (static_cast<int>(report.leaf_order.size()) != k) return false;
  if (static_cast<int>(report.edges.size()) != k - 1) return false;

  std::vector<int> degree(k, 0);
  std::vector<std::vector<int>> adj(k);
  for (const auto& [a, b] : report.edges) {
    if (a < 0 || a >= k || b < 0 || b >= k) return false;
    adj[a].push_back(b);
    adj[b].push_back(a);
    ++degree[a];
    ++degree[b];
  }
  std::vector<bool> removed(k, false);
  for (int v : report.leaf_order) {
    if (v < 0 || v >= k || removed[v]) return false;
    if (degree[v] > 1) return false;  // not a current leaf
    removed[v] = true;
    for (int w : adj[v])
      if (!removed[w]) --degree[w];
  }
  return true;
}

std::string spanning_tree_json(const SpanningTreeReport& report) {
  nlohmann::json j;
  j["k"] = report.k;
  auto edges = nlohmann::json::array();
  for (const auto& [a, b] : report.edges) edges.push_back({a, b});
  j["edges"] = edges;
  j["leaf_order"] = report.leaf_order;
  return j.dump(2);
}

}  // namespace plab
