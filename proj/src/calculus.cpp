#include "plab/calculus.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "plab/reduce.hpp"

namespace plab {

namespace detail {

std::array<std::vector<double>, kMaxDim> axis_weights(const Grid& grid) {
  std::array<std::vector<double>, kMaxDim> aw;
  for (int a = 0; a < grid.dim; ++a) {
    const int m = grid.nodes[a];
    const double h = grid.spacing[a];
    aw[a].assign(m, h);
    if (!grid.periodic[a]) {
      aw[a].front() = 0.5 * h;
      aw[a].back() = 0.5 * h;
    }
  }
  return aw;
}

}  // namespace detail

namespace {

// Node weight from the per-axis arrays, unrolled by dimension.
inline double node_weight(const std::array<std::vector<double>, kMaxDim>& aw,
                          const Grid& g, std::int64_t k) {
  switch (g.dim) {
    case 1:
      return aw[0][k];
    case 2: {
      const std::int64_t m1 = g.nodes[1];
      return aw[0][k / m1] * aw[1][k % m1];
    }
    default: {
      const std::int64_t m2 = g.nodes[2];
      const std::int64_t i2 = k % m2;
      const std::int64_t rest = k / m2;
      const std::int64_t m1 = g.nodes[1];
      return aw[0][rest / m1] * aw[1][rest % m1] * aw[2][i2];
    }
  }
}

void check_same_grid(const Grid& a, const Grid& b, const char* op) {
  if (a != b) throw std::invalid_argument(std::string(op) + ": grid mismatch");
}

}  // namespace

QuadratureRule make_quadrature(const Grid& grid) {
  const auto aw = detail::axis_weights(grid);
  const std::int64_t n = grid.node_count();
  std::vector<double> weights(n);
#pragma omp parallel for schedule(static)
  for (std::int64_t k = 0; k < n; ++k) weights[k] = node_weight(aw, grid, k);
  return QuadratureRule{grid, std::move(weights)};
}

Density::Density(ScalarField base) : base_(std::move(base)) {
  for (double v : base_.values)
    if (v < 0.0)
      throw std::invalid_argument("Density: negative value present");
  const double total = integral(base_);
  if (std::abs(total - 1.0) > 1e-12)
    throw std::invalid_argument("Density: integral must equal 1 within 1e-12");
}

double integral(const ScalarField& field) {
  const Grid& g = field.grid;
  const auto aw = detail::axis_weights(g);
  const double* v = field.values.data();
  return pairwise_sum(0, g.node_count(), [&](std::int64_t k) {
    return node_weight(aw, g, k) * v[k];
  });
}

double lp_norm(const ScalarField& field, double p) {
  if (p == kInf) {
    double m = 0.0;
    for (double v : field.values) m = std::max(m, std::abs(v));
    return m;
  }
  if (!(p >= 1.0))
    throw std::invalid_argument("lp_norm: p >= 1 or p = inf required");
  const Grid& g = field.grid;
  const auto aw = detail::axis_weights(g);
  const double* v = field.values.data();
  const std::int64_t n = g.node_count();
  double s = 0.0;
  if (p == 1.0) {
    s = pairwise_sum(0, n, [&](std::int64_t k) {
      return node_weight(aw, g, k) * std::abs(v[k]);
    });
    return s;
  }
  if (p == 2.0) {
    s = pairwise_sum(0, n, [&](std::int64_t k) {
      return node_weight(aw, g, k) * v[k] * v[k];
    });
    return std::sqrt(s);
  }
  s = pairwise_sum(0, n, [&](std::int64_t k) {
    return node_weight(aw, g, k) * std::pow(std::abs(v[k]), p);
  });
  return std::pow(s, 1.0 / p);
}

double mean(const ScalarField& field) {
  return integral(field) / field.grid.volume();
}

double weighted_mean(const ScalarField& field, const Density& density) {
  check_same_grid(field.grid, density.grid(), "weighted_mean");
  const Grid& g = field.grid;
  const auto aw = detail::axis_weights(g);
  const double* f = field.values.data();
  const double* w = density.field().values.data();
  const double raw = pairwise_sum(0, g.node_count(), [&](std::int64_t k) {
    return node_weight(aw, g, k) * f[k] * w[k];
  });
  const auto [lo, hi] = std::minmax_element(field.values.begin(), field.values.end());
  return std::clamp(raw, *lo, *hi);
}

Density normalize_density(const ScalarField& field) {
  for (double v : field.values)
    if (v < 0.0)
      throw std::invalid_argument("normalize_density: negative value present");
  const double total = integral(field);
  if (!(total > 0.0))
    throw std::invalid_argument("normalize_density: integral must be positive");
  std::vector<double> values(field.values.size());
  const std::int64_t n = static_cast<std::int64_t>(values.size());
#pragma omp parallel for schedule(static)
  for (std::int64_t k = 0; k < n; ++k) values[k] = field.values[k] / total;
  return Density(ScalarField{field.grid, std::move(values)});
}

namespace {

// One node of the finite-difference gradient; shared by the serial and
// parallel drivers so both produce bitwise-identical output.
inline void gradient_node(const Grid& g, const double* v,
                          const std::array<std::int64_t, kMaxDim>& st,
                          std::int64_t k,
                          const std::array<int, kMaxDim>& idx,
                          VectorField& out) {
  for (int a = 0; a < g.dim; ++a) {
    const int m = g.nodes[a];
    const double h = g.spacing[a];
    const int i = idx[a];
    const std::int64_t s = st[a];
    double d;
    if (g.periodic[a]) {
      const std::int64_t up = (i + 1 == m) ? k - (m - 1) * s : k + s;
      const std::int64_t dn = (i == 0) ? k + (m - 1) * s : k - s;
      d = (v[up] - v[dn]) / (2.0 * h);
    } else if (i == 0) {
      d = (-3.0 * v[k] + 4.0 * v[k + s] - v[k + 2 * s]) / (2.0 * h);
    } else if (i == m - 1) {
      d = (3.0 * v[k] - 4.0 * v[k - s] + v[k - 2 * s]) / (2.0 * h);
    } else {
      d = (v[k + s] - v[k - s]) / (2.0 * h);
    }
    out.comp[a][k] = d;
  }
}

VectorField gradient_impl(const ScalarField& field, bool parallel) {
  const Grid& g = field.grid;
  const std::int64_t n = g.node_count();
  VectorField out;
  out.grid = g;
  for (int a = 0; a < g.dim; ++a) out.comp[a].resize(n);
  const auto st = g.strides();
  const double* v = field.values.data();
  if (parallel) {
#pragma omp parallel for schedule(static)
    for (std::int64_t k = 0; k < n; ++k) {
      std::array<int, kMaxDim> idx{};
      g.unflatten(k, idx);
      gradient_node(g, v, st, k, idx, out);
    }
  } else {
    for (std::int64_t k = 0; k < n; ++k) {
      std::array<int, kMaxDim> idx{};
      g.unflatten(k, idx);
      gradient_node(g, v, st, k, idx, out);
    }
  }
  return out;
}

}  // namespace

VectorField gradient(const ScalarField& field) {
  return gradient_impl(field, true);
}

VectorField gradient_serial(const ScalarField& field) {
  return gradient_impl(field, false);
}

ScalarField magnitude_field(const VectorField& vf) {
  const Grid& g = vf.grid;
  const std::int64_t n = g.node_count();
  std::vector<double> mag(n);
#pragma omp parallel for schedule(static)
  for (std::int64_t k = 0; k < n; ++k) {
    double s = 0.0;
    for (int a = 0; a < g.dim; ++a) s += vf.comp[a][k] * vf.comp[a][k];
    mag[k] = std::sqrt(s);
  }
  return ScalarField{g, std::move(mag)};
}

double gradient_lp_norm(const VectorField& vf, double p) {
  return lp_norm(magnitude_field(vf), p);
}

}  // namespace plab
