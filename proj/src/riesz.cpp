#include "plab/riesz.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "plab/errors.hpp"

namespace plab {

namespace {

constexpr double kPi = std::numbers::pi;

// Per-axis node caps keep the O(N^2) convolution at desk scale.
constexpr int kMaxNodes2d = 129;
constexpr int kMaxNodes3d = 33;

inline double kernel_value(int n, double d2, double r2) {
  if (r2 > d2) return 0.0;
  switch (n) {
    case 1:
      return 1.0;
    case 2:
      return 1.0 / std::sqrt(r2);
    default:
      return 1.0 / r2;
  }
}

struct ConvolutionPlan {
  const Grid* grid;
  std::vector<double> mass;  // quadrature weight times density value
  std::array<std::vector<double>, kMaxDim> coords;
  double d2 = 0.0;
  double singular = 0.0;  // replacement kernel value for the self cell
};

ConvolutionPlan make_plan(const Density& omega, const RieszKernelSpec& spec) {
  const Grid& g = omega.grid();
  if (g.dim != spec.dim)
    throw std::invalid_argument("riesz_potential: spec dimension does not match grid");
  if (!g.is_box())
    throw std::invalid_argument("riesz_potential: periodic grid rejected");
  if (g.dim == 2) {
    for (int a = 0; a < g.dim; ++a)
      if (g.nodes[a] > kMaxNodes2d)
        throw std::invalid_argument("riesz_potential: node cap 129 per axis exceeded (n=2)");
  } else if (g.dim == 3) {
    for (int a = 0; a < g.dim; ++a)
      if (g.nodes[a] > kMaxNodes3d)
        throw std::invalid_argument("riesz_potential: node cap 33 per axis exceeded (n=3)");
  }

  ConvolutionPlan plan;
  plan.grid = &g;
  plan.d2 = spec.d * spec.d;

  const QuadratureRule rule = make_quadrature(g);
  const std::int64_t n = g.node_count();
  plan.mass.resize(n);
  for (std::int64_t k = 0; k < n; ++k)
    plan.mass[k] = rule.weights[k] * omega.field().values[k];

  for (int a = 0; a < g.dim; ++a) {
    plan.coords[a].resize(g.nodes[a]);
    for (int i = 0; i < g.nodes[a]; ++i)
      plan.coords[a][i] = g.coordinate(a, i);
  }

  // Exact kernel integral over the ball of radius min(d, h_min/2), divided
  // by the full cell volume.
  const double rho = std::min(spec.d, 0.5 * g.min_spacing());
  double cell = 1.0;
  for (int a = 0; a < g.dim; ++a) cell *= g.spacing[a];
  plan.singular = sphere_area(g.dim) * rho / cell;
  return plan;
}

// Potential at output node j; fixed input ordering, shared by the serial and
// parallel drivers.
double potential_node(const ConvolutionPlan& plan, std::int64_t j) {
  const Grid& g = *plan.grid;
  const int n = g.dim;
  std::array<double, kMaxDim> z{};
  {
    std::array<int, kMaxDim> idx{};
    g.unflatten(j, idx);
    for (int a = 0; a < n; ++a) z[a] = plan.coords[a][idx[a]];
  }
  const std::int64_t count = g.node_count();
  double acc = 0.0;
  if (n == 1) {
    for (std::int64_t k = 0; k < count; ++k) {
      const double dx = z[0] - plan.coords[0][k];
      const double r2 = dx * dx;
      acc += plan.mass[k] * (k == j ? plan.singular : kernel_value(1, plan.d2, r2));
    }
  } else if (n == 2) {
    const int m1 = g.nodes[1];
    std::int64_t k = 0;
    for (int i0 = 0; i0 < g.nodes[0]; ++i0) {
      const double dx0 = z[0] - plan.coords[0][i0];
      for (int i1 = 0; i1 < m1; ++i1, ++k) {
        const double dx1 = z[1] - plan.coords[1][i1];
        const double r2 = dx0 * dx0 + dx1 * dx1;
        acc += plan.mass[k] * (k == j ? plan.singular : kernel_value(2, plan.d2, r2));
      }
    }
  } else {
    std::int64_t k = 0;
    for (int i0 = 0; i0 < g.nodes[0]; ++i0) {
      const double dx0 = z[0] - plan.coords[0][i0];
      for (int i1 = 0; i1 < g.nodes[1]; ++i1) {
        const double dx1 = z[1] - plan.coords[1][i1];
        const double base = dx0 * dx0 + dx1 * dx1;
        for (int i2 = 0; i2 < g.nodes[2]; ++i2, ++k) {
          const double dx2 = z[2] - plan.coords[2][i2];
          const double r2 = base + dx2 * dx2;
          acc += plan.mass[k] * (k == j ? plan.singular : kernel_value(3, plan.d2, r2));
        }
      }
    }
  }
  return acc;
}

}  // namespace

RieszKernelSpec make_kernel_spec(int dim, double d) {
  if (dim < 1 || dim > kMaxDim)
    throw std::invalid_argument("make_kernel_spec: dimension must be 1, 2 or 3");
  if (!(d > 0.0) || !std::isfinite(d))
    throw std::invalid_argument("make_kernel_spec: d > 0 required");
  return RieszKernelSpec{dim, d};
}

double sphere_area(int n) {
  switch (n) {
    case 1:
      return 2.0;
    case 2:
      return 2.0 * kPi;
    case 3:
      return 4.0 * kPi;
    default:
      throw std::invalid_argument("sphere_area: dimension must be 1, 2 or 3");
  }
}

double young_exponent(int n, double q) {
  if (n < 1 || n > kMaxDim)
    throw std::invalid_argument("young_exponent: dimension must be 1, 2 or 3");
  if (!(2.0 * q > n))
    throw HypothesisError(Hypothesis::kQTooSmall, "q > n/2 failed");
  return 1.0 / (1.0 + 1.0 / n - 1.0 / q);
}

double kernel_lr_norm(const RieszKernelSpec& spec, double s) {
  const int n = spec.dim;
  if (!(s >= 1.0))
    throw std::invalid_argument("kernel_lr_norm: s >= 1 required");
  if (n > 1 && !(s * (n - 1) < n))
    throw std::invalid_argument("kernel_lr_norm: s < n/(n-1) required (integral diverges)");
  const double expo = n - (n - 1) * s;
  return std::pow(sphere_area(n) * std::pow(spec.d, expo) / expo, 1.0 / s);
}

ScalarField riesz_potential(const Density& omega, const RieszKernelSpec& spec) {
  const ConvolutionPlan plan = make_plan(omega, spec);
  const std::int64_t n = plan.grid->node_count();
  std::vector<double> out(n);
#pragma omp parallel for schedule(static)
  for (std::int64_t j = 0; j < n; ++j) out[j] = potential_node(plan, j);
  return ScalarField{*plan.grid, std::move(out)};
}

ScalarField riesz_potential_serial(const Density& omega,
                                   const RieszKernelSpec& spec) {
  const ConvolutionPlan plan = make_plan(omega, spec);
  const std::int64_t n = plan.grid->node_count();
  std::vector<double> out(n);
  for (std::int64_t j = 0; j < n; ++j) out[j] = potential_node(plan, j);
  return ScalarField{*plan.grid, std::move(out)};
}

YoungReport young_check(const Density& omega, double q,
                        const RieszKernelSpec& spec) {
  const int n = omega.grid().dim;
  YoungReport rep;
  rep.dim = n;
  rep.q = q;
  rep.d = spec.d;
  rep.kernel_norm = kernel_lr_norm(spec, young_exponent(n, q));
  rep.lhs = lp_norm(riesz_potential(omega, spec), static_cast<double>(n));
  rep.rhs = rep.kernel_norm * lp_norm(omega.field(), q);
  rep.slack = rep.lhs / rep.rhs;
  return rep;
}

std::string young_report_json(const YoungReport& r) {
  nlohmann::json j;
  j["lhs"] = r.lhs;
  j["kernel_norm"] = r.kernel_norm;
  j["rhs"] = r.rhs;
  j["slack"] = r.slack;
  j["n"] = r.dim;
  j["q"] = r.q;
  j["d"] = r.d;
  return j.dump(2);
}

}  // namespace plab
