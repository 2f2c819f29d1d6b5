#include "plab/search.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "plab/reduce.hpp"

namespace plab {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double axis_distance(const Grid& g, int a, double x, double c) {
  double d = std::abs(x - c);
  if (g.periodic[a]) {
    d = std::fmod(d, g.lengths[a]);
    d = std::min(d, g.lengths[a] - d);
  }
  return d;
}

}  // namespace

Density bump_density(const Grid& grid, const BumpSpec& spec) {
  for (int a = 0; a < grid.dim; ++a) {
    if (spec.center[a] < 0.0 || spec.center[a] > grid.lengths[a])
      throw std::invalid_argument("bump_density: center outside box");
  }
  if (!(spec.eps > 2.0 * grid.max_spacing()))
    throw std::invalid_argument("bump_density: eps too small for grid (needs eps > 2 max spacing)");
  double min_len = grid.lengths[0];
  for (int a = 1; a < grid.dim; ++a) min_len = std::min(min_len, grid.lengths[a]);
  if (spec.eps > min_len)
    throw std::invalid_argument("bump_density: eps exceeds the smallest axis length");

  const std::int64_t n = grid.node_count();
  std::vector<double> values(n);
#pragma omp parallel for schedule(static)
  for (std::int64_t k = 0; k < n; ++k) {
    std::array<double, kMaxDim> x{};
    grid.node_coordinates(k, x);
    double v = 1.0;
    for (int a = 0; a < grid.dim; ++a) {
      const double d = axis_distance(grid, a, x[a], spec.center[a]);
      if (d >= spec.eps) {
        v = 0.0;
        break;
      }
      const double c = std::cos(0.5 * std::numbers::pi * d / spec.eps);
      v *= c * c;
    }
    values[k] = v;
  }
  return normalize_density(ScalarField{grid, std::move(values)});
}

TrigBasis make_trig_basis(const Grid& grid, int max_freq) {
  if (!grid.is_torus())
    throw std::invalid_argument("trig basis: periodic grid required");
  if (max_freq < 1)
    throw std::invalid_argument("trig basis: max_freq >= 1 required");
  for (int a = 0; a < grid.dim; ++a)
    if (2 * max_freq >= grid.nodes[a])
      throw std::invalid_argument("trig basis: max_freq at or above Nyquist for axis " +
                                  std::to_string(a));

  TrigBasis basis;
  basis.grid = grid;
  basis.max_freq = max_freq;
  // Half-space: first nonzero component positive, so {k, -k} appears once.
  std::array<int, kMaxDim> k{};
  const int f = max_freq;
  auto is_lex_positive = [&](const std::array<int, kMaxDim>& v) {
    for (int a = 0; a < grid.dim; ++a) {
      if (v[a] > 0) return true;
      if (v[a] < 0) return false;
    }
    return false;
  };
  std::array<int, kMaxDim> lo{}, hi{};
  for (int a = 0; a < grid.dim; ++a) {
    lo[a] = -f;
    hi[a] = f;
  }
  for (int a = grid.dim; a < kMaxDim; ++a) lo[a] = hi[a] = 0;
  for (k[0] = lo[0]; k[0] <= hi[0]; ++k[0])
    for (k[1] = lo[1]; k[1] <= hi[1]; ++k[1])
      for (k[2] = lo[2]; k[2] <= hi[2]; ++k[2])
        if (is_lex_positive(k)) basis.freqs.push_back(k);
  return basis;
}

namespace {

// Phase of frequency j at node index k.
inline double basis_phase(const TrigBasis& basis,
                          const std::array<double, kMaxDim>& x, int j) {
  const auto& freq = basis.freqs[j];
  double phase = 0.0;
  for (int a = 0; a < basis.grid.dim; ++a)
    phase += freq[a] * x[a] / basis.grid.lengths[a];
  return kTwoPi * phase;
}

inline double synth_node(const TrigBasis& basis, const std::vector<double>& c,
                         const std::array<double, kMaxDim>& x) {
  double v = 0.0;
  const int nf = static_cast<int>(basis.freqs.size());
  for (int j = 0; j < nf; ++j) {
    const double phase = basis_phase(basis, x, j);
    v += c[2 * j] * std::cos(phase) + c[2 * j + 1] * std::sin(phase);
  }
  return v;
}

ScalarField synthesize_impl(const TrigBasis& basis,
                            const std::vector<double>& coeff, bool parallel) {
  if (static_cast<int>(coeff.size()) != basis.size())
    throw std::invalid_argument("synthesize: coefficient count mismatch");
  const Grid& g = basis.grid;
  const std::int64_t n = g.node_count();
  std::vector<double> values(n);
  if (parallel) {
#pragma omp parallel for schedule(static)
    for (std::int64_t k = 0; k < n; ++k) {
      std::array<double, kMaxDim> x{};
      g.node_coordinates(k, x);
      values[k] = synth_node(basis, coeff, x);
    }
  } else {
    for (std::int64_t k = 0; k < n; ++k) {
      std::array<double, kMaxDim> x{};
      g.node_coordinates(k, x);
      values[k] = synth_node(basis, coeff, x);
    }
  }
  return ScalarField{g, std::move(values)};
}

}  // namespace

ScalarField synthesize(const TrigBasis& basis, const std::vector<double>& coeff) {
  return synthesize_impl(basis, coeff, true);
}

ScalarField synthesize_serial(const TrigBasis& basis,
                              const std::vector<double>& coeff) {
  return synthesize_impl(basis, coeff, false);
}

double NormalSampler::next_uniform() {
  // 53-bit mantissa in [0, 1).
  return static_cast<double>(rng_() >> 11) * 0x1.0p-53;
}

double NormalSampler::next() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  double u1 = next_uniform();
  while (u1 <= 0.0) u1 = next_uniform();
  const double u2 = next_uniform();
  const double m = std::sqrt(-2.0 * std::log(u1));
  spare_ = m * std::sin(kTwoPi * u2);
  have_spare_ = true;
  return m * std::cos(kTwoPi * u2);
}

ScalarField random_field(const Grid& grid, int max_freq, std::uint64_t seed) {
  const TrigBasis basis = make_trig_basis(grid, max_freq);
  NormalSampler sampler(seed);
  std::vector<double> coeff(basis.size());
  for (double& c : coeff) c = sampler.next();
  return synthesize(basis, coeff);
}

ScalarField random_box_field(const Grid& grid, int max_freq, std::uint64_t seed) {
  if (max_freq < 1)
    throw std::invalid_argument("random_box_field: max_freq >= 1 required");
  // Non-negative frequency tuples, all-zero excluded.
  std::vector<std::array<int, kMaxDim>> freqs;
  std::array<int, kMaxDim> j{};
  std::array<int, kMaxDim> hi{};
  for (int a = 0; a < grid.dim; ++a) hi[a] = max_freq;
  for (j[0] = 0; j[0] <= hi[0]; ++j[0])
    for (j[1] = 0; j[1] <= hi[1]; ++j[1])
      for (j[2] = 0; j[2] <= hi[2]; ++j[2])
        if (j[0] + j[1] + j[2] > 0) freqs.push_back(j);

  NormalSampler sampler(seed);
  std::vector<double> coeff(freqs.size());
  for (double& c : coeff) c = sampler.next();

  const std::int64_t n = grid.node_count();
  std::vector<double> values(n);
#pragma omp parallel for schedule(static)
  for (std::int64_t k = 0; k < n; ++k) {
    std::array<double, kMaxDim> x{};
    grid.node_coordinates(k, x);
    double v = 0.0;
    for (size_t m = 0; m < freqs.size(); ++m) {
      double term = coeff[m];
      for (int a = 0; a < grid.dim; ++a)
        term *= std::cos(std::numbers::pi * freqs[m][a] * x[a] / grid.lengths[a]);
      v += term;
    }
    values[k] = v;
  }
  return ScalarField{grid, std::move(values)};
}

Density random_density(const Grid& grid, int max_freq, std::uint64_t seed) {
  const ScalarField base = grid.is_torus() ? random_field(grid, max_freq, seed)
                                           : random_box_field(grid, max_freq, seed);
  std::vector<double> values(base.values.size());
  for (size_t k = 0; k < values.size(); ++k)
    values[k] = base.values[k] * base.values[k] + 0.1;
  return normalize_density(ScalarField{grid, std::move(values)});
}

namespace {

// Ratio evaluation machinery for the coefficient ascent. Torus quadrature
// has one uniform weight per node, which keeps the three reduction passes
// free of per-node weight lookups.
struct AscentObjective {
  const TrigBasis* basis = nullptr;
  const std::vector<double>* omega = nullptr;
  double cell = 0.0;           // uniform node weight
  double omega_q_alpha = 0.0;  // ||omega||_q^alpha
  double p = 0.0;
  double r = 0.0;
  int dim = 0;
  std::int64_t n = 0;

  // Basis tables: values and stencil-gradient components per function.
  std::vector<std::vector<double>> bval;
  std::array<std::vector<std::vector<double>>, kMaxDim> bgrad;

  // Current iterate.
  std::vector<double> f;
  std::array<std::vector<double>, kMaxDim> g;

  void rebuild(const std::vector<double>& coeff) {
    const int nb = basis->size();
#pragma omp parallel for schedule(static)
    for (std::int64_t k = 0; k < n; ++k) {
      double fv = 0.0;
      for (int j = 0; j < nb; ++j) fv += coeff[j] * bval[j][k];
      f[k] = fv;
      for (int a = 0; a < dim; ++a) {
        double gv = 0.0;
        for (int j = 0; j < nb; ++j) gv += coeff[j] * bgrad[a][j][k];
        g[a][k] = gv;
      }
    }
  }

  // Ratio of f + delta * direction, where the direction is given by node
  // tables (null for the base iterate).
  double eval(const double* dv,
              const std::array<const double*, kMaxDim>& dg, double delta) const {
    const double* fv = f.data();
    const double* om = omega->data();
    auto value_at = [&](std::int64_t k) {
      return dv ? fv[k] + delta * dv[k] : fv[k];
    };

    const double wm =
        cell * pairwise_sum_serial(0, n, [&](std::int64_t k) {
          return om[k] * value_at(k);
        });

    double dev;
    if (r == kInf) {
      double m = 0.0;
      for (std::int64_t k = 0; k < n; ++k)
        m = std::max(m, std::abs(value_at(k) - wm));
      dev = m;
    } else if (r == 2.0) {
      dev = std::sqrt(cell * pairwise_sum_serial(0, n, [&](std::int64_t k) {
                        const double u = value_at(k) - wm;
                        return u * u;
                      }));
    } else {
      dev = std::pow(cell * pairwise_sum_serial(0, n, [&](std::int64_t k) {
                       return std::pow(std::abs(value_at(k) - wm), r);
                     }),
                     1.0 / r);
    }

    auto grad_sq = [&](std::int64_t k) {
      double s = 0.0;
      for (int a = 0; a < dim; ++a) {
        const double base = g[a][k];
        const double u = dg[a] ? base + delta * dg[a][k] : base;
        s += u * u;
      }
      return s;
    };
    double gp;
    if (p == kInf) {
      double m = 0.0;
      for (std::int64_t k = 0; k < n; ++k) m = std::max(m, grad_sq(k));
      gp = std::sqrt(m);
    } else if (p == 2.0) {
      gp = std::sqrt(cell * pairwise_sum_serial(0, n, grad_sq));
    } else {
      gp = std::pow(cell * pairwise_sum_serial(0, n, [&](std::int64_t k) {
                      return std::pow(grad_sq(k), 0.5 * p);
                    }),
                    1.0 / p);
    }
    if (!(gp > 0.0)) return 0.0;
    return dev / (omega_q_alpha * gp);
  }

  double eval_base() const {
    return eval(nullptr, {nullptr, nullptr, nullptr}, 0.0);
  }

  double eval_basis_shift(int j, double delta) const {
    std::array<const double*, kMaxDim> dg{nullptr, nullptr, nullptr};
    for (int a = 0; a < dim; ++a) dg[a] = bgrad[a][j].data();
    return eval(bval[j].data(), dg, delta);
  }
};

}  // namespace

AscentResult maximize_deficit(const Density& omega, const ExponentConfig& cfg,
                              int max_freq, int budget, std::uint64_t seed) {
  if (budget <= 0)
    throw std::invalid_argument("maximize_deficit: budget must be positive");
  const Grid& grid = omega.grid();
  if (grid.dim != cfg.dim)
    throw std::invalid_argument("maximize_deficit: grid dimension does not match config");
  const TrigBasis basis = make_trig_basis(grid, max_freq);
  const int nb = basis.size();

  AscentObjective obj;
  obj.basis = &basis;
  obj.omega = &omega.field().values;
  obj.dim = grid.dim;
  obj.n = grid.node_count();
  obj.cell = 1.0;
  for (int a = 0; a < grid.dim; ++a) obj.cell *= grid.spacing[a];
  obj.omega_q_alpha = std::pow(lp_norm(omega.field(), cfg.q), cfg.alpha);
  obj.p = cfg.p;
  obj.r = cfg.r;

  obj.bval.resize(nb);
  for (int a = 0; a < grid.dim; ++a) obj.bgrad[a].resize(nb);
  std::vector<double> unit(nb, 0.0);
  for (int j = 0; j < nb; ++j) {
    unit[j] = 1.0;
    ScalarField phi = synthesize(basis, unit);
    unit[j] = 0.0;
    const VectorField dphi = gradient(phi);
    for (int a = 0; a < grid.dim; ++a) obj.bgrad[a][j] = dphi.comp[a];
    obj.bval[j] = std::move(phi.values);
  }
  obj.f.resize(obj.n);
  for (int a = 0; a < grid.dim; ++a) obj.g[a].resize(obj.n);

  // Seed iterate: the same draw as random_field(grid, max_freq, seed).
  NormalSampler sampler(seed);
  std::vector<double> coeff(nb);
  for (double& c : coeff) c = sampler.next();

  auto renormalize = [&](std::vector<double>& c) {
    double s = 0.0;
    for (double v : c) s += v * v;
    s = std::sqrt(s);
    if (s > 0.0)
      for (double& v : c) v /= s;
  };
  renormalize(coeff);
  obj.rebuild(coeff);

  std::vector<double> trace{obj.eval_base()};
  std::vector<double> grad(nb);
  std::vector<double> dir_field(obj.n);
  std::array<std::vector<double>, kMaxDim> dir_grad;
  for (int a = 0; a < grid.dim; ++a) dir_grad[a].resize(obj.n);

  constexpr double kFdStep = 1e-5;
  constexpr double kRelTol = 1e-6;
  double step = 0.5;
  int iterations = 0;

  while (iterations < budget) {
    const double current = trace.back();

    // Finite-difference directional derivative along each coefficient.
#pragma omp parallel for schedule(static)
    for (int j = 0; j < nb; ++j)
      grad[j] = (obj.eval_basis_shift(j, kFdStep) - current) / kFdStep;

    double gnorm = 0.0;
    for (double v : grad) gnorm += v * v;
    gnorm = std::sqrt(gnorm);
    if (!(gnorm > 0.0)) break;
    for (double& v : grad) v /= gnorm;

    // Direction as node tables, reused across the halving loop.
#pragma omp parallel for schedule(static)
    for (std::int64_t k = 0; k < obj.n; ++k) {
      double fv = 0.0;
      for (int j = 0; j < nb; ++j) fv += grad[j] * obj.bval[j][k];
      dir_field[k] = fv;
      for (int a = 0; a < obj.dim; ++a) {
        double gv = 0.0;
        for (int j = 0; j < nb; ++j) gv += grad[j] * obj.bgrad[a][j][k];
        dir_grad[a][k] = gv;
      }
    }
    std::array<const double*, kMaxDim> dgp{nullptr, nullptr, nullptr};
    for (int a = 0; a < obj.dim; ++a) dgp[a] = dir_grad[a].data();

    bool accepted = false;
    while (iterations < budget && step > 1e-12) {
      ++iterations;
      const double trial = obj.eval(dir_field.data(), dgp, step);
      // Margin keeps the trace non-decreasing through the renormalize and
      // rebuild roundoff after acceptance.
      if (trial > current + 1e-12 * std::max(current, 1e-30)) {
        for (int j = 0; j < nb; ++j) coeff[j] += step * grad[j];
        renormalize(coeff);
        obj.rebuild(coeff);
        trace.push_back(obj.eval_base());
        accepted = true;
        step = std::min(1.0, step * 1.5);
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;
    const double improved = trace.back();
    if (improved - trace[trace.size() - 2] <
        kRelTol * std::max(std::abs(improved), 1e-30))
      break;
  }

  // Rescale to unit gradient norm through the public operations; the ratio
  // is unchanged by affine invariance.
  ScalarField best = synthesize(basis, coeff);
  const double gp = gradient_lp_norm(gradient(best), cfg.p);
  if (gp > 0.0) {
#pragma omp parallel for schedule(static)
    for (std::int64_t k = 0; k < obj.n; ++k) best.values[k] /= gp;
  }
  return AscentResult{std::move(best), std::move(trace), iterations};
}

std::vector<SweepRecord> sweep(const ExponentConfig& cfg, const Grid& grid,
                               const std::vector<double>& eps_list,
                               int max_freq, int budget, std::uint64_t seed) {
  if (eps_list.empty()) throw std::invalid_argument("sweep: empty eps list");
  for (size_t i = 1; i < eps_list.size(); ++i)
    if (!(eps_list[i] < eps_list[i - 1]))
      throw std::invalid_argument("sweep: eps list must be strictly decreasing");

  double min_len = grid.lengths[0];
  for (int a = 1; a < grid.dim; ++a) min_len = std::min(min_len, grid.lengths[a]);

  std::vector<SweepRecord> records;
  records.reserve(eps_list.size());
  for (size_t i = 0; i < eps_list.size(); ++i) {
    const double eps = eps_list[i];
    const std::uint64_t record_seed = seed + static_cast<std::uint64_t>(i);

    Density omega = [&]() {
      if (eps >= 0.5 * min_len)
        return normalize_density(constant_field(grid, 1.0));
      BumpSpec bump;
      bump.eps = eps;
      for (int a = 0; a < grid.dim; ++a) bump.center[a] = 0.5 * grid.lengths[a];
      return bump_density(grid, bump);
    }();

    const AscentResult res = maximize_deficit(omega, cfg, max_freq, budget, record_seed);
    const RatioReport rep = ratio_report(res.best, omega, cfg);

    SweepRecord rec;
    rec.eps = eps;
    rec.omega_q_norm = rep.omega_q_norm;
    rec.best_deficit = rep.deficit;
    rec.best_ratio = rep.ratio;
    rec.ascent_iterations = res.iterations;
    rec.seed = record_seed;
    records.push_back(rec);
  }
  return records;
}

namespace {

double record_key(const SweepRecord& rec, SweepKey key) {
  switch (key) {
    case SweepKey::kEps:
      return rec.eps;
    case SweepKey::kOmegaQNorm:
      return rec.omega_q_norm;
    case SweepKey::kBestDeficit:
      return rec.best_deficit;
    default:
      return rec.best_ratio;
  }
}

}  // namespace

FitResult fit_loglog(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size())
    throw std::invalid_argument("fit_loglog: size mismatch");
  const int n = static_cast<int>(x.size());
  if (n < 3) throw std::invalid_argument("fit_loglog: at least 3 points required");
  std::vector<double> lx(n), ly(n);
  for (int i = 0; i < n; ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0))
      throw std::invalid_argument("fit_loglog: values must be positive");
    lx[i] = std::log(x[i]);
    ly[i] = std::log(y[i]);
  }
  double mx = 0.0, my = 0.0;
  for (int i = 0; i < n; ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (int i = 0; i < n; ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  if (!(sxx > 0.0))
    throw std::invalid_argument("fit_loglog: degenerate abscissae");
  FitResult fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  for (int i = 0; i < n; ++i) {
    const double r = ly[i] - (fit.intercept + fit.slope * lx[i]);
    fit.max_abs_residual = std::max(fit.max_abs_residual, std::abs(r));
  }
  return fit;
}

FitResult fit_loglog(const std::vector<SweepRecord>& records, SweepKey x_key,
                     SweepKey y_key) {
  std::vector<double> x, y;
  x.reserve(records.size());
  y.reserve(records.size());
  for (const auto& rec : records) {
    x.push_back(record_key(rec, x_key));
    y.push_back(record_key(rec, y_key));
  }
  return fit_loglog(x, y);
}

void write_sweep_csv(const std::vector<SweepRecord>& records, std::ostream& out) {
  out << "eps,omega_q_norm,best_deficit,best_ratio,ascent_iterations,seed\n";
  for (const auto& r : records) {
    out << format_double(r.eps) << ',' << format_double(r.omega_q_norm) << ','
        << format_double(r.best_deficit) << ',' << format_double(r.best_ratio)
        << ',' << r.ascent_iterations << ',' << r.seed << "\n";
  }
}

std::string fit_result_json(const FitResult& fit) {
  nlohmann::json j;
  j["slope"] = fit.slope;
  j["intercept"] = fit.intercept;
  j["max_abs_residual"] = fit.max_abs_residual;
  return j.dump(2);
}

}  // namespace plab
