#include "plab/inequality.hpp"

#include <cmath>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "plab/reduce.hpp"

namespace plab {

ExponentCheck check_exponents(int n, double p, double q, double r) {
  auto fail = [](Hypothesis code, const char* msg) {
    return ExponentCheck{false, code, msg};
  };
  if (n < 2) return fail(Hypothesis::kDimension, "n >= 2 failed");
  if (n > kMaxDim) return fail(Hypothesis::kDimension, "n <= 3 failed");
  if (!std::isfinite(p) || !(p > 1.0))
    return fail(Hypothesis::kPTooSmall, "p in (1, inf) failed");
  if (p * (n - 1) < n)
    return fail(Hypothesis::kPTooSmall, "p >= n/(n-1) failed");
  if (!std::isfinite(q) || !(q > 1.0))
    return fail(Hypothesis::kQTooSmall, "q in (1, inf) failed");
  if (!(2.0 * q > n)) return fail(Hypothesis::kQTooSmall, "q > n/2 failed");
  if (std::isnan(r) || !(r > 1.0))
    return fail(Hypothesis::kRIncompatible, "r > 1 failed");
  if (p < n && !(n * p >= r * (n - p)))
    return fail(Hypothesis::kRIncompatible, "1/r >= 1/p - 1/n failed");
  return ExponentCheck{true, Hypothesis::kDimension, ""};
}

ExponentConfig validate_exponents(int n, double p, double q, double r) {
  const ExponentCheck chk = check_exponents(n, p, q, r);
  if (!chk.ok) throw HypothesisError(chk.code, chk.message);
  ExponentConfig cfg;
  cfg.dim = n;
  cfg.p = p;
  cfg.q = q;
  cfg.r = r;
  cfg.t = (n - 1) * p / n;
  cfg.alpha = 1.0 / cfg.t;
  cfg.p_prime = sobolev_conjugate(n, p);
  return cfg;
}

double sobolev_conjugate(int n, double p) {
  if (!(p > 1.0)) throw std::invalid_argument("sobolev_conjugate: p > 1 required");
  if (p < n) return n * p / (n - p);
  if (p > n) return kInf;
  return 2.0 * p;
}

double interpolation_theta(double t, double p, double p_prime) {
  if (!(t < p) || !(p < p_prime))
    throw std::invalid_argument("interpolation_theta: t < p < p_prime required");
  if (p_prime == kInf) return t / p;
  return (1.0 / p - 1.0 / p_prime) / (1.0 / t - 1.0 / p_prime);
}

double deficit(const ScalarField& f, const Density& omega, double r) {
  if (f.grid != omega.grid())
    throw std::invalid_argument("deficit: grid mismatch");
  const double wm = weighted_mean(f, omega);
  std::vector<double> shifted(f.values.size());
  const std::int64_t n = static_cast<std::int64_t>(shifted.size());
#pragma omp parallel for schedule(static)
  for (std::int64_t k = 0; k < n; ++k) shifted[k] = f.values[k] - wm;
  return lp_norm(ScalarField{f.grid, std::move(shifted)}, r);
}

RatioReport ratio_report(const ScalarField& f, const Density& omega,
                         const ExponentConfig& cfg) {
  if (f.grid != omega.grid())
    throw std::invalid_argument("ratio: grid mismatch");
  if (f.grid.dim != cfg.dim)
    throw std::invalid_argument("ratio: grid dimension does not match config");
  RatioReport rep;
  rep.alpha = cfg.alpha;
  rep.grad_p_norm = gradient_lp_norm(gradient(f), cfg.p);
  if (!(rep.grad_p_norm > 0.0))
    throw std::invalid_argument("constant_f: gradient norm is zero");
  rep.deficit = deficit(f, omega, cfg.r);
  rep.omega_q_norm = lp_norm(omega.field(), cfg.q);
  rep.ratio = rep.deficit / (std::pow(rep.omega_q_norm, cfg.alpha) * rep.grad_p_norm);
  return rep;
}

double ratio(const ScalarField& f, const Density& omega,
             const ExponentConfig& cfg) {
  return ratio_report(f, omega, cfg).ratio;
}

TnormReport tnorm_check(const ScalarField& f, const Density& omega,
                        const ExponentConfig& cfg) {
  if (f.grid != omega.grid())
    throw std::invalid_argument("tnorm_check: grid mismatch");
  if (f.grid.dim != cfg.dim)
    throw std::invalid_argument("tnorm_check: grid dimension does not match config");
  if (!f.grid.is_box())
    throw std::invalid_argument("tnorm_check: box (non-periodic) grid required");

  const double wm = weighted_mean(f, omega);
  const Grid& g = f.grid;
  const auto aw = detail::axis_weights(g);
  const double* v = f.values.data();
  const double t = cfg.t;

  auto axis_w = [&](std::int64_t k) {
    std::array<int, kMaxDim> idx{};
    g.unflatten(k, idx);
    double w = 1.0;
    for (int a = 0; a < g.dim; ++a) w *= aw[a][idx[a]];
    return w;
  };

  TnormReport rep;
  rep.lhs = pairwise_sum(0, g.node_count(), [&](std::int64_t k) {
    return axis_w(k) * std::pow(std::abs(v[k] - wm), t);
  });

  const ScalarField mag = magnitude_field(gradient(f));
  const double* m = mag.values.data();
  const double p = cfg.p;
  const double grad_pow = pairwise_sum(0, g.node_count(), [&](std::int64_t k) {
    return axis_w(k) * std::pow(m[k], p);
  });
  rep.rhs_core = lp_norm(omega.field(), cfg.q) * std::pow(grad_pow, t / p);
  rep.implied_c = rep.rhs_core > 0.0 ? rep.lhs / rep.rhs_core : 0.0;
  return rep;
}

std::string ratio_report_json(const RatioReport& r) {
  nlohmann::json j;
  j["deficit"] = r.deficit;
  j["omega_q_norm"] = r.omega_q_norm;
  j["grad_p_norm"] = r.grad_p_norm;
  j["alpha"] = r.alpha;
  j["ratio"] = r.ratio;
  return j.dump(2);
}

std::string tnorm_report_json(const TnormReport& r) {
  nlohmann::json j;
  j["lhs"] = r.lhs;
  j["rhs_core"] = r.rhs_core;
  j["implied_c"] = r.implied_c;
  return j.dump(2);
}

}  // namespace plab
