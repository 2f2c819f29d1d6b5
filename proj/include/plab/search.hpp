#pragma once

#include <cstdint>
#include <iosfwd>
#include <random>
#include <string>
#include <vector>

#include "plab/calculus.hpp"
#include "plab/grid.hpp"
#include "plab/inequality.hpp"

namespace plab {

// Concentrating cos^2 bump: the per-axis profile cos^2(pi * dist / (2 eps))
// truncated at distance eps, distances wrapped on periodic axes. eps must
// exceed 2 * max spacing so the bump is resolved.
struct BumpSpec {
  std::array<double, kMaxDim> center{};
  double eps = 0.0;
};

Density bump_density(const Grid& grid, const BumpSpec& spec);

// Real trigonometric basis on a torus grid: for every nonzero integer
// frequency vector with |k_a| <= max_freq, restricted to a half-space so
// each line {k, -k} appears once, the pair cos(2 pi k.x/L), sin(2 pi k.x/L).
// The zero mode is excluded, so spanned fields have exact zero mean.
struct TrigBasis {
  Grid grid;
  int max_freq = 0;
  std::vector<std::array<int, kMaxDim>> freqs;

  int size() const { return 2 * static_cast<int>(freqs.size()); }
};

TrigBasis make_trig_basis(const Grid& grid, int max_freq);

ScalarField synthesize(const TrigBasis& basis, const std::vector<double>& coeff);
ScalarField synthesize_serial(const TrigBasis& basis,
                              const std::vector<double>& coeff);

// Seeded standard-normal coefficients on the trig basis; deterministic given
// (grid, max_freq, seed).
ScalarField random_field(const Grid& grid, int max_freq, std::uint64_t seed);

// Box-friendly counterpart built on products of cos(pi j x / L); works on
// any grid, no periodicity requirement.
ScalarField random_box_field(const Grid& grid, int max_freq, std::uint64_t seed);

// Smooth strictly positive random density: a squared random field plus a
// floor, normalized. Torus grids draw from the trig basis, every other grid
// from the cosine basis.
Density random_density(const Grid& grid, int max_freq, std::uint64_t seed);

// Deterministic standard-normal stream: std::mt19937_64 (whose sequence the
// standard pins down) plus an explicit Box-Muller transform, avoiding the
// implementation-defined std::normal_distribution.
class NormalSampler {
 public:
  explicit NormalSampler(std::uint64_t seed) : rng_(seed) {}
  double next();

 private:
  double next_uniform();
  std::mt19937_64 rng_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

struct AscentResult {
  ScalarField best;           // rescaled so ||df||_p = 1
  std::vector<double> trace;  // non-decreasing; trace[0] is the seed iterate
  int iterations = 0;         // trial steps consumed
};

// Maximizes ratio(f, omega, cfg) over trig coefficients by finite-difference
// ascent: normalized steps, halving on non-improvement, stop at the budget
// or when an accepted step improves by less than 1e-6 relative. The seed
// iterate is random_field(grid, max_freq, seed).
AscentResult maximize_deficit(const Density& omega, const ExponentConfig& cfg,
                              int max_freq, int budget, std::uint64_t seed);

struct SweepRecord {
  double eps = 0.0;
  double omega_q_norm = 0.0;
  double best_deficit = 0.0;
  double best_ratio = 0.0;
  int ascent_iterations = 0;
  std::uint64_t seed = 0;
};

// One record per eps (strictly decreasing). Each record builds the bump at
// the domain midpoint and runs maximize_deficit with the derived seed
// (seed + record index). An eps of at least half the smallest axis length is
// the family's flat endpoint and uses the uniform density.
std::vector<SweepRecord> sweep(const ExponentConfig& cfg, const Grid& grid,
                               const std::vector<double>& eps_list,
                               int max_freq, int budget, std::uint64_t seed);

enum class SweepKey { kEps, kOmegaQNorm, kBestDeficit, kBestRatio };

struct FitResult {
  double slope = 0.0;
  double intercept = 0.0;
  double max_abs_residual = 0.0;
};

// Ordinary least squares of log y against log x. Requires >= 3 records and
// positive values.
FitResult fit_loglog(const std::vector<double>& x, const std::vector<double>& y);
FitResult fit_loglog(const std::vector<SweepRecord>& records, SweepKey x_key,
                     SweepKey y_key);

void write_sweep_csv(const std::vector<SweepRecord>& records, std::ostream& out);
std::string fit_result_json(const FitResult& fit);

}  // namespace plab
