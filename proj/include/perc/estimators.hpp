#pragma once
// estimators.hpp — Monte Carlo estimation of P_p(U(H) has property),
// coupled sweeps over a p grid, and extraction of threshold estimates.
//
// Sweeps over increasing properties sample one spanning threshold lambda per
// trial (bisection over coupled lazy configurations); the sweep curve is the
// empirical CDF of the lambdas, so estimates are exactly monotone in p.

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "perc/properties.hpp"

namespace perc {

inline constexpr double z95 = 1.959963985;
inline constexpr double z99 = 2.575829304;

struct ProbEstimate {
  double p = 0.0;
  std::uint64_t trials = 0;
  std::uint64_t successes = 0;
  double point = 0.0;
  double ci_low = 0.0, ci_high = 1.0;
  std::uint64_t inconclusive = 0;
  bool flagged = false;  // inconclusive rate above 20%
};

// Wilson score interval.
ProbEstimate wilson_estimate(double p, std::uint64_t trials, std::uint64_t successes,
                             double z = z95);

struct ThresholdEstimate {
  enum class Kind : std::uint8_t { at, below_min_grid, above_max_grid };
  Kind kind = Kind::at;
  double value = 0.0;
  std::string method;
};

struct SweepResult {
  std::vector<double> grid;
  std::vector<ProbEstimate> estimates;
  int window_radius = 0;
  bool coupled = false;
  std::vector<double> lambdas;  // per-trial thresholds when coupled
  ThresholdEstimate p_hat_c1, p_hat_c2;

  // CSV columns: p,trials,successes,point,ci_low,ci_high plus provenance.
  void write_csv(std::ostream& os, const std::string& spec_hash, std::uint64_t seed) const;
};

// Default grid: n points evenly inside (0,1).
std::vector<double> default_grid(int n = 21);

// Runs fn(trial) for trial in [0, n); deterministic result placement makes
// output independent of the worker count.
void for_each_trial(std::size_t n_trials, int workers, const std::function<void(std::size_t)>& fn);

int default_workers();

// Generic Monte Carlo at a single p. The evaluator sees (p, trial seed) and
// returns a verdict; fresh randomness per trial realizes the product measure
// when H itself is random.
using TrialEval = std::function<Verdict(double p, std::uint64_t trial_seed)>;

ProbEstimate estimate_event_prob(const TrialEval& eval, double p, std::uint64_t trials,
                                 std::uint64_t master_seed, int workers = 0);

// Coupled sweep for an increasing boolean property: holds_at(p, trial_seed)
// must be monotone in p for a fixed seed (guaranteed for properties read off
// coupled lazy configurations).
using MonotoneEval = std::function<bool(double p, std::uint64_t trial_seed)>;

SweepResult sweep_coupled(const MonotoneEval& holds_at, const std::vector<double>& grid,
                          std::uint64_t trials, std::uint64_t master_seed, double delta = 0.01,
                          int workers = 0, double tol = 1e-4);

// Per-grid-point sweep for verdict-valued properties (no coupling shortcut).
SweepResult sweep_pointwise(const TrialEval& eval, const std::vector<double>& grid,
                            std::uint64_t trials, std::uint64_t master_seed, double delta = 0.01,
                            int workers = 0);

// p_hat_c1: smallest grid p with ci_low > delta; p_hat_c2: smallest grid p
// with ci_high > 1-delta and point >= 1-2*delta. Rejects non-monotone
// uncoupled inputs.
std::pair<ThresholdEstimate, ThresholdEstimate> extract_thresholds(const SweepResult& sweep,
                                                                   double delta = 0.01);

// Interpolated p where the sweep curve crosses 1/2 (the median lambda for
// coupled sweeps).
ThresholdEstimate crossing_half(const SweepResult& sweep);

// Transition location: midpoint of the densest width-`width` window of the
// lambda samples (the steepest-slope point of the sweep curve).
double transition_mode(std::vector<double> lambdas, double width = 0.02);

struct PcEstimate {
  std::vector<int> sizes;
  std::vector<double> crossing;  // median spanning threshold per size
  std::vector<SweepResult> sweeps;
  double extrapolated = 0.0;
  double spread = 0.0;  // max - min of the crossing sequence
};

// Reference p_c for Z^d windows: per size, the 0.5-crossing of
// P_p(origin cluster reaches the shell), with a Richardson-style
// extrapolation. Trials share per-edge uniforms across sizes, so the
// crossing sequence is exactly monotone.
PcEstimate estimate_pc_zd(int dim, const std::vector<int>& sizes, std::uint64_t trials,
                          std::uint64_t master_seed, int workers = 0);

struct GrowthFit {
  double mean_slope = 0.0;
  double spread = 0.0;            // max - min over trials
  std::vector<double> slopes;     // per trial
};

// Least-squares slope of log |B_U(o,n)| against log n per trial.
GrowthFit growth_exponent(const std::function<std::vector<double>(std::uint64_t trial_seed)>& ball_sizes,
                          std::vector<int> radii, std::uint64_t trials, std::uint64_t master_seed,
                          int workers = 0);

double ols_slope(const std::vector<double>& log_x, const std::vector<double>& log_y);

}  // namespace perc
