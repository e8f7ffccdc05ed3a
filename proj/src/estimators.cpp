#include "perc/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ostream>
#include <stdexcept>
#include <thread>

#include "perc/lattice.hpp"
#include "perc/rng.hpp"

namespace perc {

ProbEstimate wilson_estimate(double p, std::uint64_t trials, std::uint64_t successes, double z) {
  ProbEstimate est;
  est.p = p;
  est.trials = trials;
  est.successes = successes;
  if (trials == 0) return est;
  const double n = double(trials);
  const double phat = double(successes) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double center = (phat + z2 / (2 * n)) / denom;
  const double radius = (z / denom) * std::sqrt(phat * (1 - phat) / n + z2 / (4 * n * n));
  est.point = phat;
  est.ci_low = std::max(0.0, center - radius);
  est.ci_high = std::min(1.0, center + radius);
  return est;
}

std::vector<double> default_grid(int n) {
  std::vector<double> grid(n);
  for (int i = 0; i < n; ++i) grid[i] = double(i + 1) / double(n + 1);
  return grid;
}

int default_workers() {
  if (const char* env = std::getenv("PERC_WORKERS")) {
    const int w = std::atoi(env);
    if (w >= 1) return w;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : int(hw);
}

void for_each_trial(std::size_t n_trials, int workers, const std::function<void(std::size_t)>& fn) {
  if (workers <= 0) workers = default_workers();
  if (workers == 1 || n_trials <= 1) {
    for (std::size_t i = 0; i < n_trials; ++i) fn(i);
    return;
  }
  const std::size_t w = std::min<std::size_t>(workers, n_trials);
  std::vector<std::thread> threads;
  threads.reserve(w);
  for (std::size_t t = 0; t < w; ++t) {
    threads.emplace_back([&, t]() {
      for (std::size_t i = t; i < n_trials; i += w) fn(i);
    });
  }
  for (auto& th : threads) th.join();
}

ProbEstimate estimate_event_prob(const TrialEval& eval, double p, std::uint64_t trials,
                                 std::uint64_t master_seed, int workers) {
  if (trials < 1) throw std::invalid_argument("estimate_event_prob: trials must be >= 1");
  std::vector<std::uint8_t> outcome(trials, 0);  // 0 fail, 1 hold, 2 inconclusive
  for_each_trial(trials, workers, [&](std::size_t i) {
    const Verdict v = eval(p, trial_seed(master_seed, i));
    outcome[i] = v == Verdict::holds_at_scale ? 1 : (v == Verdict::inconclusive ? 2 : 0);
  });
  std::uint64_t successes = 0, inconclusive = 0;
  for (std::uint8_t o : outcome) {
    if (o == 1) ++successes;
    if (o == 2) ++inconclusive;
  }
  ProbEstimate est = wilson_estimate(p, trials, successes);
  est.inconclusive = inconclusive;
  est.flagged = 5 * inconclusive > trials;  // > 20%
  return est;
}

namespace {

void fill_estimates_from_lambdas(SweepResult& sweep, double delta) {
  std::vector<double> sorted = sweep.lambdas;
  std::sort(sorted.begin(), sorted.end());
  sweep.estimates.clear();
  for (double p : sweep.grid) {
    const auto it = std::upper_bound(sorted.begin(), sorted.end(), p);
    const std::uint64_t successes = std::uint64_t(it - sorted.begin());
    sweep.estimates.push_back(wilson_estimate(p, sorted.size(), successes));
  }
  auto [c1, c2] = extract_thresholds(sweep, delta);
  sweep.p_hat_c1 = c1;
  sweep.p_hat_c2 = c2;
}

}  // namespace

SweepResult sweep_coupled(const MonotoneEval& holds_at, const std::vector<double>& grid,
                          std::uint64_t trials, std::uint64_t master_seed, double delta,
                          int workers, double tol) {
  if (grid.empty() || !std::is_sorted(grid.begin(), grid.end()))
    throw std::invalid_argument("sweep: grid must be increasing");
  if (grid.front() <= 0.0 || grid.back() >= 1.0)
    throw std::invalid_argument("sweep: grid must lie inside (0,1)");
  SweepResult sweep;
  sweep.grid = grid;
  sweep.coupled = true;
  sweep.lambdas.assign(trials, 0.0);
  for_each_trial(trials, workers, [&](std::size_t i) {
    const std::uint64_t seed = trial_seed(master_seed, i);
    sweep.lambdas[i] = monotone_threshold([&](double p) { return holds_at(p, seed); }, tol);
  });
  fill_estimates_from_lambdas(sweep, delta);
  return sweep;
}

SweepResult sweep_pointwise(const TrialEval& eval, const std::vector<double>& grid,
                            std::uint64_t trials, std::uint64_t master_seed, double delta,
                            int workers) {
  if (grid.empty() || !std::is_sorted(grid.begin(), grid.end()))
    throw std::invalid_argument("sweep: grid must be increasing");
  SweepResult sweep;
  sweep.grid = grid;
  sweep.coupled = false;
  for (double p : grid)
    sweep.estimates.push_back(estimate_event_prob(eval, p, trials, master_seed, workers));
  auto [c1, c2] = extract_thresholds(sweep, delta);
  sweep.p_hat_c1 = c1;
  sweep.p_hat_c2 = c2;
  return sweep;
}

std::pair<ThresholdEstimate, ThresholdEstimate> extract_thresholds(const SweepResult& sweep,
                                                                   double delta) {
  if (sweep.estimates.size() != sweep.grid.size())
    throw std::invalid_argument("extract_thresholds: incomplete sweep");
  if (!sweep.coupled) {
    // Estimation noise allowed, but systematic decreases are rejected.
    for (std::size_t i = 1; i < sweep.estimates.size(); ++i) {
      if (sweep.estimates[i].point < sweep.estimates[i - 1].point - 0.1)
        throw std::invalid_argument("extract_thresholds: non-monotone uncoupled sweep");
    }
  }
  ThresholdEstimate c1, c2;
  c1.method = "first ci_low > delta";
  c2.method = "first ci_high > 1-delta, point >= 1-2*delta";
  c1.kind = ThresholdEstimate::Kind::above_max_grid;
  c1.value = sweep.grid.back();
  c2.kind = ThresholdEstimate::Kind::above_max_grid;
  c2.value = sweep.grid.back();
  for (std::size_t i = 0; i < sweep.grid.size(); ++i) {
    if (sweep.estimates[i].ci_low > delta) {
      c1.kind = ThresholdEstimate::Kind::at;
      c1.value = sweep.grid[i];
      if (i == 0) c1.kind = ThresholdEstimate::Kind::below_min_grid;
      break;
    }
  }
  for (std::size_t i = 0; i < sweep.grid.size(); ++i) {
    if (sweep.estimates[i].ci_high > 1 - delta && sweep.estimates[i].point >= 1 - 2 * delta) {
      c2.kind = ThresholdEstimate::Kind::at;
      c2.value = sweep.grid[i];
      if (i == 0) c2.kind = ThresholdEstimate::Kind::below_min_grid;
      break;
    }
  }
  return {c1, c2};
}

ThresholdEstimate crossing_half(const SweepResult& sweep) {
  ThresholdEstimate t;
  t.method = "0.5-crossing";
  if (sweep.coupled && !sweep.lambdas.empty()) {
    std::vector<double> sorted = sweep.lambdas;
    std::sort(sorted.begin(), sorted.end());
    const std::size_t n = sorted.size();
    t.value = n % 2 ? sorted[n / 2] : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
    t.kind = ThresholdEstimate::Kind::at;
    return t;
  }
  for (std::size_t i = 0; i < sweep.estimates.size(); ++i) {
    if (sweep.estimates[i].point >= 0.5) {
      if (i == 0) {
        t.kind = ThresholdEstimate::Kind::below_min_grid;
        t.value = sweep.grid.front();
      } else {
        const double p0 = sweep.grid[i - 1], p1 = sweep.grid[i];
        const double y0 = sweep.estimates[i - 1].point, y1 = sweep.estimates[i].point;
        t.kind = ThresholdEstimate::Kind::at;
        t.value = y1 > y0 ? p0 + (0.5 - y0) / (y1 - y0) * (p1 - p0) : p1;
      }
      return t;
    }
  }
  t.kind = ThresholdEstimate::Kind::above_max_grid;
  t.value = sweep.grid.back();
  return t;
}

double transition_mode(std::vector<double> lambdas, double width) {
  if (lambdas.empty()) throw std::invalid_argument("transition_mode: no samples");
  std::sort(lambdas.begin(), lambdas.end());
  std::size_t best_lo = 0, best_count = 0;
  std::size_t lo = 0;
  for (std::size_t hi = 0; hi < lambdas.size(); ++hi) {
    while (lambdas[hi] - lambdas[lo] > width) ++lo;
    if (hi - lo + 1 > best_count) {
      best_count = hi - lo + 1;
      best_lo = lo;
    }
  }
  return lambdas[best_lo] + 0.5 * (lambdas[best_lo + best_count - 1] - lambdas[best_lo]);
}

PcEstimate estimate_pc_zd(int dim, const std::vector<int>& sizes, std::uint64_t trials,
                          std::uint64_t master_seed, int workers) {
  if (sizes.size() < 2) throw std::invalid_argument("estimate_pc: need >= 2 sizes");
  if (!std::is_sorted(sizes.begin(), sizes.end()))
    throw std::invalid_argument("estimate_pc: sizes must be increasing");
  PcEstimate out;
  out.sizes = sizes;

  // All sizes share per-edge uniforms (lattice edge states depend only on the
  // cell key), so each trial's thresholds are monotone in the radius:
  // spanning a larger shell implies spanning every smaller one. Descending
  // sizes let each bisection start from the previous cap.
  const std::size_t n_sizes = sizes.size();
  std::vector<std::vector<double>> lambdas(n_sizes, std::vector<double>(trials, 0.0));
  for_each_trial(trials, workers, [&](std::size_t i) {
    const std::uint64_t seed = trial_seed(master_seed, i);
    double cap = 1.0;
    for (std::size_t s = n_sizes; s-- > 0;) {
      lattice::Window w(dim, sizes[s]);
      lambdas[s][i] = lattice::spanning_threshold(w, seed, 1e-4, std::size_t(1) << 31, cap);
      cap = lambdas[s][i];
    }
  });

  const std::vector<double> grid = default_grid(21);
  for (std::size_t s = 0; s < n_sizes; ++s) {
    SweepResult sweep;
    sweep.grid = grid;
    sweep.coupled = true;
    sweep.window_radius = sizes[s];
    sweep.lambdas = lambdas[s];
    fill_estimates_from_lambdas(sweep, 0.01);
    out.sweeps.push_back(std::move(sweep));
    out.crossing.push_back(crossing_half(out.sweeps.back()).value);
  }

  double lo = out.crossing[0], hi = out.crossing[0];
  for (double c : out.crossing) {
    lo = std::min(lo, c);
    hi = std::max(hi, c);
  }
  out.spread = hi - lo;

  // Aitken extrapolation when the differences behave; otherwise the largest
  // window's value.
  const std::size_t m = out.crossing.size();
  out.extrapolated = out.crossing[m - 1];
  if (m >= 3) {
    const double d1 = out.crossing[m - 2] - out.crossing[m - 3];
    const double d2 = out.crossing[m - 1] - out.crossing[m - 2];
    if (std::abs(d1 - d2) > 1e-12 && d1 * d2 > 0 && std::abs(d2) < std::abs(d1)) {
      const double accel = out.crossing[m - 1] + d2 * d2 / (d1 - d2);
      if (std::abs(accel - out.crossing[m - 1]) < 0.05) out.extrapolated = accel;
    }
  }
  return out;
}

GrowthFit growth_exponent(const std::function<std::vector<double>(std::uint64_t)>& ball_sizes,
                          std::vector<int> radii, std::uint64_t trials, std::uint64_t master_seed,
                          int workers) {
  if (radii.size() < 2) throw std::invalid_argument("growth_exponent: degenerate radii");
  std::vector<double> log_r;
  for (int r : radii) {
    if (r <= 0) throw std::invalid_argument("growth_exponent: degenerate radii");
    log_r.push_back(std::log(double(r)));
  }
  GrowthFit fit;
  fit.slopes.assign(trials, 0.0);
  for_each_trial(trials, workers, [&](std::size_t i) {
    const std::vector<double> sizes = ball_sizes(trial_seed(master_seed, i));
    std::vector<double> log_s;
    for (double s : sizes) log_s.push_back(std::log(std::max(1.0, s)));
    fit.slopes[i] = ols_slope(log_r, log_s);
  });
  double lo = fit.slopes[0], hi = fit.slopes[0], sum = 0.0;
  for (double s : fit.slopes) {
    lo = std::min(lo, s);
    hi = std::max(hi, s);
    sum += s;
  }
  fit.mean_slope = sum / double(trials);
  fit.spread = hi - lo;
  return fit;
}

double ols_slope(const std::vector<double>& log_x, const std::vector<double>& log_y) {
  if (log_x.size() != log_y.size() || log_x.size() < 2)
    throw std::invalid_argument("ols_slope: bad input");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < log_x.size(); ++i) {
    mx += log_x[i];
    my += log_y[i];
  }
  mx /= double(log_x.size());
  my /= double(log_x.size());
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < log_x.size(); ++i) {
    sxx += (log_x[i] - mx) * (log_x[i] - mx);
    sxy += (log_x[i] - mx) * (log_y[i] - my);
  }
  return sxy / sxx;
}

void SweepResult::write_csv(std::ostream& os, const std::string& spec_hash,
                            std::uint64_t seed) const {
  os << "p,trials,successes,point,ci_low,ci_high,spec_hash,seed,window\n";
  char buf[256];
  for (const ProbEstimate& e : estimates) {
    std::snprintf(buf, sizeof(buf), "%.17g,%llu,%llu,%.17g,%.17g,%.17g,%s,%llu,%d\n", e.p,
                  static_cast<unsigned long long>(e.trials),
                  static_cast<unsigned long long>(e.successes), e.point, e.ci_low, e.ci_high,
                  spec_hash.c_str(), static_cast<unsigned long long>(seed), window_radius);
    os << buf;
  }
}

}  // namespace perc
