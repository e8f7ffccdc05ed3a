#pragma once
// exact.hpp — exact P_p(U(H) has property) on small graphs by exhaustive
// configuration enumeration. Ground truth for Monte Carlo validation.
//
// Verdicts come from the same deterministic property evaluation the Monte
// Carlo path uses (the evaluator receives the enlarged subgraph built by the
// shared enlarge()). Probabilities are exact rationals at rational p.

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

#include "perc/graph.hpp"
#include "perc/percolation.hpp"

namespace perc {

// Small exact rational on int64 with __int128 intermediates.
struct Rational {
  long long num = 0;
  long long den = 1;

  Rational() = default;
  Rational(long long n, long long d);
  static Rational of(long long n, long long d = 1) { return Rational(n, d); }

  double to_double() const { return double(num) / double(den); }
  friend bool operator==(const Rational&, const Rational&) = default;
};

Rational rat_add(const Rational& a, const Rational& b);
Rational rat_sub(const Rational& a, const Rational& b);
Rational rat_mul(const Rational& a, const Rational& b);
Rational rat_pow(const Rational& a, int k);

inline constexpr int max_exact_edges = 24;

struct ExactResult {
  Rational probability;
  double value = 0.0;
  Rational p;
  std::uint64_t n_configs = 0;
  // N_k = number of configurations with k open free edges satisfying the
  // property; probability = sum N_k p^k (1-p)^(m-k).
  std::vector<long long> open_counts;
};

// Deterministic verdict on the enlarged subgraph.
using ExactProperty = std::function<bool(const Graph&, const Subgraph& enlarged)>;

// Enumerates all configurations of the non-forced edges (at most
// max_exact_edges of them). forced_open edges are always open (the measure
// that forces E(H) open is the forced_open = E(H) case).
ExactResult exact_event_prob(const Graph& g, const Subgraph& h, const ExactProperty& property,
                             const Rational& p, const std::vector<EdgeId>& forced_open = {});

// Coefficients c_0..c_m of the probability as a polynomial in p.
std::vector<long long> exact_polynomial(const Graph& g, const Subgraph& h,
                                        const ExactProperty& property,
                                        const std::vector<EdgeId>& forced_open = {});

// Evaluate a polynomial (integer coefficients) at rational p.
Rational eval_polynomial(const std::vector<long long>& coeffs, const Rational& p);

}  // namespace perc
