#include "perc/exact.hpp"

#include <numeric>

namespace perc {

namespace {

long long checked_ll(__int128 v, const char* what) {
  if (v > __int128(0x7fffffffffffffffLL) || v < -__int128(0x7fffffffffffffffLL))
    throw std::overflow_error(std::string("exact: overflow in ") + what);
  return static_cast<long long>(v);
}

}  // namespace

Rational::Rational(long long n, long long d) {
  if (d == 0) throw std::invalid_argument("rational: zero denominator");
  if (d < 0) {
    n = -n;
    d = -d;
  }
  const long long g = std::gcd(n < 0 ? -n : n, d);
  num = g ? n / g : n;
  den = g ? d / g : d;
}

Rational rat_add(const Rational& a, const Rational& b) {
  const __int128 n = __int128(a.num) * b.den + __int128(b.num) * a.den;
  const __int128 d = __int128(a.den) * b.den;
  const long long nl = checked_ll(n, "add");
  const long long dl = checked_ll(d, "add");
  return Rational(nl, dl);
}

Rational rat_sub(const Rational& a, const Rational& b) {
  return rat_add(a, Rational(-b.num, b.den));
}

Rational rat_mul(const Rational& a, const Rational& b) {
  // Cross-reduce before multiplying to keep intermediates small.
  const long long g1 = std::gcd(a.num < 0 ? -a.num : a.num, b.den);
  const long long g2 = std::gcd(b.num < 0 ? -b.num : b.num, a.den);
  const __int128 n = __int128(a.num / (g1 ? g1 : 1)) * (b.num / (g2 ? g2 : 1));
  const __int128 d = __int128(a.den / (g2 ? g2 : 1)) * (b.den / (g1 ? g1 : 1));
  return Rational(checked_ll(n, "mul"), checked_ll(d, "mul"));
}

Rational rat_pow(const Rational& a, int k) {
  Rational out(1, 1);
  for (int i = 0; i < k; ++i) out = rat_mul(out, a);
  return out;
}

Rational eval_polynomial(const std::vector<long long>& coeffs, const Rational& p) {
  Rational out(0, 1);
  for (std::size_t i = coeffs.size(); i-- > 0;)
    out = rat_add(rat_mul(out, p), Rational(coeffs[i], 1));
  return out;
}

namespace {

std::vector<long long> count_by_open(const Graph& g, const Subgraph& h,
                                     const ExactProperty& property,
                                     const std::vector<EdgeId>& forced_open) {
  if (h.g != &g) throw std::invalid_argument("exact: subgraph belongs to another graph");
  std::vector<std::uint8_t> forced(g.edge_count(), 0);
  for (EdgeId e : forced_open) {
    if (e >= g.edge_count()) throw std::invalid_argument("exact: forced edge out of range");
    forced[e] = 1;
  }
  std::vector<EdgeId> free_edges;
  for (EdgeId e = 0; e < g.edge_count(); ++e)
    if (!forced[e]) free_edges.push_back(e);
  const std::size_t m = free_edges.size();
  if (m > max_exact_edges) throw std::invalid_argument("exact: too many free edges");

  Configuration cfg;
  cfg.mode = Configuration::Mode::materialized;
  cfg.n_edges = g.edge_count();
  cfg.open.assign(g.edge_count(), 0);
  for (EdgeId e = 0; e < g.edge_count(); ++e) cfg.open[e] = forced[e];

  std::vector<long long> counts(m + 1, 0);
  const std::uint64_t total = std::uint64_t(1) << m;
  for (std::uint64_t mask = 0; mask < total; ++mask) {
    int k = 0;
    for (std::size_t i = 0; i < m; ++i) {
      const bool bit = (mask >> i) & 1;
      cfg.open[free_edges[i]] = bit;
      k += bit;
    }
    const Subgraph u = enlarge(g, h, cfg);
    if (property(g, u)) ++counts[k];
  }
  return counts;
}

}  // namespace

ExactResult exact_event_prob(const Graph& g, const Subgraph& h, const ExactProperty& property,
                             const Rational& p, const std::vector<EdgeId>& forced_open) {
  ExactResult out;
  out.p = p;
  out.open_counts = count_by_open(g, h, property, forced_open);
  const int m = int(out.open_counts.size()) - 1;
  out.n_configs = std::uint64_t(1) << m;
  const Rational q = rat_sub(Rational(1, 1), p);
  Rational prob(0, 1);
  for (int k = 0; k <= m; ++k) {
    if (out.open_counts[k] == 0) continue;
    Rational term = rat_mul(Rational(out.open_counts[k], 1), rat_mul(rat_pow(p, k), rat_pow(q, m - k)));
    prob = rat_add(prob, term);
  }
  out.probability = prob;
  out.value = prob.to_double();
  return out;
}

std::vector<long long> exact_polynomial(const Graph& g, const Subgraph& h,
                                        const ExactProperty& property,
                                        const std::vector<EdgeId>& forced_open) {
  const std::vector<long long> counts = count_by_open(g, h, property, forced_open);
  const int m = int(counts.size()) - 1;
  // sum_k N_k p^k (1-p)^(m-k) expanded: coefficient of p^j picks up
  // N_k * (-1)^(j-k) * C(m-k, j-k).
  std::vector<std::vector<long long>> binom(m + 1, std::vector<long long>(m + 1, 0));
  for (int i = 0; i <= m; ++i) {
    binom[i][0] = 1;
    for (int j = 1; j <= i; ++j)
      binom[i][j] = binom[i - 1][j - 1] + (j <= i - 1 ? binom[i - 1][j] : 0);
  }
  std::vector<long long> coeffs(m + 1, 0);
  for (int j = 0; j <= m; ++j) {
    __int128 c = 0;
    for (int k = 0; k <= j; ++k) {
      if (counts[k] == 0) continue;
      const long long b = binom[m - k][j - k];
      const __int128 term = __int128(counts[k]) * b;
      c += ((j - k) % 2 == 0) ? term : -term;
    }
    coeffs[j] = checked_ll(c, "polynomial");
  }
  return coeffs;
}

}  // namespace perc
