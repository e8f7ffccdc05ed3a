#include "perc/walks.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>

#include "perc/rng.hpp"

namespace perc {

WalkPath sample_walk(const Graph& g, VertexId start, std::size_t max_steps, std::uint64_t seed,
                     bool stop_at_boundary) {
  if (start >= g.vertex_count()) throw std::invalid_argument("sample_walk: unknown start");
  if (g.degree(start) == 0) throw std::invalid_argument("sample_walk: isolated start vertex");
  WalkPath path;
  path.start = start;
  path.steps.reserve(max_steps + 1);
  path.steps.push_back(start);
  SplitMix64 rng(mix2(seed, stream::walk));
  VertexId v = start;
  for (std::size_t step = 0; step < max_steps; ++step) {
    if (stop_at_boundary && g.is_boundary(v)) {
      path.stopped = StopReason::hit_boundary;
      return path;
    }
    const auto nbr = g.neighbors(v);
    v = nbr[rng.next_below(nbr.size())];
    path.steps.push_back(v);
  }
  if (stop_at_boundary && g.is_boundary(v)) path.stopped = StopReason::hit_boundary;
  return path;
}

TwoSidedWalk sample_two_sided_walk(const Graph& g, VertexId start, std::size_t steps_per_side,
                                   std::uint64_t seed, bool stop_at_boundary) {
  TwoSidedWalk w;
  w.pos = sample_walk(g, start, steps_per_side, mix2(seed, 1), stop_at_boundary);
  w.neg = sample_walk(g, start, steps_per_side, mix2(seed, 2), stop_at_boundary);
  return w;
}

Subgraph trace_subgraph(const Graph& g, const WalkPath& path) {
  Subgraph s = Subgraph::empty(g);
  s.add_vertex(path.start);
  for (std::size_t i = 1; i < path.steps.size(); ++i) {
    const VertexId a = path.steps[i - 1], b = path.steps[i];
    const auto nbr = g.neighbors(a);
    const auto eid = g.incident_edges(a);
    bool found = false;
    for (std::size_t j = 0; j < nbr.size(); ++j) {
      if (nbr[j] == b) {
        s.add_edge(eid[j]);
        found = true;
        break;
      }
    }
    if (!found) throw std::invalid_argument("trace_subgraph: non-adjacent consecutive steps");
  }
  return s;
}

Subgraph trace_subgraph(const Graph& g, const TwoSidedWalk& walk) {
  Subgraph s = trace_subgraph(g, walk.pos);
  Subgraph neg = trace_subgraph(g, walk.neg);
  for (VertexId v = 0; v < g.vertex_count(); ++v)
    if (neg.contains_vertex(v)) s.add_vertex(v);
  for (EdgeId e = 0; e < g.edge_count(); ++e)
    if (neg.contains_edge(e)) s.add_edge(e);
  return s;
}

HittingStats hitting_stats(const Graph& g, VertexId start, const std::vector<VertexId>& target,
                           std::size_t n_walks, std::size_t horizon, std::uint64_t seed) {
  if (target.empty()) throw std::invalid_argument("hitting_stats: empty target");
  std::vector<std::uint8_t> in_target(g.vertex_count(), 0);
  for (VertexId v : target) {
    if (v >= g.vertex_count()) throw std::invalid_argument("hitting_stats: unknown target vertex");
    in_target[v] = 1;
  }
  HittingStats out;
  out.hit_counts.resize(n_walks);
  out.last_hit_times.resize(n_walks);
  std::size_t hits = 0;
  for (std::size_t w = 0; w < n_walks; ++w) {
    WalkPath path = sample_walk(g, start, horizon, trial_seed(seed, w), true);
    std::uint32_t count = 0;
    std::int64_t last = -1;
    for (std::size_t t = 0; t < path.steps.size(); ++t) {
      if (in_target[path.steps[t]]) {
        ++count;
        last = static_cast<std::int64_t>(t);
      }
    }
    out.hit_counts[w] = count;
    out.last_hit_times[w] = last;
    if (count > 0) ++hits;
  }
  out.hit_prob = n_walks ? double(hits) / double(n_walks) : 0.0;
  return out;
}

GreenEstimate green_estimate(const Graph& g, VertexId origin, VertexId target,
                             std::size_t n_walks, std::size_t horizon, std::uint64_t seed,
                             const Configuration* cfg) {
  if (origin >= g.vertex_count() || target >= g.vertex_count())
    throw std::invalid_argument("green_estimate: unknown vertex");
  std::vector<std::uint8_t> in_set;
  if (cfg) {
    Subgraph cluster = open_cluster(g, *cfg, target);
    in_set = cluster.has_v;
  } else {
    in_set.assign(g.vertex_count(), 0);
    in_set[target] = 1;
  }
  GreenEstimate out;
  out.target = target;
  out.n_walks = n_walks;
  double sum = 0.0, sum_sq = 0.0;
  std::size_t boundary_stops = 0;
  for (std::size_t w = 0; w < n_walks; ++w) {
    WalkPath path = sample_walk(g, origin, horizon, trial_seed(seed, w), true);
    if (path.stopped == StopReason::hit_boundary) ++boundary_stops;
    std::uint32_t visits = 0;
    for (VertexId v : path.steps) visits += in_set[v];
    sum += visits;
    sum_sq += double(visits) * double(visits);
  }
  if (n_walks > 0) {
    out.value = sum / double(n_walks);
    const double var = std::max(0.0, sum_sq / double(n_walks) - out.value * out.value);
    out.std_err = std::sqrt(var / double(n_walks));
    out.boundary_stop_rate = double(boundary_stops) / double(n_walks);
  }
  return out;
}

IntersectionStats intersection_statistic(const Graph& g, VertexId origin, int k,
                                         std::uint64_t seed, std::size_t n_pairs) {
  if (k < 1) throw std::invalid_argument("intersection_statistic: k must be >= 1");
  const std::uint32_t outer = 1u << k;
  const std::uint32_t inner = 1u << (k - 1);
  std::vector<std::uint32_t> dist = bfs_distances(g, origin);
  bool annulus_nonempty = false;
  for (VertexId v = 0; v < g.vertex_count() && !annulus_nonempty; ++v)
    if (dist[v] != no_distance && dist[v] > inner && dist[v] <= outer) annulus_nonempty = true;
  if (!annulus_nonempty) throw std::invalid_argument("intersection_statistic: empty annulus");

  std::vector<std::uint32_t> mark(g.vertex_count(), 0);
  std::uint32_t epoch = 0;
  std::size_t positive = 0;
  double z_sum = 0.0;

  // One walk clipped at its exit time from B(o, 2^k).
  auto run_walk = [&](std::uint64_t walk_seed, std::vector<VertexId>& visited) {
    visited.clear();
    SplitMix64 rng(mix2(walk_seed, stream::walk));
    VertexId v = origin;
    visited.push_back(v);
    // Generous cap; exit from the ball happens long before on every window
    // this statistic is used on.
    const std::size_t cap = std::size_t(64) * outer * outer + 1024;
    for (std::size_t step = 0; step < cap; ++step) {
      const auto nbr = g.neighbors(v);
      v = nbr[rng.next_below(nbr.size())];
      if (dist[v] == no_distance || dist[v] > outer) return;
      visited.push_back(v);
      if (g.is_boundary(v)) return;  // window truncation
    }
  };

  std::vector<VertexId> first, second;
  for (std::size_t pair = 0; pair < n_pairs; ++pair) {
    run_walk(trial_seed(seed, 2 * pair), first);
    run_walk(trial_seed(seed, 2 * pair + 1), second);
    ++epoch;
    for (VertexId v : first)
      if (dist[v] > inner) mark[v] = epoch;
    std::uint32_t z = 0;
    for (VertexId v : second) {
      if (mark[v] == epoch) {
        ++z;
        mark[v] = 0;  // count each common vertex once
      }
    }
    if (z > 0) ++positive;
    z_sum += z;
  }

  IntersectionStats out;
  out.n_pairs = n_pairs;
  if (n_pairs > 0) {
    out.prob_positive = double(positive) / double(n_pairs);
    out.mean = z_sum / double(n_pairs);
  }
  return out;
}

void write_walk(std::ostream& os, const WalkPath& path) {
  os << "percwalk 1 one-sided " << path.steps.size() << " "
     << (path.stopped == StopReason::hit_boundary ? "hit_boundary" : "max_steps") << "\n";
  for (VertexId v : path.steps) os << v << "\n";
}

void write_walk(std::ostream& os, const TwoSidedWalk& walk) {
  os << "percwalk 1 two-sided " << walk.neg.steps.size() << " " << walk.pos.steps.size() << "\n";
  for (std::size_t i = walk.neg.steps.size(); i-- > 0;) os << "- " << walk.neg.steps[i] << "\n";
  for (VertexId v : walk.pos.steps) os << "+ " << v << "\n";
}

}  // namespace perc
