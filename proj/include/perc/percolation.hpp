#pragma once
// percolation.hpp — Bernoulli bond percolation on graph windows: edge
// configurations (materialized or lazy), cluster structure, and the
// enlargement operator U(H).
//
// Lazy configurations derive each edge state from a hash of (seed, EdgeId)
// thresholded at p. The same uniforms serve every p, so for a fixed seed the
// open edge set is monotone in p by construction — increasing events are
// exactly monotone under a coupled sweep, not just statistically.

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "perc/graph.hpp"
#include "perc/rng.hpp"

namespace perc {

struct Configuration {
  enum class Mode : std::uint8_t { materialized, lazy };

  Mode mode = Mode::lazy;
  double p = 0.0;
  std::uint64_t seed = 0;
  std::vector<std::uint8_t> open;    // materialized only, |E| entries
  std::vector<std::uint8_t> forced;  // empty, or |E| flags; forced edges are always open
  std::size_t n_edges = 0;

  static double edge_uniform(std::uint64_t seed, EdgeId e) {
    return to_unit(mix2(seed ^ stream::edge, e));
  }

  bool is_open(EdgeId e) const {
    if (!forced.empty() && forced[e]) return true;
    if (mode == Mode::materialized) return open[e] != 0;
    return edge_uniform(seed, e) < p;
  }
};

// Materialized sample: each non-forced edge open independently with
// probability p (uniforms shared with the lazy mode, so both couple).
Configuration sample_config(const Graph& g, double p, std::uint64_t seed,
                            const std::vector<EdgeId>& forced_open = {});

Configuration lazy_config(const Graph& g, double p, std::uint64_t seed,
                          const std::vector<EdgeId>& forced_open = {});

Configuration materialize(const Graph& g, const Configuration& cfg);

// Validated edge state query.
bool edge_state(const Graph& g, const Configuration& cfg, EdgeId e);

// Edgewise maximum of two materialized configurations over the same graph.
Configuration combine(const Graph& g, const Configuration& a, const Configuration& b);

struct ClusterLabeling {
  // label[v] = smallest vertex id in v's open cluster.
  std::vector<VertexId> label;
  // Indexed by label value (slots at non-label ids are unused zeros).
  std::vector<std::uint32_t> size_of;
  std::vector<std::uint8_t> touches_boundary;
  std::uint32_t n_clusters = 0;
};

ClusterLabeling clusters(const Graph& g, const Configuration& cfg);

// Vertices and open edges of x's open cluster; always contains x.
Subgraph open_cluster(const Graph& g, const Configuration& cfg, VertexId x);

// U(H): every open cluster touching a vertex of H, plus H itself.
// V(U) = union of V(C_x) over x in V(H); E(U) = E(H) union those clusters'
// open edges.
Subgraph enlarge(const Graph& g, const Subgraph& h, const Configuration& cfg);

bool spans_boundary(const Graph& g, const ClusterLabeling& labeling, VertexId x);

// Early-exit check that x's open cluster reaches the window boundary, without
// building a labeling. Equivalent to spans_boundary over clusters().
bool cluster_reaches_boundary(const Graph& g, const Configuration& cfg, VertexId x);

// Condition (near): every vertex is in V(H) or has its whole neighborhood
// inside V(H). Under it, enlarging twice equals enlarging once with the
// edgewise-max configuration.
bool near_condition(const Graph& g, const Subgraph& h);

// Smallest p at which `holds_at(p)` becomes true, assuming monotonicity in p
// (callers pass property evaluations over coupled lazy configurations).
// Bisects [0,1] to within tol.
template <class F>
double monotone_threshold(F&& holds_at, double tol = 1e-4) {
  double lo = 0.0, hi = 1.0;
  if (holds_at(0.0)) return 0.0;
  if (!holds_at(1.0)) return 1.0 + tol;  // never holds on this window
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (holds_at(mid))
      hi = mid;
    else
      lo = mid;
  }
  return hi;
}

// Snapshot format: header (seed, p, mode), then sorted open EdgeId list.
void write_config(std::ostream& os, const Graph& g, const Configuration& cfg);
Configuration read_config(std::istream& is, const Graph& g);

}  // namespace perc
