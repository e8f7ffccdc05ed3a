#pragma once
// properties.hpp — property checkers for subgraphs: transience via effective
// resistance, cut points, recurrent subsets, connectivity, percolating
// everywhere, the (TI) condition, quotient graphs, and the two-component
// percolating-everywhere counterexample construction.
//
// Every verdict is at-scale: "infinite" is proxied by "reaches the window
// boundary", and each verdict carries the window radius it was judged at.

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "perc/graph.hpp"
#include "perc/resistance.hpp"

namespace perc {

enum class Verdict : std::uint8_t { holds_at_scale, fails_at_scale, inconclusive };

struct PropertyVerdict {
  std::string property;
  Verdict verdict = Verdict::inconclusive;
  std::string reason;            // required when inconclusive
  std::vector<double> evidence;  // checker-specific numeric payload
  int window_radius = 0;
};

struct ResistanceProfile {
  VertexId center = 0;
  std::vector<int> radii;       // increasing
  std::vector<double> r_eff;    // +inf encoded as infinity() when the ball
                                // exhausts the component
};

// Declared finite-scale cutoffs for the resistance-growth verdict. The tail
// ratio alone cannot separate log growth from bounded growth on a window, so
// an absolute tail-increment guard backs it up.
struct TransienceRule {
  double eps_tail = 0.25;   // transient: r(n) - r(n/2) <= eps_tail * r(n/2)
  double eps_abs = 0.15;    // ... and the tail increment itself is below this
  double inc_floor = 0.5;   // recurrent: top-half increments >= floor * early median
};

std::pair<PropertyVerdict, ResistanceProfile> transience_proxy(
    const Subgraph& sub, VertexId center, const std::vector<int>& radii,
    const TransienceRule& rule = {}, const ResistanceOptions& solver = {});

// Vertices x (passing the window filter) such that removing a single edge
// containing x splits x's component into two parts that each reach the
// window boundary.
std::vector<VertexId> cut_points(const Subgraph& sub,
                                 const std::function<bool(VertexId)>& in_window);
// Window = subgraph-distance ball around the center.
std::vector<VertexId> cut_points(const Subgraph& sub, VertexId window_center, int window_radius);

bool is_connected(const Subgraph& sub);

// V(h) = V(g) and every component of h reaches the window boundary.
bool is_percolating_everywhere(const Graph& g, const Subgraph& h);

// Minimum cut count over the supplied partition ladder; fails-at-scale when
// a partition with both sides boundary-touching is crossed by fewer than
// `threshold` subgraph edges.
PropertyVerdict ti_check(const Subgraph& sub, const std::vector<Bipartition>& partitions,
                         std::size_t threshold);

struct QuotientGraph {
  std::vector<std::uint32_t> class_of;  // per vertex of the parent graph
  std::uint32_t n_classes = 0;
  // (class a < class b) -> |E([a],[b])|
  std::map<std::pair<std::uint32_t, std::uint32_t>, std::uint32_t> multi_edges;
};

// Classes = connected components of h (window realization of the
// probability-one connection equivalence). Requires h percolating everywhere.
QuotientGraph quotient_graph(const Graph& g, const Subgraph& h);

// 1 - (1-p)^{|E([x],[y])|}
double quotient_edge_prob(const QuotientGraph& q, std::uint32_t c1, std::uint32_t c2, double p);

// Minimum over the ladder of the cut sums of class-connection probabilities;
// +infinity when the quotient has a single class (no cuts).
double kalikow_weiss_diagnostic(const QuotientGraph& q, double p,
                                const std::vector<std::vector<std::uint8_t>>& class_side_a);

// H with E(H) = E(G) minus the two-stage cut set E_{A,B} anchored at a0/b0;
// the output has exactly two components, spans all vertices, and both
// components reach the window boundary.
struct PeCounterexample {
  Subgraph h;
  std::vector<EdgeId> removed;  // E_{A,B}
  VertexId a0 = 0, b0 = 0;
};
PeCounterexample build_pe_counterexample(const Graph& g, VertexId a0, VertexId b0,
                                         const Bipartition& part);

// Trend verdict for "the walk visits A infinitely often": regression of
// per-walk cumulative visit counts against log horizon, 95% CI on the mean
// slope. Shared by the window and lattice pipelines.
struct VisitSlope {
  double slope = 0.0;
  double ci_low = 0.0, ci_high = 0.0;
  std::vector<double> mean_visits;  // per horizon
};
VisitSlope visit_slope(const std::vector<std::vector<double>>& per_walk_visits,
                       const std::vector<double>& horizons);

PropertyVerdict recurrent_subset_verdict(const VisitSlope& slope, int window_radius);

// Walks on a graph window; visits counted against V(a).
PropertyVerdict recurrent_subset_estimate(const Graph& g, const Subgraph& a, VertexId start,
                                          std::size_t n_walks, const std::vector<std::size_t>& horizons,
                                          std::uint64_t seed);

}  // namespace perc
