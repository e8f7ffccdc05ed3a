#pragma once
// walks.hpp — simple random walks on graph windows, trace subgraphs,
// Green-function estimators, and the annulus intersection statistic.
//
// Walk randomness comes from a splitmix64 stream keyed off the walk seed,
// separate from the percolation edge stream, matching the product structure
// of the walk and percolation measures.

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "perc/graph.hpp"
#include "perc/percolation.hpp"

namespace perc {

enum class StopReason : std::uint8_t { max_steps, hit_boundary };

struct WalkPath {
  VertexId start = 0;
  std::vector<VertexId> steps;  // steps[0] == start
  StopReason stopped = StopReason::max_steps;
};

// Two independent walks glued at a shared start at time zero.
struct TwoSidedWalk {
  WalkPath pos, neg;
};

WalkPath sample_walk(const Graph& g, VertexId start, std::size_t max_steps, std::uint64_t seed,
                     bool stop_at_boundary);

TwoSidedWalk sample_two_sided_walk(const Graph& g, VertexId start, std::size_t steps_per_side,
                                   std::uint64_t seed, bool stop_at_boundary);

// Visited vertices and traversed edges.
Subgraph trace_subgraph(const Graph& g, const WalkPath& path);
Subgraph trace_subgraph(const Graph& g, const TwoSidedWalk& walk);

struct HittingStats {
  double hit_prob = 0.0;                   // empirical P(T_A <= horizon)
  std::vector<std::uint32_t> hit_counts;   // visits to A per walk
  std::vector<std::int64_t> last_hit_times;  // -1 when never hit
};

HittingStats hitting_stats(const Graph& g, VertexId start, const std::vector<VertexId>& target,
                           std::size_t n_walks, std::size_t horizon, std::uint64_t seed);

struct GreenEstimate {
  VertexId target = 0;
  double value = 0.0;    // mean total visits (occupation time)
  double std_err = 0.0;
  std::size_t n_walks = 0;
  double boundary_stop_rate = 0.0;  // how often the window truncated the walk
};

// Mean total visits of a walk from `origin` to `target`; with a
// configuration, mean total time spent in the open cluster of `target`
// (same walks either way, so the cluster variant dominates pathwise).
GreenEstimate green_estimate(const Graph& g, VertexId origin, VertexId target,
                             std::size_t n_walks, std::size_t horizon, std::uint64_t seed,
                             const Configuration* cfg = nullptr);

struct IntersectionStats {
  double prob_positive = 0.0;  // empirical P(Z_k > 0)
  double mean = 0.0;           // mean Z_k
  std::size_t n_pairs = 0;
};

// Z_k: common vertices of two independent walks from `origin` inside the
// annulus B(o,2^k) \ B(o,2^(k-1)), each walk run until it first leaves
// B(o,2^k).
IntersectionStats intersection_statistic(const Graph& g, VertexId origin, int k,
                                         std::uint64_t seed, std::size_t n_pairs);

// Text dump: one VertexId per line; two-sided paths carry a side marker.
void write_walk(std::ostream& os, const WalkPath& path);
void write_walk(std::ostream& os, const TwoSidedWalk& walk);

}  // namespace perc
