#pragma once
// resistance.hpp — effective resistance on subgraphs with unit conductances.
//
// Pipeline: restrict to the source's component, contract the target set into
// one grounded node, then shrink the network with exact transformations
// (dangling-tree pruning, series collapse of degree-2 interior vertices,
// parallel merge). Small remaining systems are solved by dense Cholesky,
// larger ones by Jacobi-preconditioned conjugate gradients to residual <= tol.

#include <cstdint>
#include <vector>

#include "perc/graph.hpp"

namespace perc {

struct ResistanceResult {
  bool finite = false;
  double ohms = 0.0;
};

struct ResistanceOptions {
  double tol = 1e-9;
  std::size_t dense_cutoff = 1024;
  bool reduce = true;  // prune/collapse before solving (exact transformations)
};

// Resistance from source to the target set (merged into one ground node).
// Disconnected source/targets yield finite == false.
ResistanceResult effective_resistance(const Subgraph& sub, VertexId source,
                                      const std::vector<VertexId>& targets,
                                      const ResistanceOptions& opt = {});

// Resistance from center to the complement of the subgraph-distance ball of
// the given radius (within the source's component). finite == false when the
// component lies entirely inside the ball.
ResistanceResult resistance_to_ball_complement(const Subgraph& sub, VertexId center, int radius,
                                               const ResistanceOptions& opt = {});

}  // namespace perc
