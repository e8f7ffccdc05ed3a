#pragma once
// lattice.hpp — lazy Z^d windows for experiments whose walks outrun any
// materializable box (d up to 5, coordinates up to +/-2040).
//
// Cells are coordinate tuples packed 12 bits per axis into a uint64 key;
// adjacency is implicit. Per-edge uniforms hash (seed, lower cell, axis), so
// an edge's state does not depend on the window radius — trials couple
// exactly across window sizes and across p. Only queried cells are stored.
//
// Small coordinate sub-windows of an explored enlargement can be
// materialized into an ordinary Graph (with the shell and any walk
// truncation points boundary-marked) so the shared property checkers apply.

#include <cstdint>
#include <vector>

#include "perc/graph.hpp"
#include "perc/rng.hpp"
#include "perc/walks.hpp"

namespace perc {
namespace lattice {

inline constexpr int max_dim = 5;
inline constexpr int max_coord = 2040;  // hard window shell

using CellKey = std::uint64_t;

CellKey pack(const int* c, int dim);
void unpack(CellKey key, int* c, int dim);

struct Window {
  int dim = 3;
  int radius = max_coord;  // |x|_inf <= radius

  Window() = default;
  Window(int d, int r);
};

// Insert-only open-addressing set of cell keys (0 is never a valid key).
class CellSet {
 public:
  explicit CellSet(std::size_t expected = 64);
  bool insert(CellKey key);  // true if newly inserted
  bool contains(CellKey key) const;
  std::size_t size() const { return count_; }
  std::vector<CellKey> sorted_keys() const;

 private:
  void grow();
  std::vector<CellKey> slots_;
  std::size_t mask_ = 0;
  std::size_t count_ = 0;
};

double edge_uniform(std::uint64_t seed, CellKey lower_cell, int axis);

// Open state of the edge between two adjacent cells (order-insensitive).
bool edge_open(const Window& w, std::uint64_t seed, double p, const int* a, const int* b);

struct LatticeWalk {
  std::vector<CellKey> cells;  // cells[0] = start
  StopReason stopped = StopReason::max_steps;
};

LatticeWalk sample_walk(const Window& w, const int* start, std::size_t max_steps,
                        std::uint64_t seed);

LatticeWalk sample_walk_from_origin(const Window& w, std::size_t max_steps, std::uint64_t seed);

// Distinct cells of U(H) for H given by its cell set: every open cluster
// touching an H cell, explored lazily. node_budget caps the exploration
// (throws on exhaustion; meant for subcritical use).
CellSet enlarge_cells(const Window& w, std::uint64_t perc_seed, double p,
                      const std::vector<CellKey>& h_cells, std::size_t node_budget);

// U(trace restricted to the coordinate box |x|_inf <= sub_radius), explored
// through open edges without leaving the box, materialized as a Graph.
// Boundary marks: cells on the box shell, plus walk truncation endpoints.
// Labels carry the cell coordinates (label_width = dim).
struct MaterializedEnlargement {
  Graph graph;
  std::vector<VertexId> trace_vertices;  // vertices that lie on the trace
};

MaterializedEnlargement materialize_enlargement(const Window& w, int sub_radius,
                                                const std::vector<const LatticeWalk*>& trace,
                                                std::uint64_t perc_seed, double p);

// Smallest p (to within tol) at which the open cluster of the origin reaches
// the shell |x|_inf = radius; sentinel beyond 1 when it never does. Coupled
// across radii and p through the shared per-edge uniforms. A caller holding
// a threshold for a larger shell may pass it as hi_cap (spanning the larger
// shell implies spanning this one, so the bisection starts capped).
double spanning_threshold(const Window& w, std::uint64_t perc_seed, double tol = 1e-4,
                          std::size_t node_budget = std::size_t(1) << 31, double hi_cap = 1.0);

}  // namespace lattice
}  // namespace perc
