#pragma once
// graph.hpp — finite graph windows with boundary marks, generators for the
// lattice/tree families, and metric/partition utilities.
//
// A Graph stands for a truncation of an infinite graph. `boundary` marks the
// frontier: vertices whose infinite-graph neighbors were cut away by the
// window. Every "infinite" notion elsewhere in the toolkit is defined
// relative to this boundary set.
//
// EdgeIds are dense 0..|E|-1 in a deterministic generation order
// (lexicographic on endpoint ids); seed-stable lazy sampling depends on it.

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace perc {

using VertexId = std::uint32_t;
using EdgeId = std::uint32_t;

inline constexpr VertexId no_vertex = 0xffffffffu;

// Resource guard for generator preconditions.
inline constexpr std::int64_t max_graph_vertices = 120'000'000;
inline constexpr std::int64_t max_graph_edges = 400'000'000;

struct Edge {
  VertexId u = 0, v = 0;  // canonical: u < v
  friend bool operator==(const Edge&, const Edge&) = default;
};

struct Graph {
  std::string family;                // generator tag ("zd_box", "custom", ...)
  std::vector<std::int64_t> params;  // generator parameters, in order
  int label_width = 0;
  std::vector<std::int32_t> labels;  // label_width ints per vertex
  std::vector<Edge> edges;           // index = EdgeId
  std::vector<std::uint8_t> boundary_mask;
  std::uint32_t n_vertices = 0;
  std::uint32_t n_boundary = 0;
  int degree_bound = 0;

  // CSR adjacency, built by finalize().
  std::vector<std::uint32_t> adj_off;
  std::vector<VertexId> adj_v;
  std::vector<EdgeId> adj_e;

  std::size_t vertex_count() const { return n_vertices; }
  std::size_t edge_count() const { return edges.size(); }

  bool is_boundary(VertexId v) const { return boundary_mask[v] != 0; }

  std::span<const std::int32_t> label(VertexId v) const {
    return {labels.data() + std::size_t(v) * label_width, std::size_t(label_width)};
  }

  std::uint32_t degree(VertexId v) const { return adj_off[v + 1] - adj_off[v]; }

  std::span<const VertexId> neighbors(VertexId v) const {
    return {adj_v.data() + adj_off[v], adj_v.data() + adj_off[v + 1]};
  }
  std::span<const EdgeId> incident_edges(VertexId v) const {
    return {adj_e.data() + adj_off[v], adj_e.data() + adj_off[v + 1]};
  }

  // Builds adjacency and boundary count. Call once after filling fields.
  void finalize();

  bool operator==(const Graph& o) const {
    return family == o.family && params == o.params && label_width == o.label_width &&
           labels == o.labels && edges == o.edges && boundary_mask == o.boundary_mask;
  }
};

// Vertex-set + edge-set restriction of a parent graph. Masked edges always
// have both endpoints in the vertex mask.
struct Subgraph {
  const Graph* g = nullptr;
  std::vector<std::uint8_t> has_v, has_e;
  std::uint32_t vcount = 0, ecount = 0;

  static Subgraph empty(const Graph& graph);
  static Subgraph full(const Graph& graph);

  bool contains_vertex(VertexId v) const { return has_v[v] != 0; }
  bool contains_edge(EdgeId e) const { return has_e[e] != 0; }

  void add_vertex(VertexId v) {
    if (!has_v[v]) { has_v[v] = 1; ++vcount; }
  }
  // Adds the edge and both endpoints.
  void add_edge(EdgeId e);

  std::vector<VertexId> vertices() const;  // ascending
  std::vector<EdgeId> edge_ids() const;    // ascending

  bool operator==(const Subgraph& o) const {
    return g == o.g && has_v == o.has_v && has_e == o.has_e;
  }
};

// V(G) split in two; stored as a membership mask for side A.
struct Bipartition {
  std::vector<std::uint8_t> in_a;

  static Bipartition from_side_a(const Graph& g, const std::vector<VertexId>& side_a);
  // Validates disjointness and that the union covers V(G).
  static Bipartition from_sides(const Graph& g, const std::vector<VertexId>& side_a,
                                const std::vector<VertexId>& side_b);

  std::size_t size_a() const;
  std::size_t size_b() const { return in_a.size() - size_a(); }
};

// --- generators -------------------------------------------------------------

// Box {x : |x|_inf <= radius} of Z^d with nearest-neighbor edges.
Graph build_zd_box(int dim, int radius);

// Ball of radius `depth` in the d-regular tree, rooted; leaves at distance
// `depth` form the boundary.
Graph build_regular_tree(int degree, int depth);

// Backbone 0..levels; between k and k+1 there are 2k^3 parallel connections
// (one for k=0), each a 2-edge path through a fresh midpoint so the graph
// stays simple.
Graph build_line_graph(int levels);

// Per-level branching factors of a spherically symmetric tree. Level l
// (1-based) gives every level-(l-1) vertex `branching[l-1]` children.
struct TreeSchedule {
  std::vector<int> branching;

  // Branch 2 at levels 4^j, else 1: a transient tree with p_c = 1.
  static TreeSchedule default_transient(int depth);
};

// Z^2 box glued at its origin to the root of the scheduled tree (root
// identified with the origin vertex).
Graph build_hybrid_z2_tree(int z2_radius, const TreeSchedule& schedule);

// Two regular-tree balls sharing one glue vertex (degree d1+d2 there).
Graph build_glued_trees(int d1, int d2, int depth);

// Custom fixture graph for tests and counterexamples.
Graph make_custom_graph(std::uint32_t n, std::vector<Edge> edge_list,
                        const std::vector<VertexId>& boundary = {});

// --- operations -------------------------------------------------------------

// All vertices at graph distance <= n from x (ascending ids).
std::vector<VertexId> ball(const Graph& g, VertexId x, int n);

// BFS distances from x; no_distance for unreachable vertices.
inline constexpr std::uint32_t no_distance = 0xffffffffu;
std::vector<std::uint32_t> bfs_distances(const Graph& g, VertexId x);

// Edges with one endpoint per side.
std::vector<EdgeId> bipartition_cut(const Graph& g, const Bipartition& part);

// Component of tree minus edge e containing x (x must be an endpoint of e).
Subgraph subtree_split(const Graph& tree, EdgeId e, VertexId x);

// Structural invariants: simplicity, valid endpoints, degree bound, plus
// per-family boundary recomputation where the family is known. Throws on
// violation.
void validate_graph(const Graph& g);

// --- text export/import (bit-exact round trip) -------------------------------

void write_graph(std::ostream& os, const Graph& g);
Graph read_graph(std::istream& is);

}  // namespace perc
