#include "perc/graph.hpp"

#include <algorithm>
#include <array>
#include <istream>
#include <ostream>
#include <queue>
#include <sstream>
#include <stdexcept>

namespace perc {

void Graph::finalize() {
  adj_off.assign(n_vertices + 1, 0);
  for (const Edge& e : edges) {
    if (e.u >= n_vertices || e.v >= n_vertices)
      throw std::logic_error("graph: edge endpoint out of range");
    ++adj_off[e.u + 1];
    ++adj_off[e.v + 1];
  }
  for (std::size_t i = 1; i < adj_off.size(); ++i) adj_off[i] += adj_off[i - 1];
  adj_v.resize(adj_off.back());
  adj_e.resize(adj_off.back());
  std::vector<std::uint32_t> cursor(adj_off.begin(), adj_off.end() - 1);
  for (EdgeId id = 0; id < edges.size(); ++id) {
    const Edge& e = edges[id];
    adj_v[cursor[e.u]] = e.v;
    adj_e[cursor[e.u]++] = id;
    adj_v[cursor[e.v]] = e.u;
    adj_e[cursor[e.v]++] = id;
  }
  n_boundary = 0;
  for (std::uint8_t b : boundary_mask) n_boundary += b;
}

Subgraph Subgraph::empty(const Graph& graph) {
  Subgraph s;
  s.g = &graph;
  s.has_v.assign(graph.vertex_count(), 0);
  s.has_e.assign(graph.edge_count(), 0);
  return s;
}

Subgraph Subgraph::full(const Graph& graph) {
  Subgraph s;
  s.g = &graph;
  s.has_v.assign(graph.vertex_count(), 1);
  s.has_e.assign(graph.edge_count(), 1);
  s.vcount = static_cast<std::uint32_t>(graph.vertex_count());
  s.ecount = static_cast<std::uint32_t>(graph.edge_count());
  return s;
}

void Subgraph::add_edge(EdgeId e) {
  if (!has_e[e]) {
    has_e[e] = 1;
    ++ecount;
    add_vertex(g->edges[e].u);
    add_vertex(g->edges[e].v);
  }
}

std::vector<VertexId> Subgraph::vertices() const {
  std::vector<VertexId> out;
  out.reserve(vcount);
  for (VertexId v = 0; v < has_v.size(); ++v)
    if (has_v[v]) out.push_back(v);
  return out;
}

std::vector<EdgeId> Subgraph::edge_ids() const {
  std::vector<EdgeId> out;
  out.reserve(ecount);
  for (EdgeId e = 0; e < has_e.size(); ++e)
    if (has_e[e]) out.push_back(e);
  return out;
}

Bipartition Bipartition::from_side_a(const Graph& g, const std::vector<VertexId>& side_a) {
  Bipartition p;
  p.in_a.assign(g.vertex_count(), 0);
  for (VertexId v : side_a) {
    if (v >= g.vertex_count()) throw std::invalid_argument("bipartition: vertex out of range");
    p.in_a[v] = 1;
  }
  return p;
}

Bipartition Bipartition::from_sides(const Graph& g, const std::vector<VertexId>& side_a,
                                    const std::vector<VertexId>& side_b) {
  Bipartition p = from_side_a(g, side_a);
  std::vector<std::uint8_t> seen = p.in_a;
  for (VertexId v : side_b) {
    if (v >= g.vertex_count()) throw std::invalid_argument("bipartition: vertex out of range");
    if (seen[v]) throw std::invalid_argument("bipartition: sides not disjoint");
    seen[v] = 1;
  }
  for (std::uint8_t s : seen)
    if (!s) throw std::invalid_argument("bipartition: sides do not cover V(G)");
  return p;
}

std::size_t Bipartition::size_a() const {
  std::size_t n = 0;
  for (std::uint8_t b : in_a) n += b;
  return n;
}

// --- generators -------------------------------------------------------------

namespace {

void check_budget(std::int64_t n_vertices, std::int64_t n_edges) {
  if (n_vertices > max_graph_vertices || n_edges > max_graph_edges)
    throw std::length_error("generator: window exceeds the memory budget");
}

}  // namespace

Graph build_zd_box(int dim, int radius) {
  if (dim < 1) throw std::invalid_argument("zd_box: dim must be >= 1");
  if (radius < 1) throw std::invalid_argument("zd_box: radius must be >= 1");
  const std::int64_t side = 2 * std::int64_t(radius) + 1;
  __int128 n128 = 1;
  for (int i = 0; i < dim; ++i) {
    n128 *= side;
    if (n128 > max_graph_vertices) throw std::length_error("zd_box: window exceeds the memory budget");
  }
  const std::int64_t n = static_cast<std::int64_t>(n128);
  check_budget(n, std::int64_t(dim) * n);  // edges < dim * n

  Graph g;
  g.family = "zd_box";
  g.params = {dim, radius};
  g.label_width = dim;
  g.n_vertices = static_cast<std::uint32_t>(n);
  g.degree_bound = 2 * dim;
  g.labels.resize(std::size_t(n) * dim);
  g.boundary_mask.assign(n, 0);

  std::vector<std::int64_t> stride(dim);
  stride[dim - 1] = 1;
  for (int i = dim - 2; i >= 0; --i) stride[i] = stride[i + 1] * side;

  std::vector<int> c(dim, -radius);
  for (std::int64_t id = 0; id < n; ++id) {
    bool frontier = false;
    for (int i = 0; i < dim; ++i) {
      g.labels[std::size_t(id) * dim + i] = c[i];
      if (c[i] == radius || c[i] == -radius) frontier = true;
    }
    if (frontier) g.boundary_mask[id] = 1;
    for (int i = dim - 1; i >= 0; --i) {
      if (++c[i] <= radius) break;
      c[i] = -radius;
    }
  }

  g.edges.reserve(std::size_t(dim) * n);
  std::fill(c.begin(), c.end(), -radius);
  for (std::int64_t id = 0; id < n; ++id) {
    // Increasing-stride axis order keeps edge emission lexicographic in (u,v).
    for (int axis = dim - 1; axis >= 0; --axis) {
      if (c[axis] < radius)
        g.edges.push_back({static_cast<VertexId>(id), static_cast<VertexId>(id + stride[axis])});
    }
    for (int i = dim - 1; i >= 0; --i) {
      if (++c[i] <= radius) break;
      c[i] = -radius;
    }
  }
  g.finalize();
  return g;
}

Graph build_regular_tree(int degree, int depth) {
  if (degree < 2) throw std::invalid_argument("regular_tree: degree must be >= 2");
  if (depth < 0) throw std::invalid_argument("regular_tree: depth must be >= 0");
  std::int64_t n = 1;
  std::int64_t level_size = degree;
  for (int d = 1; d <= depth; ++d) {
    n += level_size;
    check_budget(n, n);
    level_size *= (degree - 1);
  }

  Graph g;
  g.family = "regular_tree";
  g.params = {degree, depth};
  g.label_width = 2;  // (level, seq within level)
  g.n_vertices = static_cast<std::uint32_t>(n);
  g.degree_bound = degree;
  g.labels.resize(std::size_t(n) * 2);
  g.boundary_mask.assign(n, 0);
  g.labels[0] = 0;
  g.labels[1] = 0;

  VertexId next = 1;
  std::vector<VertexId> frontier = {0};
  for (int d = 1; d <= depth; ++d) {
    std::vector<VertexId> next_frontier;
    std::int32_t seq = 0;
    for (VertexId parent : frontier) {
      const int children = (d == 1) ? degree : degree - 1;
      for (int c = 0; c < children; ++c) {
        g.edges.push_back({parent, next});
        g.labels[std::size_t(next) * 2] = d;
        g.labels[std::size_t(next) * 2 + 1] = seq++;
        next_frontier.push_back(next);
        ++next;
      }
    }
    frontier = std::move(next_frontier);
  }
  if (depth == 0)
    g.boundary_mask[0] = 1;
  else
    for (VertexId v : frontier) g.boundary_mask[v] = 1;
  g.finalize();
  return g;
}

Graph build_line_graph(int levels) {
  if (levels < 1) throw std::invalid_argument("line_graph: levels must be >= 1");
  std::int64_t midpoints = 1;  // single connection between 0 and 1
  for (std::int64_t k = 1; k < levels; ++k) midpoints += 2 * k * k * k;
  const std::int64_t n = levels + 1 + midpoints;
  check_budget(n, 2 * midpoints);

  Graph g;
  g.family = "line_graph";
  g.params = {levels};
  g.label_width = 3;  // (kind 0=backbone 1=midpoint, level, index)
  g.n_vertices = static_cast<std::uint32_t>(n);
  g.labels.resize(std::size_t(n) * 3);
  g.boundary_mask.assign(n, 0);

  // Backbone ids 0..levels, then midpoints level by level.
  for (int k = 0; k <= levels; ++k) {
    g.labels[std::size_t(k) * 3] = 0;
    g.labels[std::size_t(k) * 3 + 1] = k;
    g.labels[std::size_t(k) * 3 + 2] = 0;
  }
  std::vector<VertexId> level_first(levels);  // first midpoint id per level
  VertexId next = static_cast<VertexId>(levels + 1);
  for (int k = 0; k < levels; ++k) {
    const std::int64_t m = (k == 0) ? 1 : 2 * std::int64_t(k) * k * k;
    level_first[k] = next;
    for (std::int64_t j = 0; j < m; ++j) {
      g.labels[std::size_t(next) * 3] = 1;
      g.labels[std::size_t(next) * 3 + 1] = k;
      g.labels[std::size_t(next) * 3 + 2] = static_cast<std::int32_t>(j);
      ++next;
    }
  }

  auto level_count = [&](int k) -> std::int64_t { return (k == 0) ? 1 : 2 * std::int64_t(k) * k * k; };

  // Per backbone vertex, edges to its midpoints in ascending midpoint id.
  int max_deg = 2;
  for (int k = 0; k <= levels; ++k) {
    std::int64_t deg = 0;
    if (k > 0) {
      const std::int64_t m = level_count(k - 1);
      for (std::int64_t j = 0; j < m; ++j)
        g.edges.push_back({static_cast<VertexId>(k), level_first[k - 1] + static_cast<VertexId>(j)});
      deg += m;
    }
    if (k < levels) {
      const std::int64_t m = level_count(k);
      for (std::int64_t j = 0; j < m; ++j)
        g.edges.push_back({static_cast<VertexId>(k), level_first[k] + static_cast<VertexId>(j)});
      deg += m;
    }
    max_deg = std::max<int>(max_deg, static_cast<int>(deg));
  }
  g.degree_bound = max_deg;

  g.boundary_mask[levels] = 1;
  for (std::int64_t j = 0; j < level_count(levels - 1); ++j)
    g.boundary_mask[level_first[levels - 1] + j] = 1;
  g.finalize();
  return g;
}

TreeSchedule TreeSchedule::default_transient(int depth) {
  TreeSchedule s;
  s.branching.assign(depth, 1);
  for (std::int64_t l = 4; l <= depth; l *= 4) s.branching[l - 1] = 2;
  return s;
}

Graph build_hybrid_z2_tree(int z2_radius, const TreeSchedule& schedule) {
  for (int b : schedule.branching)
    if (b < 1 || b > 8) throw std::invalid_argument("hybrid: invalid branching sequence");
  Graph box = build_zd_box(2, z2_radius);
  const int depth = static_cast<int>(schedule.branching.size());

  std::int64_t tree_n = 0, level_size = 1;
  for (int d = 0; d < depth; ++d) {
    level_size *= schedule.branching[d];
    tree_n += level_size;
  }
  const std::int64_t n = std::int64_t(box.vertex_count()) + tree_n;
  check_budget(n, std::int64_t(box.edge_count()) + tree_n);

  Graph g;
  g.family = "hybrid_z2_tree";
  g.params = {z2_radius, depth};
  for (int b : schedule.branching) g.params.push_back(b);
  g.label_width = 4;  // (side 0=z2 1=tree, a, b, 0) with (a,b) coords or (level, seq)
  g.n_vertices = static_cast<std::uint32_t>(n);
  g.labels.assign(std::size_t(n) * 4, 0);
  g.boundary_mask.assign(n, 0);

  for (VertexId v = 0; v < box.vertex_count(); ++v) {
    g.labels[std::size_t(v) * 4 + 1] = box.labels[std::size_t(v) * 2];
    g.labels[std::size_t(v) * 4 + 2] = box.labels[std::size_t(v) * 2 + 1];
    g.boundary_mask[v] = box.boundary_mask[v];
  }
  g.edges = box.edges;

  // Tree root is identified with the lattice origin.
  const std::int64_t side = 2 * std::int64_t(z2_radius) + 1;
  const VertexId origin = static_cast<VertexId>((side * side) / 2);

  VertexId next = static_cast<VertexId>(box.vertex_count());
  std::vector<VertexId> frontier = {origin};
  int max_branch = 1;
  for (int d = 1; d <= depth; ++d) {
    const int b = schedule.branching[d - 1];
    max_branch = std::max(max_branch, b);
    std::vector<VertexId> next_frontier;
    std::int32_t seq = 0;
    for (VertexId parent : frontier) {
      for (int c = 0; c < b; ++c) {
        g.edges.push_back({parent, next});
        g.labels[std::size_t(next) * 4] = 1;
        g.labels[std::size_t(next) * 4 + 1] = d;
        g.labels[std::size_t(next) * 4 + 2] = seq++;
        next_frontier.push_back(next);
        ++next;
      }
    }
    frontier = std::move(next_frontier);
  }
  for (VertexId v : frontier) g.boundary_mask[v] = 1;
  const int origin_degree = 4 + (schedule.branching.empty() ? 0 : schedule.branching[0]);
  g.degree_bound = std::max(origin_degree, max_branch + 1);
  g.finalize();
  return g;
}

Graph build_glued_trees(int d1, int d2, int depth) {
  if (d1 < 2 || d2 < 2) throw std::invalid_argument("glued_trees: degrees must be >= 2");
  if (depth < 0) throw std::invalid_argument("glued_trees: depth must be >= 0");

  auto side_count = [&](int d) {
    std::int64_t n = 0, level = d;
    for (int k = 1; k <= depth; ++k) {
      n += level;
      level *= (d - 1);
    }
    return n;
  };
  const std::int64_t n = 1 + side_count(d1) + side_count(d2);
  check_budget(n, n);

  Graph g;
  g.family = "glued_trees";
  g.params = {d1, d2, depth};
  g.label_width = 3;  // (side 0=glue 1/2, level, seq)
  g.n_vertices = static_cast<std::uint32_t>(n);
  g.degree_bound = d1 + d2;
  g.labels.assign(std::size_t(n) * 3, 0);
  g.boundary_mask.assign(n, 0);

  VertexId next = 1;
  auto grow_side = [&](int side, int d) {
    std::vector<VertexId> frontier = {0};
    for (int lvl = 1; lvl <= depth; ++lvl) {
      std::vector<VertexId> next_frontier;
      std::int32_t seq = 0;
      for (VertexId parent : frontier) {
        const int children = (lvl == 1) ? d : d - 1;
        for (int c = 0; c < children; ++c) {
          g.edges.push_back({parent, next});
          g.labels[std::size_t(next) * 3] = side;
          g.labels[std::size_t(next) * 3 + 1] = lvl;
          g.labels[std::size_t(next) * 3 + 2] = seq++;
          next_frontier.push_back(next);
          ++next;
        }
      }
      frontier = std::move(next_frontier);
    }
    for (VertexId v : frontier) g.boundary_mask[v] = 1;
  };
  grow_side(1, d1);
  grow_side(2, d2);
  if (depth == 0) g.boundary_mask[0] = 1;
  g.finalize();
  return g;
}

Graph make_custom_graph(std::uint32_t n, std::vector<Edge> edge_list,
                        const std::vector<VertexId>& boundary) {
  Graph g;
  g.family = "custom";
  g.params = {};
  g.label_width = 0;
  g.n_vertices = n;
  for (Edge& e : edge_list) {
    if (e.u == e.v) throw std::invalid_argument("custom graph: self-loop");
    if (e.u > e.v) std::swap(e.u, e.v);
    if (e.v >= n) throw std::invalid_argument("custom graph: endpoint out of range");
  }
  g.edges = std::move(edge_list);
  g.boundary_mask.assign(n, 0);
  for (VertexId v : boundary) g.boundary_mask.at(v) = 1;
  g.finalize();
  int max_deg = 0;
  for (VertexId v = 0; v < n; ++v) max_deg = std::max<int>(max_deg, g.degree(v));
  g.degree_bound = max_deg;
  return g;
}

// --- operations -------------------------------------------------------------

std::vector<std::uint32_t> bfs_distances(const Graph& g, VertexId x) {
  if (x >= g.vertex_count()) throw std::invalid_argument("bfs: unknown vertex");
  std::vector<std::uint32_t> dist(g.vertex_count(), no_distance);
  std::vector<VertexId> queue;
  queue.push_back(x);
  dist[x] = 0;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const VertexId v = queue[head];
    for (VertexId w : g.neighbors(v)) {
      if (dist[w] == no_distance) {
        dist[w] = dist[v] + 1;
        queue.push_back(w);
      }
    }
  }
  return dist;
}

std::vector<VertexId> ball(const Graph& g, VertexId x, int n) {
  if (x >= g.vertex_count()) throw std::invalid_argument("ball: unknown vertex");
  if (n < 0) throw std::invalid_argument("ball: negative radius");
  std::vector<std::uint32_t> dist(g.vertex_count(), no_distance);
  std::vector<VertexId> queue;
  queue.push_back(x);
  dist[x] = 0;
  std::vector<VertexId> out;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const VertexId v = queue[head];
    out.push_back(v);
    if (dist[v] == static_cast<std::uint32_t>(n)) continue;
    for (VertexId w : g.neighbors(v)) {
      if (dist[w] == no_distance) {
        dist[w] = dist[v] + 1;
        queue.push_back(w);
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<EdgeId> bipartition_cut(const Graph& g, const Bipartition& part) {
  if (part.in_a.size() != g.vertex_count())
    throw std::invalid_argument("bipartition_cut: partition size mismatch");
  std::vector<EdgeId> out;
  for (EdgeId e = 0; e < g.edge_count(); ++e)
    if (part.in_a[g.edges[e].u] != part.in_a[g.edges[e].v]) out.push_back(e);
  return out;
}

Subgraph subtree_split(const Graph& tree, EdgeId e, VertexId x) {
  if (e >= tree.edge_count()) throw std::invalid_argument("subtree_split: not an edge");
  const Edge edge = tree.edges[e];
  if (x != edge.u && x != edge.v)
    throw std::invalid_argument("subtree_split: x is not an endpoint of e");
  if (tree.edge_count() + 1 != tree.vertex_count())
    throw std::invalid_argument("subtree_split: graph is not a tree");

  Subgraph s = Subgraph::empty(tree);
  std::vector<VertexId> queue = {x};
  s.add_vertex(x);
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const VertexId v = queue[head];
    const auto nbr = tree.neighbors(v);
    const auto eid = tree.incident_edges(v);
    for (std::size_t i = 0; i < nbr.size(); ++i) {
      if (eid[i] == e) continue;
      if (!s.contains_vertex(nbr[i])) {
        s.add_vertex(nbr[i]);
        queue.push_back(nbr[i]);
      }
      if (!s.contains_edge(eid[i])) s.add_edge(eid[i]);
    }
  }
  return s;
}

void validate_graph(const Graph& g) {
  if (g.boundary_mask.size() != g.vertex_count())
    throw std::logic_error("validate: boundary mask size mismatch");
  if (g.label_width > 0 && g.labels.size() != std::size_t(g.vertex_count()) * g.label_width)
    throw std::logic_error("validate: label array size mismatch");
  for (const Edge& e : g.edges) {
    if (e.u >= g.vertex_count() || e.v >= g.vertex_count())
      throw std::logic_error("validate: edge endpoint out of range");
    if (e.u == e.v) throw std::logic_error("validate: self-loop");
  }
  // Duplicate edges: adjacency lists hold each neighbor once per parallel
  // edge; sort a copy per vertex and look for repeats.
  for (VertexId v = 0; v < g.vertex_count(); ++v) {
    auto nbr = g.neighbors(v);
    std::vector<VertexId> sorted(nbr.begin(), nbr.end());
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 1; i < sorted.size(); ++i)
      if (sorted[i] == sorted[i - 1]) throw std::logic_error("validate: duplicate edge");
    if (g.degree_bound > 0 && static_cast<int>(nbr.size()) > g.degree_bound)
      throw std::logic_error("validate: degree bound exceeded");
  }
  if (g.family == "zd_box") {
    const int dim = static_cast<int>(g.params.at(0));
    const int radius = static_cast<int>(g.params.at(1));
    for (VertexId v = 0; v < g.vertex_count(); ++v) {
      bool frontier = false;
      for (int i = 0; i < dim; ++i) {
        const std::int32_t c = g.labels[std::size_t(v) * dim + i];
        if (c == radius || c == -radius) frontier = true;
      }
      if (frontier != (g.boundary_mask[v] != 0))
        throw std::logic_error("validate: zd_box boundary mismatch");
    }
  }
  if (g.family == "regular_tree") {
    const int depth = static_cast<int>(g.params.at(1));
    for (VertexId v = 0; v < g.vertex_count(); ++v) {
      const bool leaf = g.labels[std::size_t(v) * 2] == depth;
      if (leaf != (g.boundary_mask[v] != 0))
        throw std::logic_error("validate: regular_tree boundary mismatch");
    }
  }
}

// --- text format --------------------------------------------------------------

void write_graph(std::ostream& os, const Graph& g) {
  os << "percgraph 1\n";
  os << "family " << g.family << "\n";
  os << "params " << g.params.size();
  for (std::int64_t p : g.params) os << " " << p;
  os << "\n";
  os << "labelwidth " << g.label_width << "\n";
  os << "degreebound " << g.degree_bound << "\n";
  os << "vertices " << g.n_vertices << "\n";
  for (VertexId v = 0; v < g.n_vertices; ++v) {
    for (int i = 0; i < g.label_width; ++i) {
      if (i) os << " ";
      os << g.labels[std::size_t(v) * g.label_width + i];
    }
    os << "\n";
  }
  os << "edges " << g.edges.size() << "\n";
  for (const Edge& e : g.edges) os << e.u << " " << e.v << "\n";
  std::vector<VertexId> bnd;
  for (VertexId v = 0; v < g.n_vertices; ++v)
    if (g.boundary_mask[v]) bnd.push_back(v);
  os << "boundary " << bnd.size() << "\n";
  for (VertexId v : bnd) os << v << "\n";
  os << "end\n";
}

namespace {

std::string expect_token(std::istream& is, const char* what) {
  std::string tok;
  if (!(is >> tok)) throw std::runtime_error(std::string("graph import: missing ") + what);
  return tok;
}

void expect_keyword(std::istream& is, const char* kw) {
  const std::string tok = expect_token(is, kw);
  if (tok != kw) throw std::runtime_error(std::string("graph import: expected '") + kw + "', got '" + tok + "'");
}

}  // namespace

Graph read_graph(std::istream& is) {
  expect_keyword(is, "percgraph");
  int version = 0;
  is >> version;
  if (version != 1) throw std::runtime_error("graph import: unsupported version");
  Graph g;
  expect_keyword(is, "family");
  is >> g.family;
  expect_keyword(is, "params");
  std::size_t np = 0;
  is >> np;
  g.params.resize(np);
  for (auto& p : g.params) is >> p;
  expect_keyword(is, "labelwidth");
  is >> g.label_width;
  expect_keyword(is, "degreebound");
  is >> g.degree_bound;
  expect_keyword(is, "vertices");
  is >> g.n_vertices;
  g.labels.resize(std::size_t(g.n_vertices) * g.label_width);
  for (auto& l : g.labels) is >> l;
  expect_keyword(is, "edges");
  std::size_t ne = 0;
  is >> ne;
  g.edges.resize(ne);
  for (auto& e : g.edges) is >> e.u >> e.v;
  expect_keyword(is, "boundary");
  std::size_t nb = 0;
  is >> nb;
  g.boundary_mask.assign(g.n_vertices, 0);
  for (std::size_t i = 0; i < nb; ++i) {
    VertexId v;
    is >> v;
    g.boundary_mask.at(v) = 1;
  }
  expect_keyword(is, "end");
  if (!is) throw std::runtime_error("graph import: truncated input");
  g.finalize();
  return g;
}

}  // namespace perc
