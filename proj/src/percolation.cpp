#include "perc/percolation.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>

namespace perc {

namespace {

std::vector<std::uint8_t> forced_mask(const Graph& g, const std::vector<EdgeId>& forced_open) {
  std::vector<std::uint8_t> mask;
  if (!forced_open.empty()) {
    mask.assign(g.edge_count(), 0);
    for (EdgeId e : forced_open) {
      if (e >= g.edge_count()) throw std::invalid_argument("config: forced edge out of range");
      mask[e] = 1;
    }
  }
  return mask;
}

void check_p(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("config: p must be in [0,1]");
}

}  // namespace

Configuration sample_config(const Graph& g, double p, std::uint64_t seed,
                            const std::vector<EdgeId>& forced_open) {
  check_p(p);
  Configuration cfg;
  cfg.mode = Configuration::Mode::materialized;
  cfg.p = p;
  cfg.seed = seed;
  cfg.n_edges = g.edge_count();
  cfg.forced = forced_mask(g, forced_open);
  cfg.open.resize(g.edge_count());
  for (EdgeId e = 0; e < g.edge_count(); ++e)
    cfg.open[e] = Configuration::edge_uniform(seed, e) < p ? 1 : 0;
  return cfg;
}

Configuration lazy_config(const Graph& g, double p, std::uint64_t seed,
                          const std::vector<EdgeId>& forced_open) {
  check_p(p);
  Configuration cfg;
  cfg.mode = Configuration::Mode::lazy;
  cfg.p = p;
  cfg.seed = seed;
  cfg.n_edges = g.edge_count();
  cfg.forced = forced_mask(g, forced_open);
  return cfg;
}

Configuration materialize(const Graph& g, const Configuration& cfg) {
  if (cfg.mode == Configuration::Mode::materialized) return cfg;
  Configuration out = cfg;
  out.mode = Configuration::Mode::materialized;
  out.open.resize(g.edge_count());
  for (EdgeId e = 0; e < g.edge_count(); ++e)
    out.open[e] = Configuration::edge_uniform(cfg.seed, e) < cfg.p ? 1 : 0;
  return out;
}

bool edge_state(const Graph& g, const Configuration& cfg, EdgeId e) {
  if (e >= g.edge_count()) throw std::invalid_argument("edge_state: unknown edge");
  if (cfg.n_edges != g.edge_count()) throw std::invalid_argument("edge_state: config/graph mismatch");
  return cfg.is_open(e);
}

Configuration combine(const Graph& g, const Configuration& a, const Configuration& b) {
  if (a.mode != Configuration::Mode::materialized || b.mode != Configuration::Mode::materialized)
    throw std::invalid_argument("combine: both configurations must be materialized");
  if (a.n_edges != g.edge_count() || b.n_edges != g.edge_count())
    throw std::invalid_argument("combine: configuration/graph mismatch");
  Configuration out;
  out.mode = Configuration::Mode::materialized;
  out.p = a.p + b.p - a.p * b.p;
  out.seed = mix2(a.seed, b.seed);
  out.n_edges = g.edge_count();
  out.open.resize(g.edge_count());
  for (EdgeId e = 0; e < g.edge_count(); ++e)
    out.open[e] = (a.open[e] || b.open[e]) ? 1 : 0;
  if (!a.forced.empty() || !b.forced.empty()) {
    out.forced.assign(g.edge_count(), 0);
    for (EdgeId e = 0; e < g.edge_count(); ++e) {
      const bool fa = !a.forced.empty() && a.forced[e];
      const bool fb = !b.forced.empty() && b.forced[e];
      out.forced[e] = (fa || fb) ? 1 : 0;
    }
  }
  return out;
}

namespace {

struct UnionFind {
  std::vector<VertexId> parent;
  std::vector<std::uint32_t> size;

  explicit UnionFind(std::size_t n) : parent(n), size(n, 1) {
    for (std::size_t i = 0; i < n; ++i) parent[i] = static_cast<VertexId>(i);
  }

  VertexId find(VertexId x) {
    VertexId root = x;
    while (parent[root] != root) root = parent[root];
    while (parent[x] != root) {
      VertexId next = parent[x];
      parent[x] = root;
      x = next;
    }
    return root;
  }

  void unite(VertexId a, VertexId b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (size[a] < size[b]) std::swap(a, b);
    parent[b] = a;
    size[a] += size[b];
  }
};

}  // namespace

ClusterLabeling clusters(const Graph& g, const Configuration& cfg) {
  if (cfg.n_edges != g.edge_count()) throw std::invalid_argument("clusters: config/graph mismatch");
  UnionFind uf(g.vertex_count());
  for (EdgeId e = 0; e < g.edge_count(); ++e)
    if (cfg.is_open(e)) uf.unite(g.edges[e].u, g.edges[e].v);

  ClusterLabeling out;
  out.label.assign(g.vertex_count(), no_vertex);
  // Canonical label = min vertex id per component; ascending scan assigns it.
  for (VertexId v = 0; v < g.vertex_count(); ++v) {
    const VertexId root = uf.find(v);
    if (out.label[root] == no_vertex) out.label[root] = v;
    out.label[v] = out.label[root];
  }
  out.size_of.assign(g.vertex_count(), 0);
  out.touches_boundary.assign(g.vertex_count(), 0);
  for (VertexId v = 0; v < g.vertex_count(); ++v) {
    const VertexId l = out.label[v];
    if (out.size_of[l] == 0) ++out.n_clusters;
    ++out.size_of[l];
    if (g.is_boundary(v)) out.touches_boundary[l] = 1;
  }
  return out;
}

Subgraph open_cluster(const Graph& g, const Configuration& cfg, VertexId x) {
  if (x >= g.vertex_count()) throw std::invalid_argument("open_cluster: unknown vertex");
  Subgraph s = Subgraph::empty(g);
  s.add_vertex(x);
  std::vector<VertexId> queue = {x};
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const VertexId v = queue[head];
    const auto nbr = g.neighbors(v);
    const auto eid = g.incident_edges(v);
    for (std::size_t i = 0; i < nbr.size(); ++i) {
      if (!cfg.is_open(eid[i])) continue;
      if (!s.contains_edge(eid[i])) s.add_edge(eid[i]);
      if (!s.contains_vertex(nbr[i])) {
        s.add_vertex(nbr[i]);
        queue.push_back(nbr[i]);
      }
    }
  }
  return s;
}

Subgraph enlarge(const Graph& g, const Subgraph& h, const Configuration& cfg) {
  if (h.g != &g) throw std::invalid_argument("enlarge: subgraph belongs to another graph");
  if (cfg.n_edges != g.edge_count()) throw std::invalid_argument("enlarge: config/graph mismatch");
  Subgraph u = h;
  std::vector<VertexId> queue = h.vertices();
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const VertexId v = queue[head];
    const auto nbr = g.neighbors(v);
    const auto eid = g.incident_edges(v);
    for (std::size_t i = 0; i < nbr.size(); ++i) {
      if (!cfg.is_open(eid[i])) continue;
      if (!u.contains_edge(eid[i])) u.add_edge(eid[i]);
      if (!u.contains_vertex(nbr[i])) {
        u.add_vertex(nbr[i]);
        queue.push_back(nbr[i]);
      }
    }
  }
  return u;
}

bool spans_boundary(const Graph& g, const ClusterLabeling& labeling, VertexId x) {
  if (x >= g.vertex_count()) throw std::invalid_argument("spans_boundary: unknown vertex");
  return labeling.touches_boundary[labeling.label[x]] != 0;
}

bool cluster_reaches_boundary(const Graph& g, const Configuration& cfg, VertexId x) {
  if (x >= g.vertex_count()) throw std::invalid_argument("cluster_reaches_boundary: unknown vertex");
  if (g.is_boundary(x)) return true;
  // Depth-first with early exit: supercritical clusters hit the frontier
  // after a short deep probe instead of a full layer sweep.
  std::vector<std::uint8_t> visited(g.vertex_count(), 0);
  std::vector<VertexId> stack = {x};
  visited[x] = 1;
  while (!stack.empty()) {
    const VertexId v = stack.back();
    stack.pop_back();
    const auto nbr = g.neighbors(v);
    const auto eid = g.incident_edges(v);
    for (std::size_t i = 0; i < nbr.size(); ++i) {
      if (visited[nbr[i]] || !cfg.is_open(eid[i])) continue;
      if (g.is_boundary(nbr[i])) return true;
      visited[nbr[i]] = 1;
      stack.push_back(nbr[i]);
    }
  }
  return false;
}

bool near_condition(const Graph& g, const Subgraph& h) {
  if (h.g != &g) throw std::invalid_argument("near_condition: subgraph belongs to another graph");
  for (VertexId v = 0; v < g.vertex_count(); ++v) {
    if (h.contains_vertex(v)) continue;
    for (VertexId w : g.neighbors(v))
      if (!h.contains_vertex(w)) return false;
  }
  return true;
}

void write_config(std::ostream& os, const Graph& g, const Configuration& cfg) {
  os << "percconfig 1\n";
  os << "seed " << cfg.seed << "\n";
  os << "p " << cfg.p << "\n";
  os << "mode " << (cfg.mode == Configuration::Mode::materialized ? "materialized" : "lazy") << "\n";
  std::vector<EdgeId> open_edges;
  for (EdgeId e = 0; e < g.edge_count(); ++e)
    if (cfg.is_open(e)) open_edges.push_back(e);
  os << "open " << open_edges.size() << "\n";
  for (EdgeId e : open_edges) os << e << "\n";
  os << "end\n";
}

Configuration read_config(std::istream& is, const Graph& g) {
  std::string tok;
  int version = 0;
  is >> tok >> version;
  if (tok != "percconfig" || version != 1) throw std::runtime_error("config import: bad header");
  Configuration cfg;
  cfg.mode = Configuration::Mode::materialized;
  cfg.n_edges = g.edge_count();
  cfg.open.assign(g.edge_count(), 0);
  std::string mode;
  std::size_t n_open = 0;
  is >> tok >> cfg.seed >> tok >> cfg.p >> tok >> mode >> tok >> n_open;
  for (std::size_t i = 0; i < n_open; ++i) {
    EdgeId e;
    is >> e;
    if (e >= g.edge_count()) throw std::runtime_error("config import: edge out of range");
    cfg.open[e] = 1;
  }
  is >> tok;
  if (tok != "end" || !is) throw std::runtime_error("config import: truncated input");
  return cfg;
}

}  // namespace perc
