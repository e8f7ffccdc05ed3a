#include "doctest.h"

#include <cmath>
#include <sstream>

#include "perc/graph.hpp"
#include "perc/percolation.hpp"
#include "perc/rng.hpp"

using namespace perc;

namespace {

// Uniform random test graph on n vertices with each possible edge kept with
// probability q; deterministic in the seed.
Graph random_graph(int n, double q, std::uint64_t seed) {
  std::vector<Edge> edges;
  SplitMix64 rng(seed);
  for (VertexId u = 0; u < static_cast<VertexId>(n); ++u)
    for (VertexId v = u + 1; v < static_cast<VertexId>(n); ++v)
      if (rng.next_unit() < q) edges.push_back({u, v});
  return make_custom_graph(n, std::move(edges));
}

// Independent connectivity oracle over open edges.
std::vector<VertexId> brute_component_labels(const Graph& g, const Configuration& cfg) {
  std::vector<VertexId> label(g.vertex_count(), no_vertex);
  for (VertexId s = 0; s < g.vertex_count(); ++s) {
    if (label[s] != no_vertex) continue;
    std::vector<VertexId> queue = {s};
    label[s] = s;
    for (std::size_t head = 0; head < queue.size(); ++head) {
      const VertexId v = queue[head];
      const auto nbr = g.neighbors(v);
      const auto eid = g.incident_edges(v);
      for (std::size_t i = 0; i < nbr.size(); ++i) {
        if (label[nbr[i]] == no_vertex && cfg.is_open(eid[i])) {
          label[nbr[i]] = s;
          queue.push_back(nbr[i]);
        }
      }
    }
  }
  return label;
}

}  // namespace

TEST_SUITE("percolation") {

TEST_CASE("degenerate p") {
  Graph g = build_zd_box(2, 3);
  Configuration closed = sample_config(g, 0.0, 7);
  Configuration open = sample_config(g, 1.0, 7);
  for (EdgeId e = 0; e < g.edge_count(); ++e) {
    CHECK(!closed.is_open(e));
    CHECK(open.is_open(e));
  }
  Configuration forced = sample_config(g, 0.0, 7, {3, 5});
  CHECK(forced.is_open(3));
  CHECK(forced.is_open(5));
  CHECK(!forced.is_open(0));
}

TEST_CASE("open fraction matches p") {
  Graph g = build_zd_box(2, 64);
  const double p = 0.4;
  Configuration cfg = sample_config(g, p, 20260810);
  std::size_t open_count = 0;
  for (EdgeId e = 0; e < g.edge_count(); ++e) open_count += cfg.is_open(e);
  const double frac = double(open_count) / double(g.edge_count());
  const double se = std::sqrt(p * (1 - p) / double(g.edge_count()));
  CHECK(std::abs(frac - p) < 3 * se);
}

TEST_CASE("edge_state determinism and monotone coupling") {
  Graph g = build_zd_box(2, 8);
  Configuration lo = lazy_config(g, 0.2, 99);
  Configuration hi = lazy_config(g, 0.7, 99);
  for (EdgeId e = 0; e < g.edge_count(); ++e) {
    if (edge_state(g, lo, e)) CHECK(edge_state(g, hi, e));
    CHECK(edge_state(g, lo, e) == edge_state(g, lo, e));
  }
  // Lazy and materialized agree edge by edge.
  Configuration mat = materialize(g, lo);
  for (EdgeId e = 0; e < g.edge_count(); ++e) CHECK(mat.is_open(e) == lo.is_open(e));
  CHECK_THROWS_AS(edge_state(g, lo, static_cast<EdgeId>(g.edge_count())), std::invalid_argument);
}

TEST_CASE("clusters basics") {
  Graph tri = make_custom_graph(3, {{0, 1}, {1, 2}, {0, 2}});
  {
    Configuration cfg = sample_config(tri, 0.0, 1);
    ClusterLabeling cl = clusters(tri, cfg);
    CHECK(cl.n_clusters == 3);
    for (VertexId v = 0; v < 3; ++v) CHECK(cl.label[v] == v);
  }
  {
    Configuration cfg = sample_config(tri, 1.0, 1);
    ClusterLabeling cl = clusters(tri, cfg);
    CHECK(cl.n_clusters == 1);
    CHECK(cl.size_of[cl.label[0]] == 3);
  }
  {
    // Only edge {0,1} open (edge 0 in construction order).
    Configuration cfg = sample_config(tri, 0.0, 1, {0});
    ClusterLabeling cl = clusters(tri, cfg);
    CHECK(cl.label[0] == cl.label[1]);
    CHECK(cl.label[2] != cl.label[0]);
    CHECK(cl.size_of[cl.label[0]] == 2);
    CHECK(cl.size_of[cl.label[2]] == 1);
  }
}

TEST_CASE("clusters agree with BFS oracle on small graphs") {
  for (int trial = 0; trial < 25; ++trial) {
    Graph g = random_graph(4 + trial % 47, 0.15, 1000 + trial);
    Configuration cfg = sample_config(g, 0.5, 2000 + trial);
    ClusterLabeling cl = clusters(g, cfg);
    std::vector<VertexId> oracle = brute_component_labels(g, cfg);
    std::uint32_t total = 0;
    for (VertexId v = 0; v < g.vertex_count(); ++v) {
      for (VertexId w = 0; w < g.vertex_count(); ++w)
        CHECK((cl.label[v] == cl.label[w]) == (oracle[v] == oracle[w]));
      if (cl.label[v] == v) total += cl.size_of[v];
    }
    CHECK(total == g.vertex_count());
  }
}

TEST_CASE("open_cluster") {
  Graph tri = make_custom_graph(3, {{0, 1}, {1, 2}, {0, 2}});
  {
    Subgraph c = open_cluster(tri, sample_config(tri, 0.0, 3), 1);
    CHECK(c.vcount == 1);
    CHECK(c.ecount == 0);
    CHECK(c.contains_vertex(1));
  }
  {
    Subgraph c = open_cluster(tri, sample_config(tri, 1.0, 3), 0);
    CHECK(c.vcount == 3);
    CHECK(c.ecount == 3);
  }
  {
    Subgraph c = open_cluster(tri, sample_config(tri, 0.0, 3, {0}), 0);
    CHECK(c.vcount == 2);
    CHECK(c.ecount == 1);
    CHECK(c.contains_edge(0));
  }
}

TEST_CASE("enlarge") {
  Graph path = make_custom_graph(3, {{0, 1}, {1, 2}});
  {
    // Single vertex: U(H) = C_x.
    Subgraph h = Subgraph::empty(path);
    h.add_vertex(0);
    Configuration cfg = sample_config(path, 0.0, 4, {0});  // ab open, bc closed
    Subgraph u = enlarge(path, h, cfg);
    Subgraph c = open_cluster(path, cfg, 0);
    CHECK(u == c);
    CHECK(u.vcount == 2);
    CHECK(u.contains_edge(0));
    CHECK(!u.contains_edge(1));
  }
  {
    // All closed: U(H) = H.
    Subgraph h = Subgraph::empty(path);
    h.add_edge(1);
    Subgraph u = enlarge(path, h, sample_config(path, 0.0, 4));
    CHECK(u == h);
  }
}

TEST_CASE("enlarge preserves connectivity of H") {
  for (int trial = 0; trial < 20; ++trial) {
    Graph g = random_graph(12, 0.3, 50 + trial);
    // H = a BFS tree piece around vertex 0 (connected by construction).
    Subgraph h = Subgraph::empty(g);
    h.add_vertex(0);
    std::vector<VertexId> queue = {0};
    for (std::size_t head = 0; head < queue.size() && h.vcount < 5; ++head) {
      const VertexId v = queue[head];
      const auto nbr = g.neighbors(v);
      const auto eid = g.incident_edges(v);
      for (std::size_t i = 0; i < nbr.size() && h.vcount < 5; ++i) {
        if (!h.contains_vertex(nbr[i])) {
          h.add_edge(eid[i]);
          queue.push_back(nbr[i]);
        }
      }
    }
    Configuration cfg = sample_config(g, 0.35, 90 + trial);
    Subgraph u = enlarge(g, h, cfg);
    // Connectivity of u via BFS over its own edges.
    std::vector<std::uint8_t> seen(g.vertex_count(), 0);
    std::vector<VertexId> q2 = {0};
    seen[0] = 1;
    std::size_t visited = 1;
    for (std::size_t head = 0; head < q2.size(); ++head) {
      const VertexId v = q2[head];
      const auto nbr = g.neighbors(v);
      const auto eid = g.incident_edges(v);
      for (std::size_t i = 0; i < nbr.size(); ++i) {
        if (u.contains_edge(eid[i]) && !seen[nbr[i]]) {
          seen[nbr[i]] = 1;
          ++visited;
          q2.push_back(nbr[i]);
        }
      }
    }
    CHECK(visited == u.vcount);
  }
}

TEST_CASE("monotone enlargement under coupled p") {
  for (int trial = 0; trial < 10; ++trial) {
    Graph g = random_graph(20, 0.25, 800 + trial);
    Subgraph h = Subgraph::empty(g);
    h.add_vertex(3 % g.vertex_count());
    Configuration lo = lazy_config(g, 0.3, 4242 + trial);
    Configuration hi = lazy_config(g, 0.6, 4242 + trial);
    Subgraph ulo = enlarge(g, h, lo);
    Subgraph uhi = enlarge(g, h, hi);
    for (VertexId v = 0; v < g.vertex_count(); ++v)
      if (ulo.contains_vertex(v)) CHECK(uhi.contains_vertex(v));
    for (EdgeId e = 0; e < g.edge_count(); ++e)
      if (ulo.contains_edge(e)) CHECK(uhi.contains_edge(e));
  }
}

TEST_CASE("combine") {
  Graph g = build_zd_box(2, 6);
  Configuration a = sample_config(g, 0.3, 11);
  Configuration closed = sample_config(g, 0.0, 12);
  Configuration c1 = combine(g, a, closed);
  for (EdgeId e = 0; e < g.edge_count(); ++e) CHECK(c1.open[e] == a.open[e]);
  Configuration c2 = combine(g, a, a);
  for (EdgeId e = 0; e < g.edge_count(); ++e) CHECK(c2.open[e] == a.open[e]);
  CHECK_THROWS_AS(combine(g, lazy_config(g, 0.3, 1), a), std::invalid_argument);

  // Push-forward marginal: independent q1, q2 samples combine to open
  // fraction q1 + q2 - q1*q2.
  const double q1 = 0.35, q2 = 0.2;
  Graph big = build_zd_box(2, 64);
  Configuration w1 = sample_config(big, q1, 101);
  Configuration w2 = sample_config(big, q2, 202);
  Configuration w = combine(big, w1, w2);
  std::size_t open_count = 0;
  for (EdgeId e = 0; e < big.edge_count(); ++e) open_count += w.open[e];
  const double target = q1 + q2 - q1 * q2;
  const double se = std::sqrt(target * (1 - target) / double(big.edge_count()));
  CHECK(std::abs(double(open_count) / double(big.edge_count()) - target) < 4 * se);
  CHECK(w.p == doctest::Approx(target));
}

TEST_CASE("composition law on random instances") {
  int near_count = 0, far_count = 0;
  for (int trial = 0; trial < 200; ++trial) {
    Graph g = random_graph(10, 0.3, 3000 + trial);
    Subgraph h = Subgraph::empty(g);
    SplitMix64 rng(7000 + trial);
    if (trial % 2 == 0) {
      // Complement of an independent set: condition (near) holds.
      std::vector<std::uint8_t> independent(g.vertex_count(), 0);
      for (VertexId v = 0; v < g.vertex_count(); ++v) {
        if (rng.next_unit() < 0.3) {
          bool ok = true;
          for (VertexId w : g.neighbors(v))
            if (independent[w]) ok = false;
          if (ok) independent[v] = 1;
        }
      }
      for (VertexId v = 0; v < g.vertex_count(); ++v)
        if (!independent[v]) h.add_vertex(v);
    } else {
      for (VertexId v = 0; v < g.vertex_count(); ++v)
        if (rng.next_unit() < 0.4) h.add_vertex(v);
    }
    for (EdgeId e = 0; e < g.edge_count(); ++e)
      if (h.contains_vertex(g.edges[e].u) && h.contains_vertex(g.edges[e].v) &&
          rng.next_unit() < 0.5)
        h.add_edge(e);

    Configuration w1 = sample_config(g, 0.3, 5000 + trial);
    Configuration w2 = sample_config(g, 0.25, 6000 + trial);
    Subgraph twice = enlarge(g, enlarge(g, h, w1), w2);
    Subgraph once = enlarge(g, h, combine(g, w1, w2));

    for (VertexId v = 0; v < g.vertex_count(); ++v)
      if (twice.contains_vertex(v)) CHECK(once.contains_vertex(v));
    for (EdgeId e = 0; e < g.edge_count(); ++e)
      if (twice.contains_edge(e)) CHECK(once.contains_edge(e));

    if (near_condition(g, h)) {
      ++near_count;
      CHECK(twice == once);
    } else {
      ++far_count;
    }
  }
  CHECK(near_count >= 40);
  CHECK(far_count >= 40);
}

TEST_CASE("spans_boundary") {
  Graph g = build_zd_box(2, 3);
  const VertexId origin = static_cast<VertexId>(g.vertex_count() / 2);
  const VertexId corner = 0;
  {
    ClusterLabeling cl = clusters(g, sample_config(g, 0.0, 5));
    CHECK(spans_boundary(g, cl, corner));
    CHECK(!spans_boundary(g, cl, origin));
  }
  {
    ClusterLabeling cl = clusters(g, sample_config(g, 1.0, 5));
    CHECK(spans_boundary(g, cl, origin));
  }
  // Early-exit variant agrees with the labeling on random configurations.
  for (int trial = 0; trial < 10; ++trial) {
    Configuration cfg = lazy_config(g, 0.4, 7000 + trial);
    ClusterLabeling cl = clusters(g, cfg);
    for (VertexId v = 0; v < g.vertex_count(); ++v)
      CHECK(cluster_reaches_boundary(g, cfg, v) == spans_boundary(g, cl, v));
  }
}

TEST_CASE("config snapshot round trip") {
  Graph g = build_zd_box(2, 4);
  Configuration cfg = sample_config(g, 0.37, 321);
  std::ostringstream out;
  write_config(out, g, cfg);
  std::istringstream in(out.str());
  Configuration back = read_config(in, g);
  for (EdgeId e = 0; e < g.edge_count(); ++e) CHECK(back.is_open(e) == cfg.is_open(e));
  std::ostringstream out2;
  write_config(out2, g, back);
  CHECK(out.str() == out2.str());
}

}  // TEST_SUITE
