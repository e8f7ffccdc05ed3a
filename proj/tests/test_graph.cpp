#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "perc/graph.hpp"

using namespace perc;

namespace {

// Independent edge count for a Z^d box: enumerate lattice points and count
// +1 steps per axis that stay inside.
std::int64_t brute_zd_edge_count(int dim, int radius) {
  const std::int64_t side = 2 * std::int64_t(radius) + 1;
  std::int64_t n = 1;
  for (int i = 0; i < dim; ++i) n *= side;
  std::int64_t count = 0;
  std::vector<int> c(dim, -radius);
  for (std::int64_t id = 0; id < n; ++id) {
    for (int axis = 0; axis < dim; ++axis)
      if (c[axis] < radius) ++count;
    for (int i = dim - 1; i >= 0; --i) {
      if (++c[i] <= radius) break;
      c[i] = -radius;
    }
  }
  return count;
}

}  // namespace

TEST_SUITE("graph") {

TEST_CASE("zd box shapes") {
  {
    Graph g = build_zd_box(1, 2);
    CHECK(g.vertex_count() == 5);
    CHECK(g.edge_count() == 4);
    CHECK(g.n_boundary == 2);
    CHECK(g.is_boundary(0));
    CHECK(g.is_boundary(4));
    CHECK(g.label(0)[0] == -2);
    CHECK(g.label(4)[0] == 2);
    validate_graph(g);
  }
  {
    Graph g = build_zd_box(2, 1);
    CHECK(g.vertex_count() == 9);
    CHECK(g.edge_count() == 12);
    validate_graph(g);
  }
  {
    Graph g = build_zd_box(3, 8);
    CHECK(g.vertex_count() == 4913);
    const std::int64_t expected = brute_zd_edge_count(3, 8);
    CHECK(expected == 13872);
    CHECK(g.edge_count() == std::size_t(expected));
    validate_graph(g);
  }
  CHECK_THROWS_AS(build_zd_box(0, 3), std::invalid_argument);
  CHECK_THROWS_AS(build_zd_box(20, 1000), std::length_error);
}

TEST_CASE("zd box edge order is lexicographic") {
  Graph g = build_zd_box(2, 1);
  for (EdgeId e = 1; e < g.edge_count(); ++e) {
    const bool ordered = g.edges[e - 1].u < g.edges[e].u ||
                         (g.edges[e - 1].u == g.edges[e].u && g.edges[e - 1].v < g.edges[e].v);
    CHECK(ordered);
  }
}

TEST_CASE("regular tree shapes") {
  {
    Graph g = build_regular_tree(3, 1);
    CHECK(g.vertex_count() == 4);
    CHECK(g.edge_count() == 3);
    CHECK(g.degree(0) == 3);
    validate_graph(g);
  }
  {
    Graph g = build_regular_tree(3, 2);
    CHECK(g.vertex_count() == 10);
    CHECK(g.edge_count() == 9);
    validate_graph(g);
  }
  {
    Graph g = build_regular_tree(4, 3);
    // 1 + 4 + 12 + 36, cross-checked by BFS layer count.
    CHECK(g.vertex_count() == 53);
    CHECK(g.edge_count() == 52);
    auto dist = bfs_distances(g, 0);
    std::array<int, 4> layer{0, 0, 0, 0};
    for (VertexId v = 0; v < g.vertex_count(); ++v) ++layer[dist[v]];
    CHECK(layer[0] == 1);
    CHECK(layer[1] == 4);
    CHECK(layer[2] == 12);
    CHECK(layer[3] == 36);
    validate_graph(g);
  }
  CHECK_THROWS_AS(build_regular_tree(1, 3), std::invalid_argument);
}

TEST_CASE("line graph shapes") {
  {
    Graph g = build_line_graph(1);
    CHECK(g.vertex_count() == 3);  // {0, 1, midpoint}
    CHECK(g.edge_count() == 2);
    validate_graph(g);
  }
  {
    Graph g = build_line_graph(4);
    // Midpoints between 2 and 3: 2*2^3 = 16, each carrying 2 edges.
    int mids_level2 = 0;
    for (VertexId v = 0; v < g.vertex_count(); ++v)
      if (g.label(v)[0] == 1 && g.label(v)[1] == 2) ++mids_level2;
    CHECK(mids_level2 == 16);
    int edges_level2 = 0;
    for (EdgeId e = 0; e < g.edge_count(); ++e) {
      const VertexId mid = g.edges[e].v;  // midpoint ids follow backbone ids
      if (g.label(mid)[0] == 1 && g.label(mid)[1] == 2) ++edges_level2;
    }
    CHECK(edges_level2 == 32);
    validate_graph(g);
  }
  {
    Graph g = build_line_graph(3);
    int mids = 0;
    for (VertexId v = 0; v < g.vertex_count(); ++v)
      if (g.label(v)[0] == 1) ++mids;
    CHECK(mids == 19);  // 1 + 2 + 16
    CHECK(g.vertex_count() == 4 + 19);
    CHECK(g.edge_count() == 2 * 19);
    validate_graph(g);
  }
}

TEST_CASE("hybrid z2 tree") {
  {
    TreeSchedule ray;
    ray.branching = {1, 1, 1};
    Graph g = build_hybrid_z2_tree(1, ray);
    CHECK(g.vertex_count() == 9 + 3);
    CHECK(g.edge_count() == 12 + 3);
    validate_graph(g);
  }
  {
    TreeSchedule s = TreeSchedule::default_transient(64);
    CHECK(s.branching[3] == 2);   // level 4
    CHECK(s.branching[15] == 2);  // level 16
    CHECK(s.branching[63] == 2);  // level 64
    Graph g = build_hybrid_z2_tree(2, s);
    int max_tree_degree = 0;
    for (VertexId v = 0; v < g.vertex_count(); ++v)
      if (g.label(v)[0] == 1) max_tree_degree = std::max<int>(max_tree_degree, g.degree(v));
    CHECK(max_tree_degree <= 3);
    validate_graph(g);
  }
  TreeSchedule bad;
  bad.branching = {1, 0, 1};
  CHECK_THROWS_AS(build_hybrid_z2_tree(1, bad), std::invalid_argument);
}

TEST_CASE("glued trees") {
  {
    Graph g = build_glued_trees(3, 4, 1);
    CHECK(g.degree(0) == 7);
    validate_graph(g);
  }
  {
    Graph g = build_glued_trees(3, 4, 2);
    int side1 = 0, side2 = 0;
    for (VertexId v = 1; v < g.vertex_count(); ++v) {
      if (g.label(v)[0] == 1) ++side1;
      if (g.label(v)[0] == 2) ++side2;
    }
    CHECK(side1 + 1 == 10);
    CHECK(side2 + 1 == 17);
    CHECK(g.vertex_count() == 26);
    validate_graph(g);
  }
  {
    Graph g = build_glued_trees(3, 3, 3);
    int side1 = 0, side2 = 0;
    for (VertexId v = 1; v < g.vertex_count(); ++v) {
      if (g.label(v)[0] == 1) ++side1;
      if (g.label(v)[0] == 2) ++side2;
    }
    CHECK(side1 == side2);
  }
}

TEST_CASE("ball") {
  Graph g2 = build_zd_box(2, 2);
  const VertexId origin = 12;  // center of the 5x5 box
  CHECK(g2.label(origin)[0] == 0);
  CHECK(g2.label(origin)[1] == 0);
  CHECK(ball(g2, origin, 0) == std::vector<VertexId>{origin});
  CHECK(ball(g2, origin, 1).size() == 5);

  Graph t = build_regular_tree(3, 3);
  CHECK(ball(t, 0, 2).size() == 10);

  // Nesting.
  for (int n = 0; n + 1 <= 3; ++n) {
    auto inner = ball(t, 0, n);
    auto outer = ball(t, 0, n + 1);
    CHECK(std::includes(outer.begin(), outer.end(), inner.begin(), inner.end()));
  }
  CHECK_THROWS_AS(ball(g2, 1000, 1), std::invalid_argument);
}

TEST_CASE("bipartition cut") {
  Graph g = build_zd_box(2, 4);
  {
    std::vector<VertexId> all;
    for (VertexId v = 0; v < g.vertex_count(); ++v) all.push_back(v);
    Bipartition p = Bipartition::from_side_a(g, all);
    CHECK(bipartition_cut(g, p).empty());
  }
  {
    std::vector<VertexId> left;
    for (VertexId v = 0; v < g.vertex_count(); ++v)
      if (g.label(v)[0] < 0) left.push_back(v);
    Bipartition p = Bipartition::from_side_a(g, left);
    auto cut = bipartition_cut(g, p);
    // Brute scan: edges from x=-1 to x=0, one per row.
    std::int64_t expected = 0;
    for (EdgeId e = 0; e < g.edge_count(); ++e) {
      const auto lu = g.label(g.edges[e].u), lv = g.label(g.edges[e].v);
      if ((lu[0] < 0) != (lv[0] < 0)) ++expected;
    }
    CHECK(expected == 9);
    CHECK(cut.size() == 9);
  }
  {
    Graph t = build_regular_tree(3, 3);
    Subgraph side = subtree_split(t, 0, t.edges[0].v);
    std::vector<VertexId> a = side.vertices();
    Bipartition p = Bipartition::from_side_a(t, a);
    CHECK(bipartition_cut(t, p).size() == 1);
  }
  // Symmetry in (A, B).
  {
    std::vector<VertexId> right;
    for (VertexId v = 0; v < g.vertex_count(); ++v)
      if (g.label(v)[0] >= 0) right.push_back(v);
    Bipartition p = Bipartition::from_side_a(g, right);
    CHECK(bipartition_cut(g, p).size() == 9);
  }
  CHECK_THROWS_AS(Bipartition::from_sides(g, {0, 1}, {1, 2}), std::invalid_argument);
}

TEST_CASE("subtree split") {
  {
    Graph path = make_custom_graph(3, {{0, 1}, {1, 2}});
    Subgraph s = subtree_split(path, 0, 1);
    CHECK(s.vcount == 2);
    CHECK(s.contains_vertex(1));
    CHECK(s.contains_vertex(2));
    CHECK(s.ecount == 1);
    CHECK(s.contains_edge(1));
  }
  {
    Graph t = build_regular_tree(3, 2);
    const VertexId child = t.edges[0].v;
    Subgraph s = subtree_split(t, 0, child);
    CHECK(s.vcount == 3);
    CHECK(s.ecount == 2);
  }
  {
    std::vector<Edge> spokes;
    for (VertexId leaf = 1; leaf <= 5; ++leaf) spokes.push_back({0, leaf});
    Graph star = make_custom_graph(6, spokes);
    Subgraph s = subtree_split(star, 2, 3);
    CHECK(s.vcount == 1);
    CHECK(s.ecount == 0);
  }
  // Partition property: both sides of e = {x, y} cover V(t).
  {
    Graph t = build_regular_tree(3, 3);
    const EdgeId e = 5;
    Subgraph a = subtree_split(t, e, t.edges[e].u);
    Subgraph b = subtree_split(t, e, t.edges[e].v);
    CHECK(a.vcount + b.vcount == t.vertex_count());
    for (VertexId v = 0; v < t.vertex_count(); ++v)
      CHECK((a.contains_vertex(v) ^ b.contains_vertex(v)));
  }
  Graph tri = make_custom_graph(3, {{0, 1}, {1, 2}, {0, 2}});
  CHECK_THROWS_AS(subtree_split(tri, 0, 0), std::invalid_argument);
}

TEST_CASE("export/import round trip is bit-exact") {
  std::vector<Graph> graphs;
  graphs.push_back(build_zd_box(2, 3));
  graphs.push_back(build_regular_tree(3, 4));
  graphs.push_back(build_line_graph(3));
  graphs.push_back(build_glued_trees(3, 4, 2));
  graphs.push_back(build_hybrid_z2_tree(2, TreeSchedule::default_transient(8)));
  for (const Graph& g : graphs) {
    std::ostringstream out;
    write_graph(out, g);
    std::istringstream in(out.str());
    Graph h = read_graph(in);
    CHECK(h == g);
    std::ostringstream out2;
    write_graph(out2, h);
    CHECK(out.str() == out2.str());
  }
}

}  // TEST_SUITE
