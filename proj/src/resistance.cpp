#include "perc/resistance.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace perc {

namespace {

// Weighted multigraph under reduction. Node 0 is the source, node 1 the
// grounded target supernode.
struct Network {
  // conductance[{a,b}] with a < b
  std::map<std::pair<std::uint32_t, std::uint32_t>, double> cond;
  std::uint32_t n = 0;

  void add(std::uint32_t a, std::uint32_t b, double c) {
    if (a == b) return;  // self-loops carry no current
    if (a > b) std::swap(a, b);
    cond[{a, b}] += c;
  }
};

// Series/parallel/dangling reduction with a worklist over a live adjacency
// structure. Exact: preserves the source-ground resistance. Node 0 (source)
// and node 1 (ground) are never eliminated.
void reduce(Network& net) {
  std::vector<std::vector<std::pair<std::uint32_t, double>>> adj(net.n);
  for (const auto& [key, c] : net.cond) {
    adj[key.first].push_back({key.second, c});
    adj[key.second].push_back({key.first, c});
  }
  auto erase_neighbor = [&](std::uint32_t v, std::uint32_t w) {
    auto& list = adj[v];
    for (std::size_t i = 0; i < list.size(); ++i) {
      if (list[i].first == w) {
        list[i] = list.back();
        list.pop_back();
        return;
      }
    }
  };
  auto add_conductance = [&](std::uint32_t a, std::uint32_t b, double c) {
    for (auto& [w, cw] : adj[a]) {
      if (w == b) {
        cw += c;
        for (auto& [w2, cw2] : adj[b])
          if (w2 == a) cw2 += c;
        return;
      }
    }
    adj[a].push_back({b, c});
    adj[b].push_back({a, c});
  };

  std::vector<std::uint32_t> work;
  std::vector<std::uint8_t> queued(net.n, 0);
  for (std::uint32_t v = 2; v < net.n; ++v) {
    work.push_back(v);
    queued[v] = 1;
  }
  auto enqueue = [&](std::uint32_t v) {
    if (v >= 2 && !queued[v]) {
      work.push_back(v);
      queued[v] = 1;
    }
  };
  while (!work.empty()) {
    const std::uint32_t v = work.back();
    work.pop_back();
    queued[v] = 0;
    if (adj[v].size() == 1) {
      // Dangling: no current flows through it.
      const std::uint32_t w = adj[v][0].first;
      erase_neighbor(w, v);
      adj[v].clear();
      enqueue(w);
    } else if (adj[v].size() == 2) {
      const auto [a, ca] = adj[v][0];
      const auto [b, cb] = adj[v][1];
      erase_neighbor(a, v);
      erase_neighbor(b, v);
      adj[v].clear();
      add_conductance(a, b, ca * cb / (ca + cb));
      enqueue(a);
      enqueue(b);
    }
  }

  // Rebuild with compact node ids.
  std::vector<std::uint32_t> remap(net.n, 0xffffffffu);
  remap[0] = 0;
  remap[1] = 1;
  std::uint32_t next = 2;
  std::map<std::pair<std::uint32_t, std::uint32_t>, double> fresh;
  for (std::uint32_t v = 0; v < net.n; ++v) {
    for (const auto& [w, c] : adj[v]) {
      if (w < v) continue;  // each edge once
      auto id = [&](std::uint32_t x) {
        if (remap[x] == 0xffffffffu) remap[x] = next++;
        return remap[x];
      };
      const std::uint32_t a = id(v), b = id(w);
      fresh[{std::min(a, b), std::max(a, b)}] += c;
    }
  }
  net.cond = std::move(fresh);
  net.n = next;
}

// Dense Cholesky solve of the grounded Laplacian (ground row/col removed).
// Returns the source potential for unit current injected at the source.
double solve_dense(const Network& net) {
  const std::uint32_t n = net.n - 1;  // drop ground (node 1); reindex others
  auto row = [&](std::uint32_t v) { return v == 0 ? 0u : v - 1; };
  std::vector<double> a(std::size_t(n) * n, 0.0);
  for (const auto& [key, c] : net.cond) {
    const auto [x, y] = key;
    if (x != 1 && y != 1) {
      const std::uint32_t i = row(x), j = row(y);
      a[std::size_t(i) * n + j] -= c;
      a[std::size_t(j) * n + i] -= c;
    }
    if (x != 1) a[std::size_t(row(x)) * n + row(x)] += c;
    if (y != 1) a[std::size_t(row(y)) * n + row(y)] += c;
  }
  std::vector<double> rhs(n, 0.0);
  rhs[0] = 1.0;

  // Cholesky a = L L^T (the grounded Laplacian is SPD).
  for (std::uint32_t k = 0; k < n; ++k) {
    double d = a[std::size_t(k) * n + k];
    for (std::uint32_t j = 0; j < k; ++j) d -= a[std::size_t(k) * n + j] * a[std::size_t(k) * n + j];
    if (d <= 0) throw std::runtime_error("resistance: Laplacian not positive definite");
    const double l = std::sqrt(d);
    a[std::size_t(k) * n + k] = l;
    for (std::uint32_t i = k + 1; i < n; ++i) {
      double s = a[std::size_t(i) * n + k];
      for (std::uint32_t j = 0; j < k; ++j)
        s -= a[std::size_t(i) * n + j] * a[std::size_t(k) * n + j];
      a[std::size_t(i) * n + k] = s / l;
    }
  }
  for (std::uint32_t i = 0; i < n; ++i) {
    double s = rhs[i];
    for (std::uint32_t j = 0; j < i; ++j) s -= a[std::size_t(i) * n + j] * rhs[j];
    rhs[i] = s / a[std::size_t(i) * n + i];
  }
  for (std::uint32_t i = n; i-- > 0;) {
    double s = rhs[i];
    for (std::uint32_t j = i + 1; j < n; ++j) s -= a[std::size_t(j) * n + i] * rhs[j];
    rhs[i] = s / a[std::size_t(i) * n + i];
  }
  return rhs[0];
}

// Jacobi-preconditioned CG on the grounded Laplacian in CSR form.
double solve_cg(const Network& net, double tol) {
  const std::uint32_t n = net.n - 1;
  auto row = [&](std::uint32_t v) { return v == 0 ? 0u : v - 1; };
  std::vector<std::uint32_t> deg(n, 0);
  for (const auto& [key, c] : net.cond) {
    (void)c;
    if (key.first != 1 && key.second != 1) {
      ++deg[row(key.first)];
      ++deg[row(key.second)];
    }
  }
  std::vector<std::size_t> off(n + 1, 0);
  for (std::uint32_t i = 0; i < n; ++i) off[i + 1] = off[i] + deg[i];
  std::vector<std::uint32_t> col(off[n]);
  std::vector<double> val(off[n]);
  std::vector<double> diag(n, 0.0);
  std::vector<std::size_t> cursor(off.begin(), off.end() - 1);
  for (const auto& [key, c] : net.cond) {
    const auto [x, y] = key;
    if (x != 1 && y != 1) {
      const std::uint32_t i = row(x), j = row(y);
      col[cursor[i]] = j;
      val[cursor[i]++] = -c;
      col[cursor[j]] = i;
      val[cursor[j]++] = -c;
    }
    if (x != 1) diag[row(x)] += c;
    if (y != 1) diag[row(y)] += c;
  }

  auto apply = [&](const std::vector<double>& x, std::vector<double>& y) {
    for (std::uint32_t i = 0; i < n; ++i) {
      double s = diag[i] * x[i];
      for (std::size_t k = off[i]; k < off[i + 1]; ++k) s += val[k] * x[col[k]];
      y[i] = s;
    }
  };

  std::vector<double> x(n, 0.0), r(n, 0.0), z(n), p(n), ap(n);
  r[0] = 1.0;  // residual of b - A*0 with unit injection
  for (std::uint32_t i = 0; i < n; ++i) z[i] = r[i] / diag[i];
  p = z;
  double rz = 0.0;
  for (std::uint32_t i = 0; i < n; ++i) rz += r[i] * z[i];
  const double b_norm = 1.0;
  const std::size_t max_iters = 20 * std::size_t(n) + 1000;
  for (std::size_t iter = 0; iter < max_iters; ++iter) {
    double r_norm = 0.0;
    for (std::uint32_t i = 0; i < n; ++i) r_norm += r[i] * r[i];
    if (std::sqrt(r_norm) <= tol * b_norm) break;
    apply(p, ap);
    double pap = 0.0;
    for (std::uint32_t i = 0; i < n; ++i) pap += p[i] * ap[i];
    const double alpha = rz / pap;
    for (std::uint32_t i = 0; i < n; ++i) {
      x[i] += alpha * p[i];
      r[i] -= alpha * ap[i];
    }
    for (std::uint32_t i = 0; i < n; ++i) z[i] = r[i] / diag[i];
    double rz_next = 0.0;
    for (std::uint32_t i = 0; i < n; ++i) rz_next += r[i] * z[i];
    const double beta = rz_next / rz;
    rz = rz_next;
    for (std::uint32_t i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
  }
  return x[0];
}

}  // namespace

ResistanceResult effective_resistance(const Subgraph& sub, VertexId source,
                                      const std::vector<VertexId>& targets,
                                      const ResistanceOptions& opt) {
  const Graph& g = *sub.g;
  if (source >= g.vertex_count()) throw std::invalid_argument("resistance: unknown source");
  if (!sub.contains_vertex(source)) throw std::invalid_argument("resistance: source not in subgraph");
  if (targets.empty()) throw std::invalid_argument("resistance: empty target set");

  std::vector<std::uint8_t> is_target(g.vertex_count(), 0);
  for (VertexId t : targets) {
    if (t >= g.vertex_count()) throw std::invalid_argument("resistance: unknown target");
    is_target[t] = 1;
  }
  if (is_target[source]) return {true, 0.0};

  // Component of the source within the subgraph; stop expanding at targets
  // (everything beyond ground is irrelevant).
  std::vector<std::uint32_t> node_of(g.vertex_count(), 0xffffffffu);
  node_of[source] = 0;
  std::vector<VertexId> queue = {source};
  bool reached_target = false;
  std::uint32_t next_node = 2;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const VertexId v = queue[head];
    if (is_target[v]) continue;  // grounded; do not expand
    const auto nbr = g.neighbors(v);
    const auto eid = g.incident_edges(v);
    for (std::size_t i = 0; i < nbr.size(); ++i) {
      if (!sub.contains_edge(eid[i])) continue;
      const VertexId w = nbr[i];
      if (node_of[w] != 0xffffffffu) continue;
      if (is_target[w]) {
        node_of[w] = 1;
        reached_target = true;
      } else {
        node_of[w] = next_node++;
      }
      queue.push_back(w);
    }
  }
  if (!reached_target) return {false, 0.0};

  Network net;
  net.n = next_node;
  for (EdgeId e = 0; e < g.edge_count(); ++e) {
    if (!sub.contains_edge(e)) continue;
    const std::uint32_t a = node_of[g.edges[e].u], b = node_of[g.edges[e].v];
    if (a == 0xffffffffu || b == 0xffffffffu) continue;
    net.add(a, b, 1.0);
  }
  if (opt.reduce) reduce(net);
  if (net.n <= 1) return {true, 0.0};

  // The source may have been left with ground as its only partner.
  if (net.cond.size() == 1) {
    const auto& [key, c] = *net.cond.begin();
    if (key == std::make_pair(0u, 1u)) return {true, 1.0 / c};
  }
  const double r = (net.n - 1 <= opt.dense_cutoff) ? solve_dense(net) : solve_cg(net, opt.tol);
  return {true, r};
}

ResistanceResult resistance_to_ball_complement(const Subgraph& sub, VertexId center, int radius,
                                               const ResistanceOptions& opt) {
  const Graph& g = *sub.g;
  if (!sub.contains_vertex(center))
    throw std::invalid_argument("resistance: center not in subgraph");
  // Subgraph BFS distances from the center.
  std::vector<std::uint32_t> dist(g.vertex_count(), no_distance);
  dist[center] = 0;
  std::vector<VertexId> queue = {center};
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const VertexId v = queue[head];
    const auto nbr = g.neighbors(v);
    const auto eid = g.incident_edges(v);
    for (std::size_t i = 0; i < nbr.size(); ++i) {
      if (!sub.contains_edge(eid[i]) || dist[nbr[i]] != no_distance) continue;
      dist[nbr[i]] = dist[v] + 1;
      queue.push_back(nbr[i]);
    }
  }
  std::vector<VertexId> targets;
  for (VertexId v = 0; v < g.vertex_count(); ++v)
    if (dist[v] != no_distance && dist[v] > static_cast<std::uint32_t>(radius)) targets.push_back(v);
  if (targets.empty()) return {false, 0.0};
  return effective_resistance(sub, center, targets, opt);
}

}  // namespace perc
