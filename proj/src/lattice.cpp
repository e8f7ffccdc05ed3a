#include "perc/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <stdexcept>

namespace perc {
namespace lattice {

namespace {
constexpr int coord_bits = 12;
constexpr int coord_bias = 2048;
constexpr CellKey coord_mask = (CellKey(1) << coord_bits) - 1;
}  // namespace

CellKey pack(const int* c, int dim) {
  CellKey key = 0;
  for (int i = 0; i < dim; ++i) {
    const int shifted = c[i] + coord_bias;
    key |= (CellKey(shifted) & coord_mask) << (coord_bits * i);
  }
  return key;
}

void unpack(CellKey key, int* c, int dim) {
  for (int i = 0; i < dim; ++i)
    c[i] = int((key >> (coord_bits * i)) & coord_mask) - coord_bias;
}

Window::Window(int d, int r) : dim(d), radius(r) {
  if (d < 1 || d > max_dim) throw std::invalid_argument("lattice: dim must be in [1,5]");
  if (r < 1 || r > max_coord) throw std::invalid_argument("lattice: radius out of range");
}

CellSet::CellSet(std::size_t expected) {
  std::size_t cap = 64;
  while (cap < 2 * expected) cap <<= 1;
  slots_.assign(cap, 0);
  mask_ = cap - 1;
}

void CellSet::grow() {
  std::vector<CellKey> old = std::move(slots_);
  slots_.assign(old.size() * 2, 0);
  mask_ = slots_.size() - 1;
  count_ = 0;
  for (CellKey k : old)
    if (k) insert(k);
}

bool CellSet::insert(CellKey key) {
  if (2 * (count_ + 1) > slots_.size()) grow();
  std::size_t i = mix64(key) & mask_;
  while (slots_[i] != 0) {
    if (slots_[i] == key) return false;
    i = (i + 1) & mask_;
  }
  slots_[i] = key;
  ++count_;
  return true;
}

bool CellSet::contains(CellKey key) const {
  std::size_t i = mix64(key) & mask_;
  while (slots_[i] != 0) {
    if (slots_[i] == key) return true;
    i = (i + 1) & mask_;
  }
  return false;
}

std::vector<CellKey> CellSet::sorted_keys() const {
  std::vector<CellKey> keys;
  keys.reserve(count_);
  for (CellKey k : slots_)
    if (k) keys.push_back(k);
  std::sort(keys.begin(), keys.end());
  return keys;
}

double edge_uniform(std::uint64_t seed, CellKey lower_cell, int axis) {
  return to_unit(mix2(seed ^ stream::edge, mix2(lower_cell, std::uint64_t(axis))));
}

bool edge_open(const Window& w, std::uint64_t seed, double p, const int* a, const int* b) {
  int axis = -1;
  for (int i = 0; i < w.dim; ++i) {
    if (a[i] != b[i]) {
      if (axis != -1 || std::abs(a[i] - b[i]) != 1)
        throw std::invalid_argument("lattice: cells not adjacent");
      axis = i;
    }
  }
  if (axis == -1) throw std::invalid_argument("lattice: cells not adjacent");
  const int* lower = a[axis] < b[axis] ? a : b;
  return edge_uniform(seed, pack(lower, w.dim), axis) < p;
}

LatticeWalk sample_walk(const Window& w, const int* start, std::size_t max_steps,
                        std::uint64_t seed) {
  int c[max_dim] = {0, 0, 0, 0, 0};
  std::memcpy(c, start, sizeof(int) * w.dim);
  LatticeWalk out;
  out.cells.reserve(max_steps + 1);
  out.cells.push_back(pack(c, w.dim));
  SplitMix64 rng(mix2(seed, stream::walk));
  for (std::size_t step = 0; step < max_steps; ++step) {
    const std::uint64_t r = rng.next_below(2 * std::uint64_t(w.dim));
    const int axis = int(r >> 1);
    const int delta = (r & 1) ? 1 : -1;
    c[axis] += delta;
    if (std::abs(c[axis]) > w.radius) {
      // Hard shell of the lazy window; walks here stand for truncation.
      c[axis] -= delta;
      out.stopped = StopReason::hit_boundary;
      return out;
    }
    out.cells.push_back(pack(c, w.dim));
  }
  return out;
}

LatticeWalk sample_walk_from_origin(const Window& w, std::size_t max_steps, std::uint64_t seed) {
  const int origin[max_dim] = {0, 0, 0, 0, 0};
  return sample_walk(w, origin, max_steps, seed);
}

CellSet enlarge_cells(const Window& w, std::uint64_t perc_seed, double p,
                      const std::vector<CellKey>& h_cells, std::size_t node_budget) {
  CellSet cells(h_cells.size() * 2 + 64);
  std::vector<CellKey> queue;
  for (CellKey k : h_cells)
    if (cells.insert(k)) queue.push_back(k);
  int c[max_dim], n[max_dim];
  for (std::size_t head = 0; head < queue.size(); ++head) {
    unpack(queue[head], c, w.dim);
    for (int axis = 0; axis < w.dim; ++axis) {
      for (int delta = -1; delta <= 1; delta += 2) {
        std::memcpy(n, c, sizeof(int) * w.dim);
        n[axis] += delta;
        if (std::abs(n[axis]) > w.radius) continue;
        const CellKey lower = delta > 0 ? queue[head] : pack(n, w.dim);
        if (edge_uniform(perc_seed, lower, axis) >= p) continue;
        const CellKey nk = pack(n, w.dim);
        if (cells.insert(nk)) {
          queue.push_back(nk);
          if (cells.size() > node_budget)
            throw std::length_error("lattice: enlargement exceeded the node budget");
        }
      }
    }
  }
  return cells;
}

MaterializedEnlargement materialize_enlargement(const Window& w, int sub_radius,
                                                const std::vector<const LatticeWalk*>& trace,
                                                std::uint64_t perc_seed, double p) {
  if (sub_radius < 1 || sub_radius > w.radius)
    throw std::invalid_argument("materialize_enlargement: bad sub_radius");
  const int dim = w.dim;
  const std::int64_t side = 2 * std::int64_t(sub_radius) + 1;
  std::int64_t box = 1;
  for (int i = 0; i < dim; ++i) {
    box *= side;
    if (box > max_graph_vertices)
      throw std::length_error("materialize_enlargement: box exceeds the memory budget");
  }
  auto in_box = [&](const int* c) {
    for (int i = 0; i < dim; ++i)
      if (std::abs(c[i]) > sub_radius) return false;
    return true;
  };
  auto box_index = [&](const int* c) {
    std::int64_t idx = 0;
    for (int i = 0; i < dim; ++i) idx = idx * side + (c[i] + sub_radius);
    return idx;
  };

  // 0 = untouched, 1 = in U(H), 2 = in U(H) and truncation-marked.
  std::vector<std::uint8_t> state(box, 0);
  // Trace edges within the box, keyed by (lower cell index, axis).
  std::vector<std::uint8_t> trace_edge(std::size_t(box) * dim, 0);
  std::vector<std::int64_t> queue;

  int c[max_dim], d[max_dim];
  auto mark = [&](std::int64_t idx, std::uint8_t value) {
    if (state[idx] < value) state[idx] = value;
  };

  for (const LatticeWalk* walk : trace) {
    bool prev_in = false;
    std::int64_t prev_idx = -1;
    for (std::size_t t = 0; t < walk->cells.size(); ++t) {
      unpack(walk->cells[t], c, dim);
      const bool now_in = in_box(c);
      if (now_in) {
        const std::int64_t idx = box_index(c);
        if (state[idx] == 0) queue.push_back(idx);
        bool shell = false;
        for (int i = 0; i < dim; ++i)
          if (std::abs(c[i]) == sub_radius) shell = true;
        mark(idx, shell ? 2 : 1);
        // Walk truncation endpoint inside the box stands for an unknown
        // continuation.
        if (t + 1 == walk->cells.size() && walk->stopped == StopReason::max_steps && t > 0)
          mark(idx, 2);
        if (prev_in && t > 0) {
          unpack(walk->cells[t - 1], d, dim);
          int axis = -1;
          for (int i = 0; i < dim; ++i)
            if (c[i] != d[i]) axis = i;
          if (axis >= 0) {
            const std::int64_t lower = c[axis] < d[axis] ? idx : prev_idx;
            trace_edge[std::size_t(lower) * dim + axis] = 1;
          }
        }
        prev_idx = idx;
      }
      prev_in = now_in;
    }
  }

  // Explore open clusters of the in-box trace cells, clipped to the box.
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const std::int64_t idx = queue[head];
    // Decode coordinates from the box index.
    std::int64_t rest = idx;
    for (int i = dim - 1; i >= 0; --i) {
      c[i] = int(rest % side) - sub_radius;
      rest /= side;
    }
    bool shell = false;
    for (int i = 0; i < dim; ++i)
      if (std::abs(c[i]) == sub_radius) shell = true;
    if (shell) continue;  // do not expand past the sub-window shell
    for (int axis = 0; axis < dim; ++axis) {
      for (int delta = -1; delta <= 1; delta += 2) {
        std::memcpy(d, c, sizeof(int) * dim);
        d[axis] += delta;
        const CellKey lower = delta > 0 ? pack(c, dim) : pack(d, dim);
        if (edge_uniform(perc_seed, lower, axis) >= p) continue;
        const std::int64_t nidx = box_index(d);
        if (state[nidx] == 0) {
          bool nshell = false;
          for (int i = 0; i < dim; ++i)
            if (std::abs(d[i]) == sub_radius) nshell = true;
          state[nidx] = nshell ? 2 : 1;
          queue.push_back(nidx);
        }
      }
    }
  }

  // Assign vertex ids in box-index order.
  std::vector<std::int64_t> cells_in;
  for (std::int64_t idx = 0; idx < box; ++idx)
    if (state[idx]) cells_in.push_back(idx);

  MaterializedEnlargement out;
  Graph& g = out.graph;
  g.family = "lattice_window";
  g.params = {dim, sub_radius};
  g.label_width = dim;
  g.n_vertices = static_cast<std::uint32_t>(cells_in.size());
  g.degree_bound = 2 * dim;
  g.labels.resize(cells_in.size() * dim);
  g.boundary_mask.assign(cells_in.size(), 0);

  // box index -> vertex id
  std::vector<VertexId> vid(box, no_vertex);
  for (std::size_t i = 0; i < cells_in.size(); ++i) vid[cells_in[i]] = static_cast<VertexId>(i);

  for (std::size_t i = 0; i < cells_in.size(); ++i) {
    std::int64_t rest = cells_in[i];
    for (int k = dim - 1; k >= 0; --k) {
      g.labels[i * dim + k] = int(rest % side) - sub_radius;
      rest /= side;
    }
    if (state[cells_in[i]] == 2) g.boundary_mask[i] = 1;
  }

  // Edges: open or trace edges with both endpoints included. Emission is by
  // ascending lower box index then axis (lexicographic in vertex ids).
  for (std::size_t i = 0; i < cells_in.size(); ++i) {
    const std::int64_t idx = cells_in[i];
    std::int64_t rest = idx;
    for (int k = dim - 1; k >= 0; --k) {
      c[k] = int(rest % side) - sub_radius;
      rest /= side;
    }
    for (int axis = 0; axis < dim; ++axis) {
      if (c[axis] >= sub_radius) continue;
      std::memcpy(d, c, sizeof(int) * dim);
      d[axis] += 1;
      const std::int64_t nidx = box_index(d);
      if (vid[nidx] == no_vertex) continue;
      const bool is_trace = trace_edge[std::size_t(idx) * dim + axis] != 0;
      const bool is_open = edge_uniform(perc_seed, pack(c, dim), axis) < p;
      if (is_trace || is_open)
        g.edges.push_back({vid[idx], vid[nidx]});
    }
  }
  g.finalize();

  // Trace vertices, for window filters downstream.
  CellSet trace_cells(1024);
  for (const LatticeWalk* walk : trace)
    for (CellKey k : walk->cells) trace_cells.insert(k);
  for (std::size_t i = 0; i < cells_in.size(); ++i) {
    std::int64_t rest = cells_in[i];
    for (int k = dim - 1; k >= 0; --k) {
      c[k] = int(rest % side) - sub_radius;
      rest /= side;
    }
    if (trace_cells.contains(pack(c, dim)))
      out.trace_vertices.push_back(static_cast<VertexId>(i));
  }
  return out;
}

namespace {

// Early-exit DFS: does the origin's open cluster reach the shell?
bool origin_spans(const Window& w, std::uint64_t perc_seed, double p, std::size_t node_budget) {
  if (p <= 0.0) return false;
  CellSet visited(1024);
  std::vector<CellKey> stack;
  const int origin[max_dim] = {0, 0, 0, 0, 0};
  const CellKey o = pack(origin, w.dim);
  visited.insert(o);
  stack.push_back(o);
  int c[max_dim], n[max_dim];
  while (!stack.empty()) {
    const CellKey k = stack.back();
    stack.pop_back();
    unpack(k, c, w.dim);
    for (int axis = 0; axis < w.dim; ++axis) {
      for (int delta = -1; delta <= 1; delta += 2) {
        std::memcpy(n, c, sizeof(int) * w.dim);
        n[axis] += delta;
        if (std::abs(n[axis]) > w.radius) continue;
        const CellKey lower = delta > 0 ? k : pack(n, w.dim);
        if (edge_uniform(perc_seed, lower, axis) >= p) continue;
        const CellKey nk = pack(n, w.dim);
        if (!visited.insert(nk)) continue;
        if (std::abs(n[axis]) == w.radius) return true;
        // A fresh cell may sit on the shell through another axis.
        bool shell = false;
        for (int i = 0; i < w.dim; ++i)
          if (std::abs(n[i]) == w.radius) shell = true;
        if (shell) return true;
        stack.push_back(nk);
        if (visited.size() > node_budget)
          throw std::length_error("lattice: spanning probe exceeded the node budget");
      }
    }
  }
  return false;
}

}  // namespace

double spanning_threshold(const Window& w, std::uint64_t perc_seed, double tol,
                          std::size_t node_budget, double hi_cap) {
  double lo = 0.0, hi = hi_cap;
  if (hi_cap >= 1.0) {
    if (!origin_spans(w, perc_seed, 1.0, node_budget)) return 1.0 + tol;
    hi = 1.0;
  }
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (origin_spans(w, perc_seed, mid, node_budget))
      hi = mid;
    else
      lo = mid;
  }
  return hi;
}

}  // namespace lattice
}  // namespace perc
