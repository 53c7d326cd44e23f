#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pathsep/errors.hpp"

namespace pathsep {

using VertexId = std::uint32_t;
using ArcId = std::uint32_t;

// Consecutive arc ids; head of each arc is the tail of the next.
using ArcPath = std::vector<ArcId>;

// Directed multigraph. Parallel arcs are first-class: an arc is identified by
// its position in the arc list and never deduplicated. Treat as immutable
// once handed to an algorithm.
class Digraph {
 public:
  Digraph() = default;
  explicit Digraph(std::uint32_t vertex_count)
      : n_(vertex_count), out_(vertex_count), in_(vertex_count) {}

  static Digraph make(std::uint32_t vertex_count,
                      const std::vector<std::pair<VertexId, VertexId>>& arcs) {
    Digraph g(vertex_count);
    for (auto [u, v] : arcs) g.add_arc(u, v);
    return g;
  }

  ArcId add_arc(VertexId tail, VertexId head) {
    if (tail >= n_ || head >= n_) throw Error("arc endpoint out of range");
    if (tail == head) throw Error("self-loops are not allowed");
    ArcId id = static_cast<ArcId>(arcs_.size());
    arcs_.emplace_back(tail, head);
    out_[tail].push_back(id);
    in_[head].push_back(id);
    return id;
  }

  std::uint32_t vertex_count() const { return n_; }
  std::uint32_t arc_count() const { return static_cast<std::uint32_t>(arcs_.size()); }
  VertexId tail(ArcId a) const { return arcs_[a].first; }
  VertexId head(ArcId a) const { return arcs_[a].second; }
  const std::vector<ArcId>& out(VertexId v) const { return out_[v]; }
  const std::vector<ArcId>& in(VertexId v) const { return in_[v]; }
  const std::vector<std::pair<VertexId, VertexId>>& arcs() const { return arcs_; }

 private:
  std::uint32_t n_ = 0;
  std::vector<std::pair<VertexId, VertexId>> arcs_;
  std::vector<std::vector<ArcId>> out_, in_;
};

struct StInstance {
  Digraph g;
  VertexId s = 0;
  VertexId t = 0;
};

inline StInstance make_instance(Digraph g, VertexId s, VertexId t) {
  if (s >= g.vertex_count() || t >= g.vertex_count()) throw Error("terminal out of range");
  if (s == t) throw Error("source and target must differ");
  return StInstance{std::move(g), s, t};
}

// Unordered arc pairs, canonical form: each pair (a, b) with a < b, the list
// sorted lexicographically and deduplicated.
struct PairSet {
  std::vector<std::pair<ArcId, ArcId>> pairs;

  static PairSet make(std::vector<std::pair<ArcId, ArcId>> raw) {
    for (auto& [a, b] : raw) {
      if (a == b) throw Error("forbidden pair with identical arcs");
      if (a > b) std::swap(a, b);
    }
    std::sort(raw.begin(), raw.end());
    raw.erase(std::unique(raw.begin(), raw.end()), raw.end());
    return PairSet{std::move(raw)};
  }

  std::size_t size() const { return pairs.size(); }
  bool operator==(const PairSet&) const = default;
};

struct TopologicalOrder {
  std::vector<std::uint32_t> rank;  // rank strictly increases along every arc
};

// Reverse postorder of a DFS rooted at every vertex in id order; throws
// CyclicError carrying the arcs of one directed cycle.
inline TopologicalOrder topological_order(const Digraph& g) {
  const std::uint32_t n = g.vertex_count();
  std::vector<char> color(n, 0);  // 0 unvisited, 1 on stack, 2 done
  std::vector<VertexId> post;
  post.reserve(n);
  struct Frame {
    VertexId v;
    std::uint32_t next;
    ArcId via;  // arc that entered v (unused for roots)
  };
  std::vector<Frame> stack;
  for (VertexId root = 0; root < n; ++root) {
    if (color[root] != 0) continue;
    stack.push_back({root, 0, 0});
    color[root] = 1;
    while (!stack.empty()) {
      Frame& f = stack.back();
      const auto& outs = g.out(f.v);
      if (f.next < outs.size()) {
        ArcId a = outs[f.next++];
        VertexId w = g.head(a);
        if (color[w] == 0) {
          color[w] = 1;
          stack.push_back({w, 0, a});
        } else if (color[w] == 1) {
          // back arc: frames above w spell out the cycle
          std::size_t i = stack.size();
          while (i > 0 && stack[i - 1].v != w) --i;
          std::vector<ArcId> cycle;
          for (std::size_t j = i; j < stack.size(); ++j) cycle.push_back(stack[j].via);
          cycle.push_back(a);
          throw CyclicError(std::move(cycle));
        }
      } else {
        color[f.v] = 2;
        post.push_back(f.v);
        stack.pop_back();
      }
    }
  }
  TopologicalOrder order;
  order.rank.assign(n, 0);
  for (std::uint32_t i = 0; i < post.size(); ++i)
    order.rank[post[post.size() - 1 - i]] = i;
  return order;
}

enum class Direction { Forward, Backward };

// Characteristic vector of the set of vertices reachable from start along
// (Forward) or against (Backward) the arcs.
inline std::vector<char> reachable_set(const Digraph& g, VertexId start, Direction dir) {
  std::vector<char> seen(g.vertex_count(), 0);
  std::vector<VertexId> work{start};
  seen[start] = 1;
  while (!work.empty()) {
    VertexId v = work.back();
    work.pop_back();
    const auto& arcs = dir == Direction::Forward ? g.out(v) : g.in(v);
    for (ArcId a : arcs) {
      VertexId w = dir == Direction::Forward ? g.head(a) : g.tail(a);
      if (!seen[w]) {
        seen[w] = 1;
        work.push_back(w);
      }
    }
  }
  return seen;
}

struct TrimResult {
  StInstance instance;
  std::vector<VertexId> vertex_to_original;
  std::vector<ArcId> arc_to_original;
};

// Restricts the instance to vertices and arcs lying on some s-t walk: a
// vertex survives when it is reachable from s and co-reaches t, an arc when
// its tail is reachable and its head co-reaches. On acyclic inputs this is
// exactly the set of vertices/arcs on simple s-t paths. Idempotent.
inline TrimResult trim_to_core(const StInstance& inst) {
  auto fwd = reachable_set(inst.g, inst.s, Direction::Forward);
  if (!fwd[inst.t]) throw Disconnected();
  auto bwd = reachable_set(inst.g, inst.t, Direction::Backward);
  const std::uint32_t n = inst.g.vertex_count();
  std::vector<VertexId> remap(n, 0xffffffffu);
  std::vector<VertexId> vmap;
  for (VertexId v = 0; v < n; ++v) {
    if (fwd[v] && bwd[v]) {
      remap[v] = static_cast<VertexId>(vmap.size());
      vmap.push_back(v);
    }
  }
  Digraph core(static_cast<std::uint32_t>(vmap.size()));
  std::vector<ArcId> amap;
  for (ArcId a = 0; a < inst.g.arc_count(); ++a) {
    VertexId u = inst.g.tail(a), w = inst.g.head(a);
    if (fwd[u] && bwd[w]) {
      core.add_arc(remap[u], remap[w]);
      amap.push_back(a);
    }
  }
  VertexId s = remap[inst.s], t = remap[inst.t];
  return TrimResult{StInstance{std::move(core), s, t}, std::move(vmap), std::move(amap)};
}

struct NormalizeResult {
  StInstance instance;
  std::uint32_t direct_arc_count = 0;
  std::vector<ArcId> arc_to_original;
};

// Removes direct s->t arcs; each removed arc is an s-t path all by itself
// and is accounted separately by the solvers.
inline NormalizeResult normalize_adp(const StInstance& inst) {
  NormalizeResult res;
  Digraph g(inst.g.vertex_count());
  for (ArcId a = 0; a < inst.g.arc_count(); ++a) {
    VertexId u = inst.g.tail(a), v = inst.g.head(a);
    if (u == inst.s && v == inst.t) {
      ++res.direct_arc_count;
      continue;
    }
    g.add_arc(u, v);
    res.arc_to_original.push_back(a);
  }
  res.instance = StInstance{std::move(g), inst.s, inst.t};
  return res;
}

// A one-arc s-t path can never contain two arcs, so no pair set separates it.
inline void sfp_guard(const StInstance& inst) {
  for (ArcId a : inst.g.out(inst.s))
    if (inst.g.head(a) == inst.t) throw Inseparable();
}

// Depth-first traversal of all simple s-t paths in lexicographic arc-id
// order. The callback receives each complete path; returning false stops the
// traversal.
template <typename OnPath>
inline void for_each_st_path(const StInstance& inst, OnPath&& on_path) {
  std::vector<char> onpath(inst.g.vertex_count(), 0);
  ArcPath cur;
  struct Frame {
    VertexId v;
    std::uint32_t next;
  };
  std::vector<Frame> stack{{inst.s, 0}};
  onpath[inst.s] = 1;
  while (!stack.empty()) {
    Frame& f = stack.back();
    const auto& outs = inst.g.out(f.v);
    bool descended = false;
    while (f.next < outs.size()) {
      ArcId a = outs[f.next++];
      VertexId w = inst.g.head(a);
      if (onpath[w]) continue;
      cur.push_back(a);
      if (w == inst.t) {
        if (!on_path(static_cast<const ArcPath&>(cur))) return;
        cur.pop_back();
        continue;
      }
      onpath[w] = 1;
      stack.push_back({w, 0});
      descended = true;
      break;
    }
    if (!descended) {
      onpath[stack.back().v] = 0;
      if (!cur.empty()) cur.pop_back();
      stack.pop_back();
    }
  }
}

// All simple s-t paths in lexicographic arc-id order; CapExceeded as soon as
// a (cap+1)-th path is found.
inline std::vector<ArcPath> enumerate_st_paths(const StInstance& inst, std::uint64_t cap) {
  std::vector<ArcPath> paths;
  for_each_st_path(inst, [&](const ArcPath& p) {
    if (paths.size() >= cap) throw CapExceeded(cap);
    paths.push_back(p);
    return true;
  });
  return paths;
}

inline std::optional<ArcPath> first_st_path(const StInstance& inst) {
  std::optional<ArcPath> found;
  for_each_st_path(inst, [&](const ArcPath& p) {
    found = p;
    return false;
  });
  return found;
}

inline bool is_valid_st_path(const StInstance& inst, const ArcPath& path) {
  if (path.empty()) return false;
  if (path.front() >= inst.g.arc_count()) return false;
  if (inst.g.tail(path.front()) != inst.s) return false;
  std::vector<char> seen(inst.g.vertex_count(), 0);
  seen[inst.s] = 1;
  for (std::size_t i = 0; i < path.size(); ++i) {
    if (path[i] >= inst.g.arc_count()) return false;
    if (i > 0 && inst.g.tail(path[i]) != inst.g.head(path[i - 1])) return false;
    VertexId w = inst.g.head(path[i]);
    if (seen[w]) return false;
    seen[w] = 1;
  }
  return inst.g.head(path.back()) == inst.t;
}

// Greedy left-to-right cycle deletion: turns a walk starting at `start` into
// a simple path with the same endpoints using a subset of the walk's arcs.
inline ArcPath delete_cycles(const Digraph& g, VertexId start, const ArcPath& walk) {
  ArcPath out;
  std::vector<VertexId> verts{start};
  std::vector<std::int64_t> at(g.vertex_count(), -1);
  at[start] = 0;
  for (ArcId a : walk) {
    VertexId w = g.head(a);
    if (at[w] >= 0) {
      while (static_cast<std::int64_t>(verts.size()) - 1 > at[w]) {
        at[verts.back()] = -1;
        verts.pop_back();
        out.pop_back();
      }
    } else {
      out.push_back(a);
      verts.push_back(w);
      at[w] = static_cast<std::int64_t>(verts.size()) - 1;
    }
  }
  return out;
}

// One labeled edge per arc so parallel arcs stay distinguishable.
inline std::string to_dot(const StInstance& inst) {
  std::string out = "digraph g {\n  rankdir=LR;\n";
  for (VertexId v = 0; v < inst.g.vertex_count(); ++v) {
    out += "  " + std::to_string(v);
    if (v == inst.s)
      out += " [shape=box,label=\"s=" + std::to_string(v) + "\"]";
    else if (v == inst.t)
      out += " [shape=box,label=\"t=" + std::to_string(v) + "\"]";
    out += ";\n";
  }
  for (ArcId a = 0; a < inst.g.arc_count(); ++a)
    out += "  " + std::to_string(inst.g.tail(a)) + " -> " + std::to_string(inst.g.head(a)) +
           " [label=\"" + std::to_string(a) + "\"];\n";
  out += "}\n";
  return out;
}

}  // namespace pathsep
