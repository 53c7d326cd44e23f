#pragma once

#include <algorithm>
#include <cstdint>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "pathsep/digraph.hpp"
#include "pathsep/errors.hpp"
#include "pathsep/json_io.hpp"

namespace pathsep {

struct UndirectedGraph {
  std::uint32_t vertex_count = 0;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
};

inline void validate_simple(const UndirectedGraph& h) {
  std::set<std::pair<std::uint32_t, std::uint32_t>> seen;
  for (auto [a, b] : h.edges) {
    if (a >= h.vertex_count || b >= h.vertex_count) throw Error("edge endpoint out of range");
    if (a == b) throw Error("self-loop in undirected graph");
    if (!seen.insert({std::min(a, b), std::max(a, b)}).second)
      throw Error("duplicate edge in undirected graph");
  }
}

// {"vertex_count": N, "edges": [[u, v], ...]}
inline UndirectedGraph read_h_graph(const std::string& text) {
  Json doc = detail::json_parse(text, "graph");
  UndirectedGraph h;
  h.vertex_count = detail::json_uint_field(doc, "vertex_count", "graph");
  const Json& edges = detail::json_field(doc, "edges", "graph");
  if (!edges.is_array()) throw ParseError("graph: field 'edges' must be an array");
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const Json& e = edges[i];
    std::string where = "graph: edges[" + std::to_string(i) + "]";
    if (!e.is_array() || e.size() != 2) throw ParseError(where + " must be a [u, v] pair");
    h.edges.emplace_back(detail::json_uint(e[0], where + " first"),
                         detail::json_uint(e[1], where + " second"));
  }
  try {
    validate_simple(h);
  } catch (const Error& e) {
    throw ParseError(std::string("graph: ") + e.what());
  }
  return h;
}

inline Json h_graph_to_json(const UndirectedGraph& h) {
  Json edges = Json::array();
  for (auto [a, b] : h.edges) edges.push_back(Json::array({a, b}));
  return Json{{"edges", std::move(edges)}, {"vertex_count", h.vertex_count}};
}

// Maximum independent set size by branch and bound over vertex bitmasks.
inline std::uint32_t brute_alpha(const UndirectedGraph& h) {
  if (h.vertex_count > 20) throw TooLarge("too many vertices for the independent set oracle");
  validate_simple(h);
  const std::uint32_t n = h.vertex_count;
  std::vector<std::uint32_t> adj(n, 0);
  for (auto [a, b] : h.edges) {
    adj[a] |= std::uint32_t{1} << b;
    adj[b] |= std::uint32_t{1} << a;
  }
  std::uint32_t best = 0;
  auto rec = [&](auto&& self, std::uint32_t cand, std::uint32_t size) -> void {
    if (size + static_cast<std::uint32_t>(__builtin_popcount(cand)) <= best) return;
    if (cand == 0) {
      best = std::max(best, size);
      return;
    }
    std::uint32_t v = static_cast<std::uint32_t>(__builtin_ctz(cand));
    self(self, cand & ~adj[v] & ~(std::uint32_t{1} << v), size + 1);
    self(self, cand & ~(std::uint32_t{1} << v), size);
  };
  rec(rec, n == 32 ? ~std::uint32_t{0} : (std::uint32_t{1} << n) - 1, 0);
  return best;
}

// A length-l path whose arcs are each replaced by a bunch of k parallel
// arcs. Arc ids are bunch-major: bunch b occupies ids [b*k, (b+1)*k).
inline StInstance gen_bunch(std::uint32_t k, std::uint32_t l) {
  if (k < 1) throw Error("bunch width must be at least 1");
  if (l < 2) throw Error("bunch count must be at least 2");
  Digraph g(l + 1);
  for (std::uint32_t b = 0; b < l; ++b)
    for (std::uint32_t i = 0; i < k; ++i) g.add_arc(b, b + 1);
  return {std::move(g), 0, l};
}

// The k^2 pairs combining each arc of the first bunch with each arc of the
// second; every s-t path picks one arc per bunch, so the set separates.
inline PairSet cross_bunch_pairs(std::uint32_t k) {
  std::vector<std::pair<ArcId, ArcId>> raw;
  for (std::uint32_t i = 0; i < k; ++i)
    for (std::uint32_t j = 0; j < k; ++j) raw.emplace_back(i, k + j);
  return PairSet::make(std::move(raw));
}

// Registry of one edge gadget: four inputs, ten interior vertices, four
// outputs. An independent-set path enters at in_u or in_v and leaves at the
// matching output; the two auxiliary paths cross sides through yl1->yr2 and
// yl2->yr1.
struct AdpGadgetMeta {
  VertexId in_u = 0, in_v = 0, in_h1 = 0, in_h2 = 0;
  VertexId xl1 = 0, xl2 = 0, yl1 = 0, yl2 = 0, zl = 0, zr = 0;
  VertexId yr1 = 0, yr2 = 0, xr1 = 0, xr2 = 0;
  VertexId out_u = 0, out_v = 0, out_h1 = 0, out_h2 = 0;
};

struct AdpReductionMeta {
  UndirectedGraph h;
  VertexId s = 0, t = 0, v_v = 0, v_e = 0;
  std::vector<VertexId> h_vertex;                      // per H-vertex
  std::vector<AdpGadgetMeta> gadgets;                  // per edge, edge order
  std::vector<std::vector<std::uint32_t>> incident;    // per H-vertex: edge ids ascending
};

namespace detail {

inline ArcId find_arc(const Digraph& g, VertexId u, VertexId v) {
  for (ArcId a : g.out(u))
    if (g.head(a) == v) return a;
  throw Error("expected arc is missing");
}

}  // namespace detail

// H has an independent set of size kappa iff the result admits 2m + kappa
// almost disjoint s-t paths. Every path must either be one of the two
// auxiliary paths of a gadget (entered from the edge hub v_e) or walk a
// vertex chain (entered from the vertex hub v_v), and the gadget forces
// almost-disjointness to fail exactly when both endpoints of an edge are
// chosen.
inline std::pair<StInstance, AdpReductionMeta> gen_adp_instance(const UndirectedGraph& h) {
  validate_simple(h);
  const std::uint32_t n = h.vertex_count;
  const std::uint32_t m = static_cast<std::uint32_t>(h.edges.size());
  AdpReductionMeta meta;
  meta.h = h;
  meta.s = 0;
  meta.t = 1;
  meta.v_v = 2;
  meta.v_e = 3;
  meta.h_vertex.resize(n);
  for (std::uint32_t u = 0; u < n; ++u) meta.h_vertex[u] = 4 + u;
  meta.gadgets.resize(m);
  std::uint32_t next = 4 + n;
  for (std::uint32_t e = 0; e < m; ++e) {
    AdpGadgetMeta& gm = meta.gadgets[e];
    VertexId* slots[18] = {&gm.in_u, &gm.in_v, &gm.in_h1, &gm.in_h2, &gm.xl1, &gm.xl2,
                           &gm.yl1,  &gm.yl2,  &gm.zl,    &gm.zr,    &gm.yr1, &gm.yr2,
                           &gm.xr1,  &gm.xr2,  &gm.out_u, &gm.out_v, &gm.out_h1, &gm.out_h2};
    for (auto* slot : slots) *slot = next++;
  }
  meta.incident.resize(n);
  for (std::uint32_t e = 0; e < m; ++e) {
    meta.incident[h.edges[e].first].push_back(e);
    meta.incident[h.edges[e].second].push_back(e);
  }

  Digraph g(next);
  g.add_arc(meta.s, meta.v_v);
  g.add_arc(meta.s, meta.v_e);
  for (std::uint32_t e = 0; e < m; ++e) {
    const AdpGadgetMeta& gm = meta.gadgets[e];
    g.add_arc(gm.in_u, gm.xl1);
    g.add_arc(gm.in_h1, gm.xl1);
    g.add_arc(gm.in_v, gm.xl2);
    g.add_arc(gm.in_h2, gm.xl2);
    g.add_arc(gm.xl1, gm.yl1);
    g.add_arc(gm.xl2, gm.yl2);
    g.add_arc(gm.yl1, gm.zl);
    g.add_arc(gm.yl1, gm.yr2);
    g.add_arc(gm.yl2, gm.zl);
    g.add_arc(gm.yl2, gm.yr1);
    g.add_arc(gm.zl, gm.zr);
    g.add_arc(gm.zr, gm.yr1);
    g.add_arc(gm.zr, gm.yr2);
    g.add_arc(gm.yr1, gm.xr1);
    g.add_arc(gm.yr2, gm.xr2);
    g.add_arc(gm.xr1, gm.out_h2);
    g.add_arc(gm.xr1, gm.out_u);
    g.add_arc(gm.xr2, gm.out_h1);
    g.add_arc(gm.xr2, gm.out_v);
    g.add_arc(meta.v_e, gm.in_h1);
    g.add_arc(meta.v_e, gm.in_h2);
    g.add_arc(gm.out_h1, meta.t);
    g.add_arc(gm.out_h2, meta.t);
  }
  for (std::uint32_t u = 0; u < n; ++u) {
    g.add_arc(meta.v_v, meta.h_vertex[u]);
    const auto& inc = meta.incident[u];
    if (inc.empty()) {
      g.add_arc(meta.h_vertex[u], meta.t);
      continue;
    }
    VertexId prev = meta.h_vertex[u];
    for (std::uint32_t e : inc) {
      const AdpGadgetMeta& gm = meta.gadgets[e];
      bool u_side = h.edges[e].first == u;
      g.add_arc(prev, u_side ? gm.in_u : gm.in_v);
      prev = u_side ? gm.out_u : gm.out_v;
    }
    g.add_arc(prev, meta.t);
  }
  return {StInstance{std::move(g), meta.s, meta.t}, std::move(meta)};
}

// The 2m auxiliary paths plus one vertex chain path per chosen vertex;
// pairwise almost disjoint whenever U is independent.
inline std::vector<ArcPath> independent_set_paths(const StInstance& inst,
                                                  const AdpReductionMeta& meta,
                                                  const std::vector<std::uint32_t>& u_set) {
  const Digraph& g = inst.g;
  std::vector<char> chosen(meta.h.vertex_count, 0);
  for (std::uint32_t u : u_set) {
    if (u >= meta.h.vertex_count) throw Error("vertex out of range");
    if (chosen[u]) throw Error("duplicate vertex in set");
    chosen[u] = 1;
  }
  for (auto [a, b] : meta.h.edges)
    if (chosen[a] && chosen[b]) throw NotIndependent();

  auto walk = [&](const std::vector<VertexId>& verts) {
    ArcPath p;
    for (std::size_t i = 0; i + 1 < verts.size(); ++i)
      p.push_back(detail::find_arc(g, verts[i], verts[i + 1]));
    return p;
  };

  std::vector<ArcPath> out;
  for (const AdpGadgetMeta& gm : meta.gadgets) {
    out.push_back(walk({meta.s, meta.v_e, gm.in_h1, gm.xl1, gm.yl1, gm.yr2, gm.xr2,
                        gm.out_h1, meta.t}));
    out.push_back(walk({meta.s, meta.v_e, gm.in_h2, gm.xl2, gm.yl2, gm.yr1, gm.xr1,
                        gm.out_h2, meta.t}));
  }
  std::vector<std::uint32_t> ordered(u_set);
  std::sort(ordered.begin(), ordered.end());
  for (std::uint32_t u : ordered) {
    std::vector<VertexId> verts{meta.s, meta.v_v, meta.h_vertex[u]};
    for (std::uint32_t e : meta.incident[u]) {
      const AdpGadgetMeta& gm = meta.gadgets[e];
      if (meta.h.edges[e].first == u) {
        for (VertexId v : {gm.in_u, gm.xl1, gm.yl1, gm.zl, gm.zr, gm.yr1, gm.xr1, gm.out_u})
          verts.push_back(v);
      } else {
        for (VertexId v : {gm.in_v, gm.xl2, gm.yl2, gm.zl, gm.zr, gm.yr2, gm.xr2, gm.out_v})
          verts.push_back(v);
      }
    }
    verts.push_back(meta.t);
    out.push_back(walk(verts));
  }
  return out;
}

}  // namespace pathsep
