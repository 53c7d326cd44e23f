#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "pathsep/adp.hpp"
#include "pathsep/digraph.hpp"
#include "pathsep/errors.hpp"
#include "pathsep/lp.hpp"
#include "pathsep/rational.hpp"
#include "pathsep/sfp.hpp"

namespace pathsep {

// The fractional relaxation pair. Primal: one variable per s-t path,
// maximize the total path weight subject to weight at most 1 on every
// relevant arc pair (a pair is relevant when some path contains both arcs).
// Dual: one variable per relevant pair, minimize the total subject to every
// path picking up weight at least 1 from the pairs inside it.
struct LpPair {
  LpModel primal;                                  // columns follow `paths`
  LpModel dual;                                    // columns follow `pairs`
  std::vector<ArcPath> paths;                      // lexicographic order
  std::vector<std::pair<ArcId, ArcId>> pairs;      // canonical order
};

inline LpPair build_lp_pair(const StInstance& inst, std::uint64_t path_cap = 100000) {
  LpPair out;
  out.paths = enumerate_st_paths(inst, path_cap);
  if (out.paths.empty()) throw Disconnected();
  std::vector<std::vector<ArcId>> sorted(out.paths.size());
  std::set<std::pair<ArcId, ArcId>> rel;
  for (std::size_t i = 0; i < out.paths.size(); ++i) {
    sorted[i] = out.paths[i];
    std::sort(sorted[i].begin(), sorted[i].end());
    for (std::size_t x = 0; x < sorted[i].size(); ++x)
      for (std::size_t y = x + 1; y < sorted[i].size(); ++y)
        rel.emplace(sorted[i][x], sorted[i][y]);
  }
  out.pairs.assign(rel.begin(), rel.end());
  const std::uint32_t np = static_cast<std::uint32_t>(out.paths.size());
  const std::uint32_t nq = static_cast<std::uint32_t>(out.pairs.size());

  out.primal.maximize = true;
  out.primal.var_count = np;
  out.primal.objective.assign(np, Rational(1));
  out.primal.rows.assign(nq, {});
  out.primal.senses.assign(nq, RowSense::Le);
  out.primal.rhs.assign(nq, Rational(1));

  out.dual.maximize = false;
  out.dual.var_count = nq;
  out.dual.objective.assign(nq, Rational(1));
  out.dual.rows.assign(np, {});
  out.dual.senses.assign(np, RowSense::Ge);
  out.dual.rhs.assign(np, Rational(1));

  for (std::uint32_t qi = 0; qi < nq; ++qi) {
    auto [a, b] = out.pairs[qi];
    for (std::uint32_t pi = 0; pi < np; ++pi) {
      if (std::binary_search(sorted[pi].begin(), sorted[pi].end(), a) &&
          std::binary_search(sorted[pi].begin(), sorted[pi].end(), b)) {
        out.primal.rows[qi].emplace_back(pi, Rational(1));
        out.dual.rows[pi].emplace_back(qi, Rational(1));
      }
    }
  }
  return out;
}

struct DualityBudgets {
  std::uint64_t path_cap = 100000;
  SfpBudget sfp;
  // When set, the candidate is verified to separate and to match the LP
  // bound, which certifies the exact pair optimum without running the
  // hitting-set solver.
  std::optional<PairSet> sfp_certificate;
  bool want_certificates = true;
  SimplexOptions simplex;
};

struct DualityReport {
  Rational lp_value;
  std::uint32_t adp_int = 0;
  std::uint32_t sfp_int = 0;
  Rational gap;  // sfp_int - adp_int
  std::vector<ArcPath> adp_witness;
  PairSet sfp_pairs;
  LpSolution primal;                            // per path, order of lp_paths
  LpSolution dual;                              // per pair, order of lp_pairs
  std::vector<ArcPath> lp_paths;
  std::vector<std::pair<ArcId, ArcId>> lp_pairs;
};

// The three quantities of the weak duality chain on one instance: the
// integral path maximum, the shared LP value (computed from both models,
// which must agree exactly), and the integral pair minimum.
inline DualityReport duality_report(const StInstance& inst, const DualityBudgets& budgets = {}) {
  DualityReport rep;
  auto pair = build_lp_pair(inst, budgets.path_cap);
  rep.primal = simplex_solve(pair.primal, budgets.simplex);
  rep.dual = simplex_solve(pair.dual, budgets.simplex);
  if (rep.primal.value != rep.dual.value)
    throw Error("primal and dual optima disagree");
  rep.lp_value = rep.primal.value;
  rep.lp_paths = std::move(pair.paths);
  rep.lp_pairs = std::move(pair.pairs);

  for (std::uint32_t k = 1;; ++k) {
    auto res = solve(inst, k);
    if (!res.feasible) break;
    rep.adp_int = k;
    rep.adp_witness = std::move(res.witness);
    if (k > rep.lp_paths.size()) throw Error("path maximum exceeded the path count");
  }

  if (budgets.sfp_certificate) {
    const PairSet& cert = *budgets.sfp_certificate;
    auto verdict = separation_check(inst, cert, budgets.sfp.check_nodes);
    if (!verdict.separates) throw Error("supplied pair certificate does not separate");
    BigInt lower = rational_ceil(rep.lp_value);
    if (BigInt(cert.size()) != lower)
      throw Error("supplied pair certificate does not meet the LP bound");
    rep.sfp_int = static_cast<std::uint32_t>(cert.size());
    rep.sfp_pairs = cert;
  } else {
    auto sfp = solve_min_pairs(inst, budgets.sfp);
    rep.sfp_int = sfp.k;
    rep.sfp_pairs = std::move(sfp.pairs);
  }
  rep.gap = Rational(rep.sfp_int) - Rational(rep.adp_int);
  if (!budgets.want_certificates) {
    rep.adp_witness.clear();
    rep.primal.x.clear();
    rep.dual.x.clear();
    rep.lp_paths.clear();
    rep.lp_pairs.clear();
    rep.sfp_pairs = PairSet{};
  }
  return rep;
}

struct UnitCutResult {
  std::uint32_t k = 0;
  ArcId cut_arc = 0;
  std::vector<ArcPath> paths;  // k pairwise almost disjoint s-t paths
  PairSet pairs;               // k separating pairs, all containing cut_arc
};

namespace detail {

// Saturated arcs crossing the residual-reachable side: the minimum cut that
// the final flow certifies.
inline std::vector<ArcId> residual_min_cut(const Digraph& g, VertexId from,
                                           const std::vector<std::uint8_t>& cap,
                                           const std::vector<std::uint8_t>& f) {
  std::vector<char> seen(g.vertex_count(), 0);
  std::vector<VertexId> work{from};
  seen[from] = 1;
  while (!work.empty()) {
    VertexId v = work.back();
    work.pop_back();
    for (ArcId a : g.out(v)) {
      if (f[a] < cap[a] && !seen[g.head(a)]) {
        seen[g.head(a)] = 1;
        work.push_back(g.head(a));
      }
    }
    for (ArcId a : g.in(v)) {
      if (f[a] > 0 && !seen[g.tail(a)]) {
        seen[g.tail(a)] = 1;
        work.push_back(g.tail(a));
      }
    }
  }
  std::vector<ArcId> cut;
  for (ArcId a = 0; a < g.arc_count(); ++a)
    if (cap[a] > 0 && seen[g.tail(a)] && !seen[g.head(a)]) cut.push_back(a);
  return cut;
}

}  // namespace detail

// Searches for an arc uv whose removal leaves t unreachable while u stays
// reachable and v does not (so every s-t path runs prefix, uv, suffix with
// the prefix inside the reachable side S and the suffix outside). With k the
// smaller of the two side flows (s to u inside S, v to t outside), the
// instance has exactly k almost disjoint paths and k separating pairs, each
// bundling uv with one arc of the deficient side's minimum cut. Endpoints
// touching s or t make that side unbounded. Returns the first applicable
// arc in id order, or nothing.
inline std::optional<UnitCutResult> solve_unit_cut(const StInstance& inst) {
  const Digraph& g = inst.g;
  const std::uint32_t m = g.arc_count();
  const std::uint32_t infinite = m + 1;
  for (ArcId cut = 0; cut < m; ++cut) {
    VertexId u = g.tail(cut), v = g.head(cut);
    if (u == inst.s && v == inst.t) continue;  // a one-arc path has no prefix or suffix
    // reachability from s with the candidate arc removed
    std::vector<char> side(g.vertex_count(), 0);
    side[inst.s] = 1;
    std::vector<VertexId> work{inst.s};
    while (!work.empty()) {
      VertexId x = work.back();
      work.pop_back();
      for (ArcId a : g.out(x)) {
        if (a == cut) continue;
        VertexId w = g.head(a);
        if (!side[w]) {
          side[w] = 1;
          work.push_back(w);
        }
      }
    }
    if (side[inst.t] || !side[u] || side[v]) continue;
    std::vector<char> other(g.vertex_count(), 0);
    for (VertexId x = 0; x < g.vertex_count(); ++x) other[x] = !side[x];

    std::uint32_t source_flow = infinite, sink_flow = infinite;
    std::vector<std::uint8_t> fs, ft, caps, capt;
    if (u != inst.s) {
      std::vector<std::uint8_t> cap(m, 0);
      for (ArcId a = 0; a < m; ++a)
        if (side[g.tail(a)] && side[g.head(a)]) cap[a] = 1;
      std::vector<std::uint8_t> f(m, 0);
      std::uint32_t val = 0;
      while (detail::augment_once(g, inst.s, u, cap, f)) ++val;
      source_flow = val;
      fs = std::move(f);
      caps = std::move(cap);
    }
    if (v != inst.t) {
      std::vector<std::uint8_t> cap(m, 0);
      for (ArcId a = 0; a < m; ++a)
        if (other[g.tail(a)] && other[g.head(a)]) cap[a] = 1;
      std::vector<std::uint8_t> f(m, 0);
      std::uint32_t val = 0;
      while (detail::augment_once(g, v, inst.t, cap, f)) ++val;
      sink_flow = val;
      ft = std::move(f);
      capt = std::move(cap);
    }
    std::uint32_t k = std::min(source_flow, sink_flow);
    if (k == 0 || k == infinite) continue;  // no path through, or s->t direct: not this arc

    std::vector<ArcPath> prefixes(k), suffixes(k);
    if (u != inst.s) prefixes = detail::extract_unit_paths(g, inst.s, u, fs, k);
    if (v != inst.t) suffixes = detail::extract_unit_paths(g, v, inst.t, ft, k);
    std::vector<ArcPath> paths(k);
    for (std::uint32_t i = 0; i < k; ++i) {
      paths[i] = prefixes[i];
      paths[i].push_back(cut);
      paths[i].insert(paths[i].end(), suffixes[i].begin(), suffixes[i].end());
    }
    std::vector<ArcId> bundle;
    if (source_flow <= sink_flow)
      bundle = detail::residual_min_cut(g, inst.s, caps, fs);
    else
      bundle = detail::residual_min_cut(g, v, capt, ft);
    if (bundle.size() != k) throw Error("minimum cut disagrees with the flow value");
    std::vector<std::pair<ArcId, ArcId>> raw;
    for (ArcId a : bundle) raw.emplace_back(std::min(a, cut), std::max(a, cut));
    return UnitCutResult{k, cut, std::move(paths), PairSet::make(std::move(raw))};
  }
  return std::nullopt;
}

}  // namespace pathsep
