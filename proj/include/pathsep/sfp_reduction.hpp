#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "pathsep/digraph.hpp"
#include "pathsep/errors.hpp"
#include "pathsep/formula.hpp"
#include "pathsep/sfp.hpp"

namespace pathsep {

// The pair-separation hardness construction: a graph whose minimum number
// of separating pairs is k exactly when the formula has a winning
// x-assignment. Structure: one three-vertex assignment unit per (clause,
// local y-assignment), chained in clause layers between s0 and t0; a
// gadget per x-variable whose only two optimal separating sets encode true
// and false; a gadget per inconsistency whose forced pair kills paths that
// mix contradictory locals; and a typification frame of parallel-arc
// bunches that pins every optimal solution outside the frame.

struct SfpVariableRowMeta {
  std::array<VertexId, 8> v{};  // v[1..7]; v[4] stays 0 on the extra row
  ArcId a12 = 0, a23 = 0, a56 = 0, a67 = 0;
};

struct SfpVariableGadgetMeta {
  VertexId src = 0, snk = 0;
  std::vector<SfpVariableRowMeta> rows;  // index 0 = extra row, 1..q = occurrences
};

struct SfpInconsistencyGadgetMeta {
  Inconsistency inc;
  VertexId s_i = 0, v1 = 0, v2 = 0, v3 = 0, v4 = 0, t_i = 0;
  ArcId a12 = 0, a34 = 0;
};

struct SfpDetourMeta {
  std::uint32_t var = 0;
  std::uint32_t row = 0;  // occurrence row in the variable gadget
  bool neg = false;
  ArcId enter = 0, mid1 = 0, mid2 = 0, exit = 0;  // v^L..t^L arc sequence
};

struct SfpUnitMeta {
  ClauseLocal local;
  VertexId s_l = 0, v_l = 0, t_l = 0;
  std::optional<ArcId> escape;          // v^L -> t^L, absent on the all-true local
  ArcPath thread;                       // s^L -> v^L arcs in order
  std::vector<SfpDetourMeta> detours;   // x-literal slots in slot order
  ArcId entry_from_s0 = 0;              // first layer only
  ArcId exit_to_t0 = 0;                 // last layer only
  std::vector<ArcId> to_next;           // per unit of the next layer
};

struct SfpReductionMeta {
  Formula3DNF formula;
  std::vector<std::uint32_t> q;      // occurrences per x-variable
  std::uint32_t p = 0;               // bunch width
  std::uint32_t gadget_count = 0;    // formula + variables + inconsistencies
  std::uint64_t k0 = 0;              // typification pair count
  std::uint64_t k = 0;               // decision threshold
  VertexId s = 0, t = 0, s0 = 0, t0 = 0;
  std::vector<SfpUnitMeta> units;    // clause-major, local bits ascending
  std::vector<std::vector<std::uint32_t>> units_of_clause;
  std::vector<SfpVariableGadgetMeta> variables;
  std::vector<SfpInconsistencyGadgetMeta> inconsistencies;
  std::vector<std::vector<ArcId>> source_bunch;  // per gadget: s -> source
  std::vector<std::vector<ArcId>> sink_bunch;    // per gadget: sink -> t
  ArcId typification_begin = 0;      // all arcs from here on are frame arcs
};

namespace detail {

struct SfpRowArcs {
  ArcId a12, a23, a56, a67;
};

// One gadget row: doubled arcs around the two single-arc halves whose pairs
// the optima are made of. The extra row has no middle vertex; its doubled
// fourth arc jumps v3 -> v5 directly.
inline SfpRowArcs sfp_row_arcs(Digraph& g, VertexId src, const std::array<VertexId, 8>& v,
                               VertexId snk, bool has_v4) {
  g.add_arc(src, v[1]);
  g.add_arc(src, v[1]);
  SfpRowArcs r{};
  r.a12 = g.add_arc(v[1], v[2]);
  r.a23 = g.add_arc(v[2], v[3]);
  if (has_v4) {
    g.add_arc(v[3], v[4]);
    g.add_arc(v[3], v[4]);
    g.add_arc(v[4], v[5]);
    g.add_arc(v[4], v[5]);
  } else {
    g.add_arc(v[3], v[5]);
    g.add_arc(v[3], v[5]);
  }
  r.a56 = g.add_arc(v[5], v[6]);
  r.a67 = g.add_arc(v[6], v[7]);
  g.add_arc(v[7], snk);
  g.add_arc(v[7], snk);
  return r;
}

inline void sfp_variable_arcs(Digraph& g, SfpVariableGadgetMeta& vm) {
  for (std::size_t j = 0; j < vm.rows.size(); ++j) {
    auto r = sfp_row_arcs(g, vm.src, vm.rows[j].v, vm.snk, j > 0);
    vm.rows[j].a12 = r.a12;
    vm.rows[j].a23 = r.a23;
    vm.rows[j].a56 = r.a56;
    vm.rows[j].a67 = r.a67;
  }
  for (std::size_t j = 1; j < vm.rows.size(); ++j) {
    g.add_arc(vm.rows[0].v[3], vm.rows[j].v[4]);
    g.add_arc(vm.rows[j].v[4], vm.rows[0].v[5]);
  }
}

inline void sfp_incons_arcs(Digraph& g, SfpInconsistencyGadgetMeta& im) {
  g.add_arc(im.s_i, im.v1);
  g.add_arc(im.s_i, im.v1);
  im.a12 = g.add_arc(im.v1, im.v2);
  g.add_arc(im.v2, im.v3);
  g.add_arc(im.v2, im.v3);
  im.a34 = g.add_arc(im.v3, im.v4);
  g.add_arc(im.v4, im.t_i);
  g.add_arc(im.v4, im.t_i);
}

}  // namespace detail

// Standalone single gadgets, for isolating their optimal-pair structure.
inline std::pair<StInstance, SfpInconsistencyGadgetMeta> inconsistency_gadget() {
  Digraph g(6);
  SfpInconsistencyGadgetMeta meta;
  meta.s_i = 0;
  meta.v1 = 1;
  meta.v2 = 2;
  meta.v3 = 3;
  meta.v4 = 4;
  meta.t_i = 5;
  detail::sfp_incons_arcs(g, meta);
  return {StInstance{std::move(g), meta.s_i, meta.t_i}, meta};
}

inline std::pair<StInstance, SfpVariableGadgetMeta> variable_gadget(std::uint32_t occurrences) {
  SfpVariableGadgetMeta meta;
  meta.src = 0;
  meta.snk = 1;
  std::uint32_t next = 2;
  meta.rows.resize(occurrences + 1);
  for (std::uint32_t j = 0; j <= occurrences; ++j)
    for (std::uint32_t pos = 1; pos <= 7; ++pos) {
      if (j == 0 && pos == 4) continue;
      meta.rows[j].v[pos] = next++;
    }
  Digraph g(next);
  detail::sfp_variable_arcs(g, meta);
  return {StInstance{std::move(g), meta.src, meta.snk}, meta};
}

// The gadget's two optimal separating sets: first halves encode true,
// second halves encode false.
inline PairSet variable_true_pairs(const SfpVariableGadgetMeta& vm) {
  std::vector<std::pair<ArcId, ArcId>> raw;
  for (const auto& r : vm.rows) raw.emplace_back(r.a12, r.a23);
  return PairSet::make(std::move(raw));
}

inline PairSet variable_false_pairs(const SfpVariableGadgetMeta& vm) {
  std::vector<std::pair<ArcId, ArcId>> raw;
  for (const auto& r : vm.rows) raw.emplace_back(r.a56, r.a67);
  return PairSet::make(std::move(raw));
}

inline std::pair<StInstance, SfpReductionMeta> gen_sfp_instance(const Formula3DNF& f) {
  if (f.clauses.empty()) throw MalformedFormula("formula has no clauses");
  for (const Clause3& c : f.clauses) {
    if (clause_y_vars(c).empty()) throw MalformedFormula("clause without y-variables");
    if (detail::clause_self_conflict(c, VarKind::X) ||
        detail::clause_self_conflict(c, VarKind::Y))
      throw MalformedFormula("self-conflicting clause");
  }
  for (VarKind kind : {VarKind::X, VarKind::Y})
    for (std::uint32_t v : detail::clause_spread(f, kind))
      if (v < 2) throw MalformedFormula("variable in fewer than two clauses");

  const std::uint32_t m = static_cast<std::uint32_t>(f.clauses.size());
  SfpReductionMeta meta;
  meta.formula = f;
  meta.q = x_occurrence_counts(f);

  // occurrence row of each x-literal slot, numbered per variable in
  // clause-then-slot order
  std::vector<std::array<std::uint32_t, 3>> slot_row(m, {0, 0, 0});
  {
    std::vector<std::uint32_t> counter(f.n_x, 0);
    for (std::uint32_t c = 0; c < m; ++c)
      for (std::uint32_t sl = 0; sl < 3; ++sl)
        if (f.clauses[c].lit[sl].kind == VarKind::X)
          slot_row[c][sl] = ++counter[f.clauses[c].lit[sl].index];
  }

  auto inconsistencies = find_inconsistencies(f);
  const std::uint32_t n_i = static_cast<std::uint32_t>(inconsistencies.size());
  meta.p = 2;
  for (std::uint32_t qi : meta.q) meta.p = std::max(meta.p, qi + 2);
  meta.gadget_count = f.n_x + n_i + 1;
  const std::uint64_t big_n = meta.gadget_count;
  meta.k0 = std::uint64_t{meta.p} * meta.p * big_n * (big_n - 1);
  meta.k = meta.k0 + n_i;
  for (std::uint32_t qi : meta.q) meta.k += qi + 1;

  // vertex ids: terminals, formula endpoints, units, variable gadgets,
  // inconsistency gadgets
  meta.s = 0;
  meta.t = 1;
  meta.s0 = 2;
  meta.t0 = 3;
  std::uint32_t next = 4;
  meta.units_of_clause.resize(m);
  for (std::uint32_t c = 0; c < m; ++c) {
    const std::uint32_t locals = std::uint32_t{1}
                                 << clause_y_vars(f.clauses[c]).size();
    for (std::uint32_t bits = 0; bits < locals; ++bits) {
      SfpUnitMeta u;
      u.local = {c, bits};
      u.s_l = next++;
      u.v_l = next++;
      u.t_l = next++;
      meta.units_of_clause[c].push_back(static_cast<std::uint32_t>(meta.units.size()));
      meta.units.push_back(std::move(u));
    }
  }
  meta.variables.resize(f.n_x);
  for (std::uint32_t i = 0; i < f.n_x; ++i) {
    SfpVariableGadgetMeta& vm = meta.variables[i];
    vm.src = next++;
    vm.snk = next++;
    vm.rows.resize(meta.q[i] + 1);
    for (std::uint32_t j = 0; j <= meta.q[i]; ++j)
      for (std::uint32_t pos = 1; pos <= 7; ++pos) {
        if (j == 0 && pos == 4) continue;
        vm.rows[j].v[pos] = next++;
      }
  }
  meta.inconsistencies.resize(n_i);
  for (std::uint32_t i = 0; i < n_i; ++i) {
    SfpInconsistencyGadgetMeta& im = meta.inconsistencies[i];
    im.inc = inconsistencies[i];
    im.s_i = next++;
    im.v1 = next++;
    im.v2 = next++;
    im.v3 = next++;
    im.v4 = next++;
    im.t_i = next++;
  }

  Digraph g(next);

  // layer wiring: source fan-out, complete bipartite between consecutive
  // layers, sink fan-in
  for (std::uint32_t ui : meta.units_of_clause[0])
    meta.units[ui].entry_from_s0 = g.add_arc(meta.s0, meta.units[ui].s_l);
  for (std::uint32_t c = 0; c + 1 < m; ++c)
    for (std::uint32_t ui : meta.units_of_clause[c])
      for (std::uint32_t vi : meta.units_of_clause[c + 1])
        meta.units[ui].to_next.push_back(g.add_arc(meta.units[ui].t_l, meta.units[vi].s_l));
  for (std::uint32_t ui : meta.units_of_clause[m - 1])
    meta.units[ui].exit_to_t0 = g.add_arc(meta.units[ui].t_l, meta.t0);

  for (auto& vm : meta.variables) detail::sfp_variable_arcs(g, vm);
  for (auto& im : meta.inconsistencies) detail::sfp_incons_arcs(g, im);

  // unit internals: the s^L-v^L path threads one single arc of every
  // inconsistency gadget involving this local (the first-half arc when the
  // partner clause comes later, the second-half arc when it comes earlier),
  // visiting gadgets in partner order; then the escape arc when the local
  // breaks a y-literal; then one detour per x-literal slot through the
  // occurrence's row half that asserting the literal would leave unpaired
  for (SfpUnitMeta& u : meta.units) {
    struct ThreadStop {
      ClauseLocal partner;
      std::uint32_t gadget;
      bool first_half;
    };
    std::vector<ThreadStop> stops;
    for (std::uint32_t i = 0; i < n_i; ++i) {
      const Inconsistency& inc = meta.inconsistencies[i].inc;
      if (inc.a == u.local) stops.push_back({inc.b, i, true});
      if (inc.b == u.local) stops.push_back({inc.a, i, false});
    }
    std::sort(stops.begin(), stops.end(), [](const ThreadStop& a, const ThreadStop& b) {
      return std::pair(a.partner.clause, a.partner.bits) <
             std::pair(b.partner.clause, b.partner.bits);
    });
    VertexId cur = u.s_l;
    for (const ThreadStop& st : stops) {
      const SfpInconsistencyGadgetMeta& im = meta.inconsistencies[st.gadget];
      u.thread.push_back(g.add_arc(cur, st.first_half ? im.v1 : im.v3));
      u.thread.push_back(st.first_half ? im.a12 : im.a34);
      cur = st.first_half ? im.v2 : im.v4;
    }
    u.thread.push_back(g.add_arc(cur, u.v_l));

    const Clause3& c = f.clauses[u.local.clause];
    if (!y_part_satisfied(c, u.local.bits)) u.escape = g.add_arc(u.v_l, u.t_l);

    for (std::uint32_t sl = 0; sl < 3; ++sl) {
      const Literal& l = c.lit[sl];
      if (l.kind != VarKind::X) continue;
      const SfpVariableRowMeta& row =
          meta.variables[l.index].rows[slot_row[u.local.clause][sl]];
      SfpDetourMeta d;
      d.var = l.index;
      d.row = slot_row[u.local.clause][sl];
      d.neg = l.neg;
      if (!l.neg) {
        d.enter = g.add_arc(u.v_l, row.v[1]);
        d.mid1 = row.a12;
        d.mid2 = row.a23;
        d.exit = g.add_arc(row.v[3], u.t_l);
      } else {
        d.enter = g.add_arc(u.v_l, row.v[5]);
        d.mid1 = row.a56;
        d.mid2 = row.a67;
        d.exit = g.add_arc(row.v[7], u.t_l);
      }
      u.detours.push_back(d);
    }
  }

  // typification frame: p parallels source-side and sink-side per gadget,
  // p+1 diagonals from every gadget source to every other gadget's sink
  meta.typification_begin = g.arc_count();
  std::vector<std::pair<VertexId, VertexId>> ports;
  ports.emplace_back(meta.s0, meta.t0);
  for (const auto& vm : meta.variables) ports.emplace_back(vm.src, vm.snk);
  for (const auto& im : meta.inconsistencies) ports.emplace_back(im.s_i, im.t_i);
  meta.source_bunch.resize(ports.size());
  meta.sink_bunch.resize(ports.size());
  for (std::size_t gi = 0; gi < ports.size(); ++gi)
    for (std::uint32_t r = 0; r < meta.p; ++r)
      meta.source_bunch[gi].push_back(g.add_arc(meta.s, ports[gi].first));
  for (std::size_t gi = 0; gi < ports.size(); ++gi)
    for (std::uint32_t r = 0; r < meta.p; ++r)
      meta.sink_bunch[gi].push_back(g.add_arc(ports[gi].second, meta.t));
  for (std::size_t gi = 0; gi < ports.size(); ++gi)
    for (std::size_t gj = 0; gj < ports.size(); ++gj) {
      if (gi == gj) continue;
      for (std::uint32_t r = 0; r < meta.p + 1; ++r)
        g.add_arc(ports[gi].first, ports[gj].second);
    }

  return {StInstance{std::move(g), meta.s, meta.t}, std::move(meta)};
}

// The k pairs that separate when the x-assignment wins: all cross-gadget
// frame pairs, the forced pair of every inconsistency gadget, and per
// variable the gadget optimum matching the assigned value.
inline PairSet canonical_pairs(const SfpReductionMeta& meta, const Assignment& tx) {
  if (tx.size() != meta.formula.n_x) throw Error("assignment length mismatch");
  std::vector<std::pair<ArcId, ArcId>> raw;
  for (std::size_t gi = 0; gi < meta.source_bunch.size(); ++gi)
    for (std::size_t gj = 0; gj < meta.sink_bunch.size(); ++gj) {
      if (gi == gj) continue;
      for (ArcId a : meta.source_bunch[gi])
        for (ArcId b : meta.sink_bunch[gj]) raw.emplace_back(a, b);
    }
  for (const auto& im : meta.inconsistencies) raw.emplace_back(im.a12, im.a34);
  for (std::uint32_t i = 0; i < meta.formula.n_x; ++i)
    for (const auto& row : meta.variables[i].rows) {
      if (tx[i])
        raw.emplace_back(row.a12, row.a23);
      else
        raw.emplace_back(row.a56, row.a67);
    }
  PairSet ps = PairSet::make(std::move(raw));
  if (ps.pairs.size() != meta.k) throw Error("canonical pair count mismatch");
  return ps;
}

// A path that dodges every canonical pair, witnessing that the assignment
// pair leaves the formula false: it walks the frame into the formula
// gadget, picks in every layer the unit matching the global y-assignment,
// and leaves each unit through the escape arc or through the detour of a
// false x-literal (whose row half carries no chosen pairs).
inline ArcPath witness_path(const SfpReductionMeta& meta, const Assignment& tx,
                            const Assignment& ty) {
  const Formula3DNF& f = meta.formula;
  if (tx.size() != f.n_x || ty.size() != f.n_y) throw Error("assignment length mismatch");
  if (dnf_true(f, tx, ty)) throw NotFalsifying();

  const std::uint32_t m = static_cast<std::uint32_t>(f.clauses.size());
  std::vector<std::uint32_t> chosen(m);
  for (std::uint32_t c = 0; c < m; ++c) {
    std::uint32_t bits = local_bits_for(f.clauses[c], ty);
    chosen[c] = meta.units_of_clause[c][bits];
  }

  ArcPath path{meta.source_bunch[0][0]};
  for (std::uint32_t c = 0; c < m; ++c) {
    const SfpUnitMeta& u = meta.units[chosen[c]];
    if (c == 0) path.push_back(u.entry_from_s0);
    path.insert(path.end(), u.thread.begin(), u.thread.end());
    if (u.escape) {
      path.push_back(*u.escape);
    } else {
      const SfpDetourMeta* pick = nullptr;
      for (const SfpDetourMeta& d : u.detours)
        if (d.neg ? tx[d.var] != 0 : tx[d.var] == 0) {
          pick = &d;
          break;
        }
      if (!pick) throw Error("clause not falsified despite failed evaluation");
      path.push_back(pick->enter);
      path.push_back(pick->mid1);
      path.push_back(pick->mid2);
      path.push_back(pick->exit);
    }
    if (c + 1 < m) {
      std::uint32_t next_bits = local_bits_for(f.clauses[c + 1], ty);
      path.push_back(u.to_next[next_bits]);
    } else {
      path.push_back(u.exit_to_t0);
    }
  }
  path.push_back(meta.sink_bunch[0][0]);

  if (covering_pair(path, canonical_pairs(meta, tx)))
    throw Error("witness path contains a canonical pair");
  return path;
}

}  // namespace pathsep
