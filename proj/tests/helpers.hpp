#pragma once

#include <cstdint>
#include <random>
#include <utility>

#include "pathsep/adp.hpp"
#include "pathsep/digraph.hpp"
#include "pathsep/formula.hpp"

namespace testgen {

using namespace pathsep;

// Random DAG instance, trimmed to its s-t core, without direct s->t arcs.
// Vertex ids are already a topological order by construction (arcs only go
// up), which trim_to_core's remap preserves.
inline StInstance random_trimmed_dag(std::mt19937& rng, std::uint32_t max_v = 8,
                                     std::uint32_t max_a = 14) {
  for (;;) {
    std::uniform_int_distribution<std::uint32_t> nv(4, max_v);
    const std::uint32_t n = nv(rng);
    std::uniform_int_distribution<std::uint32_t> na(n, max_a);
    const std::uint32_t a = na(rng);
    std::uniform_int_distribution<std::uint32_t> pick(0, n - 1);
    Digraph g(n);
    for (std::uint32_t i = 0; i < a; ++i) {
      std::uint32_t u = pick(rng), v = pick(rng);
      if (u > v) std::swap(u, v);
      if (u == v || (u == 0 && v == n - 1)) continue;
      g.add_arc(u, v);
    }
    if (g.arc_count() < 2) continue;
    try {
      TrimResult tr = trim_to_core(StInstance{std::move(g), 0, n - 1});
      if (tr.instance.g.arc_count() < 2) continue;
      return std::move(tr.instance);
    } catch (const Disconnected&) {
      continue;
    }
  }
}

// Random digraph guaranteed to contain a directed cycle. Direct s->t arcs
// and parallel arcs are allowed; s-t connectivity is not forced (solvers
// and oracle must agree on infeasible instances too).
inline StInstance random_cyclic_digraph(std::mt19937& rng, std::uint32_t max_v = 6) {
  for (;;) {
    std::uniform_int_distribution<std::uint32_t> nv(3, max_v);
    const std::uint32_t n = nv(rng);
    std::uniform_int_distribution<std::uint32_t> na(n + 1, 2 * n + 4);
    const std::uint32_t a = na(rng);
    std::uniform_int_distribution<std::uint32_t> pick(0, n - 1);
    Digraph g(n);
    for (std::uint32_t i = 0; i < a; ++i) {
      std::uint32_t u = pick(rng), v = pick(rng);
      if (u == v) continue;
      g.add_arc(u, v);
    }
    if (g.arc_count() < 2) continue;
    try {
      (void)topological_order(g);
      continue;  // acyclic draw, try again
    } catch (const CyclicError&) {
    }
    return StInstance{std::move(g), 0, n - 1};
  }
}

// Two DAG lobes joined by a single bridge arc: the bridge is always a unit
// cut (the only s-t crossing), so the zero-gap construction applies.
inline StInstance random_unit_cut_instance(std::mt19937& rng, bool small) {
  std::uniform_int_distribution<std::uint32_t> lobe(2, small ? 3 : 5);
  const std::uint32_t p = lobe(rng), q = lobe(rng);
  const std::uint32_t n = p + q + 2;  // s, lobe A 1..p, lobe B p+1..p+q, t
  Digraph g(n);
  std::uniform_int_distribution<std::uint32_t> extra(1, small ? 3 : 6);
  // lobe A: skeleton s -> 1 -> ... -> p plus random forward arcs
  for (std::uint32_t v = 0; v < p; ++v) g.add_arc(v, v + 1);
  for (std::uint32_t i = extra(rng); i > 0; --i) {
    std::uniform_int_distribution<std::uint32_t> pick(0, p);
    std::uint32_t u = pick(rng), v = pick(rng);
    if (u > v) std::swap(u, v);
    if (u != v) g.add_arc(u, v);
  }
  g.add_arc(p, p + 1);  // the bridge
  for (std::uint32_t v = p + 1; v < n - 1; ++v) g.add_arc(v, v + 1);
  for (std::uint32_t i = extra(rng); i > 0; --i) {
    std::uniform_int_distribution<std::uint32_t> pick(p + 1, n - 1);
    std::uint32_t u = pick(rng), v = pick(rng);
    if (u > v) std::swap(u, v);
    if (u != v) g.add_arc(u, v);
  }
  return StInstance{std::move(g), 0, n - 1};
}

inline Literal X(std::uint32_t i) { return Literal{VarKind::X, i, false}; }
inline Literal nX(std::uint32_t i) { return Literal{VarKind::X, i, true}; }
inline Literal Y(std::uint32_t i) { return Literal{VarKind::Y, i, false}; }
inline Literal nY(std::uint32_t i) { return Literal{VarKind::Y, i, true}; }

inline Formula3DNF formula(std::uint32_t nx, std::uint32_t ny,
                           std::vector<Clause3> clauses) {
  Formula3DNF f;
  f.n_x = nx;
  f.n_y = ny;
  f.clauses = std::move(clauses);
  return f;
}

// Unsatisfiable: whichever way x1 goes, one clause dies on its x-part and
// the other on some y1. Four x1 slots, so q1 = 4.
inline Formula3DNF phi_unsat() {
  return formula(1, 1, {Clause3{{X(0), X(0), Y(0)}}, Clause3{{nX(0), nX(0), nY(0)}}});
}

// Unsatisfiable with q1 = 2.
inline Formula3DNF phi_unsat2() {
  return formula(1, 1, {Clause3{{X(0), Y(0), Y(0)}}, Clause3{{nX(0), nY(0), nY(0)}}});
}

// A single clause; normalization duplicates it, after which x-occurrences
// are 2 each. Unsatisfiable (y1 = 0 kills both copies).
inline Formula3DNF phi_unsat3() {
  return formula(2, 1, {Clause3{{X(0), X(1), Y(0)}}});
}

// Satisfiable by x1 = 1: the two clauses split on y1.
inline Formula3DNF phi_sat_a() {
  return formula(1, 1, {Clause3{{X(0), Y(0), Y(0)}}, Clause3{{X(0), nY(0), nY(0)}}});
}

// Mirror image, satisfiable by x1 = 0.
inline Formula3DNF phi_sat_b() {
  return formula(1, 1, {Clause3{{nX(0), Y(0), Y(0)}}, Clause3{{nX(0), nY(0), nY(0)}}});
}

// Two x-variables, satisfiable by x = (1, 1).
inline Formula3DNF phi_sat_c() {
  return formula(2, 1, {Clause3{{X(0), X(1), Y(0)}}, Clause3{{X(0), X(1), nY(0)}}});
}

// Full y-split on two y-variables; satisfiable by x1 = 1 alone.
inline Formula3DNF phi_sat4() {
  return formula(1, 2,
                 {Clause3{{X(0), Y(0), Y(1)}}, Clause3{{X(0), Y(0), nY(1)}},
                  Clause3{{X(0), nY(0), Y(1)}}, Clause3{{X(0), nY(0), nY(1)}}});
}

}  // namespace testgen
