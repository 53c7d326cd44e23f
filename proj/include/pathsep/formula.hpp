#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pathsep/errors.hpp"

namespace pathsep {

// Formulas are 3-DNF over two variable blocks: x-variables under the
// existential player and y-variables under the universal one. The question
// is whether some x-assignment makes every y-assignment satisfy a clause.

enum class VarKind : std::uint8_t { X, Y };

struct Literal {
  VarKind kind = VarKind::X;
  std::uint32_t index = 0;  // 0-based within its block
  bool neg = false;

  friend bool operator==(const Literal& a, const Literal& b) {
    return a.kind == b.kind && a.index == b.index && a.neg == b.neg;
  }
};

struct Clause3 {
  Literal lit[3];
};

struct Formula3DNF {
  std::uint32_t n_x = 0;
  std::uint32_t n_y = 0;
  std::vector<Clause3> clauses;
};

using Assignment = std::vector<char>;  // one truth value per variable of a block

inline bool literal_true(const Literal& l, const Assignment& tx, const Assignment& ty) {
  bool v = (l.kind == VarKind::X) ? tx[l.index] != 0 : ty[l.index] != 0;
  return l.neg ? !v : v;
}

inline bool clause_true(const Clause3& c, const Assignment& tx, const Assignment& ty) {
  return literal_true(c.lit[0], tx, ty) && literal_true(c.lit[1], tx, ty) &&
         literal_true(c.lit[2], tx, ty);
}

inline bool dnf_true(const Formula3DNF& f, const Assignment& tx, const Assignment& ty) {
  for (const Clause3& c : f.clauses)
    if (clause_true(c, tx, ty)) return true;
  return false;
}

// True when tx defeats every universal reply.
inline bool sigma2_eval(const Formula3DNF& f, const Assignment& tx) {
  Assignment ty(f.n_y, 0);
  if (f.n_y == 0) return dnf_true(f, tx, ty);
  if (f.n_y > 25) throw TooLarge("universal block too large to sweep");
  const std::uint64_t lim = std::uint64_t{1} << f.n_y;
  for (std::uint64_t bits = 0; bits < lim; ++bits) {
    for (std::uint32_t i = 0; i < f.n_y; ++i) ty[i] = (bits >> i) & 1;
    if (!dnf_true(f, tx, ty)) return false;
  }
  return true;
}

struct Sigma2Verdict {
  bool satisfiable = false;
  Assignment tx;  // the lexicographically first winning assignment
};

inline Sigma2Verdict sigma2_brute(const Formula3DNF& f) {
  if (f.n_x > 20 || f.n_y > 20) throw TooLarge("formula too large for brute force");
  Assignment tx(f.n_x, 0);
  const std::uint64_t lim = std::uint64_t{1} << f.n_x;
  for (std::uint64_t bits = 0; bits < lim; ++bits) {
    for (std::uint32_t i = 0; i < f.n_x; ++i) tx[i] = (bits >> i) & 1;
    if (sigma2_eval(f, tx)) return {true, tx};
  }
  return {false, {}};
}

// The y-variables appearing in a clause, ascending and deduplicated. Their
// position in this list is the bit position used by local assignments.
inline std::vector<std::uint32_t> clause_y_vars(const Clause3& c) {
  std::vector<std::uint32_t> ys;
  for (const Literal& l : c.lit)
    if (l.kind == VarKind::Y) ys.push_back(l.index);
  std::sort(ys.begin(), ys.end());
  ys.erase(std::unique(ys.begin(), ys.end()), ys.end());
  return ys;
}

// A local assignment: one clause together with truth values for exactly its
// y-variables. Bit b of `bits` is the value of the b-th entry of
// clause_y_vars of that clause.
struct ClauseLocal {
  std::uint32_t clause = 0;
  std::uint32_t bits = 0;

  friend bool operator==(const ClauseLocal& a, const ClauseLocal& b) {
    return a.clause == b.clause && a.bits == b.bits;
  }
};

// Extract the value a local assigns to y-variable `var`, or nothing if the
// clause does not contain it.
inline std::optional<bool> local_value(const std::vector<std::uint32_t>& y_vars,
                                       std::uint32_t bits, std::uint32_t var) {
  auto it = std::lower_bound(y_vars.begin(), y_vars.end(), var);
  if (it == y_vars.end() || *it != var) return std::nullopt;
  return ((bits >> (it - y_vars.begin())) & 1) != 0;
}

// The local bits a global y-assignment induces on a clause.
inline std::uint32_t local_bits_for(const Clause3& c, const Assignment& ty) {
  auto ys = clause_y_vars(c);
  std::uint32_t bits = 0;
  for (std::size_t b = 0; b < ys.size(); ++b)
    if (ty[ys[b]]) bits |= std::uint32_t{1} << b;
  return bits;
}

// Whether a local assignment satisfies every y-literal of its clause.
inline bool y_part_satisfied(const Clause3& c, std::uint32_t bits) {
  auto ys = clause_y_vars(c);
  for (const Literal& l : c.lit) {
    if (l.kind != VarKind::Y) continue;
    bool v = *local_value(ys, bits, l.index);
    if (l.neg ? v : !v) return false;
  }
  return true;
}

// Two local assignments of distinct clauses that disagree on a shared
// y-variable; no global assignment restricts to both.
struct Inconsistency {
  ClauseLocal a;  // a.clause < b.clause
  ClauseLocal b;
};

inline std::vector<Inconsistency> find_inconsistencies(const Formula3DNF& f) {
  std::vector<std::vector<std::uint32_t>> ys(f.clauses.size());
  for (std::uint32_t i = 0; i < f.clauses.size(); ++i) ys[i] = clause_y_vars(f.clauses[i]);
  std::vector<Inconsistency> out;
  for (std::uint32_t i = 0; i < f.clauses.size(); ++i)
    for (std::uint32_t j = i + 1; j < f.clauses.size(); ++j) {
      std::vector<std::uint32_t> shared;
      std::set_intersection(ys[i].begin(), ys[i].end(), ys[j].begin(), ys[j].end(),
                            std::back_inserter(shared));
      if (shared.empty()) continue;
      const std::uint32_t li = std::uint32_t{1} << ys[i].size();
      const std::uint32_t lj = std::uint32_t{1} << ys[j].size();
      for (std::uint32_t bi = 0; bi < li; ++bi)
        for (std::uint32_t bj = 0; bj < lj; ++bj) {
          bool conflict = false;
          for (std::uint32_t v : shared)
            if (*local_value(ys[i], bi, v) != *local_value(ys[j], bj, v)) {
              conflict = true;
              break;
            }
          if (conflict) out.push_back({{i, bi}, {j, bj}});
        }
    }
  return out;
}

// Occurrences of x-variable i counted per literal slot: a clause repeating a
// variable contributes once per repetition. These counts size the variable
// gadgets (one row per occurrence).
inline std::vector<std::uint32_t> x_occurrence_counts(const Formula3DNF& f) {
  std::vector<std::uint32_t> q(f.n_x, 0);
  for (const Clause3& c : f.clauses)
    for (const Literal& l : c.lit)
      if (l.kind == VarKind::X) ++q[l.index];
  return q;
}

namespace detail {

inline bool clause_self_conflict(const Clause3& c, VarKind kind) {
  for (std::uint32_t a = 0; a < 3; ++a)
    for (std::uint32_t b = a + 1; b < 3; ++b)
      if (c.lit[a].kind == kind && c.lit[b].kind == kind &&
          c.lit[a].index == c.lit[b].index && c.lit[a].neg != c.lit[b].neg)
        return true;
  return false;
}

// Number of distinct clauses containing each variable of the given block.
inline std::vector<std::uint32_t> clause_spread(const Formula3DNF& f, VarKind kind) {
  std::uint32_t n = (kind == VarKind::X) ? f.n_x : f.n_y;
  std::vector<std::uint32_t> spread(n, 0);
  for (const Clause3& c : f.clauses) {
    std::vector<std::uint32_t> seen;
    for (const Literal& l : c.lit)
      if (l.kind == kind && std::find(seen.begin(), seen.end(), l.index) == seen.end()) {
        seen.push_back(l.index);
        ++spread[l.index];
      }
  }
  return spread;
}

}  // namespace detail

// Bring a formula into the shape the pair construction expects: every
// clause has a satisfiable y-part, and every variable lies in at least two
// clauses. Clauses that demand both polarities of one variable can never
// hold and are dropped. A surviving clause with only x-literals is
// satisfiable outright, which settles the whole formula; there is no
// equivalent normalized instance to hand back, so the caller gets nothing
// and must short-circuit to "satisfiable". A declared variable that occurs
// in no live clause cannot be repaired by clause duplication, so that input
// is rejected.
inline std::optional<Formula3DNF> normalize_formula(const Formula3DNF& in) {
  for (const Clause3& c : in.clauses)
    for (const Literal& l : c.lit) {
      std::uint32_t bound = (l.kind == VarKind::X) ? in.n_x : in.n_y;
      if (l.index >= bound) throw MalformedClause("literal index out of range");
    }
  Formula3DNF f;
  f.n_x = in.n_x;
  f.n_y = in.n_y;
  for (const Clause3& c : in.clauses) {
    if (detail::clause_self_conflict(c, VarKind::X)) continue;  // dead clause
    if (clause_y_vars(c).empty()) return std::nullopt;  // pure-x clause wins by itself
    if (detail::clause_self_conflict(c, VarKind::Y)) continue;  // dead clause
    f.clauses.push_back(c);
  }
  auto sx = detail::clause_spread(f, VarKind::X);
  auto sy = detail::clause_spread(f, VarKind::Y);
  for (std::uint32_t i = 0; i < f.n_x; ++i)
    if (sx[i] == 0) throw MalformedFormula("x-variable occurs in no live clause");
  for (std::uint32_t i = 0; i < f.n_y; ++i)
    if (sy[i] == 0) throw MalformedFormula("y-variable occurs in no live clause");
  bool thin = false;
  for (std::uint32_t v : sx)
    if (v < 2) thin = true;
  for (std::uint32_t v : sy)
    if (v < 2) thin = true;
  if (thin) {
    auto copy = f.clauses;
    f.clauses.insert(f.clauses.end(), copy.begin(), copy.end());
  }
  return f;
}

}  // namespace pathsep
