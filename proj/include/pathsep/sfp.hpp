#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "pathsep/digraph.hpp"
#include "pathsep/errors.hpp"

namespace pathsep {

// Lowest pair (in canonical order) fully contained in the path, if any.
inline std::optional<std::pair<ArcId, ArcId>> covering_pair(const ArcPath& path,
                                                            const PairSet& pairs) {
  ArcPath sorted(path);
  std::sort(sorted.begin(), sorted.end());
  auto has = [&](ArcId a) { return std::binary_search(sorted.begin(), sorted.end(), a); };
  for (const auto& pq : pairs.pairs)
    if (has(pq.first) && has(pq.second)) return pq;
  return std::nullopt;
}

struct SeparationVerdict {
  bool separates = false;
  std::optional<ArcPath> witness;  // lexicographically first uncovered path
};

// Does every s-t path fully contain some pair? DFS over simple paths in
// ascending arc id order; a branch dies the moment the partial path
// completes a pair. Parallel arcs whose (head, partner set) coincide are
// explored once through their lowest id, which keeps the witness the
// lexicographically first uncovered path. The budget counts arc extensions.
inline SeparationVerdict separation_check(const StInstance& inst, const PairSet& pairs,
                                          std::uint64_t node_budget = 10000000) {
  const std::uint32_t m = inst.g.arc_count();
  std::vector<std::vector<ArcId>> partner(m);
  for (auto [a, b] : pairs.pairs) {
    if (a >= m || b >= m) throw Error("pair references an arc outside the graph");
    partner[a].push_back(b);
    partner[b].push_back(a);
  }
  for (auto& p : partner) std::sort(p.begin(), p.end());
  auto bwd = reachable_set(inst.g, inst.t, Direction::Backward);
  if (!bwd[inst.s]) return {true, std::nullopt};  // no path to cover
  // representative per (head, partner set) among parallel arcs
  std::vector<char> rep(m, 1);
  for (VertexId v = 0; v < inst.g.vertex_count(); ++v) {
    const auto& outs = inst.g.out(v);
    for (std::size_t i = 0; i < outs.size(); ++i) {
      if (!rep[outs[i]]) continue;
      for (std::size_t j = i + 1; j < outs.size(); ++j) {
        if (!rep[outs[j]]) continue;
        if (inst.g.head(outs[i]) == inst.g.head(outs[j]) &&
            partner[outs[i]] == partner[outs[j]])
          rep[outs[j]] = 0;
      }
    }
  }
  std::vector<char> onpath(inst.g.vertex_count(), 0), onarc(m, 0);
  ArcPath cur;
  std::uint64_t used = 0;
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
      if (!rep[a]) continue;
      VertexId w = inst.g.head(a);
      if (onpath[w] || !bwd[w]) continue;
      bool covered = false;
      for (ArcId b : partner[a]) {
        if (onarc[b]) {
          covered = true;
          break;
        }
      }
      if (covered) continue;  // any extension would contain the completed pair
      if (++used > node_budget) throw BudgetExceeded(node_budget);
      cur.push_back(a);
      if (w == inst.t) return {false, cur};
      onarc[a] = 1;
      onpath[w] = 1;
      stack.push_back({w, 0});
      descended = true;
      break;
    }
    if (!descended) {
      onpath[stack.back().v] = 0;
      if (!cur.empty()) {
        onarc[cur.back()] = 0;
        cur.pop_back();
      }
      stack.pop_back();
    }
  }
  return {true, std::nullopt};
}

struct SfpBudget {
  std::uint64_t check_nodes = 10000000;   // per separation check
  std::uint32_t pool_cap = 20000;         // counterexample paths kept
  std::uint64_t search_nodes = 50000000;  // cover search branch nodes
};

struct SfpResult {
  std::uint32_t k = 0;
  PairSet pairs;
};

namespace detail {

// Shared state of the counterexample-guided search: a growing pool of s-t
// paths that any separating set must cover, and the candidate pairs drawn
// from inside the pooled paths. Restricting candidates to in-path pairs of
// pooled paths is safe: a pair covering no pooled path can be dropped from
// any cover of the pool.
struct CoverPool {
  const StInstance& inst;
  const SfpBudget& budget;
  std::vector<ArcPath> paths;
  std::vector<std::vector<ArcId>> path_arcs;            // sorted arcs per pooled path
  std::vector<std::pair<ArcId, ArcId>> cands;           // canonical order
  std::map<std::pair<ArcId, ArcId>, std::uint32_t> cand_index;
  std::vector<std::vector<std::uint32_t>> covers;       // candidate -> pooled paths
  std::vector<std::vector<std::uint32_t>> path_cands;   // pooled path -> candidates
  std::uint64_t nodes = 0;
  std::uint32_t floor_target = 0;  // pool only grows, so the optimum never shrinks

  explicit CoverPool(const StInstance& i, const SfpBudget& b) : inst(i), budget(b) {}

  void add_path(const ArcPath& p) {
    if (paths.size() >= budget.pool_cap) throw BudgetExceeded(budget.pool_cap);
    std::uint32_t pi = static_cast<std::uint32_t>(paths.size());
    paths.push_back(p);
    std::vector<ArcId> sorted(p);
    std::sort(sorted.begin(), sorted.end());
    path_arcs.push_back(sorted);
    path_cands.emplace_back();
    for (std::size_t x = 0; x < sorted.size(); ++x) {
      for (std::size_t y = x + 1; y < sorted.size(); ++y) {
        std::pair<ArcId, ArcId> q{sorted[x], sorted[y]};
        auto it = cand_index.find(q);
        std::uint32_t qi;
        if (it == cand_index.end()) {
          qi = static_cast<std::uint32_t>(cands.size());
          cand_index.emplace(q, qi);
          cands.push_back(q);
          covers.emplace_back();
          // older pooled paths cannot contain q: q lies inside the new path
          // and was never seen before, yet every in-path pair of an older
          // path was registered when that path arrived
        } else {
          qi = it->second;
        }
        covers[qi].push_back(pi);
        path_cands[pi].push_back(qi);
      }
    }
  }

  bool pair_covers(std::uint32_t qi, std::uint32_t pi) const {
    const auto& arcs = path_arcs[pi];
    return std::binary_search(arcs.begin(), arcs.end(), cands[qi].first) &&
           std::binary_search(arcs.begin(), arcs.end(), cands[qi].second);
  }

  // Depth-limited exact cover: choose an uncovered pooled path with the
  // fewest candidates and branch on them in canonical order.
  bool cover_search(std::vector<std::uint32_t>& chosen, std::vector<std::uint32_t>& hit,
                    std::uint32_t depth_left) {
    if (++nodes > budget.search_nodes) throw BudgetExceeded(budget.search_nodes);
    std::uint32_t pick = static_cast<std::uint32_t>(paths.size());
    std::size_t pick_width = 0;
    std::uint32_t uncovered = 0;
    std::vector<char> seen_disjoint;  // greedy lower bound via candidate-disjoint paths
    std::uint32_t lb = 0;
    std::vector<char> cand_used(cands.size(), 0);
    for (std::uint32_t pi = 0; pi < paths.size(); ++pi) {
      if (hit[pi]) continue;
      ++uncovered;
      if (pick == paths.size() || path_cands[pi].size() < pick_width) {
        pick = pi;
        pick_width = path_cands[pi].size();
      }
      bool disjoint = true;
      for (std::uint32_t qi : path_cands[pi])
        if (cand_used[qi]) {
          disjoint = false;
          break;
        }
      if (disjoint) {
        ++lb;
        for (std::uint32_t qi : path_cands[pi]) cand_used[qi] = 1;
      }
    }
    if (uncovered == 0) return true;
    if (lb > depth_left) return false;
    if (depth_left == 0) return false;
    for (std::uint32_t qi : path_cands[pick]) {
      chosen.push_back(qi);
      std::vector<std::uint32_t> newly;
      for (std::uint32_t pi : covers[qi]) {
        if (!hit[pi]) {
          hit[pi] = 1;
          newly.push_back(pi);
        }
      }
      if (cover_search(chosen, hit, depth_left - 1)) return true;
      for (std::uint32_t pi : newly) hit[pi] = 0;
      chosen.pop_back();
    }
    return false;
  }

  // Smallest set of candidate pairs covering every pooled path.
  std::vector<std::uint32_t> min_cover() {
    for (std::uint32_t target = floor_target;; ++target) {
      std::vector<std::uint32_t> chosen;
      std::vector<std::uint32_t> hit(paths.size(), 0);
      if (cover_search(chosen, hit, target)) {
        floor_target = target;
        return chosen;
      }
    }
  }

  PairSet to_pair_set(const std::vector<std::uint32_t>& chosen) const {
    std::vector<std::pair<ArcId, ArcId>> raw;
    for (std::uint32_t qi : chosen) raw.push_back(cands[qi]);
    return PairSet::make(std::move(raw));
  }
};

}  // namespace detail

// Minimum separating pair set by implicit hitting set: keep a pool of paths
// every separating set must cover, cover the pool optimally, and either the
// cover separates (then it is a global optimum, since covering the pool is a
// relaxation) or the check returns a new path for the pool.
inline SfpResult solve_min_pairs(const StInstance& inst, const SfpBudget& budget = {}) {
  sfp_guard(inst);
  detail::CoverPool pool(inst, budget);
  while (true) {
    auto chosen = pool.min_cover();
    PairSet candidate = pool.to_pair_set(chosen);
    auto verdict = separation_check(inst, candidate, budget.check_nodes);
    if (verdict.separates)
      return {static_cast<std::uint32_t>(candidate.size()), std::move(candidate)};
    pool.add_path(*verdict.witness);
  }
}

// All minimum separating pair sets, in canonical order. Depth-first over
// partial sets: extend along the in-path pairs of the first pooled path the
// partial set misses; once the pool is covered, a separation check either
// certifies the set or grows the pool (shared across branches, which only
// strengthens later pruning).
inline std::vector<PairSet> enumerate_min_pairs(const StInstance& inst,
                                                const SfpBudget& budget = {}) {
  SfpResult opt = solve_min_pairs(inst, budget);
  const std::uint32_t v = opt.k;
  detail::CoverPool pool(inst, budget);
  std::set<std::vector<std::pair<ArcId, ArcId>>> found;
  std::vector<std::uint32_t> chosen;

  auto covered_by_chosen = [&](std::uint32_t pi) {
    for (std::uint32_t qi : chosen)
      if (pool.pair_covers(qi, pi)) return true;
    return false;
  };

  // recursion via explicit lambda; pool indices stay valid because the pool
  // only grows
  auto dfs = [&](auto&& self) -> void {
    if (++pool.nodes > budget.search_nodes) throw BudgetExceeded(budget.search_nodes);
    std::uint32_t missing = static_cast<std::uint32_t>(pool.paths.size());
    std::size_t missing_width = 0;
    for (std::uint32_t pi = 0; pi < pool.paths.size(); ++pi) {
      if (covered_by_chosen(pi)) continue;
      if (missing == pool.paths.size() || pool.path_cands[pi].size() < missing_width) {
        missing = pi;
        missing_width = pool.path_cands[pi].size();
      }
    }
    if (missing != pool.paths.size()) {
      if (chosen.size() >= v) return;  // cannot afford another pair
      auto branch = pool.path_cands[missing];  // copy: pool may grow below
      for (std::uint32_t qi : branch) {
        chosen.push_back(qi);
        self(self);
        chosen.pop_back();
      }
      return;
    }
    PairSet candidate = pool.to_pair_set(chosen);
    if (candidate.size() < chosen.size()) return;  // duplicate pair picked twice
    auto verdict = separation_check(inst, candidate, budget.check_nodes);
    if (verdict.separates) {
      if (candidate.size() == v) found.insert(candidate.pairs);
      return;
    }
    pool.add_path(*verdict.witness);
    self(self);  // same partial set, pool now has a path it misses
  };
  dfs(dfs);
  std::vector<PairSet> out;
  for (auto& pairs : found) out.push_back(PairSet{pairs});
  return out;
}

struct BruteMinPairs {
  std::uint32_t k = 0;
  PairSet pairs;
};

// Reference oracle: enumerate all paths, restrict attention to pairs lying
// inside some path (no other pair can cover anything), and try candidate
// sets of growing size in lexicographic order. `cap` bounds both the path
// enumeration and the number of candidate sets tested.
inline std::optional<BruteMinPairs> brute_force_min_pairs(const StInstance& inst,
                                                          std::uint32_t max_k,
                                                          std::uint64_t cap = 10000000) {
  sfp_guard(inst);
  std::vector<ArcPath> paths = enumerate_st_paths(inst, cap);
  if (paths.empty()) return BruteMinPairs{0, PairSet{}};
  const std::size_t np = paths.size();
  std::vector<std::vector<ArcId>> sorted(np);
  for (std::size_t i = 0; i < np; ++i) {
    sorted[i] = paths[i];
    std::sort(sorted[i].begin(), sorted[i].end());
  }
  std::set<std::pair<ArcId, ArcId>> rel;
  for (const auto& arcs : sorted)
    for (std::size_t x = 0; x < arcs.size(); ++x)
      for (std::size_t y = x + 1; y < arcs.size(); ++y) rel.emplace(arcs[x], arcs[y]);
  std::vector<std::pair<ArcId, ArcId>> cands(rel.begin(), rel.end());
  const std::size_t words = (np + 63) / 64;
  std::vector<std::uint64_t> full(words, 0);
  for (std::size_t i = 0; i < np; ++i) full[i / 64] |= 1ull << (i % 64);
  std::vector<std::vector<std::uint64_t>> mask(cands.size(),
                                               std::vector<std::uint64_t>(words, 0));
  for (std::size_t qi = 0; qi < cands.size(); ++qi) {
    for (std::size_t pi = 0; pi < np; ++pi) {
      const auto& arcs = sorted[pi];
      if (std::binary_search(arcs.begin(), arcs.end(), cands[qi].first) &&
          std::binary_search(arcs.begin(), arcs.end(), cands[qi].second))
        mask[qi][pi / 64] |= 1ull << (pi % 64);
    }
  }
  std::uint64_t tested = 0;
  for (std::uint32_t size = 1; size <= max_k && size <= cands.size(); ++size) {
    std::vector<std::uint32_t> idx(size);
    for (std::uint32_t i = 0; i < size; ++i) idx[i] = i;
    while (true) {
      if (++tested > cap) throw CapExceeded(cap);
      bool all = true;
      for (std::size_t w = 0; w < words && all; ++w) {
        std::uint64_t acc = 0;
        for (std::uint32_t i = 0; i < size; ++i) acc |= mask[idx[i]][w];
        if (acc != full[w]) all = false;
      }
      if (all) {
        std::vector<std::pair<ArcId, ArcId>> raw;
        for (std::uint32_t i : idx) raw.push_back(cands[i]);
        return BruteMinPairs{size, PairSet::make(std::move(raw))};
      }
      // next lexicographic combination
      std::uint32_t pos = size;
      while (pos > 0) {
        --pos;
        if (idx[pos] + (size - pos) < cands.size()) {
          ++idx[pos];
          for (std::uint32_t q = pos + 1; q < size; ++q) idx[q] = idx[q - 1] + 1;
          break;
        }
        if (pos == 0) {
          pos = 0xffffffffu;
          break;
        }
      }
      if (pos == 0xffffffffu) break;
    }
  }
  return std::nullopt;
}

// All minimum separating sets by exhaustion, for cross-checking the
// counterexample-guided enumeration on small instances.
inline std::vector<PairSet> brute_force_all_min_pairs(const StInstance& inst,
                                                      std::uint32_t max_k,
                                                      std::uint64_t cap = 10000000) {
  auto first = brute_force_min_pairs(inst, max_k, cap);
  if (!first) return {};
  std::uint32_t k = first->k;
  std::vector<PairSet> out;
  if (k == 0) return {PairSet{}};
  std::vector<ArcPath> paths = enumerate_st_paths(inst, cap);
  std::vector<std::vector<ArcId>> sorted(paths.size());
  for (std::size_t i = 0; i < paths.size(); ++i) {
    sorted[i] = paths[i];
    std::sort(sorted[i].begin(), sorted[i].end());
  }
  std::set<std::pair<ArcId, ArcId>> rel;
  for (const auto& arcs : sorted)
    for (std::size_t x = 0; x < arcs.size(); ++x)
      for (std::size_t y = x + 1; y < arcs.size(); ++y) rel.emplace(arcs[x], arcs[y]);
  std::vector<std::pair<ArcId, ArcId>> cands(rel.begin(), rel.end());
  if (k > cands.size()) return {};
  std::uint64_t tested = 0;
  std::vector<std::uint32_t> idx(k);
  for (std::uint32_t i = 0; i < k; ++i) idx[i] = i;
  while (true) {
    if (++tested > cap) throw CapExceeded(cap);
    bool all = true;
    for (std::size_t pi = 0; pi < paths.size() && all; ++pi) {
      bool covered = false;
      for (std::uint32_t i : idx) {
        const auto& arcs = sorted[pi];
        if (std::binary_search(arcs.begin(), arcs.end(), cands[i].first) &&
            std::binary_search(arcs.begin(), arcs.end(), cands[i].second)) {
          covered = true;
          break;
        }
      }
      if (!covered) all = false;
    }
    if (all) {
      std::vector<std::pair<ArcId, ArcId>> raw;
      for (std::uint32_t i : idx) raw.push_back(cands[i]);
      out.push_back(PairSet::make(std::move(raw)));
    }
    std::uint32_t pos = k;
    bool done = false;
    while (pos > 0) {
      --pos;
      if (idx[pos] + (k - pos) < cands.size()) {
        ++idx[pos];
        for (std::uint32_t q = pos + 1; q < k; ++q) idx[q] = idx[q - 1] + 1;
        break;
      }
      if (pos == 0) done = true;
    }
    if (done) break;
  }
  return out;
}

}  // namespace pathsep
