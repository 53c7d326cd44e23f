#pragma once

#include <algorithm>
#include <cstdint>
#include <utility>
#include <vector>

#include "pathsep/errors.hpp"
#include "pathsep/rational.hpp"

namespace pathsep {

enum class RowSense { Le, Ge, Eq };

// max or min of objective . x subject to the rows and x >= 0.
struct LpModel {
  bool maximize = true;
  std::uint32_t var_count = 0;
  std::vector<Rational> objective;
  std::vector<std::vector<std::pair<std::uint32_t, Rational>>> rows;  // sparse, sorted by var
  std::vector<RowSense> senses;
  std::vector<Rational> rhs;

  std::uint32_t row_count() const { return static_cast<std::uint32_t>(rows.size()); }
};

struct LpSolution {
  Rational value;
  std::vector<Rational> x;
};

struct SimplexOptions {
  std::uint32_t bland_after = 40;        // consecutive degenerate pivots before Bland
  std::uint64_t pivot_limit = 2000000;   // hard safety stop
  std::uint32_t pricing_batch = 64;      // columns activated per pricing round
  std::uint32_t lazy_column_threshold = 512;  // activate columns lazily above this
  std::uint32_t transpose_threshold = 512;    // solve tall min/>= models via transpose
};

// Exact feasibility plus objective recomputation; the final word on any
// solution the solver returns.
inline bool verify_lp_solution(const LpModel& model, const LpSolution& sol) {
  if (sol.x.size() != model.var_count) return false;
  for (const Rational& v : sol.x)
    if (v < 0) return false;
  for (std::uint32_t r = 0; r < model.row_count(); ++r) {
    Rational lhs = 0;
    for (const auto& [j, c] : model.rows[r]) lhs += c * sol.x[j];
    switch (model.senses[r]) {
      case RowSense::Le:
        if (lhs > model.rhs[r]) return false;
        break;
      case RowSense::Ge:
        if (lhs < model.rhs[r]) return false;
        break;
      case RowSense::Eq:
        if (lhs != model.rhs[r]) return false;
        break;
    }
  }
  Rational val = 0;
  for (std::uint32_t j = 0; j < model.var_count; ++j) val += model.objective[j] * sol.x[j];
  return val == sol.value;
}

namespace detail {

// Dense two-phase tableau simplex over exact rationals, restricted to an
// active subset of the model's columns. Internally always maximizes (min
// models have their costs negated) and normalizes every row to nonnegative
// right-hand side. Dantzig pricing, switching permanently to Bland's rule
// after a run of degenerate pivots.
class Tableau {
 public:
  Tableau(const LpModel& model, std::vector<std::uint32_t> active, const SimplexOptions& opt)
      : model_(model), active_(std::move(active)), opt_(opt) {
    build();
  }

  void solve_phase2() {
    price_phase2();
    pivot_loop(false);
  }

  // Appends model columns to the active set (phase 2 only).
  void add_columns(const std::vector<std::uint32_t>& cols) {
    const std::uint32_t m = model_.row_count();
    for (std::uint32_t j : cols) {
      std::vector<Rational> raw(m, Rational(0));
      for (std::uint32_t r = 0; r < m; ++r) raw[r] = row_sign_[r] * coeff(r, j);
      // express the column in the current basis: multiply by B^-1, read off
      // the slack block (or the artificial column on equality rows)
      std::vector<Rational> col(m, Rational(0));
      for (std::uint32_t r = 0; r < m; ++r) {
        if (raw[r] == 0) continue;
        for (std::uint32_t i = 0; i < m; ++i) {
          Rational b = binv_entry(i, r);
          if (b != 0) col[i] += b * raw[r];
        }
      }
      std::uint32_t at = nstruct_;
      for (std::uint32_t i = 0; i < m; ++i) tab_[i].insert(tab_[i].begin() + at, col[i]);
      Rational z = -objective_of(j);
      for (std::uint32_t i = 0; i < m; ++i)
        if (col[i] != 0) z += cost_of_basic(i) * col[i];
      obj_.insert(obj_.begin() + at, z);
      is_art_.insert(is_art_.begin() + at, 0);
      for (auto& b : basis_)
        if (b >= at) ++b;
      for (auto& c : art_col_of_row_)
        if (c >= at) ++c;
      active_.push_back(j);
      ++nstruct_;
      ++cols_;
    }
  }

  Rational objective_value() const { return maximize_sign() * obj_rhs_; }

  std::vector<Rational> extract(std::uint32_t var_count) const {
    std::vector<Rational> x(var_count, Rational(0));
    for (std::uint32_t r = 0; r < basis_.size(); ++r)
      if (basis_[r] < nstruct_) x[active_[basis_[r]]] = rhs_[r];
    return x;
  }

  // Row duals of the model's own (un-normalized) rows, valid at phase-2
  // optimality of the internal maximize form: y . A_j, with A the model
  // matrix, prices column j. Slack columns carry slack_sign * B^-1, the
  // artificial of an equality row carries B^-1 itself, and artificials cost
  // nothing in phase 2, so both reads are pure c_B B^-1 entries.
  std::vector<Rational> duals() const {
    const std::uint32_t m = model_.row_count();
    std::vector<Rational> y(m, Rational(0));
    for (std::uint32_t r = 0; r < m; ++r) {
      if (slack_sign_[r] != 0)
        y[r] = row_sign_[r] * slack_sign_[r] * obj_[nstruct_ + r];
      else
        y[r] = row_sign_[r] * obj_[art_col_of_row_[r]];
    }
    return y;
  }

  const std::vector<std::uint32_t>& active() const { return active_; }

 private:
  const LpModel& model_;
  std::vector<std::uint32_t> active_;
  SimplexOptions opt_;
  std::uint32_t nstruct_ = 0;
  std::uint32_t cols_ = 0;  // tab_[0].size() would miss it on row-free models
  // columns: [0, nstruct_) structurals, then one slack slot per row, then
  // artificials; equality rows leave their slack slot zeroed
  std::vector<std::vector<Rational>> tab_;
  std::vector<Rational> rhs_;
  std::vector<Rational> obj_;
  Rational obj_rhs_ = 0;
  std::vector<std::uint32_t> basis_;
  std::vector<Rational> row_sign_;    // +1, or -1 when the row came with rhs < 0
  std::vector<Rational> slack_sign_;  // +1 for <=, -1 for >=, 0 for =
  std::vector<char> is_art_;
  std::vector<std::uint32_t> art_col_of_row_;
  std::uint64_t pivots_ = 0;
  std::uint32_t degenerate_run_ = 0;
  bool bland_ = false;

  Rational maximize_sign() const { return model_.maximize ? Rational(1) : Rational(-1); }

  Rational objective_of(std::uint32_t model_col) const {
    return maximize_sign() * model_.objective[model_col];
  }

  Rational coeff(std::uint32_t model_row, std::uint32_t model_col) const {
    const auto& row = model_.rows[model_row];
    auto it = std::lower_bound(row.begin(), row.end(), model_col,
                               [](const auto& e, std::uint32_t j) { return e.first < j; });
    if (it != row.end() && it->first == model_col) return it->second;
    return 0;
  }

  // Column r of B^-1: the slack column carries slack_sign * B^-1 e_r, the
  // artificial column carries B^-1 e_r itself.
  Rational binv_entry(std::uint32_t i, std::uint32_t r) const {
    if (slack_sign_[r] != 0) return slack_sign_[r] * tab_[i][nstruct_ + r];
    return tab_[i][art_col_of_row_[r]];
  }

  Rational cost_of_basic(std::uint32_t r) const {
    std::uint32_t b = basis_[r];
    if (b < nstruct_) return objective_of(active_[b]);
    return 0;
  }

  void build() {
    const std::uint32_t m = model_.row_count();
    nstruct_ = static_cast<std::uint32_t>(active_.size());
    row_sign_.assign(m, Rational(1));
    slack_sign_.assign(m, Rational(0));
    art_col_of_row_.assign(m, 0);
    std::vector<char> needs_art(m, 0);
    std::uint32_t nart = 0;
    for (std::uint32_t r = 0; r < m; ++r) {
      RowSense sense = model_.senses[r];
      if (model_.rhs[r] < 0) {
        row_sign_[r] = -1;
        sense = sense == RowSense::Le ? RowSense::Ge
                : sense == RowSense::Ge ? RowSense::Le
                                        : RowSense::Eq;
      }
      switch (sense) {
        case RowSense::Le:
          slack_sign_[r] = 1;
          break;
        case RowSense::Ge:
          slack_sign_[r] = -1;
          needs_art[r] = 1;
          break;
        case RowSense::Eq:
          needs_art[r] = 1;
          break;
      }
      if (needs_art[r]) ++nart;
    }
    cols_ = nstruct_ + m + nart;
    const std::uint32_t cols = cols_;
    tab_.assign(m, std::vector<Rational>(cols, Rational(0)));
    rhs_.assign(m, Rational(0));
    basis_.assign(m, 0);
    is_art_.assign(cols, 0);
    std::uint32_t next_art = nstruct_ + m;
    for (std::uint32_t r = 0; r < m; ++r) {
      for (std::uint32_t c = 0; c < nstruct_; ++c) {
        Rational a = coeff(r, active_[c]);
        if (a != 0) tab_[r][c] = row_sign_[r] * a;
      }
      rhs_[r] = row_sign_[r] * model_.rhs[r];
      if (slack_sign_[r] != 0) tab_[r][nstruct_ + r] = slack_sign_[r];
      if (needs_art[r]) {
        tab_[r][next_art] = 1;
        is_art_[next_art] = 1;
        art_col_of_row_[r] = next_art;
        basis_[r] = next_art;
        ++next_art;
      } else {
        basis_[r] = nstruct_ + r;
      }
    }
    if (nart > 0) {
      price_phase1();
      pivot_loop(true);
      if (obj_rhs_ != 0) throw LpInfeasible();
      // drive leftover zero-valued artificials out of the basis where the
      // row allows it; rows that do not are redundant and stay parked
      for (std::uint32_t r = 0; r < m; ++r) {
        if (!is_art_[basis_[r]]) continue;
        for (std::uint32_t c = 0; c < nstruct_ + m; ++c) {
          if (tab_[r][c] != 0) {
            pivot(r, c);
            break;
          }
        }
      }
    }
  }

  // Phase 1 maximizes -(sum of artificial values).
  void price_phase1() {
    const std::uint32_t cols = cols_;
    obj_.assign(cols, Rational(0));
    obj_rhs_ = 0;
    for (std::uint32_t r = 0; r < basis_.size(); ++r) {
      if (!is_art_[basis_[r]]) continue;
      for (std::uint32_t c = 0; c < cols; ++c)
        if (tab_[r][c] != 0) obj_[c] -= tab_[r][c];
      obj_rhs_ -= rhs_[r];
    }
    for (std::uint32_t c = 0; c < cols; ++c)
      if (is_art_[c]) obj_[c] += 1;
  }

  void price_phase2() {
    const std::uint32_t cols = cols_;
    obj_.assign(cols, Rational(0));
    obj_rhs_ = 0;
    for (std::uint32_t c = 0; c < nstruct_; ++c) obj_[c] = -objective_of(active_[c]);
    for (std::uint32_t r = 0; r < basis_.size(); ++r) {
      Rational cb = cost_of_basic(r);
      if (cb == 0) continue;
      for (std::uint32_t c = 0; c < cols; ++c)
        if (tab_[r][c] != 0) obj_[c] += cb * tab_[r][c];
      obj_rhs_ += cb * rhs_[r];
    }
  }

  void pivot_loop(bool phase1) {
    const std::uint32_t m = static_cast<std::uint32_t>(basis_.size());
    const std::uint32_t cols = cols_;
    while (true) {
      if (++pivots_ > opt_.pivot_limit) throw Error("simplex pivot limit exceeded");
      // artificials never re-enter; a feasible point never needs them
      std::uint32_t enter = cols;
      if (bland_) {
        for (std::uint32_t c = 0; c < cols; ++c) {
          if (is_art_[c]) continue;
          if (obj_[c] < 0) {
            enter = c;
            break;
          }
        }
      } else {
        for (std::uint32_t c = 0; c < cols; ++c) {
          if (is_art_[c]) continue;
          if (obj_[c] < 0 && (enter == cols || obj_[c] < obj_[enter])) enter = c;
        }
      }
      if (enter == cols) return;  // optimal
      std::uint32_t leave = m;
      for (std::uint32_t r = 0; r < m; ++r) {
        if (tab_[r][enter] <= 0) continue;
        if (leave == m) {
          leave = r;
          continue;
        }
        Rational lhs = rhs_[r] * tab_[leave][enter];
        Rational rhsv = rhs_[leave] * tab_[r][enter];
        if (lhs < rhsv || (lhs == rhsv && basis_[r] < basis_[leave])) leave = r;
      }
      if (leave == m) {
        if (phase1) throw Error("phase 1 cannot be unbounded");
        throw LpUnbounded();
      }
      bool degenerate = rhs_[leave] == 0;
      pivot(leave, enter);
      if (degenerate) {
        if (++degenerate_run_ >= opt_.bland_after) bland_ = true;
      } else {
        degenerate_run_ = 0;
      }
    }
  }

  void pivot(std::uint32_t prow, std::uint32_t pcol) {
    const std::uint32_t cols = cols_;
    Rational pv = tab_[prow][pcol];
    if (pv == 0) throw Error("zero pivot");
    if (pv != 1) {
      for (std::uint32_t c = 0; c < cols; ++c)
        if (tab_[prow][c] != 0) tab_[prow][c] /= pv;
      rhs_[prow] /= pv;
    }
    for (std::uint32_t r = 0; r < basis_.size(); ++r) {
      if (r == prow) continue;
      Rational factor = tab_[r][pcol];
      if (factor == 0) continue;
      for (std::uint32_t c = 0; c < cols; ++c)
        if (tab_[prow][c] != 0) tab_[r][c] -= factor * tab_[prow][c];
      rhs_[r] -= factor * rhs_[prow];
    }
    Rational ofac = obj_[pcol];
    if (ofac != 0) {
      for (std::uint32_t c = 0; c < cols; ++c)
        if (tab_[prow][c] != 0) obj_[c] -= ofac * tab_[prow][c];
      obj_rhs_ -= ofac * rhs_[prow];
    }
    basis_[prow] = pcol;
  }
};

inline LpSolution solve_direct(const LpModel& model, const SimplexOptions& opt) {
  std::vector<std::uint32_t> all(model.var_count);
  for (std::uint32_t j = 0; j < model.var_count; ++j) all[j] = j;
  Tableau tab(model, std::move(all), opt);
  tab.solve_phase2();
  return {tab.objective_value(), tab.extract(model.var_count)};
}

struct LazyColumnResult {
  LpSolution sol;
  std::vector<Rational> duals;
};

// Partial pricing: solve on an active column subset, price every inactive
// column exactly against the current duals, activate the most violated
// batch, repeat. Terminates because each round either finishes or activates
// at least one column.
inline LazyColumnResult solve_lazy_columns(const LpModel& model, const SimplexOptions& opt) {
  std::vector<std::uint32_t> seed;
  std::uint32_t want =
      std::max<std::uint32_t>(std::max<std::uint32_t>(2 * model.row_count(), 64), 1);
  for (std::uint32_t j = 0; j < model.var_count && seed.size() < want; ++j) seed.push_back(j);
  std::vector<char> active(model.var_count, 0);
  for (std::uint32_t j : seed) active[j] = 1;
  Tableau tab(model, std::move(seed), opt);
  Rational sense = model.maximize ? 1 : -1;
  while (true) {
    tab.solve_phase2();
    std::vector<Rational> y = tab.duals();
    std::vector<Rational> dot(model.var_count, Rational(0));
    for (std::uint32_t r = 0; r < model.row_count(); ++r) {
      if (y[r] == 0) continue;
      for (const auto& [j, c] : model.rows[r]) {
        if (active[j]) continue;
        dot[j] += y[r] * c;
      }
    }
    // reduced cost of inactive j in the internal maximize form
    std::vector<std::uint32_t> add;
    for (std::uint32_t j = 0; j < model.var_count; ++j) {
      if (active[j]) continue;
      if (sense * model.objective[j] - dot[j] > 0) add.push_back(j);
    }
    if (add.empty())
      return {{tab.objective_value(), tab.extract(model.var_count)}, std::move(y)};
    std::stable_sort(add.begin(), add.end(), [&](std::uint32_t a, std::uint32_t b) {
      return sense * model.objective[a] - dot[a] > sense * model.objective[b] - dot[b];
    });
    if (add.size() > opt.pricing_batch) add.resize(opt.pricing_batch);
    for (std::uint32_t j : add) active[j] = 1;
    tab.add_columns(add);
  }
}

inline bool all_ge(const LpModel& m) {
  for (RowSense s : m.senses)
    if (s != RowSense::Ge) return false;
  return true;
}

// LP dual of a pure >= minimization: min c.x, Ax >= b, x >= 0 becomes
// max b.y, A^T y <= c, y >= 0, and the optimal x is the dual vector of the
// transposed program.
inline LpModel transpose_model(const LpModel& m) {
  LpModel t;
  t.maximize = true;
  t.var_count = m.row_count();
  t.objective = m.rhs;
  t.rows.assign(m.var_count, {});
  t.senses.assign(m.var_count, RowSense::Le);
  t.rhs = m.objective;
  for (std::uint32_t r = 0; r < m.row_count(); ++r)
    for (const auto& [j, c] : m.rows[r]) t.rows[j].emplace_back(r, c);
  return t;
}

}  // namespace detail

// Exact optimum of the model. Tall pure >= minimizations go through their
// transpose (the answer is recovered from the transpose's dual vector and
// re-verified against the original rows; on any hiccup the direct solver
// takes over); wide models activate columns lazily; everything else is a
// plain dense two-phase solve. Every returned solution passes
// verify_lp_solution against the original model.
inline LpSolution simplex_solve(const LpModel& model, const SimplexOptions& opt = {}) {
  if (model.objective.size() != model.var_count ||
      model.senses.size() != model.rows.size() || model.rhs.size() != model.rows.size())
    throw Error("malformed linear program");
  const std::uint32_t m = model.row_count(), n = model.var_count;
  bool tall =
      !model.maximize && m >= opt.transpose_threshold && m > 2 * n && detail::all_ge(model);
  if (tall) {
    try {
      LpModel t = detail::transpose_model(model);
      auto res = detail::solve_lazy_columns(t, opt);
      LpSolution sol;
      sol.x = std::move(res.duals);
      sol.value = res.sol.value;
      if (verify_lp_solution(model, sol)) return sol;
      // fall through to the direct solve on verification failure
    } catch (const LpUnbounded&) {
      throw LpInfeasible();  // unbounded transpose = infeasible original
    } catch (const LpInfeasible&) {
      // infeasible transpose: original unbounded or infeasible; decide below
    } catch (const Error&) {
      // pivot limit or similar; decide below
    }
  }
  LpSolution sol;
  if (n >= opt.lazy_column_threshold && n > 2 * m && model.row_count() > 0)
    sol = detail::solve_lazy_columns(model, opt).sol;
  else
    sol = detail::solve_direct(model, opt);
  if (!verify_lp_solution(model, sol)) throw Error("simplex returned a bad solution");
  return sol;
}

}  // namespace pathsep
