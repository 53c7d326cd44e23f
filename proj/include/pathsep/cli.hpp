#pragma once

#include <cstdint>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"

#include "pathsep/adp.hpp"
#include "pathsep/digraph.hpp"
#include "pathsep/duality.hpp"
#include "pathsep/errors.hpp"
#include "pathsep/formula.hpp"
#include "pathsep/json_io.hpp"
#include "pathsep/rational.hpp"
#include "pathsep/reductions.hpp"
#include "pathsep/sfp.hpp"
#include "pathsep/sfp_reduction.hpp"

namespace pathsep::cli {

// Flag combinations the parser cannot rule out (exit code 2).
struct UsageError : Error {
  using Error::Error;
};

namespace detail {

inline std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot read file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline Json pair_array(const std::vector<std::pair<ArcId, ArcId>>& v) {
  Json arr = Json::array();
  for (auto [a, b] : v) arr.push_back(Json::array({a, b}));
  return arr;
}

inline Json pair_array(const PairSet& ps) { return pair_array(ps.pairs); }

inline Json rational_array(const std::vector<Rational>& xs) {
  Json arr = Json::array();
  for (const Rational& x : xs) arr.push_back(rational_to_string(x));
  return arr;
}

inline Json solution_json(const LpSolution& sol) {
  return Json{{"value", rational_to_string(sol.value)}, {"x", rational_array(sol.x)}};
}

inline AdpMethod adp_method_from(const std::string& name) {
  if (name == "flow") return AdpMethod::Flow;
  if (name == "dp") return AdpMethod::Dp;
  if (name == "layered") return AdpMethod::Layered;
  if (name == "brute") return AdpMethod::Brute;
  return AdpMethod::Auto;
}

inline Json adp_meta_json(const AdpReductionMeta& m) {
  Json gadgets = Json::array();
  for (std::size_t e = 0; e < m.gadgets.size(); ++e) {
    const AdpGadgetMeta& gm = m.gadgets[e];
    gadgets.push_back(Json{{"edge", Json::array({m.h.edges[e].first, m.h.edges[e].second})},
                           {"in_u", gm.in_u},
                           {"in_v", gm.in_v},
                           {"in_h1", gm.in_h1},
                           {"in_h2", gm.in_h2},
                           {"xl1", gm.xl1},
                           {"xl2", gm.xl2},
                           {"yl1", gm.yl1},
                           {"yl2", gm.yl2},
                           {"zl", gm.zl},
                           {"zr", gm.zr},
                           {"yr1", gm.yr1},
                           {"yr2", gm.yr2},
                           {"xr1", gm.xr1},
                           {"xr2", gm.xr2},
                           {"out_u", gm.out_u},
                           {"out_v", gm.out_v},
                           {"out_h1", gm.out_h1},
                           {"out_h2", gm.out_h2}});
  }
  Json incident = Json::array();
  for (const auto& edges : m.incident) {
    Json row = Json::array();
    for (auto e : edges) row.push_back(e);
    incident.push_back(std::move(row));
  }
  return Json{{"s", m.s},
              {"t", m.t},
              {"v_v", m.v_v},
              {"v_e", m.v_e},
              {"h_vertex", m.h_vertex},
              {"gadgets", std::move(gadgets)},
              {"incident", std::move(incident)}};
}

inline Json sfp_meta_json(const SfpReductionMeta& m) {
  const std::uint32_t last_clause =
      static_cast<std::uint32_t>(m.formula.clauses.size()) - 1;
  Json units = Json::array();
  for (const SfpUnitMeta& u : m.units) {
    Json ju{{"clause", u.local.clause},
            {"bits", u.local.bits},
            {"s_l", u.s_l},
            {"v_l", u.v_l},
            {"t_l", u.t_l},
            {"escape", u.escape ? Json(*u.escape) : Json(nullptr)},
            {"thread", path_to_json(u.thread)},
            {"entry_from_s0", u.local.clause == 0 ? Json(u.entry_from_s0) : Json(nullptr)},
            {"exit_to_t0", u.local.clause == last_clause ? Json(u.exit_to_t0) : Json(nullptr)},
            {"to_next", path_to_json(u.to_next)}};
    Json detours = Json::array();
    for (const SfpDetourMeta& d : u.detours)
      detours.push_back(Json{{"var", d.var},
                             {"row", d.row},
                             {"neg", d.neg},
                             {"enter", d.enter},
                             {"mid1", d.mid1},
                             {"mid2", d.mid2},
                             {"exit", d.exit}});
    ju["detours"] = std::move(detours);
    units.push_back(std::move(ju));
  }
  Json variables = Json::array();
  for (const SfpVariableGadgetMeta& vm : m.variables) {
    Json rows = Json::array();
    for (std::size_t j = 0; j < vm.rows.size(); ++j) {
      const SfpVariableRowMeta& r = vm.rows[j];
      Json verts = Json::array();
      for (std::uint32_t pos = 1; pos <= 7; ++pos)
        verts.push_back(j == 0 && pos == 4 ? Json(nullptr) : Json(r.v[pos]));
      rows.push_back(Json{{"v", std::move(verts)},
                          {"a12", r.a12},
                          {"a23", r.a23},
                          {"a56", r.a56},
                          {"a67", r.a67}});
    }
    variables.push_back(Json{{"src", vm.src},
                             {"snk", vm.snk},
                             {"rows", std::move(rows)},
                             {"true_pairs", pair_array(variable_true_pairs(vm))},
                             {"false_pairs", pair_array(variable_false_pairs(vm))}});
  }
  Json incons = Json::array();
  for (const SfpInconsistencyGadgetMeta& im : m.inconsistencies)
    incons.push_back(Json{{"a", Json{{"clause", im.inc.a.clause}, {"bits", im.inc.a.bits}}},
                          {"b", Json{{"clause", im.inc.b.clause}, {"bits", im.inc.b.bits}}},
                          {"s_i", im.s_i},
                          {"v1", im.v1},
                          {"v2", im.v2},
                          {"v3", im.v3},
                          {"v4", im.v4},
                          {"t_i", im.t_i},
                          {"a12", im.a12},
                          {"a34", im.a34}});
  Json source_bunch = Json::array();
  for (const auto& b : m.source_bunch) source_bunch.push_back(path_to_json(b));
  Json sink_bunch = Json::array();
  for (const auto& b : m.sink_bunch) sink_bunch.push_back(path_to_json(b));
  return Json{{"formula", formula_to_json(m.formula)},
              {"q", m.q},
              {"p", m.p},
              {"gadget_count", m.gadget_count},
              {"k0", m.k0},
              {"k", m.k},
              {"s", m.s},
              {"t", m.t},
              {"s0", m.s0},
              {"t0", m.t0},
              {"units", std::move(units)},
              {"variables", std::move(variables)},
              {"inconsistencies", std::move(incons)},
              {"source_bunch", std::move(source_bunch)},
              {"sink_bunch", std::move(sink_bunch)},
              {"typification_begin", m.typification_begin}};
}

}  // namespace detail

inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"almost disjoint paths and forbidden pair separation toolkit"};
  app.require_subcommand(1);

  std::string input, pairs_path, from_path, cert_path, method_name = "auto";
  std::uint32_t k = 0, length = 0, threshold = 1, max_k = 8;
  std::uint64_t path_cap = 1000000, node_budget = 0;
  bool want_witness = false, all_optima = false, want_certs = false;

  CLI::App* c_adp = app.add_subcommand("adp", "almost disjoint path queries");
  c_adp->require_subcommand(1);
  CLI::App* c_adp_solve = c_adp->add_subcommand("solve", "decide k almost disjoint s-t paths");
  c_adp_solve->add_option("-i,--input", input, "instance JSON file")->required();
  c_adp_solve->add_option("-k", k, "number of paths")->required();
  c_adp_solve->add_option("--method", method_name, "solver selection")
      ->check(CLI::IsMember({"auto", "flow", "dp", "layered", "brute"}));
  c_adp_solve->add_option("--threshold", threshold, "max shared arcs per path pair");
  c_adp_solve->add_flag("--witness", want_witness, "emit witness paths");
  c_adp_solve->add_option("--path-cap", path_cap, "path enumeration cap (brute)");

  CLI::App* c_sfp = app.add_subcommand("sfp", "forbidden pair separation queries");
  c_sfp->require_subcommand(1);
  CLI::App* c_sfp_solve = c_sfp->add_subcommand("solve", "minimum separating pair set");
  c_sfp_solve->add_option("-i,--input", input, "instance JSON file")->required();
  c_sfp_solve->add_option("--method", method_name, "solver selection")
      ->check(CLI::IsMember({"hitting", "brute"}));
  c_sfp_solve->add_flag("--all-optima", all_optima, "enumerate every optimal pair set");
  c_sfp_solve->add_option("--max-k", max_k, "largest pair set brute force tries");
  c_sfp_solve->add_option("--path-cap", path_cap, "path enumeration cap (brute)");
  c_sfp_solve->add_option("--node-budget", node_budget, "search node budget (0 = default)");
  CLI::App* c_sfp_check = c_sfp->add_subcommand("check", "verify a pair set separates");
  c_sfp_check->add_option("-i,--input", input, "instance JSON file")->required();
  c_sfp_check->add_option("--pairs", pairs_path, "pair set JSON file")->required();
  c_sfp_check->add_option("--node-budget", node_budget, "check node budget (0 = default)");

  CLI::App* c_gen = app.add_subcommand("gen", "instance generators");
  c_gen->require_subcommand(1);
  CLI::App* c_gen_bunch = c_gen->add_subcommand("bunch", "parallel-bunch duality gap family");
  c_gen_bunch->add_option("-k", k, "arcs per bunch")->required();
  c_gen_bunch->add_option("-l", length, "number of bunches")->required();
  CLI::App* c_gen_adp = c_gen->add_subcommand("adp", "path instance from an undirected graph");
  c_gen_adp->add_option("--from", from_path, "undirected graph JSON file")->required();
  CLI::App* c_gen_sfp = c_gen->add_subcommand("sfp", "separation instance from a 3DNF formula");
  c_gen_sfp->add_option("--from", from_path, "formula JSON file")->required();
  CLI::App* c_gen_tail = c_gen->add_subcommand("tail", "prepend a mandatory source chain");
  c_gen_tail->add_option("-i,--input", input, "instance JSON file")->required();
  c_gen_tail->add_option("-l", length, "sharing threshold the chain encodes")->required();

  CLI::App* c_lp = app.add_subcommand("lp", "linear programming reports");
  c_lp->require_subcommand(1);
  CLI::App* c_lp_report = c_lp->add_subcommand("report", "duality chain on one instance");
  c_lp_report->add_option("-i,--input", input, "instance JSON file")->required();
  c_lp_report->add_flag("--certificates", want_certs, "include witnesses and LP solutions");
  c_lp_report->add_option("--path-cap", path_cap, "path enumeration cap");
  c_lp_report->add_option("--node-budget", node_budget, "pair search budget (0 = default)");
  c_lp_report->add_option("--sfp-certificate", cert_path,
                          "pair set to certify the pair optimum against the LP bound");

  CLI::App* c_export = app.add_subcommand("export", "other output formats");
  c_export->require_subcommand(1);
  CLI::App* c_export_dot = c_export->add_subcommand("dot", "graphviz rendering");
  c_export_dot->add_option("-i,--input", input, "instance JSON file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (c_adp_solve->parsed()) {
      AdpMethod method = detail::adp_method_from(method_name);
      if (threshold != 1 && method != AdpMethod::Brute)
        throw UsageError("--threshold other than 1 needs --method brute");
      if (want_witness && method == AdpMethod::Brute)
        throw UsageError("--witness is not available with --method brute");
      StInstance inst = read_instance(detail::slurp(input));
      Json j;
      if (method == AdpMethod::Brute) {
        bool feasible = brute_force_max_paths(inst, k, threshold, path_cap);
        j = Json{{"feasible", feasible},
                 {"k", k},
                 {"method", "brute"},
                 {"threshold", threshold}};
      } else {
        SolveOutcome o = solve_detailed(inst, k, method, path_cap);
        j = Json{{"feasible", o.result.feasible},
                 {"k", k},
                 {"method", adp_method_name(o.resolved)},
                 {"threshold", threshold}};
        if (want_witness && o.result.feasible) j["paths"] = paths_to_json(o.result.witness);
      }
      out << j.dump(2) << "\n";
      return 0;
    }

    if (c_sfp_solve->parsed()) {
      StInstance inst = read_instance(detail::slurp(input));
      Json j;
      if (method_name == "brute") {
        if (all_optima) {
          auto optima = brute_force_all_min_pairs(inst, max_k, path_cap);
          if (optima.empty()) {
            err << "no separating set of at most " << max_k << " pairs; raise --max-k\n";
            return 4;
          }
          Json arr = Json::array();
          for (const PairSet& ps : optima) arr.push_back(detail::pair_array(ps));
          j = Json{{"k", optima.front().pairs.size()}, {"optima", std::move(arr)}};
        } else {
          auto r = brute_force_min_pairs(inst, max_k, path_cap);
          if (!r) {
            err << "no separating set of at most " << max_k << " pairs; raise --max-k\n";
            return 4;
          }
          j = Json{{"k", r->k}, {"pairs", detail::pair_array(r->pairs)}};
        }
      } else {
        SfpBudget budget;
        if (node_budget > 0) {
          budget.check_nodes = node_budget;
          budget.search_nodes = node_budget;
        }
        if (all_optima) {
          auto optima = enumerate_min_pairs(inst, budget);
          Json arr = Json::array();
          for (const PairSet& ps : optima) arr.push_back(detail::pair_array(ps));
          j = Json{{"k", optima.front().pairs.size()}, {"optima", std::move(arr)}};
        } else {
          SfpResult r = solve_min_pairs(inst, budget);
          j = Json{{"k", r.k}, {"pairs", detail::pair_array(r.pairs)}};
        }
      }
      out << j.dump(2) << "\n";
      return 0;
    }

    if (c_sfp_check->parsed()) {
      StInstance inst = read_instance(detail::slurp(input));
      PairSet ps = read_pairs(detail::slurp(pairs_path), inst.g.arc_count());
      SeparationVerdict v = node_budget > 0 ? separation_check(inst, ps, node_budget)
                                            : separation_check(inst, ps);
      Json j{{"separates", v.separates}};
      if (!v.separates) j["witness"] = path_to_json(*v.witness);
      out << j.dump(2) << "\n";
      return 0;
    }

    if (c_gen_bunch->parsed()) {
      if (k < 1) throw UsageError("-k must be at least 1");
      if (length < 2) throw UsageError("-l must be at least 2");
      StInstance inst = gen_bunch(k, length);
      Json j{{"instance", instance_to_json(inst)},
             {"meta",
              Json{{"k", k}, {"l", length}, {"cross_pairs", detail::pair_array(cross_bunch_pairs(k))}}}};
      out << j.dump(2) << "\n";
      return 0;
    }

    if (c_gen_adp->parsed()) {
      UndirectedGraph h = read_h_graph(detail::slurp(from_path));
      auto [inst, meta] = gen_adp_instance(h);
      Json j{{"instance", instance_to_json(inst)}, {"meta", detail::adp_meta_json(meta)}};
      out << j.dump(2) << "\n";
      return 0;
    }

    if (c_gen_sfp->parsed()) {
      Formula3DNF f = read_formula(detail::slurp(from_path));
      std::optional<Formula3DNF> norm = normalize_formula(f);
      if (!norm) {
        err << "formula is satisfiable by an x-assignment alone; nothing to reduce\n";
        return 3;
      }
      auto [inst, meta] = gen_sfp_instance(*norm);
      Json j{{"instance", instance_to_json(inst)}, {"meta", detail::sfp_meta_json(meta)}};
      out << j.dump(2) << "\n";
      return 0;
    }

    if (c_gen_tail->parsed()) {
      if (length < 1) throw UsageError("-l must be at least 1");
      StInstance inst = read_instance(detail::slurp(input));
      TailExtension te = gen_tail_extension(inst, length);
      Json j{{"instance", instance_to_json(te.instance)},
             {"meta", Json{{"l", length}, {"new_source", te.new_source}}}};
      out << j.dump(2) << "\n";
      return 0;
    }

    if (c_lp_report->parsed()) {
      StInstance inst = read_instance(detail::slurp(input));
      DualityBudgets budgets;
      budgets.path_cap = path_cap;
      if (node_budget > 0) {
        budgets.sfp.check_nodes = node_budget;
        budgets.sfp.search_nodes = node_budget;
      }
      if (!cert_path.empty())
        budgets.sfp_certificate = read_pairs(detail::slurp(cert_path), inst.g.arc_count());
      budgets.want_certificates = want_certs;
      DualityReport r = duality_report(inst, budgets);
      Json j{{"adp", r.adp_int},
             {"sfp", r.sfp_int},
             {"lp_value", rational_to_string(r.lp_value)},
             {"gap", rational_to_string(r.gap)}};
      if (want_certs) {
        j["adp_paths"] = paths_to_json(r.adp_witness);
        j["sfp_pairs"] = detail::pair_array(r.sfp_pairs);
        j["lp_paths"] = paths_to_json(r.lp_paths);
        j["lp_pairs"] = detail::pair_array(r.lp_pairs);
        j["primal"] = detail::solution_json(r.primal);
        j["dual"] = detail::solution_json(r.dual);
      }
      out << j.dump(2) << "\n";
      return 0;
    }

    if (c_export_dot->parsed()) {
      StInstance inst = read_instance(detail::slurp(input));
      out << to_dot(inst);
      return 0;
    }

    err << "no subcommand selected\n";
    return 2;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const BudgetExceeded& e) {
    err << "budget exceeded: " << e.what() << "\n";
    return 4;
  } catch (const CapExceeded& e) {
    err << "cap exceeded: " << e.what() << "\n";
    return 4;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return 3;
  } catch (const Inseparable& e) {
    err << "instance error: " << e.what() << "\n";
    return 3;
  } catch (const Disconnected& e) {
    err << "instance error: " << e.what() << "\n";
    return 3;
  } catch (const CyclicError& e) {
    err << "instance error: " << e.what() << "\n";
    return 3;
  } catch (const MalformedClause& e) {
    err << "instance error: " << e.what() << "\n";
    return 3;
  } catch (const MalformedFormula& e) {
    err << "instance error: " << e.what() << "\n";
    return 3;
  } catch (const NotIndependent& e) {
    err << "instance error: " << e.what() << "\n";
    return 3;
  } catch (const NotFalsifying& e) {
    err << "instance error: " << e.what() << "\n";
    return 3;
  } catch (const TooLarge& e) {
    err << "instance error: " << e.what() << "\n";
    return 3;
  } catch (const LpInfeasible& e) {
    err << "instance error: " << e.what() << "\n";
    return 3;
  } catch (const LpUnbounded& e) {
    err << "instance error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  argv.push_back("pathsep");
  for (const std::string& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace pathsep::cli
