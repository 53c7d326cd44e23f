#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "pathsep/digraph.hpp"
#include "pathsep/errors.hpp"
#include "pathsep/formula.hpp"

namespace pathsep {

// nlohmann keeps object keys sorted, so dump() output is deterministic.
using Json = nlohmann::json;

namespace detail {

inline const Json& json_field(const Json& doc, const char* name, const char* what) {
  if (!doc.is_object()) throw ParseError(std::string(what) + ": expected a JSON object");
  auto it = doc.find(name);
  if (it == doc.end()) throw ParseError(std::string(what) + ": missing field '" + name + "'");
  return *it;
}

inline std::uint32_t json_uint(const Json& value, const std::string& where) {
  if (!value.is_number_unsigned()) throw ParseError(where + " must be a nonnegative integer");
  std::uint64_t v = value.get<std::uint64_t>();
  if (v > 0xffffffffull) throw ParseError(where + " is too large");
  return static_cast<std::uint32_t>(v);
}

inline std::uint32_t json_uint_field(const Json& doc, const char* name, const char* what) {
  return json_uint(json_field(doc, name, what), std::string(what) + ": field '" + name + "'");
}

inline Json json_parse(const std::string& text, const char* what) {
  try {
    return Json::parse(text);
  } catch (const std::exception& e) {
    throw ParseError(std::string(what) + ": " + e.what());
  }
}

}  // namespace detail

// {"vertex_count": N, "arcs": [[tail, head], ...], "s": i, "t": j}
// The position of an entry in "arcs" is its arc id.
inline StInstance read_instance(const std::string& text) {
  Json doc = detail::json_parse(text, "instance");
  std::uint32_t n = detail::json_uint_field(doc, "vertex_count", "instance");
  const Json& arcs = detail::json_field(doc, "arcs", "instance");
  if (!arcs.is_array()) throw ParseError("instance: field 'arcs' must be an array");
  Digraph g(n);
  for (std::size_t i = 0; i < arcs.size(); ++i) {
    const Json& e = arcs[i];
    std::string where = "instance: arcs[" + std::to_string(i) + "]";
    if (!e.is_array() || e.size() != 2)
      throw ParseError(where + " must be a [tail, head] pair");
    std::uint32_t u = detail::json_uint(e[0], where + " tail");
    std::uint32_t v = detail::json_uint(e[1], where + " head");
    if (u >= n || v >= n) throw ParseError(where + ": vertex id out of range");
    if (u == v) throw ParseError(where + ": self-loop");
    g.add_arc(u, v);
  }
  std::uint32_t s = detail::json_uint_field(doc, "s", "instance");
  std::uint32_t t = detail::json_uint_field(doc, "t", "instance");
  if (s >= n || t >= n) throw ParseError("instance: terminal out of range");
  if (s == t) throw ParseError("instance: s and t must differ");
  return StInstance{std::move(g), s, t};
}

inline Json instance_to_json(const StInstance& inst) {
  Json arcs = Json::array();
  for (auto [u, v] : inst.g.arcs()) arcs.push_back(Json::array({u, v}));
  return Json{{"arcs", std::move(arcs)},
              {"s", inst.s},
              {"t", inst.t},
              {"vertex_count", inst.g.vertex_count()}};
}

inline std::string write_instance(const StInstance& inst) {
  return instance_to_json(inst).dump(2) + "\n";
}

// {"pairs": [[a, b], ...]} with arc ids; canonicalized on read.
inline PairSet read_pairs(const std::string& text, std::uint32_t arc_count) {
  Json doc = detail::json_parse(text, "pairs");
  const Json& arr = detail::json_field(doc, "pairs", "pairs");
  if (!arr.is_array()) throw ParseError("pairs: field 'pairs' must be an array");
  std::vector<std::pair<ArcId, ArcId>> raw;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const Json& e = arr[i];
    std::string where = "pairs: pairs[" + std::to_string(i) + "]";
    if (!e.is_array() || e.size() != 2)
      throw ParseError(where + " must be a pair of arc ids");
    ArcId a = detail::json_uint(e[0], where + " first");
    ArcId b = detail::json_uint(e[1], where + " second");
    if (a >= arc_count || b >= arc_count) throw ParseError(where + ": arc id out of range");
    if (a == b) throw ParseError(where + ": identical arcs");
    raw.emplace_back(a, b);
  }
  return PairSet::make(std::move(raw));
}

inline Json pairs_to_json(const PairSet& ps) {
  Json arr = Json::array();
  for (auto [a, b] : ps.pairs) arr.push_back(Json::array({a, b}));
  return Json{{"pairs", std::move(arr)}};
}

inline std::string write_pairs(const PairSet& ps) { return pairs_to_json(ps).dump(2) + "\n"; }

inline Json path_to_json(const ArcPath& p) {
  Json arr = Json::array();
  for (ArcId a : p) arr.push_back(a);
  return arr;
}

inline Json paths_to_json(const std::vector<ArcPath>& ps) {
  Json arr = Json::array();
  for (const auto& p : ps) arr.push_back(path_to_json(p));
  return arr;
}

// {"n_x": ..., "n_y": ..., "clauses": [[lit, lit, lit], ...]} where a
// literal is {"kind": "x"|"y", "index": i, "neg": bool} with 0-based
// indices within each block.
inline Formula3DNF read_formula(const std::string& text) {
  Json doc = detail::json_parse(text, "formula");
  Formula3DNF f;
  f.n_x = detail::json_uint_field(doc, "n_x", "formula");
  f.n_y = detail::json_uint_field(doc, "n_y", "formula");
  const Json& clauses = detail::json_field(doc, "clauses", "formula");
  if (!clauses.is_array()) throw ParseError("formula: field 'clauses' must be an array");
  for (std::size_t i = 0; i < clauses.size(); ++i) {
    const Json& c = clauses[i];
    std::string where = "formula: clauses[" + std::to_string(i) + "]";
    if (!c.is_array() || c.size() != 3)
      throw ParseError(where + " must be an array of exactly 3 literals");
    Clause3 out;
    for (std::size_t j = 0; j < 3; ++j) {
      const Json& l = c[j];
      std::string lw = where + "[" + std::to_string(j) + "]";
      const Json& kind_field = detail::json_field(l, "kind", lw.c_str());
      if (!kind_field.is_string()) throw ParseError(lw + ": field 'kind' must be a string");
      std::string kind = kind_field.get<std::string>();
      if (kind != "x" && kind != "y") throw ParseError(lw + ": kind must be \"x\" or \"y\"");
      out.lit[j].kind = (kind == "x") ? VarKind::X : VarKind::Y;
      out.lit[j].index = detail::json_uint_field(l, "index", lw.c_str());
      const Json& neg = detail::json_field(l, "neg", lw.c_str());
      if (!neg.is_boolean()) throw ParseError(lw + ": field 'neg' must be a boolean");
      out.lit[j].neg = neg.get<bool>();
      std::uint32_t bound = (out.lit[j].kind == VarKind::X) ? f.n_x : f.n_y;
      if (out.lit[j].index >= bound) throw ParseError(lw + ": index out of range");
    }
    f.clauses.push_back(out);
  }
  return f;
}

inline Json formula_to_json(const Formula3DNF& f) {
  Json clauses = Json::array();
  for (const Clause3& c : f.clauses) {
    Json lits = Json::array();
    for (const Literal& l : c.lit)
      lits.push_back(Json{{"kind", l.kind == VarKind::X ? "x" : "y"},
                          {"index", l.index},
                          {"neg", l.neg}});
    clauses.push_back(std::move(lits));
  }
  return Json{{"clauses", std::move(clauses)}, {"n_x", f.n_x}, {"n_y", f.n_y}};
}

inline std::string write_formula(const Formula3DNF& f) {
  return formula_to_json(f).dump(2) + "\n";
}

}  // namespace pathsep
