#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "helpers.hpp"
#include "pathsep/cli.hpp"

using namespace pathsep;
using testgen::phi_unsat;
using testgen::phi_unsat3;

namespace {

struct RunResult {
  int code = 0;
  std::string out;
  std::string err;
};

RunResult run_cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string file_with(const std::string& name, const std::string& text) {
  auto path = std::filesystem::temp_directory_path() / ("pathsep_cli_" + name);
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  f << text;
  return path.string();
}

std::string diamond_file() {
  StInstance inst{Digraph::make(4, {{0, 1}, {0, 2}, {1, 3}, {2, 3}}), 0, 3};
  return file_with("diamond.json", write_instance(inst));
}

std::string chain_file() {
  StInstance inst{Digraph::make(4, {{0, 1}, {1, 2}, {2, 3}}), 0, 3};
  return file_with("chain.json", write_instance(inst));
}

}  // namespace

TEST_CASE("usage problems exit with 2 and an empty stdout") {
  for (const auto& args : std::vector<std::vector<std::string>>{
           {"bogus"},
           {"adp", "solve"},
           {"adp", "solve", "-i", diamond_file(), "-k", "2", "--method", "sideways"},
           {"adp", "solve", "-i", diamond_file(), "-k", "2", "--threshold", "3"},
           {"adp", "solve", "-i", diamond_file(), "-k", "2", "--method", "brute", "--witness"},
           {"gen", "bunch", "-k", "0", "-l", "4"},
           {"gen", "bunch", "-k", "2", "-l", "1"},
           {"gen", "tail", "-i", diamond_file(), "-l", "0"},
       }) {
    RunResult r = run_cli(args);
    INFO("args: " << args[0] << (args.size() > 1 ? " " + args[1] : ""));
    CHECK(r.code == 2);
    CHECK(r.out.empty());
    CHECK_FALSE(r.err.empty());
  }
}

TEST_CASE("help exits cleanly") {
  RunResult r = run_cli({"--help"});
  CHECK(r.code == 0);
  CHECK_FALSE(r.out.empty());
}

TEST_CASE("instance problems exit with 3 and an empty stdout") {
  std::string direct = file_with("direct.json",
                                 write_instance({Digraph::make(2, {{0, 1}}), 0, 1}));
  std::string junk = file_with("junk.json", "not json at all");
  std::string purex = file_with(
      "purex.json", write_formula(testgen::formula(
                        1, 1, {Clause3{{testgen::X(0), testgen::X(0), testgen::X(0)}},
                               Clause3{{testgen::X(0), testgen::Y(0), testgen::Y(0)}}})));
  for (const auto& args : std::vector<std::vector<std::string>>{
           {"adp", "solve", "-i", "/definitely/missing.json", "-k", "2"},
           {"adp", "solve", "-i", junk, "-k", "2"},
           {"sfp", "solve", "-i", direct},
           {"gen", "sfp", "--from", purex},
       }) {
    RunResult r = run_cli(args);
    INFO("args: " << args[0] << " " << args[1]);
    CHECK(r.code == 3);
    CHECK(r.out.empty());
    CHECK_FALSE(r.err.empty());
  }
}

TEST_CASE("blown budgets exit with 4") {
  RunResult capped = run_cli(
      {"adp", "solve", "-i", diamond_file(), "-k", "2", "--method", "brute", "--path-cap", "1"});
  CHECK(capped.code == 4);
  CHECK(capped.out.empty());

  RunResult short_brute =
      run_cli({"sfp", "solve", "-i", diamond_file(), "--method", "brute", "--max-k", "1"});
  CHECK(short_brute.code == 4);
  CHECK_FALSE(short_brute.err.empty());

  RunResult starved = run_cli({"sfp", "solve", "-i", diamond_file(), "--node-budget", "1"});
  CHECK(starved.code == 4);
}

TEST_CASE("path feasibility queries") {
  RunResult two = run_cli({"adp", "solve", "-i", diamond_file(), "-k", "2"});
  REQUIRE(two.code == 0);
  Json j = Json::parse(two.out);
  CHECK(j["feasible"] == true);
  CHECK(j["k"] == 2);
  CHECK(j["method"] == "flow");
  CHECK(j["threshold"] == 1);
  CHECK_FALSE(j.contains("paths"));

  RunResult three = run_cli({"adp", "solve", "-i", diamond_file(), "-k", "3"});
  REQUIRE(three.code == 0);
  CHECK(Json::parse(three.out)["feasible"] == false);

  RunResult witness = run_cli({"adp", "solve", "-i", diamond_file(), "-k", "2", "--witness"});
  REQUIRE(witness.code == 0);
  Json w = Json::parse(witness.out);
  REQUIRE(w["feasible"] == true);
  CHECK(w["paths"].size() == 2);

  RunResult dp = run_cli({"adp", "solve", "-i", diamond_file(), "-k", "2", "--method", "dp"});
  REQUIRE(dp.code == 0);
  CHECK(Json::parse(dp.out)["method"] == "dp");

  RunResult brute = run_cli({"adp", "solve", "-i", chain_file(), "-k", "2", "--method", "brute",
                             "--threshold", "3"});
  REQUIRE(brute.code == 0);
  Json b = Json::parse(brute.out);
  CHECK(b["feasible"] == false);  // a single path cannot be two
  CHECK(b["threshold"] == 3);
}

TEST_CASE("pair solving and checking") {
  RunResult solved = run_cli({"sfp", "solve", "-i", diamond_file()});
  REQUIRE(solved.code == 0);
  Json j = Json::parse(solved.out);
  CHECK(j["k"] == 2);
  CHECK(j["pairs"] == Json::parse("[[0, 2], [1, 3]]"));

  RunResult brute = run_cli({"sfp", "solve", "-i", diamond_file(), "--method", "brute"});
  REQUIRE(brute.code == 0);
  CHECK(Json::parse(brute.out)["k"] == 2);

  RunResult optima = run_cli({"sfp", "solve", "-i", chain_file(), "--all-optima"});
  REQUIRE(optima.code == 0);
  Json o = Json::parse(optima.out);
  CHECK(o["k"] == 1);
  CHECK(o["optima"].size() == 3);

  StInstance gadget = inconsistency_gadget().first;
  std::string gfile = file_with("incons.json", write_instance(gadget));
  std::string good = file_with("good_pairs.json", R"({"pairs": [[2, 5]]})");
  std::string bad = file_with("bad_pairs.json", R"({"pairs": [[0, 3]]})");

  RunResult yes = run_cli({"sfp", "check", "-i", gfile, "--pairs", good});
  REQUIRE(yes.code == 0);
  CHECK(Json::parse(yes.out)["separates"] == true);

  RunResult no = run_cli({"sfp", "check", "-i", gfile, "--pairs", bad});
  REQUIRE(no.code == 0);
  Json n = Json::parse(no.out);
  CHECK(n["separates"] == false);
  CHECK(n.contains("witness"));
}

TEST_CASE("generators emit an instance with metadata") {
  RunResult bunch = run_cli({"gen", "bunch", "-k", "2", "-l", "4"});
  REQUIRE(bunch.code == 0);
  Json bj = Json::parse(bunch.out);
  StInstance binst = read_instance(bj["instance"].dump());
  CHECK(binst.g.vertex_count() == 5);
  CHECK(binst.g.arc_count() == 8);
  CHECK(bj["meta"]["k"] == 2);
  CHECK(bj["meta"]["l"] == 4);
  CHECK(bj["meta"]["cross_pairs"].size() == 4);

  std::string hfile =
      file_with("edge.json", h_graph_to_json(UndirectedGraph{2, {{0, 1}}}).dump());
  RunResult adp = run_cli({"gen", "adp", "--from", hfile});
  REQUIRE(adp.code == 0);
  Json aj = Json::parse(adp.out);
  CHECK(read_instance(aj["instance"].dump()).g.vertex_count() == 24);
  CHECK(aj["meta"]["gadgets"].size() == 1);

  std::string ffile = file_with("unsat.json", write_formula(phi_unsat()));
  RunResult sfp = run_cli({"gen", "sfp", "--from", ffile});
  REQUIRE(sfp.code == 0);
  Json sj = Json::parse(sfp.out);
  CHECK(sj["meta"]["k"] == 439);
  CHECK(read_instance(sj["instance"].dump()).g.arc_count() == 248);

  // a thin formula is repaired by clause duplication before generating
  std::string thin = file_with("thin.json", write_formula(phi_unsat3()));
  RunResult rep = run_cli({"gen", "sfp", "--from", thin});
  REQUIRE(rep.code == 0);
  CHECK(Json::parse(rep.out)["meta"]["k"] == 328);

  RunResult tail = run_cli({"gen", "tail", "-i", diamond_file(), "-l", "3"});
  REQUIRE(tail.code == 0);
  Json tj = Json::parse(tail.out);
  CHECK(tj["meta"]["l"] == 3);
  StInstance tinst = read_instance(tj["instance"].dump());
  CHECK(tinst.g.arc_count() == 6);
  CHECK(tinst.s == tj["meta"]["new_source"]);
}

TEST_CASE("duality report") {
  RunResult plain = run_cli({"lp", "report", "-i", diamond_file()});
  REQUIRE(plain.code == 0);
  Json j = Json::parse(plain.out);
  CHECK(j["adp"] == 2);
  CHECK(j["sfp"] == 2);
  CHECK(j["lp_value"] == "2");
  CHECK(j["gap"] == "0");
  CHECK_FALSE(j.contains("primal"));

  RunResult certs = run_cli({"lp", "report", "-i", diamond_file(), "--certificates"});
  REQUIRE(certs.code == 0);
  Json c = Json::parse(certs.out);
  CHECK(c["adp_paths"].size() == 2);
  CHECK(c["lp_paths"].size() == 2);
  CHECK(c["lp_pairs"].size() == 2);
  CHECK(c["primal"]["value"] == "2");
  CHECK(c["dual"]["value"] == "2");

  std::string cert = file_with("diamond_pairs.json", R"({"pairs": [[0, 2], [1, 3]]})");
  RunResult pinned =
      run_cli({"lp", "report", "-i", diamond_file(), "--sfp-certificate", cert});
  REQUIRE(pinned.code == 0);
  CHECK(Json::parse(pinned.out)["sfp"] == 2);
}

TEST_CASE("dot export") {
  RunResult r = run_cli({"export", "dot", "-i", diamond_file()});
  REQUIRE(r.code == 0);
  CHECK(r.out.rfind("digraph", 0) == 0);
  CHECK(r.out.find("->") != std::string::npos);
}

TEST_CASE("repeated runs are byte identical") {
  std::string ffile = file_with("unsat_det.json", write_formula(phi_unsat()));
  RunResult a = run_cli({"gen", "sfp", "--from", ffile});
  RunResult b = run_cli({"gen", "sfp", "--from", ffile});
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);

  RunResult c = run_cli({"lp", "report", "-i", diamond_file(), "--certificates"});
  RunResult d = run_cli({"lp", "report", "-i", diamond_file(), "--certificates"});
  REQUIRE(c.code == 0);
  CHECK(c.out == d.out);
}
