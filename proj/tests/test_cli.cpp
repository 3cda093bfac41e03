#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "alquant/compiler.hpp"
#include "alquant/conflicts.hpp"
#include "alquant/frontend.hpp"
#include "alquant/io.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct run_result {
  int code = -1;
  std::string out;
};

// Runs through /bin/sh; append "2>&1" to a command to capture stderr.
run_result run(const std::string& cmd) {
  run_result r;
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
  int st = pclose(p);
  r.code = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  return r;
}

std::string bin() { return std::string("'") + ALQUANT_BIN + "'"; }

const fs::path& scratch() {
  static fs::path dir = [] {
    fs::path d = fs::temp_directory_path() /
                 ("alquant_cli_" + std::to_string(getpid()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string write_file(const std::string& name, const std::string& content) {
  fs::path p = scratch() / name;
  std::ofstream out(p);
  out << content;
  return p.string();
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const char* const kExists = "exists a. G (a & X (!a | b))\n";
const char* const kForall = "forall a. G (b & (X a | X !a))\n";

// Checks a value against the subset of JSON Schema the stats schema uses:
// type, required, properties, additionalProperties, enum, minimum, items.
void check_schema(const json& schema, const json& v, const std::string& at,
                  std::vector<std::string>& errs) {
  if (schema.contains("type")) {
    const std::string t = schema["type"].get<std::string>();
    bool ok = (t == "object" && v.is_object()) ||
              (t == "array" && v.is_array()) ||
              (t == "string" && v.is_string()) ||
              (t == "integer" && v.is_number_integer());
    if (!ok) errs.push_back(at + ": expected " + t + ", got " + v.dump());
  }
  if (schema.contains("enum")) {
    bool found = false;
    for (const json& e : schema["enum"]) found |= e == v;
    if (!found) errs.push_back(at + ": " + v.dump() + " not in enum");
  }
  if (schema.contains("minimum") && v.is_number() &&
      v.get<double>() < schema["minimum"].get<double>())
    errs.push_back(at + ": " + v.dump() + " below minimum");
  if (v.is_object()) {
    if (schema.contains("required"))
      for (const json& k : schema["required"])
        if (!v.contains(k.get<std::string>()))
          errs.push_back(at + ": missing " + k.get<std::string>());
    const json props =
        schema.contains("properties") ? schema["properties"] : json::object();
    for (const auto& [key, val] : v.items()) {
      if (props.contains(key)) {
        check_schema(props[key], val, at + "." + key, errs);
      } else if (schema.contains("additionalProperties") &&
                 schema["additionalProperties"] == false) {
        errs.push_back(at + ": unexpected key " + key);
      }
    }
  }
  if (v.is_array() && schema.contains("items"))
    for (std::size_t i = 0; i < v.size(); ++i)
      check_schema(schema["items"], v[i], at + "[" + std::to_string(i) + "]",
                   errs);
}

}  // namespace

TEST_CASE("sat prints the verdict and exits zero") {
  std::string f1 = write_file("sat1.qptl", kExists);
  run_result r1 = run(bin() + " sat " + f1);
  CHECK(r1.code == 0);
  CHECK(r1.out == "SAT\n");

  std::string f2 = write_file("sat2.qptl", "exists b. forall a. G (a <-> b)\n");
  run_result r2 = run(bin() + " sat " + f2);
  CHECK(r2.code == 0);
  CHECK(r2.out == "UNSAT\n");

  run_result piped = run("printf 'exists a. G a\\n' | " + bin() + " sat -");
  CHECK(piped.code == 0);
  CHECK(piped.out == "SAT\n");
}

TEST_CASE("exit codes map the failure ladder") {
  std::string broken = write_file("broken.qptl", "G (a &\n");
  run_result parse = run(bin() + " sat " + broken + " 2>&1");
  CHECK(parse.code == 2);
  CHECK(parse.out.find("error:") != std::string::npos);

  std::string live = write_file("live.qptl", "F a\n");
  run_result frag = run(bin() + " sat " + live + " 2>&1");
  CHECK(frag.code == 3);
  CHECK(frag.out.find("unsupported") != std::string::npos);

  std::string f1 = write_file("capped.qptl", kExists);
  run_result capped = run(bin() + " sat " + f1 + " --node-cap 4 2>&1");
  CHECK(capped.code == 4);

  run_result usage = run(bin() + " diff 2>&1");
  CHECK(usage.code == 5);
}

TEST_CASE("run statistics match the published schema") {
  json schema = json::parse(read_file(ALQUANT_SCHEMA));

  std::string f = write_file("stats_in.qptl",
                             "forall a. exists b. G (a <-> b)\n");
  fs::path out = scratch() / "stats.json";
  run_result r = run(bin() + " sat " + f + " --stats " + out.string());
  REQUIRE(r.code == 0);
  json stats = json::parse(read_file(out));

  std::vector<std::string> errs;
  check_schema(schema, stats, "$", errs);
  for (const std::string& e : errs) FAIL_CHECK(e);
  CHECK(errs.empty());

  CHECK(stats["verdict"] == "SAT");
  REQUIRE(stats["rounds"].size() == 2);
  // innermost quantifier first
  CHECK(stats["rounds"][0]["var"] == "b");
  CHECK(stats["rounds"][0]["quant"] == "exists");
  CHECK(stats["rounds"][1]["var"] == "a");
  CHECK(stats["rounds"][1]["quant"] == "forall");

  std::string f2 = write_file("stats_in2.qptl", kForall);
  fs::path out2 = scratch() / "stats2.json";
  REQUIRE(run(bin() + " sat " + f2 + " --stats " + out2.string()).code == 0);
  json stats2 = json::parse(read_file(out2));
  errs.clear();
  check_schema(schema, stats2, "$", errs);
  CHECK(errs.empty());
  CHECK(stats2["rounds"][0]["fixpoint_conflicts"] == 3);
  CHECK(stats2["rounds"][0]["macro_states"] == 2);
}

TEST_CASE("conflict traces are reproducible text") {
  std::string f = write_file("trace.qptl", kForall);
  run_result r =
      run(bin() + " conflicts " + f + " --var a --mode forall --trace");
  CHECK(r.code == 0);
  CHECK(r.out ==
        "iteration 0:\n"
        "  s0 {{}}\n"
        "  s1 {{a}}\n"
        "  s2 {{!a}}\n"
        "iteration 1:\n"
        "  s0 {{a, !a}}\n"
        "  s1 {{}}\n"
        "  s2 {{}}\n"
        "iteration 2:\n"
        "  s0 {{a, !a}}\n"
        "  s1 {{}}\n"
        "  s2 {{}}\n"
        "iterations: 2\n"
        "conflicts: s0 s1 s2\n");

  std::string f2 = write_file("trace2.qptl", kExists);
  run_result r2 = run(bin() + " conflicts " + f2 + " --var a");
  CHECK(r2.code == 0);
  CHECK(r2.out == "iterations: 2\nconflicts: s0 s1\n");
}

TEST_CASE("compiled output parses back to the compiled automaton") {
  std::string f = write_file("comp.qptl", kExists);
  run_result r = run(bin() + " compile " + f + " --var a");
  REQUIRE(r.code == 0);

  auto mgr = std::make_shared<alq::fun_manager>();
  alq::qptl_formula q = alq::parse_qptl(kExists);
  alq::automaton a = alq::translate_to_asa(alq::to_nnf(q.body), q.sigma(), mgr);
  alq::conflict_report rep =
      alq::existential_conflicts(a, *mgr->find_var("a"));
  alq::automaton expected = alq::compile_exists(a, rep.conflict_set).a;

  alq::automaton parsed =
      alq::parse_text(r.out, std::make_shared<alq::fun_manager>());
  CHECK(alq::isomorphic(parsed, expected));
}

TEST_CASE("an unmentioned variable leaves the automaton untouched") {
  std::string f = write_file("absent.qptl", kExists);
  run_result r = run(bin() + " compile " + f + " --var zz");
  REQUIRE(r.code == 0);

  auto mgr = std::make_shared<alq::fun_manager>();
  alq::qptl_formula q = alq::parse_qptl(kExists);
  alq::automaton a = alq::translate_to_asa(alq::to_nnf(q.body), q.sigma(), mgr);
  CHECK(r.out == alq::emit_text(a));

  run_result c = run(bin() + " conflicts " + f + " --var zz");
  CHECK(c.code == 0);
  CHECK(c.out == "iterations: 0\nconflicts:\n");
}

TEST_CASE("dot output is emitted on request") {
  std::string f = write_file("dot.qptl", kExists);
  run_result r = run(bin() + " compile " + f + " --var a --emit-dot");
  CHECK(r.code == 0);
  CHECK(r.out.rfind("digraph asa {", 0) == 0);
  CHECK(r.out.find("__init") != std::string::npos);
}

TEST_CASE("differential subcommand reports agreement") {
  std::string f = write_file("diff.qptl", kExists);
  run_result r = run(bin() + " diff " + f);
  CHECK(r.code == 0);
  CHECK(r.out == "no mismatches\n");

  run_result corpus = run(bin() + " diff --corpus 3 --seed 5");
  CHECK(corpus.code == 0);
  CHECK(corpus.out == "no mismatches\n");
}

TEST_CASE("bench reproduces the stored verdict table") {
  const std::string dir = ALQUANT_INSTANCE_DIR;
  run_result r1 = run(bin() + " bench '" + dir + "' --millis zero");
  REQUIRE(r1.code == 0);
  run_result r2 = run(bin() + " bench '" + dir + "' --millis zero");
  CHECK(r1.out == r2.out);  // reproducible byte for byte

  // instance,verdict prefix of every row must match the stored expectations
  std::istringstream got(r1.out);
  std::istringstream want(read_file(fs::path(dir) / "expected_verdicts.csv"));
  std::string gline, wline;
  REQUIRE(std::getline(got, gline));
  CHECK(gline == "instance,verdict,millis,states_final,macros_total");
  REQUIRE(std::getline(want, wline));
  REQUIRE(wline == "instance,verdict");
  while (std::getline(want, wline)) {
    REQUIRE(std::getline(got, gline));
    std::size_t second_comma = gline.find(',', gline.find(',') + 1);
    CHECK(gline.substr(0, second_comma) == wline);
  }
  CHECK(!std::getline(got, gline));  // same row count
}

TEST_CASE("bench handles empty directories and file output") {
  fs::path empty = scratch() / "empty_bench";
  fs::create_directories(empty);
  run_result r = run(bin() + " bench '" + empty.string() + "'");
  CHECK(r.code == 0);
  CHECK(r.out == "instance,verdict,millis,states_final,macros_total\n");

  fs::path csv = scratch() / "bench.csv";
  const std::string dir = ALQUANT_INSTANCE_DIR;
  run_result w = run(bin() + " bench '" + dir + "' --millis zero --csv " +
                     csv.string());
  CHECK(w.code == 0);
  CHECK(w.out.empty());
  run_result direct = run(bin() + " bench '" + dir + "' --millis zero");
  CHECK(read_file(csv) == direct.out);
}

TEST_CASE("environment defaults yield to explicit flags") {
  std::string f = write_file("env.qptl", kExists);
  run_result env = run("ALQUANT_OPTS='--node-cap 4' " + bin() + " sat " + f +
                       " 2>&1");
  CHECK(env.code == 4);
  run_result flag = run("ALQUANT_OPTS='--node-cap 4' " + bin() + " sat " + f +
                        " --node-cap 2000000");
  CHECK(flag.code == 0);
  CHECK(flag.out == "SAT\n");
}

TEST_CASE("generated corpora are seeded and deterministic") {
  fs::path d1 = scratch() / "gen1";
  fs::path d2 = scratch() / "gen2";
  REQUIRE(run(bin() + " gen " + d1.string() + " --count 4 --seed 11").code ==
          0);
  REQUIRE(run(bin() + " gen " + d2.string() +
              " --count 4 --seed 11 --template 2 2 1")
              .code == 0);

  for (int i = 0; i < 4; ++i) {
    std::string name = "rand_000" + std::to_string(i) + ".qptl";
    std::string body = read_file(d1 / name);
    CHECK(body == read_file(d2 / name));
    CHECK(body.rfind("# seed " + std::to_string(11 + i) + "\n", 0) == 0);
    // every generated instance must parse
    CHECK_NOTHROW(alq::parse_qptl(body));
  }
  CHECK(fs::exists(d2 / "template_2_2_1.qptl"));
  CHECK_NOTHROW(alq::parse_qptl(read_file(d2 / "template_2_2_1.qptl")));

  fs::path d3 = scratch() / "gen3";
  REQUIRE(run(bin() + " gen " + d3.string() + " --count 4 --seed 12").code ==
          0);
  CHECK(read_file(d1 / "rand_0000.qptl") != read_file(d3 / "rand_0000.qptl"));
}
