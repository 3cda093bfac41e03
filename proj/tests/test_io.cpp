#include <doctest.h>

#include <memory>
#include <string>

#include "alquant/compiler.hpp"
#include "alquant/errors.hpp"
#include "alquant/frontend.hpp"
#include "alquant/io.hpp"

using namespace alq;

namespace {

automaton from_text(const std::string& text) {
  return parse_text(text, std::make_shared<fun_manager>());
}

const char* small_text =
    "alphabet a b\n"
    "states q0 q1\n"
    "initial q0\n"
    "state q0: (a & q0 & q1)\n"
    "state q1: !a | b\n";

}  // namespace

TEST_CASE("emitted text is a golden surface") {
  automaton a = from_text(small_text);
  CHECK(emit_text(a) == small_text);
  CHECK(emit_text(a) == emit_text(a));
}

TEST_CASE("round trip yields an isomorphic automaton") {
  automaton a = from_text(small_text);
  automaton b = from_text(emit_text(a));
  CHECK(isomorphic(a, b));
  CHECK(emit_text(b) == emit_text(a));
}

TEST_CASE("compiled automata with macro names survive the round trip") {
  auto mgr = std::make_shared<fun_manager>();
  qptl_formula f = parse_qptl("exists a. G (a & X (!a | b))");
  automaton a = translate_to_asa(to_nnf(f.body), f.sigma(), mgr);
  auto pv = mgr->find_var("a");
  REQUIRE(pv.has_value());
  automaton compiled =
      compile_exists(a, {state_id{0}, state_id{1}}, {}).a;
  std::string text = emit_text(compiled);
  // macro names carry braces and commas
  CHECK(text.find("m{") != std::string::npos);
  automaton back = from_text(text);
  CHECK(isomorphic(compiled, back));
  CHECK(emit_text(back) == text);
}

TEST_CASE("comments and blank lines are skipped") {
  automaton a = from_text(
      "# header comment\n"
      "alphabet a b\n"
      "\n"
      "states q0 q1  # trailing comment\n"
      "initial q0\n"
      "state q0: (a & q0 & q1)\n"
      "state q1: !a | b\n");
  CHECK(emit_text(a) == small_text);
}

TEST_CASE("constants parse in transitions") {
  automaton a = from_text(
      "alphabet a\n"
      "states q0 q1\n"
      "initial q0\n"
      "state q0: true\n"
      "state q1: false\n");
  CHECK(a.delta[0].is_true());
  CHECK(a.delta[1].is_false());
}

TEST_CASE("parser rejects malformed input") {
  CHECK_THROWS_AS(from_text("alphabet a a\n"), parse_error);
  CHECK_THROWS_AS(from_text("alphabet a\nstates a\n"), parse_error);
  CHECK_THROWS_AS(from_text("alphabet a\nstates q0\nstate q1: a\n"),
                  parse_error);
  CHECK_THROWS_AS(from_text("alphabet a\nstates q0\ninitial q0\n"
                            "state q0: a & \n"),
                  parse_error);
  CHECK_THROWS_AS(from_text("alphabet a\nstates q0\ninitial q0\n"
                            "state q0: (a\n"),
                  parse_error);
  CHECK_THROWS_AS(from_text("alphabet a\nstates q0\ninitial q0\n"
                            "state q0: a | zz\n"),
                  parse_error);
  CHECK_THROWS_AS(from_text("alphabet a\nstates q0\ninitial q0\n"
                            "state q0: a * q0\n"),
                  parse_error);
  CHECK_THROWS_AS(from_text("alphabet a\nstates q0\nstate q0: a\n"),
                  parse_error);
  CHECK_THROWS_AS(from_text("alphabet a\nstates q0\ninitial q9\n"
                            "state q0: a\n"),
                  parse_error);
  CHECK_THROWS_AS(from_text("alpha a\n"), parse_error);
  CHECK_THROWS_AS(from_text("alphabet a extra: b\n"), parse_error);
}

TEST_CASE("parse errors carry positions") {
  try {
    from_text("alphabet a\nstates q0\ninitial q0\nstate q0: a | zz\n");
    FAIL("expected parse_error");
  } catch (const parse_error& e) {
    CHECK(e.line == 4);
    CHECK(e.col > 10);
    CHECK(std::string(e.what()).find("zz") != std::string::npos);
  }
}

TEST_CASE("state positivity is enforced on parsed automata") {
  CHECK_THROWS_AS(from_text("alphabet a\nstates q0\ninitial q0\n"
                            "state q0: !q0\n"),
                  internal_error);
}

TEST_CASE("dot export names states and transitions") {
  automaton a = from_text(small_text);
  std::string dot = emit_dot(a);
  CHECK(dot.find("digraph asa {") == 0);
  CHECK(dot.find("__init -> \"q0\"") != std::string::npos);
  CHECK(dot.find("\"q0\" -> \"q1\" [label=\"a\"]") != std::string::npos);
  CHECK(dot.find("\"q0\" -> \"q0\" [label=\"a\"]") != std::string::npos);
  // the !a and b models of q1 have no successors: they accept
  CHECK(dot.find("\"q1\" -> __top") != std::string::npos);
  CHECK(dot.find("accept") != std::string::npos);
  CHECK(dot.rfind("}\n") == dot.size() - 2);
}
