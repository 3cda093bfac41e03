#include <doctest.h>

#include <chrono>
#include <memory>
#include <string>
#include <vector>

#include "alquant/errors.hpp"
#include "alquant/io.hpp"
#include "alquant/oracle.hpp"

using namespace alq;

namespace {

struct trans {
  std::shared_ptr<fun_manager> mgr = std::make_shared<fun_manager>();
  qptl_formula f;
  automaton a;

  explicit trans(const std::string& src) {
    f = parse_qptl(src);
    a = translate_to_asa(to_nnf(f.body), f.sigma(), mgr);
  }
};

automaton from_text(const std::string& text) {
  return parse_text(text, std::make_shared<fun_manager>());
}

}  // namespace

TEST_CASE("determinization preserves the language on sampled lassos") {
  for (const char* src : {"G (a -> X b)", "a W b", "G a", "G (a | X (b W a))",
                          "G (a -> X X b)"}) {
    CAPTURE(src);
    trans t(src);
    explicit_dsa d = determinize(t.a);
    CHECK(d.state_count() >= 1);
    for (const auto& row : d.next) CHECK(row.size() == d.letter_count());
    for (const lasso_word& w : sample_lassos(t.a.alphabet, 30, 5)) {
      CHECK(dsa_accepts(d, w, *t.mgr) == accepts_lasso(t.a, w));
    }
  }
}

TEST_CASE("the explicit automaton converts back without language change") {
  for (const char* src : {"G (a -> X b)", "a W b"}) {
    trans t(src);
    automaton back =
        dsa_to_automaton(determinize(t.a), std::make_shared<fun_manager>());
    CHECK(equivalent(t.a, back).equal);
  }
}

TEST_CASE("emptiness of the explicit automaton") {
  trans alive("G a");
  CHECK(!dsa_is_empty(determinize(alive.a)));
  automaton dead = from_text(
      "alphabet a\nstates q\ninitial q\nstate q: false\n");
  CHECK(dsa_is_empty(determinize(dead)));
}

TEST_CASE("universal projection forces every extension") {
  // all choices of a must satisfy a -> b, so b can never be off
  trans t("forall a. G (a -> b)");
  explicit_dsa pj = exact_forall(determinize(t.a), "a");
  REQUIRE(pj.vars == std::vector<std::string>{"b"});
  trans gb("G b");
  CHECK(equivalent(dsa_to_automaton(pj, std::make_shared<fun_manager>()),
                   gb.a)
            .equal);
}

TEST_CASE("existential projection keeps words with a good extension") {
  trans follow("exists a. G (a <-> b)");
  explicit_dsa pj = exact_exists(determinize(follow.a), "a");
  CHECK(!dsa_is_empty(pj));
  // the witness can copy b, so nothing is ruled out
  trans all_words("b | true");
  CHECK(equivalent(dsa_to_automaton(pj, std::make_shared<fun_manager>()),
                   all_words.a)
            .equal);

  trans off("exists a. G (a & !b)");
  explicit_dsa pj2 = exact_exists(determinize(off.a), "a");
  trans never_b("G !b");
  CHECK(equivalent(dsa_to_automaton(pj2, std::make_shared<fun_manager>()),
                   never_b.a)
            .equal);
}

TEST_CASE("projection order decides the dependency game") {
  trans t("forall a. exists b. G (a <-> b)");
  explicit_dsa d = determinize(t.a);
  // inner existential may react to a: satisfiable
  CHECK(!dsa_is_empty(exact_forall(exact_exists(d, "b"), "a")));
  // inner universal moves after b committed: empty
  CHECK(dsa_is_empty(exact_exists(exact_forall(d, "a"), "b")));
}

TEST_CASE("reference solver verdicts") {
  CHECK(oracle_solve(parse_qptl("forall a. exists b. G (a <-> b)")) ==
        verdict::sat);
  CHECK(oracle_solve(parse_qptl("exists b. forall a. G (a <-> b)")) ==
        verdict::unsat);
  CHECK(oracle_solve(parse_qptl("forall a. G a")) == verdict::unsat);
  CHECK(oracle_solve(parse_qptl("exists a. G a")) == verdict::sat);
  CHECK(oracle_solve(parse_qptl("exists a. G (a & X (!a | b))")) ==
        verdict::sat);
  CHECK(oracle_solve(parse_qptl("forall a. G (b & (X a | X !a))")) ==
        verdict::sat);
  CHECK(oracle_solve(parse_qptl("G x")) == verdict::sat);
  CHECK(oracle_solve(parse_qptl("G (x & !x)")) == verdict::unsat);
}

TEST_CASE("projections reject variables outside the alphabet") {
  trans t("exists a. G (a | b)");
  explicit_dsa d = determinize(t.a);
  CHECK_THROWS_AS(exact_exists(d, "zz"), unknown_variable);
  CHECK_THROWS_AS(exact_forall(d, "zz"), unknown_variable);
}

TEST_CASE("hard limits guard every construction") {
  trans wide("G (a & b & c & d)");
  CHECK_THROWS_AS(determinize(wide.a), resource_limit);

  trans t("G (a -> X b)");
  oracle_limits lim;
  lim.max_input_states = 1;
  CHECK_THROWS_AS(determinize(t.a, lim), resource_limit);

  oracle_limits tiny;
  tiny.max_states = 1;
  CHECK_THROWS_AS(determinize(t.a, tiny), subset_blowup);

  oracle_limits late;
  late.deadline = std::chrono::steady_clock::now() - std::chrono::seconds(1);
  CHECK_THROWS_AS(determinize(t.a, late), timeout_error);
}

TEST_CASE("inclusion produces validated counterexamples") {
  automaton broad = from_text(
      "alphabet a b\nstates q\ninitial q\nstate q: (a & q)\n");
  automaton narrow = from_text(
      "alphabet a b\nstates q\ninitial q\nstate q: (a & b & q)\n");
  CHECK(!includes(narrow, broad).has_value());

  auto w = includes(broad, narrow);
  REQUIRE(w.has_value());
  REQUIRE(!w->loop.empty());
  CHECK(accepts_lasso(broad, *w));
  CHECK(!accepts_lasso(narrow, *w));

  automaton none = from_text(
      "alphabet a b\nstates q\ninitial q\nstate q: false\n");
  CHECK(!includes(none, narrow).has_value());
  CHECK(!includes(none, broad).has_value());

  trans small("G a");
  CHECK_THROWS_AS(includes(small.a, broad), alphabet_mismatch);
}

TEST_CASE("equivalence reports a directed witness") {
  automaton broad = from_text(
      "alphabet a b\nstates q\ninitial q\nstate q: (a & q)\n");
  automaton narrow = from_text(
      "alphabet a b\nstates q\ninitial q\nstate q: (a & b & q)\n");
  CHECK(equivalent(broad, broad).equal);
  CHECK(equivalent(narrow, narrow).equal);

  equivalence_result r = equivalent(broad, narrow);
  REQUIRE(!r.equal);
  CHECK(r.witness_in_first);
  CHECK(accepts_lasso(broad, r.witness));
  CHECK(!accepts_lasso(narrow, r.witness));

  equivalence_result rev = equivalent(narrow, broad);
  REQUIRE(!rev.equal);
  CHECK(!rev.witness_in_first);
  CHECK(accepts_lasso(broad, rev.witness));
  CHECK(!accepts_lasso(narrow, rev.witness));
}

TEST_CASE("direct evaluation matches pinned truths") {
  fun_manager m;
  var_id a = m.make_var(var_kind::alphabet, "a");
  var_id b = m.make_var(var_kind::alphabet, "b");
  std::vector<var_id> alpha{a, b};
  auto body = [](const char* src) { return parse_qptl(src).body; };
  auto ev = [&](const char* src, const lasso_word& w) {
    return eval_ltl_on_lasso(body(src), w, alpha, m);
  };

  lasso_word later;  // {} ({a})^w
  later.stem = {{}};
  later.loop = {{a}};
  CHECK(ev("X G a", later));
  CHECK(!ev("G a", later));
  CHECK(ev("F a", later));
  CHECK(ev("F G a", later));
  CHECK(ev("G F a", later));
  CHECK(!ev("a U b", later));
  CHECK(ev("!b U a", later));
  CHECK(ev("true", later));
  CHECK(!ev("false", later));

  lasso_word blink;  // ({a} {})^w
  blink.loop = {{a}, {}};
  CHECK(ev("G F a", blink));
  CHECK(!ev("F G a", blink));
  CHECK(!ev("a -> X a", blink));
  CHECK(ev("a -> X X a", blink));

  lasso_word handover;  // {b} ({a})^w
  handover.stem = {{b}};
  handover.loop = {{a}};
  CHECK(ev("b U a", handover));
  CHECK(ev("b W a", handover));
  // the release point needs both sides at once
  CHECK(!ev("a R b", handover));
  CHECK(ev("a <-> !b", handover));

  CHECK_THROWS_AS(ev("c", later), unknown_variable);
}

TEST_CASE("lasso sampling is seeded and anchored") {
  fun_manager m;
  std::vector<var_id> alpha{m.make_var(var_kind::alphabet, "a"),
                            m.make_var(var_kind::alphabet, "b")};
  auto s1 = sample_lassos(alpha, 12, 42);
  auto s2 = sample_lassos(alpha, 12, 42);
  REQUIRE(s1.size() == 12);
  REQUIRE(s2.size() == 12);
  // fixed anchors: the all-empty loop and the all-full loop come first
  CHECK(s1[0].stem.empty());
  REQUIRE(s1[0].loop.size() == 1);
  CHECK(s1[0].loop[0].empty());
  CHECK(s1[1].stem.empty());
  REQUIRE(s1[1].loop.size() == 1);
  CHECK(s1[1].loop[0].size() == alpha.size());

  for (std::size_t i = 0; i < s1.size(); ++i) {
    CHECK(to_string(s1[i], m) == to_string(s2[i], m));
    CHECK(!s1[i].loop.empty());
  }
  auto s3 = sample_lassos(alpha, 12, 43);
  bool differs = false;
  for (std::size_t i = 0; i < s1.size(); ++i)
    differs |= to_string(s1[i], m) != to_string(s3[i], m);
  CHECK(differs);
}

TEST_CASE("differential rounds expose the agreeing intermediates") {
  qptl_formula f = parse_qptl("forall a. exists b. G (a <-> b)");
  std::vector<std::string> vars;
  std::vector<quant> quants;
  diff_report rep = differential_check(
      f, {}, {}, [&](const diff_round& r) {
        vars.push_back(r.var);
        quants.push_back(r.q);
        CHECK(r.before.state_count() >= 1);
        CHECK(r.after.state_count() >= 1);
        CHECK(r.exact.state_count() >= 1);
      });
  CHECK(rep.ok);
  CHECK(rep.detail.empty());
  CHECK(vars == std::vector<std::string>{"b", "a"});
  REQUIRE(quants.size() == 2);
  CHECK(quants[0] == quant::exists_q);
  CHECK(quants[1] == quant::forall_q);
}

TEST_CASE("differential agreement on the running examples") {
  for (const char* src :
       {"exists a. G (a & X (!a | b))", "forall a. G (b & (X a | X !a))",
        "exists a. forall b. G (a -> X b)", "exists a. G a"}) {
    CAPTURE(src);
    diff_report rep = differential_check(parse_qptl(src), {}, {});
    CHECK(rep.ok);
    CHECK(rep.detail.empty());
  }
  std::size_t calls = 0;
  diff_report open = differential_check(
      parse_qptl("G x"), {}, {}, [&](const diff_round&) { ++calls; });
  CHECK(open.ok);
  CHECK(calls == 0);
}

TEST_CASE("pipeline and reference solver agree on fixed formulas") {
  for (const char* src :
       {"exists a. G (a <-> b)", "forall a. G (a | b)",
        "exists a. forall b. G (a -> X b)",
        "forall a. exists b. G ((a -> b) & (b -> X a))",
        "exists a. a W b", "forall a. a W b"}) {
    CAPTURE(src);
    qptl_formula f = parse_qptl(src);
    CHECK(solve_qptl(f).v == oracle_solve(f));
  }
}
