#include <doctest.h>

#include <algorithm>
#include <memory>
#include <vector>

#include "alquant/conflicts.hpp"
#include "alquant/errors.hpp"
#include "alquant/frontend.hpp"

using namespace alq;

namespace {

struct fixture {
  std::shared_ptr<fun_manager> mgr = std::make_shared<fun_manager>();
  automaton a;
  var_id p;

  explicit fixture(const std::string& src) {
    qptl_formula f = parse_qptl(src);
    a = translate_to_asa(to_nnf(f.body), f.sigma(), mgr);
    p = *mgr->find_var(f.prefix.empty() ? f.free_vars[0] : f.prefix[0].var);
  }
};

std::vector<state_id> ids(std::initializer_list<std::uint32_t> vs) {
  std::vector<state_id> out;
  for (std::uint32_t v : vs) out.push_back(state_id{v});
  return out;
}

}  // namespace

TEST_CASE("labels print as sets of literal subsets") {
  CHECK(label_to_string(0, "a") == "{}");
  CHECK(label_to_string(1, "a") == "{{}}");
  CHECK(label_to_string(2, "a") == "{{a}}");
  CHECK(label_to_string(4, "a") == "{{!a}}");
  CHECK(label_to_string(8, "a") == "{{a, !a}}");
  CHECK(label_to_string(6, "p") == "{{p}, {!p}}");
  CHECK(label_to_string(15, "a") == "{{}, {a}, {!a}, {a, !a}}");
}

TEST_CASE("existential fixpoint on the two-state running example") {
  fixture f("exists a. G (a & X (!a | b))");
  conflict_report rep = existential_conflicts(f.a, f.p);
  CHECK(rep.conflict_set == ids({0, 1}));
  CHECK(rep.iterations == 2);
  REQUIRE(rep.history.size() == 3);
  // s0 sees {a}, s1 sees {!a}; one step later s0 accumulates both into one
  // subset and s1 settles on the empty observation
  CHECK(rep.history[0] == std::vector<conflict_label>{2, 4});
  CHECK(rep.history[1] == std::vector<conflict_label>{8, 1});
  CHECK(rep.history[2] == rep.history[1]);
}

TEST_CASE("universal fixpoint on the three-state running example") {
  fixture f("forall a. G (b & (X a | X !a))");
  conflict_report rep = universal_conflicts(f.a, f.p);
  CHECK(rep.conflict_set == ids({0, 1, 2}));
  CHECK(rep.iterations == 2);
  REQUIRE(rep.history.size() == 3);
  CHECK(rep.history[0] == std::vector<conflict_label>{1, 2, 4});
  // the two branches land in different post sets, so their subsets union
  CHECK(rep.history[1] == std::vector<conflict_label>{8, 1, 1});
  CHECK(rep.history[2] == rep.history[1]);
}

TEST_CASE("equal labels inside a shared post set never conflict existentially") {
  // both conjuncts observe {a} forever, so the two-member post set agrees
  fixture f("exists a. G (a & x) & G (a & y)");
  conflict_report rep = existential_conflicts(f.a, f.p);
  CHECK(rep.conflict_set.empty());
  CHECK(rep.history[0] == std::vector<conflict_label>{2, 2, 2});
}

TEST_CASE("singleton post sets never conflict existentially") {
  fixture f("exists a. G (a | b)");
  conflict_report rep = existential_conflicts(f.a, f.p);
  CHECK(rep.conflict_set.empty());
  CHECK(rep.iterations == 1);
  CHECK(rep.history[0] == std::vector<conflict_label>{2});
}

TEST_CASE("a weak-until loop keeps one consistent observation") {
  fixture f("exists a. a W b");
  conflict_report rep = existential_conflicts(f.a, f.p);
  CHECK(rep.conflict_set.empty());
  CHECK(rep.iterations == 2);
  // the release branch contributes {} next to the looping {a} subset
  REQUIRE(rep.history.size() == 3);
  CHECK(rep.history[0] == std::vector<conflict_label>{2});
  CHECK(rep.history[1] == std::vector<conflict_label>{3});
  CHECK(rep.history[2] == std::vector<conflict_label>{3});
}

TEST_CASE("equal labels across post sets never conflict universally") {
  // the two disjunctive branches observe {a} forever, in step
  fixture f("forall a. G (a & x) | G (a & y)");
  conflict_report rep = universal_conflicts(f.a, f.p);
  CHECK(rep.conflict_set.empty());
}

TEST_CASE("deterministic branching never conflicts universally") {
  // one post set per state leaves the universal detector nothing to compare
  fixture f("forall a. G (a & X (a & x))");
  conflict_report rep = universal_conflicts(f.a, f.p);
  CHECK(rep.conflict_set.empty());
  CHECK(rep.history[0] == std::vector<conflict_label>{2, 2});
}

TEST_CASE("a variable outside the alphabet is rejected") {
  fixture f("exists a. G (a & b)");
  var_id loose = f.mgr->make_var(var_kind::alphabet, "loose");
  CHECK_THROWS_AS(existential_conflicts(f.a, loose), unknown_variable);
  CHECK_THROWS_AS(universal_conflicts(f.a, loose), unknown_variable);
}

TEST_CASE("iteration counts stay within the label lattice bound") {
  for (const char* src :
       {"exists a. G (a & X (!a | b))", "forall a. G (b & (X a | X !a))",
        "exists a. G (x -> X X (a | !a))", "forall a. G ((a & X x) W b)"}) {
    fixture f(src);
    conflict_report e = existential_conflicts(f.a, f.p);
    conflict_report u = universal_conflicts(f.a, f.p);
    CHECK(e.iterations <= 2 * f.a.state_count() * 16);
    CHECK(u.iterations <= 2 * f.a.state_count() * 16);
  }
}

TEST_CASE("minimal hitting sets") {
  CHECK(minimal_hitting_sets({}) ==
        std::vector<std::vector<state_id>>{{}});
  CHECK(minimal_hitting_sets({ids({1, 2})}) ==
        std::vector<std::vector<state_id>>{ids({1}), ids({2})});
  // {2} meets both parts; {1,3} is the other minimal choice
  CHECK(minimal_hitting_sets({ids({1, 2}), ids({2, 3})}) ==
        std::vector<std::vector<state_id>>{ids({1, 3}), ids({2})});
  CHECK(minimal_hitting_sets({ids({1}), ids({2}), ids({1, 2})}) ==
        std::vector<std::vector<state_id>>{ids({1, 2})});
  // duplicate parts collapse
  CHECK(minimal_hitting_sets({ids({1, 2}), ids({1, 2})}) ==
        std::vector<std::vector<state_id>>{ids({1}), ids({2})});
  CHECK_THROWS_AS(
      minimal_hitting_sets({ids({0, 1}), ids({2, 3}), ids({4, 5})}, 3),
      branch_blowup);
}

TEST_CASE("pairwise decider flags the exact conflict participants") {
  fixture e("exists a. G (a & X (!a | b))");
  pair_conflict_decider dex(e.a, e.p, false);
  CHECK(dex.flagged() == ids({0, 1}));
  CHECK(dex.conflict(state_id{0}, state_id{1}));
  CHECK(pair_conflict_exists(e.a, e.p, state_id{0}, state_id{1}));

  fixture u("forall a. G (b & (X a | X !a))");
  pair_conflict_decider dfa(u.a, u.p, true);
  // the fixpoint flags everything, the exact decider only the branch pair
  CHECK(dfa.flagged() == ids({1, 2}));
  CHECK(dfa.conflict(state_id{1}, state_id{2}));
  CHECK(!dfa.conflict(state_id{0}, state_id{1}));
  CHECK(pair_conflict_forall(u.a, u.p, state_id{1}, state_id{2}));
  // a lone branch state observes only one literal of the pair
  CHECK(!pair_conflict_forall(u.a, u.p, state_id{1}, state_id{1}));
}

TEST_CASE("flagged pairs are contained in the fixpoint conflict set") {
  for (const char* src :
       {"exists a. G (a & X (!a | b))", "forall a. G (b & (X a | X !a))",
        "exists a. G ((a | x) & X (b W !a))",
        "forall a. G ((x -> X a) & (y -> X !a))"}) {
    fixture f(src);
    for (bool universal : {false, true}) {
      conflict_report rep = universal ? universal_conflicts(f.a, f.p)
                                      : existential_conflicts(f.a, f.p);
      pair_conflict_decider dec(f.a, f.p, universal);
      for (state_id q : dec.flagged())
        CHECK(std::binary_search(rep.conflict_set.begin(),
                                 rep.conflict_set.end(), q));
    }
  }
}
