#pragma once

// Alternating safety automata with symbolic transition functions.  Each
// transition δ(q) is a single function over alphabet and state variables,
// positive in the state variables; every state is accepting, so a word is
// accepted iff an infinite run tree exists.

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "alquant/boolfun.hpp"

namespace alq {

struct state_id {
  std::uint32_t v = UINT32_MAX;
  friend bool operator==(state_id a, state_id b) { return a.v == b.v; }
  friend bool operator!=(state_id a, state_id b) { return a.v != b.v; }
  friend bool operator<(state_id a, state_id b) { return a.v < b.v; }
};

enum class origin_kind : std::uint8_t { subterm, macro, synthetic };

struct state_origin {
  origin_kind kind = origin_kind::synthetic;
  // macro states record the member set they stand for (ids of the automaton
  // they were built from)
  std::vector<state_id> members;
};

struct asa_state {
  std::string name;
  var_id var;
  state_origin origin;
};

struct automaton {
  std::shared_ptr<fun_manager> mgr;
  std::vector<var_id> alphabet;
  std::vector<asa_state> states;
  std::vector<bf> delta;
  state_id initial;

  std::size_t state_count() const { return states.size(); }
  std::optional<state_id> find_state(const std::string& name) const;
  std::optional<state_id> state_of_var(var_id v) const;
  bool in_alphabet(var_id v) const;
};

// Letters are the sets of alphabet variables that hold; lassos are
// ultimately periodic words u v^ω with |v| >= 1.
using letter = std::vector<var_id>;

struct lasso_word {
  std::vector<letter> stem;
  std::vector<letter> loop;
};

// Letters print as {a,c}: the variables true at that position.
std::string to_string(const letter& l, const fun_manager& m);
std::string to_string(const lasso_word& w, const fun_manager& m);

// Throws internal_error when a transition is not positive in some state
// variable or mentions a variable outside Σ ∪ Q.
void validate(const automaton& a);

// State parts of the minimal models of δ(q): sorted sets, deduplicated,
// in deterministic order.  Empty when δ(q) is false.
std::vector<std::vector<state_id>> post_sets(const automaton& a, state_id q);

// The p-literals occurring in some minimal model of δ(q).
literal_set literals_of(const automaton& a, state_id q, var_id p);

// Reflexive transitive closure of the post-set successor relation.
std::vector<state_id> reachable_states(const automaton& a, state_id q);

automaton statewise_exists(const automaton& a, var_id p);
automaton statewise_forall(const automaton& a, var_id p);

automaton prune_unreachable(const automaton& a);

// Substitute false for states with false transitions and collapse states
// with identical transition functions, to a fixpoint.  Language preserving.
automaton simplify_states(const automaton& a);

// Subset construction.  Output states are the subsets reachable from
// {initial}; each transition disjunct carries one successor subset.  The
// empty subset is a state that accepts everything.  Throws subset_blowup
// when more than `cap` subsets get materialized.
automaton nondeterminize(const automaton& a, std::size_t cap = 100000);

// Emptiness via the productive-subset fixpoint on nondeterminize(a).
bool is_empty(const automaton& a, std::size_t cap = 100000);

// Membership of an ultimately periodic word, by the greatest fixpoint over
// (state, position) pairs.
bool accepts_lasso(const automaton& a, const lasso_word& w);

// Test helper: bijective renaming match (alphabet matched by label).
bool isomorphic(const automaton& a, const automaton& b);

}  // namespace alq
