#pragma once

// Reference constructions, independent of the compilation pipeline: explicit
// determinization, exact quantification on deterministic safety automata,
// language inclusion with counterexample lassos, direct LTL evaluation on
// lassos, and a complete solver built from these.  Everything here is
// intentionally brute force and guarded by hard limits.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "alquant/compiler.hpp"

namespace alq {

struct oracle_limits {
  std::size_t max_alphabet_vars = 3;
  std::size_t max_input_states = 12;
  // Total constructed states, counting both subset layers.
  std::size_t max_states = 10000;
  std::optional<std::chrono::steady_clock::time_point> deadline;
};

// Deterministic safety automaton with explicit letters.  Letter index bit i
// is the truth value of vars[i].  Dead states reject every continuation.
struct explicit_dsa {
  std::vector<std::string> vars;
  std::uint32_t initial = 0;
  std::vector<std::vector<std::uint32_t>> next;  // [state][letter]
  std::vector<bool> dead;

  std::size_t letter_count() const { return std::size_t{1} << vars.size(); }
  std::size_t state_count() const { return next.size(); }
};

// Subset construction over the nondeterminized automaton; exact.
explicit_dsa determinize(const automaton& a, const oracle_limits& lim = {});

// Language projections.  exact_exists keeps a word when some extension of
// the removed variable is accepted, exact_forall when all extensions are.
explicit_dsa exact_exists(const explicit_dsa& d, const std::string& var,
                          const oracle_limits& lim = {});
explicit_dsa exact_forall(const explicit_dsa& d, const std::string& var,
                          const oracle_limits& lim = {});

// Lasso variables are resolved against d.vars by label.
bool dsa_accepts(const explicit_dsa& d, const lasso_word& w,
                 const fun_manager& m);

bool dsa_is_empty(const explicit_dsa& d);

automaton dsa_to_automaton(const explicit_dsa& d,
                           std::shared_ptr<fun_manager> mgr);

// A lasso in L(a) \ L(b), or nothing when L(a) is included in L(b).
// Alphabets must agree as label sets.
std::optional<lasso_word> includes(const automaton& a, const automaton& b,
                                   const oracle_limits& lim = {});

struct equivalence_result {
  bool equal = true;
  lasso_word witness;
  bool witness_in_first = false;  // witness in L(a) \ L(b) vs L(b) \ L(a)
};

equivalence_result equivalent(const automaton& a, const automaton& b,
                              const oracle_limits& lim = {});

// Direct semantics on an ultimately periodic word; accepts full LTL.
bool eval_ltl_on_lasso(const ltl& f, const lasso_word& w,
                       const std::vector<var_id>& alphabet,
                       const fun_manager& m);

// Seeded, deterministic; always includes the all-empty and all-full loops.
std::vector<lasso_word> sample_lassos(const std::vector<var_id>& alphabet,
                                      std::size_t count, std::uint64_t seed);

// Complete reference solver: determinize once, then exact projections
// innermost-first.
verdict oracle_solve(const qptl_formula& f, const oracle_limits& lim = {});

// One agreed round of a differential run.  `before` and `after` are the
// pipeline automata around the elimination, `exact` the reference language
// after the same projection.
struct diff_round {
  std::string var;
  quant q;
  automaton before;
  automaton after;
  explicit_dsa exact;
};

struct diff_report {
  bool ok = true;
  std::string detail;  // human readable mismatch description, empty when ok
};

// Eliminates the prefix innermost-first, checking the pipeline against the
// exact projection after every round and comparing final verdicts.  Stops at
// the first disagreement.  `lim.max_input_states` only restricts the initial
// determinization; round equivalences are guarded by `lim.max_states` and the
// deadline.  `on_round` runs after each agreeing round.
diff_report differential_check(
    const qptl_formula& f, const compile_config& cfg, const oracle_limits& lim,
    const std::function<void(const diff_round&)>& on_round = {});

}  // namespace alq
