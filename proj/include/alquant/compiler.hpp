#pragma once

// Quantifier elimination on alternating safety automata.  Per quantifier:
// detect the conflict set M, compile conflicts away by merging M-subsets
// into macro states, then push the quantifier state-wise over the
// transition functions.  No complementation anywhere.

#include <chrono>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "alquant/automata.hpp"
#include "alquant/frontend.hpp"

namespace alq {

struct compile_config {
  std::size_t max_macro_states = 100000;
  std::size_t subset_cap = 100000;
  // Budget for function managers created on behalf of a run.
  std::size_t max_fun_nodes = 2000000;
  bool prune_each_round = true;
  bool simplify = true;
  // Replace the fixpoint conflict set by the states the exact pairwise
  // decider flags.
  bool pairwise_refine = false;
  std::string macro_prefix = "m";
  std::optional<std::chrono::steady_clock::time_point> deadline;
};

struct compile_result {
  automaton a;
  std::size_t macro_states = 0;
};

// Merge-compilation for an existential quantifier over p.  m_set holds the
// states to merge (sorted, deduplicated).  Macro states stand for nonempty
// subsets of m_set; the quantifier itself is not applied here.
compile_result compile_exists(const automaton& a,
                              const std::vector<state_id>& m_set,
                              const compile_config& cfg = {});

// Universal counterpart; macro states stand for member disjunction instead
// of conjunction and transitions are built as clause conjunctions.
compile_result compile_forall(const automaton& a,
                              const std::vector<state_id>& m_set,
                              const compile_config& cfg = {});

struct round_stats {
  std::string var;
  quant q = quant::exists_q;
  std::size_t fixpoint_conflicts = 0;  // |conflict set| from the fixpoint
  std::size_t merged_states = 0;       // |M| actually compiled
  std::size_t macro_states = 0;        // macro states materialized
  std::size_t states_before = 0;
  std::size_t states_after = 0;
  // Function store size when the round finished; nodes are never freed, so
  // this is the peak up to that point.
  std::size_t fun_node_peak = 0;
  long long millis = 0;
};

// One full elimination round: conflicts, compile, state-wise quantifier,
// then pruning and simplification per config.
automaton eliminate_quantifier(const automaton& a, var_id p, quant q,
                               const compile_config& cfg = {},
                               round_stats* stats = nullptr);

enum class verdict { sat, unsat };

struct run_stats {
  verdict v = verdict::unsat;
  std::vector<round_stats> rounds;
  std::size_t states_final = 0;
  std::size_t macros_total = 0;
  long long total_millis = 0;
};

// Translates the body, folds the prefix innermost-first, then decides
// emptiness.  Free variables stay in the alphabet (satisfiability reads
// them existentially).
run_stats solve_qptl(const qptl_formula& f, const compile_config& cfg = {});

const char* to_string(verdict v);

}  // namespace alq
