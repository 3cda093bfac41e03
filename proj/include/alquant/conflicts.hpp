#pragma once

// Conflict analysis: which states must be merged before a quantifier over p
// can be pushed state-wise.  Two detectors per quantifier kind: a label
// fixpoint over the whole automaton and an exact pairwise reachability
// decider.  The fixpoint over-approximates the pairwise relation.

#include <cstdint>
#include <string>
#include <vector>

#include "alquant/automata.hpp"

namespace alq {

// A label is a set of subsets of {p, !p}.  Subset encoding: bit 0 = p,
// bit 1 = !p; a label sets mask bit k when subset k is a member.
using conflict_label = std::uint8_t;

std::string label_to_string(conflict_label label, const std::string& var_name);

struct conflict_report {
  std::vector<state_id> conflict_set;  // sorted
  // Iteration whose labels repeated an earlier row; detection has run for
  // every distinct label vector.
  std::size_t iterations = 0;
  // history[i][q] is the label of q at iteration i; the last row is the
  // repeated one.
  std::vector<std::vector<conflict_label>> history;
};

conflict_report existential_conflicts(const automaton& a, var_id p);
conflict_report universal_conflicts(const automaton& a, var_id p);

// All minimal sets meeting every part; {{}} when parts is empty.  Sorted,
// deduplicated.  Throws branch_blowup past `cap` candidates.
std::vector<std::vector<state_id>> minimal_hitting_sets(
    const std::vector<std::vector<state_id>>& parts, std::size_t cap = 100000);

// Exact pairwise decider.  Explores synchronized vertex pairs of run
// unfoldings from the initial state; a conflict on {q1, q2} is a pair of
// contradictory p-literals reachable after the pair itself was visited.
// Diagonal pairs share one choice, off-diagonal pairs choose independently.
// Existential choices are minimal models; universal choices are minimal
// hitting sets of the model state parts plus single p-literal observations.
class pair_conflict_decider {
 public:
  pair_conflict_decider(const automaton& a, var_id p, bool universal);

  bool conflict(state_id q1, state_id q2) const;

  // States with a conflicting partner other than themselves.
  std::vector<state_id> flagged() const;

 private:
  std::uint32_t n_;
  state_id initial_;
  // vertex: 0..n-1 states, n = p, n+1 = !p
  std::vector<std::vector<std::vector<std::uint32_t>>> units_;
};

bool pair_conflict_exists(const automaton& a, var_id p, state_id q1,
                          state_id q2);
bool pair_conflict_forall(const automaton& a, var_id p, state_id q1,
                          state_id q2);

}  // namespace alq
