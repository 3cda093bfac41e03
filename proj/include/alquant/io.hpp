#pragma once

// Line-oriented textual automaton format and DOT export.  The text format
// is a golden-test surface: emission is deterministic and re-parsing an
// emitted automaton yields an isomorphic one.
//
//   alphabet a b
//   states q0 q1
//   initial q0
//   state q0: (a & q0 & q1)
//   state q1: !a | b
//
// Transitions are DNF of prime implicants; `#` starts a comment.

#include <memory>
#include <string>

#include "alquant/automata.hpp"

namespace alq {

std::string emit_text(const automaton& a);
automaton parse_text(const std::string& text, std::shared_ptr<fun_manager> mgr);

std::string emit_dot(const automaton& a);

}  // namespace alq
