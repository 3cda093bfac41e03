#pragma once

// Prenex QPTL surface syntax and the translation from the safety fragment
// of LTL to an alternating safety automaton.
//
// Grammar (binding strength, tightest first):
//
//   unary   ! X G F
//   binary  U W R          (right associative)
//   then    &  |  ->  <->
//
//   formula := ("exists" ident "." | "forall" ident ".")* body
//   atom    := ident | "true" | "false" | "(" body ")"
//
// Identifiers match [a-z][a-zA-Z0-9_]*; `#` starts a line comment.
// Quantifiers below the prefix raise non_prenex_error.  After negation
// normal form the body must stay inside the safety fragment (no F, no U),
// otherwise translation raises unsupported_fragment.

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "alquant/automata.hpp"

namespace alq {

enum class ltl_op {
  true_,
  false_,
  var_,
  not_,
  and_,
  or_,
  implies_,
  iff_,
  next_,
  always_,
  eventually_,
  until_,
  weak_until_,
  release_,
};

struct ltl_node;
using ltl = std::shared_ptr<const ltl_node>;

struct ltl_node {
  ltl_op op;
  std::string name;  // var_ only
  ltl lhs, rhs;      // unary ops use lhs
  int line = 0, col = 0;
};

ltl mk_const(bool value, int line = 0, int col = 0);
ltl mk_var(std::string name, int line = 0, int col = 0);
ltl mk_unary(ltl_op op, ltl child, int line = 0, int col = 0);
ltl mk_binary(ltl_op op, ltl lhs, ltl rhs, int line = 0, int col = 0);

// Renders with minimal parentheses; parsing the result reproduces the tree
// up to associativity.
std::string to_string(const ltl& f);

enum class quant { exists_q, forall_q };

struct quantifier {
  quant q;
  std::string var;
  int line = 0, col = 0;
};

struct qptl_formula {
  std::vector<quantifier> prefix;
  ltl body;
  // Body variables not bound by the prefix, in order of first appearance.
  std::vector<std::string> free_vars;

  // Alphabet for the body automaton: prefix variables first, then free ones.
  std::vector<std::string> sigma() const;
};

qptl_formula parse_qptl(const std::string& src);

std::string to_string(const qptl_formula& f);

// Rewrites to negation normal form: negation only on variables, -> and <->
// expanded.  May introduce F and U (the duals of G and R/W).
ltl to_nnf(const ltl& f);

// Body must be in negation normal form.  Temporal subformulas become states
// (shared when canonically identical); the initial state is merged with a
// temporal state whenever their transition functions coincide.
automaton translate_to_asa(const ltl& body, const std::vector<std::string>& sigma,
                           std::shared_ptr<fun_manager> mgr);

}  // namespace alq
