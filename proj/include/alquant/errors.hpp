#pragma once

#include <stdexcept>
#include <string>

namespace alq {

struct error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Raised by the formula parser; positions are 1-based.
struct parse_error : error {
  int line, col;
  parse_error(const std::string& msg, int line, int col)
      : error(msg + " at " + std::to_string(line) + ":" + std::to_string(col)),
        line(line), col(col) {}
};

// A quantifier appeared below the prefix.
struct non_prenex_error : parse_error {
  using parse_error::parse_error;
};

// The formula leaves the supported safety fragment (F or U after negation
// normal form).
struct unsupported_fragment : error {
  std::string op;
  int line, col;
  unsupported_fragment(const std::string& op, int line, int col)
      : error("unsupported operator " + op + " at " + std::to_string(line) +
              ":" + std::to_string(col)),
        op(op), line(line), col(col) {}
};

struct unknown_state : error {
  using error::error;
};

struct unknown_variable : error {
  using error::error;
};

// Two function handles from different managers were combined.
struct manager_mismatch : error {
  using error::error;
};

// minimal_models was asked for models of the constant false function.
struct empty_function : error {
  using error::error;
};

// A lasso word mentions variables outside the automaton's alphabet.
struct alphabet_mismatch : error {
  using error::error;
};

struct resource_limit : error {
  using error::error;
};

struct subset_blowup : resource_limit {
  using resource_limit::resource_limit;
};

struct macro_blowup : resource_limit {
  using resource_limit::resource_limit;
};

struct branch_blowup : resource_limit {
  using resource_limit::resource_limit;
};

// The function store exceeded its node budget.
struct node_blowup : resource_limit {
  using resource_limit::resource_limit;
};

struct timeout_error : resource_limit {
  using resource_limit::resource_limit;
};

// An internal invariant failed; always a bug.
struct internal_error : error {
  using error::error;
};

}  // namespace alq
