#pragma once

// Canonical reduced ordered BDD store for the positive-in-states transition
// functions used throughout the pipeline.  Variable order is allocation
// order; no dynamic reordering.  Handles are canonical: two functions are
// equal iff their handles are equal.  The manager is single-threaded.

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "alquant/errors.hpp"

namespace alq {

enum class var_kind : std::uint8_t { alphabet, state };

struct var_id {
  std::uint32_t index = UINT32_MAX;
  friend bool operator==(var_id a, var_id b) { return a.index == b.index; }
  friend bool operator!=(var_id a, var_id b) { return a.index != b.index; }
  friend bool operator<(var_id a, var_id b) { return a.index < b.index; }
};

class fun_manager;

// Value handle into a fun_manager.  Default-constructed handles are invalid
// and may only be assigned to.
class bf {
 public:
  bf() = default;

  bool valid() const { return mgr_ != nullptr; }
  fun_manager* manager() const { return mgr_; }
  std::uint32_t node() const { return node_; }

  bool is_true() const { return node_ == 1; }
  bool is_false() const { return node_ == 0; }

  friend bool operator==(const bf& a, const bf& b) {
    return a.mgr_ == b.mgr_ && a.node_ == b.node_;
  }
  friend bool operator!=(const bf& a, const bf& b) { return !(a == b); }

 private:
  friend class fun_manager;
  bf(fun_manager* m, std::uint32_t n) : mgr_(m), node_(n) {}
  fun_manager* mgr_ = nullptr;
  std::uint32_t node_ = 0;
};

// A cube: conjunction of literals.  Both vectors are sorted by variable
// index; negatives never contain state-kind variables.
struct literal_set {
  std::vector<var_id> positives;
  std::vector<var_id> negatives;

  friend bool operator==(const literal_set& a, const literal_set& b) {
    return a.positives == b.positives && a.negatives == b.negatives;
  }
  friend bool operator<(const literal_set& a, const literal_set& b);
};

class fun_manager {
 public:
  // Node creation past the budget throws node_blowup; the default leaves
  // plenty of room for legitimate runs while keeping memory bounded.
  explicit fun_manager(std::size_t max_nodes = 2000000);
  fun_manager(const fun_manager&) = delete;
  fun_manager& operator=(const fun_manager&) = delete;

  var_id make_var(var_kind kind, std::string label);
  std::size_t var_count() const { return vars_.size(); }
  var_kind kind(var_id v) const;
  const std::string& label(var_id v) const;
  // Reverse lookup; returns nothing when no variable carries the label.
  std::optional<var_id> find_var(const std::string& label) const;

  bf tt() { return bf(this, 1); }
  bf ff() { return bf(this, 0); }
  bf var(var_id v);
  bf nvar(var_id v);

  std::size_t node_count() const { return nodes_.size(); }

  bf conj(bf a, bf b);
  bf disj(bf a, bf b);
  bf neg(bf a);
  bf implies(bf a, bf b);
  bf iff(bf a, bf b);

  // Cofactor under a partial assignment.
  bf restrict_fn(bf f, const std::vector<std::pair<var_id, bool>>& assign);
  // Exactly f[v:=1] | f[v:=0] and f[v:=1] & f[v:=0].
  bf exists_var(bf f, var_id v);
  bf forall_var(bf f, var_id v);

  // Prime implicant cubes of f.  Sound and complete: each cube implies f,
  // no literal can be dropped, their disjunction equals f, no cube subsumes
  // another.  Throws empty_function when f is constant false and
  // branch_blowup past `cap` cubes.
  std::vector<literal_set> minimal_models(bf f, std::size_t cap = 1000000);

  // Prime implicate clauses of f; each literal_set reads as a disjunction.
  // Dual of minimal_models: f implies each clause, no literal can be
  // dropped, their conjunction equals f, state variables only appear
  // positively.  Throws empty_function when f is constant true.
  std::vector<literal_set> minimal_clauses(bf f, std::size_t cap = 1000000);

  std::vector<var_id> support(bf f);
  bool is_positive_in(bf f, var_id v);
  bool eval(bf f, const std::vector<bool>& full_assign);

  // All total assignments over `over` (given sorted by index) satisfying f.
  // The support of f must be contained in `over`.  Deterministic order:
  // lexicographic with false before true.  More than `cap` assignments
  // throws branch_blowup.
  std::vector<std::vector<bool>> satisfying_assignments(
      bf f, const std::vector<var_id>& over, std::size_t cap = SIZE_MAX);

  // DNF of prime implicants, deterministic ordering; "true"/"false" for
  // constants.
  std::string to_dnf_string(bf f);

 private:
  struct node {
    std::uint32_t var;
    std::uint32_t lo, hi;
  };
  struct node_key {
    std::uint32_t var, lo, hi;
    bool operator==(const node_key& o) const {
      return var == o.var && lo == o.lo && hi == o.hi;
    }
  };
  struct node_key_hash {
    std::size_t operator()(const node_key& k) const {
      std::uint64_t h = k.var;
      h = h * 0x9e3779b97f4a7c15ull + k.lo;
      h = h * 0x9e3779b97f4a7c15ull + k.hi;
      return static_cast<std::size_t>(h ^ (h >> 32));
    }
  };
  struct var_info {
    var_kind kind;
    std::string label;
  };

  std::uint32_t mk(std::uint32_t var, std::uint32_t lo, std::uint32_t hi);
  std::uint32_t apply(int op, std::uint32_t a, std::uint32_t b);
  std::uint32_t neg_rec(std::uint32_t a);
  std::uint32_t restrict_rec(std::uint32_t n,
                             const std::vector<std::int8_t>& fixed,
                             std::unordered_map<std::uint32_t, std::uint32_t>& memo);
  void check(const bf& f) const;

  struct cube {
    // (var index, phase) pairs sorted by var index
    std::vector<std::pair<std::uint32_t, bool>> lits;
  };
  const std::vector<cube>& primes(std::uint32_t n);
  bool cube_implies(const cube& c, std::uint32_t g);

  std::size_t max_nodes_;
  std::vector<node> nodes_;
  std::unordered_map<node_key, std::uint32_t, node_key_hash> unique_;
  std::unordered_map<std::uint64_t, std::uint32_t> apply_cache_;
  std::unordered_map<std::uint32_t, std::uint32_t> neg_cache_;
  std::unordered_map<std::uint32_t, std::vector<cube>> prime_cache_;
  std::vector<var_info> vars_;
  std::unordered_map<std::string, std::uint32_t> by_label_;
};

std::string to_string(const literal_set& ls, const fun_manager& m);

}  // namespace alq
