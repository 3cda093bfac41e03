#include "alquant/boolfun.hpp"

#include <algorithm>
#include <functional>

namespace alq {

namespace {
enum { op_and = 0, op_or = 1, op_imp = 2, op_iff = 3 };

std::vector<std::pair<std::uint32_t, bool>> merged_lits(const literal_set& ls) {
  std::vector<std::pair<std::uint32_t, bool>> out;
  out.reserve(ls.positives.size() + ls.negatives.size());
  for (var_id v : ls.positives) out.emplace_back(v.index, true);
  for (var_id v : ls.negatives) out.emplace_back(v.index, false);
  std::sort(out.begin(), out.end());
  return out;
}
}  // namespace

bool operator<(const literal_set& a, const literal_set& b) {
  return merged_lits(a) < merged_lits(b);
}

fun_manager::fun_manager(std::size_t max_nodes) : max_nodes_(max_nodes) {
  nodes_.push_back({UINT32_MAX, 0, 0});  // false
  nodes_.push_back({UINT32_MAX, 1, 1});  // true
}

var_id fun_manager::make_var(var_kind kind, std::string label) {
  var_id v{static_cast<std::uint32_t>(vars_.size())};
  by_label_[label] = v.index;
  vars_.push_back({kind, std::move(label)});
  return v;
}

var_kind fun_manager::kind(var_id v) const {
  if (v.index >= vars_.size()) throw internal_error("bad variable id");
  return vars_[v.index].kind;
}

const std::string& fun_manager::label(var_id v) const {
  if (v.index >= vars_.size()) throw internal_error("bad variable id");
  return vars_[v.index].label;
}

std::optional<var_id> fun_manager::find_var(const std::string& label) const {
  auto it = by_label_.find(label);
  if (it == by_label_.end()) return std::nullopt;
  return var_id{it->second};
}

void fun_manager::check(const bf& f) const {
  if (!f.valid()) throw internal_error("invalid function handle");
  if (f.manager() != this) throw manager_mismatch("handles from different managers");
}

std::uint32_t fun_manager::mk(std::uint32_t var, std::uint32_t lo, std::uint32_t hi) {
  if (lo == hi) return lo;
  node_key key{var, lo, hi};
  auto it = unique_.find(key);
  if (it != unique_.end()) return it->second;
  if (nodes_.size() >= max_nodes_)
    throw node_blowup("function store exceeded " +
                      std::to_string(max_nodes_) + " nodes");
  std::uint32_t idx = static_cast<std::uint32_t>(nodes_.size());
  nodes_.push_back({var, lo, hi});
  unique_.emplace(key, idx);
  return idx;
}

bf fun_manager::var(var_id v) {
  if (v.index >= vars_.size()) throw internal_error("bad variable id");
  return bf(this, mk(v.index, 0, 1));
}

bf fun_manager::nvar(var_id v) {
  if (v.index >= vars_.size()) throw internal_error("bad variable id");
  return bf(this, mk(v.index, 1, 0));
}

std::uint32_t fun_manager::apply(int op, std::uint32_t a, std::uint32_t b) {
  switch (op) {
    case op_and:
      if (a == 0 || b == 0) return 0;
      if (a == 1) return b;
      if (b == 1) return a;
      if (a == b) return a;
      break;
    case op_or:
      if (a == 1 || b == 1) return 1;
      if (a == 0) return b;
      if (b == 0) return a;
      if (a == b) return a;
      break;
    case op_imp:
      if (a == 0 || b == 1) return 1;
      if (a == 1) return b;
      if (a == b) return 1;
      break;
    case op_iff:
      if (a == 1) return b;
      if (b == 1) return a;
      if (a == b) return 1;
      if (a == 0) return neg_rec(b);
      if (b == 0) return neg_rec(a);
      break;
  }
  std::uint32_t ca = a, cb = b;
  if (op != op_imp && ca > cb) std::swap(ca, cb);
  std::uint64_t key = (static_cast<std::uint64_t>(op) << 62) |
                      (static_cast<std::uint64_t>(ca) << 31) | cb;
  auto it = apply_cache_.find(key);
  if (it != apply_cache_.end()) return it->second;

  std::uint32_t va = nodes_[ca].var, vb = nodes_[cb].var;
  std::uint32_t top = std::min(va, vb);
  std::uint32_t a0 = va == top ? nodes_[ca].lo : ca;
  std::uint32_t a1 = va == top ? nodes_[ca].hi : ca;
  std::uint32_t b0 = vb == top ? nodes_[cb].lo : cb;
  std::uint32_t b1 = vb == top ? nodes_[cb].hi : cb;
  std::uint32_t r = mk(top, apply(op, a0, b0), apply(op, a1, b1));
  apply_cache_.emplace(key, r);
  return r;
}

std::uint32_t fun_manager::neg_rec(std::uint32_t a) {
  if (a == 0) return 1;
  if (a == 1) return 0;
  auto it = neg_cache_.find(a);
  if (it != neg_cache_.end()) return it->second;
  std::uint32_t r = mk(nodes_[a].var, neg_rec(nodes_[a].lo), neg_rec(nodes_[a].hi));
  neg_cache_.emplace(a, r);
  return r;
}

bf fun_manager::conj(bf a, bf b) {
  check(a); check(b);
  return bf(this, apply(op_and, a.node(), b.node()));
}

bf fun_manager::disj(bf a, bf b) {
  check(a); check(b);
  return bf(this, apply(op_or, a.node(), b.node()));
}

bf fun_manager::neg(bf a) {
  check(a);
  return bf(this, neg_rec(a.node()));
}

bf fun_manager::implies(bf a, bf b) {
  check(a); check(b);
  return bf(this, apply(op_imp, a.node(), b.node()));
}

bf fun_manager::iff(bf a, bf b) {
  check(a); check(b);
  return bf(this, apply(op_iff, a.node(), b.node()));
}

std::uint32_t fun_manager::restrict_rec(
    std::uint32_t n, const std::vector<std::int8_t>& fixed,
    std::unordered_map<std::uint32_t, std::uint32_t>& memo) {
  if (n <= 1) return n;
  auto it = memo.find(n);
  if (it != memo.end()) return it->second;
  const node nd = nodes_[n];
  std::uint32_t r;
  std::int8_t fx = nd.var < fixed.size() ? fixed[nd.var] : -1;
  if (fx == 0) {
    r = restrict_rec(nd.lo, fixed, memo);
  } else if (fx == 1) {
    r = restrict_rec(nd.hi, fixed, memo);
  } else {
    r = mk(nd.var, restrict_rec(nd.lo, fixed, memo),
           restrict_rec(nd.hi, fixed, memo));
  }
  memo.emplace(n, r);
  return r;
}

bf fun_manager::restrict_fn(bf f, const std::vector<std::pair<var_id, bool>>& assign) {
  check(f);
  std::vector<std::int8_t> fixed(vars_.size(), -1);
  for (auto& [v, b] : assign) {
    if (v.index >= vars_.size()) throw internal_error("bad variable id");
    fixed[v.index] = b ? 1 : 0;
  }
  std::unordered_map<std::uint32_t, std::uint32_t> memo;
  return bf(this, restrict_rec(f.node(), fixed, memo));
}

bf fun_manager::exists_var(bf f, var_id v) {
  return disj(restrict_fn(f, {{v, true}}), restrict_fn(f, {{v, false}}));
}

bf fun_manager::forall_var(bf f, var_id v) {
  return conj(restrict_fn(f, {{v, true}}), restrict_fn(f, {{v, false}}));
}

bool fun_manager::cube_implies(const cube& c, std::uint32_t g) {
  std::vector<std::int8_t> fixed(vars_.size(), -1);
  for (auto& [v, phase] : c.lits) fixed[v] = phase ? 1 : 0;
  std::unordered_map<std::uint32_t, std::uint32_t> memo;
  return restrict_rec(g, fixed, memo) == 1;
}

// All prime implicants, by cofactor recursion: primes of f that skip the top
// variable x are the primes of f0&f1; the ones with a literal on x are the
// primes of the matching cofactor that do not already imply f0&f1.
const std::vector<fun_manager::cube>& fun_manager::primes(std::uint32_t n) {
  auto it = prime_cache_.find(n);
  if (it != prime_cache_.end()) return it->second;

  std::vector<cube> out;
  if (n == 1) {
    out.push_back(cube{});
  } else if (n != 0) {
    const node nd = nodes_[n];
    std::uint32_t g = apply(op_and, nd.lo, nd.hi);
    std::vector<cube> pg = primes(g);
    std::vector<cube> p0 = primes(nd.lo);
    std::vector<cube> p1 = primes(nd.hi);
    out = std::move(pg);
    for (auto& c : p0) {
      if (cube_implies(c, g)) continue;
      cube e = c;
      e.lits.insert(e.lits.begin(), {nd.var, false});
      out.push_back(std::move(e));
    }
    for (auto& c : p1) {
      if (cube_implies(c, g)) continue;
      cube e = c;
      e.lits.insert(e.lits.begin(), {nd.var, true});
      out.push_back(std::move(e));
    }
    // keeps runaway enumeration from exhausting memory
    if (out.size() > 1000000)
      throw branch_blowup("more than 1000000 prime implicants");
  }
  return prime_cache_.emplace(n, std::move(out)).first->second;
}

std::vector<literal_set> fun_manager::minimal_models(bf f, std::size_t cap) {
  check(f);
  if (f.is_false()) throw empty_function("no models: function is false");
  const std::vector<cube>& pc = primes(f.node());
  if (pc.size() > cap)
    throw branch_blowup("more than " + std::to_string(cap) +
                        " prime implicants");
  std::vector<literal_set> out;
  out.reserve(pc.size());
  for (const cube& c : pc) {
    literal_set ls;
    for (auto& [v, phase] : c.lits) {
      if (phase) {
        ls.positives.push_back(var_id{v});
      } else {
        if (vars_[v].kind == var_kind::state)
          throw internal_error("negative state literal in minimal model");
        ls.negatives.push_back(var_id{v});
      }
    }
    out.push_back(std::move(ls));
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<literal_set> fun_manager::minimal_clauses(bf f, std::size_t cap) {
  check(f);
  if (f.is_true()) throw empty_function("no clauses: function is true");
  // A prime cube of !f negates literal by literal into a prime clause of f.
  const std::vector<cube>& pc = primes(neg(f).node());
  if (pc.size() > cap)
    throw branch_blowup("more than " + std::to_string(cap) +
                        " prime implicates");
  std::vector<literal_set> out;
  out.reserve(pc.size());
  for (const cube& c : pc) {
    literal_set ls;
    for (auto& [v, phase] : c.lits) {
      if (phase) {
        if (vars_[v].kind == var_kind::state)
          throw internal_error("negative state literal in minimal clause");
        ls.negatives.push_back(var_id{v});
      } else {
        ls.positives.push_back(var_id{v});
      }
    }
    out.push_back(std::move(ls));
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<var_id> fun_manager::support(bf f) {
  check(f);
  std::vector<var_id> out;
  std::vector<std::uint32_t> stack{f.node()};
  std::unordered_map<std::uint32_t, bool> seen;
  while (!stack.empty()) {
    std::uint32_t n = stack.back();
    stack.pop_back();
    if (n <= 1 || seen[n]) continue;
    seen[n] = true;
    out.push_back(var_id{nodes_[n].var});
    stack.push_back(nodes_[n].lo);
    stack.push_back(nodes_[n].hi);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

bool fun_manager::is_positive_in(bf f, var_id v) {
  bf f0 = restrict_fn(f, {{v, false}});
  bf f1 = restrict_fn(f, {{v, true}});
  return implies(f0, f1).is_true();
}

bool fun_manager::eval(bf f, const std::vector<bool>& full_assign) {
  check(f);
  std::uint32_t n = f.node();
  while (n > 1) {
    const node& nd = nodes_[n];
    if (nd.var >= full_assign.size())
      throw internal_error("assignment misses a support variable");
    n = full_assign[nd.var] ? nd.hi : nd.lo;
  }
  return n == 1;
}

std::vector<std::vector<bool>> fun_manager::satisfying_assignments(
    bf f, const std::vector<var_id>& over, std::size_t cap) {
  check(f);
  for (std::size_t i = 1; i < over.size(); ++i)
    if (!(over[i - 1] < over[i]))
      throw internal_error("satisfying_assignments: variables not sorted");
  std::vector<std::vector<bool>> out;
  std::vector<bool> cur(over.size(), false);
  std::function<void(std::uint32_t, std::size_t)> go =
      [&](std::uint32_t n, std::size_t i) {
        if (n == 0) return;
        if (i == over.size()) {
          if (n != 1)
            throw internal_error(
                "satisfying_assignments: support escapes the variable set");
          if (out.size() >= cap)
            throw branch_blowup("more than " + std::to_string(cap) +
                                " satisfying assignments");
          out.push_back(cur);
          return;
        }
        std::uint32_t nv = n > 1 ? nodes_[n].var : UINT32_MAX;
        if (nv < over[i].index)
          throw internal_error(
              "satisfying_assignments: support escapes the variable set");
        if (nv == over[i].index) {
          cur[i] = false;
          go(nodes_[n].lo, i + 1);
          cur[i] = true;
          go(nodes_[n].hi, i + 1);
        } else {
          cur[i] = false;
          go(n, i + 1);
          cur[i] = true;
          go(n, i + 1);
        }
        cur[i] = false;
      };
  go(f.node(), 0);
  return out;
}

std::string to_string(const literal_set& ls, const fun_manager& m) {
  auto lits = merged_lits(ls);
  std::string out;
  for (std::size_t i = 0; i < lits.size(); ++i) {
    if (i) out += " & ";
    if (!lits[i].second) out += "!";
    out += m.label(var_id{lits[i].first});
  }
  if (lits.size() > 1) out = "(" + out + ")";
  return out;
}

std::string fun_manager::to_dnf_string(bf f) {
  check(f);
  if (f.is_false()) return "false";
  if (f.is_true()) return "true";
  std::vector<literal_set> cubes = minimal_models(f);
  std::string out;
  for (std::size_t i = 0; i < cubes.size(); ++i) {
    if (i) out += " | ";
    out += to_string(cubes[i], *this);
  }
  return out;
}

}  // namespace alq
