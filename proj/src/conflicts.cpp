#include "alquant/conflicts.hpp"

#include <algorithm>
#include <array>
#include <deque>
#include <functional>
#include <set>

namespace alq {

std::string label_to_string(conflict_label label, const std::string& var_name) {
  static const char* const shapes[] = {"{}", "{%}", "{!%}", "{%, !%}"};
  std::string out = "{";
  bool first = true;
  for (int k = 0; k < 4; ++k) {
    if (!(label & (1u << k))) continue;
    if (!first) out += ", ";
    first = false;
    for (const char* c = shapes[k]; *c; ++c) {
      if (*c == '%') out += var_name; else out += *c;
    }
  }
  out += "}";
  return out;
}

namespace {

// Union of a label's member subsets, as a subset encoding.
int flatten(conflict_label label) {
  int u = 0;
  for (int k = 0; k < 4; ++k)
    if (label & (1u << k)) u |= k;
  return u;
}

int encode_literals(const automaton& a, state_id q, var_id p) {
  if (a.delta[q.v].is_false()) return 0;
  literal_set ls = literals_of(a, q, p);
  int e = 0;
  if (std::find(ls.positives.begin(), ls.positives.end(), p) !=
      ls.positives.end())
    e |= 1;
  if (std::find(ls.negatives.begin(), ls.negatives.end(), p) !=
      ls.negatives.end())
    e |= 2;
  return e;
}

conflict_report run_fixpoint(const automaton& a, var_id p, bool universal) {
  validate(a);
  if (!a.in_alphabet(p))
    throw unknown_variable("variable '" + a.mgr->label(p) +
                           "' is not in the alphabet");
  std::size_t n = a.state_count();
  std::vector<std::vector<std::vector<state_id>>> post(n);
  std::vector<std::vector<state_id>> reach(n);
  for (std::size_t q = 0; q < n; ++q) {
    post[q] = post_sets(a, state_id{static_cast<std::uint32_t>(q)});
    reach[q] = reachable_states(a, state_id{static_cast<std::uint32_t>(q)});
  }

  conflict_report rep;
  std::vector<conflict_label> row(n);
  for (std::size_t q = 0; q < n; ++q)
    row[q] = static_cast<conflict_label>(
        1u << encode_literals(a, state_id{static_cast<std::uint32_t>(q)}, p));
  rep.history.push_back(row);

  std::set<std::uint32_t> conflicts;
  auto add_pair = [&](state_id q1, state_id q2) {
    for (state_id r : reach[q1.v]) conflicts.insert(r.v);
    for (state_id r : reach[q2.v]) conflicts.insert(r.v);
  };

  for (std::size_t i = 1;; ++i) {
    const std::vector<conflict_label>& prev = rep.history.back();

    // detection uses the labels of the previous iteration
    for (std::size_t q = 0; q < n; ++q) {
      if (!universal) {
        for (const auto& X : post[q])
          for (state_id q1 : X)
            for (state_id q2 : X)
              if (prev[q1.v] != prev[q2.v]) add_pair(q1, q2);
      } else {
        for (std::size_t x = 0; x < post[q].size(); ++x)
          for (std::size_t y = x + 1; y < post[q].size(); ++y)
            for (state_id q1 : post[q][x])
              for (state_id q2 : post[q][y])
                if (prev[q1.v] != prev[q2.v]) add_pair(q1, q2);
      }
    }

    std::vector<conflict_label> next(n);
    for (std::size_t q = 0; q < n; ++q) {
      if (!universal) {
        conflict_label l = 0;
        for (const auto& X : post[q]) {
          int u = 0;
          for (state_id q1 : X) u |= flatten(prev[q1.v]);
          l |= static_cast<conflict_label>(1u << u);
        }
        next[q] = l;
      } else {
        int u = 0;
        for (const auto& X : post[q])
          for (state_id q1 : X) u |= flatten(prev[q1.v]);
        next[q] = static_cast<conflict_label>(1u << u);
      }
    }

    bool repeated = false;
    for (const auto& earlier : rep.history)
      if (earlier == next) { repeated = true; break; }
    rep.history.push_back(std::move(next));
    if (repeated) {
      rep.iterations = i;
      break;
    }
  }

  for (std::uint32_t q : conflicts) rep.conflict_set.push_back(state_id{q});
  return rep;
}

}  // namespace

conflict_report existential_conflicts(const automaton& a, var_id p) {
  return run_fixpoint(a, p, false);
}

conflict_report universal_conflicts(const automaton& a, var_id p) {
  return run_fixpoint(a, p, true);
}

std::vector<std::vector<state_id>> minimal_hitting_sets(
    const std::vector<std::vector<state_id>>& parts, std::size_t cap) {
  std::vector<std::vector<state_id>> found;
  std::vector<state_id> current;
  // branch on the elements of the first part the current set misses
  auto hit = [&](const std::vector<state_id>& part) {
    for (state_id s : part)
      if (std::find(current.begin(), current.end(), s) != current.end())
        return true;
    return false;
  };
  std::function<void()> go = [&]() {
    const std::vector<state_id>* miss = nullptr;
    for (const auto& part : parts) {
      if (!hit(part)) { miss = &part; break; }
    }
    if (!miss) {
      if (found.size() >= cap)
        throw branch_blowup("hitting set enumeration exceeded " +
                            std::to_string(cap) + " candidates");
      found.push_back(current);
      std::sort(found.back().begin(), found.back().end());
      return;
    }
    for (state_id s : *miss) {
      current.push_back(s);
      go();
      current.pop_back();
    }
  };
  go();

  std::sort(found.begin(), found.end());
  found.erase(std::unique(found.begin(), found.end()), found.end());
  // drop non-minimal candidates
  std::vector<std::vector<state_id>> out;
  for (const auto& c : found) {
    bool minimal = true;
    for (const auto& other : found) {
      if (other.size() < c.size() &&
          std::includes(c.begin(), c.end(), other.begin(), other.end())) {
        minimal = false;
        break;
      }
    }
    if (minimal) out.push_back(c);
  }
  return out;
}

pair_conflict_decider::pair_conflict_decider(const automaton& a, var_id p,
                                             bool universal) {
  validate(a);
  if (!a.in_alphabet(p))
    throw unknown_variable("variable '" + a.mgr->label(p) +
                           "' is not in the alphabet");
  n_ = static_cast<std::uint32_t>(a.state_count());
  initial_ = a.initial;
  units_.resize(n_);
  const std::uint32_t lit_p = n_, lit_np = n_ + 1;
  for (std::uint32_t q = 0; q < n_; ++q) {
    if (a.delta[q].is_false()) continue;
    auto models = a.mgr->minimal_models(a.delta[q]);
    if (!universal) {
      for (const literal_set& m : models) {
        std::vector<std::uint32_t> vertices;
        for (var_id v : m.positives) {
          if (a.mgr->kind(v) == var_kind::state)
            vertices.push_back(a.state_of_var(v)->v);
          else if (v == p)
            vertices.push_back(lit_p);
        }
        for (var_id v : m.negatives)
          if (v == p) vertices.push_back(lit_np);
        std::sort(vertices.begin(), vertices.end());
        units_[q].push_back(std::move(vertices));
      }
    } else {
      bool saw_p = false, saw_np = false;
      std::vector<std::vector<state_id>> parts;
      for (const literal_set& m : models) {
        std::vector<state_id> part;
        for (var_id v : m.positives) {
          if (a.mgr->kind(v) == var_kind::state)
            part.push_back(*a.state_of_var(v));
          else if (v == p)
            saw_p = true;
        }
        for (var_id v : m.negatives)
          if (v == p) saw_np = true;
        if (!part.empty()) parts.push_back(std::move(part));
      }
      if (saw_p) units_[q].push_back({lit_p});
      if (saw_np) units_[q].push_back({lit_np});
      if (!parts.empty()) {
        for (auto& h : minimal_hitting_sets(parts)) {
          std::vector<std::uint32_t> vertices;
          for (state_id s : h) vertices.push_back(s.v);
          units_[q].push_back(std::move(vertices));
        }
      }
    }
  }
}

bool pair_conflict_decider::conflict(state_id q1, state_id q2) const {
  const std::uint32_t lit_p = n_, lit_np = n_ + 1;
  const std::uint32_t side = n_ + 2;
  auto idx = [&](std::uint32_t u, std::uint32_t v, bool flag) {
    if (u > v) std::swap(u, v);
    return (u * side + v) * 2 + (flag ? 1 : 0);
  };
  std::vector<bool> seen(side * side * 2, false);
  std::deque<std::array<std::uint32_t, 3>> work;
  auto push = [&](std::uint32_t u, std::uint32_t v, bool flag) {
    if (u > v) std::swap(u, v);
    std::uint32_t k = idx(u, v, flag);
    if (seen[k]) return;
    seen[k] = true;
    work.push_back({u, v, flag ? 1u : 0u});
  };
  push(initial_.v, initial_.v, false);
  const std::uint32_t a1 = std::min(q1.v, q2.v), a2 = std::max(q1.v, q2.v);
  while (!work.empty()) {
    auto [u, v, fl] = work.front();
    work.pop_front();
    bool flag = fl != 0;
    if (((u == lit_p && v == lit_np) || (u == lit_np && v == lit_p)) && flag)
      return true;
    if (u >= n_ || v >= n_) continue;  // literal vertices have no successors
    bool next_flag = flag || (u == a1 && v == a2);
    if (u == v) {
      for (const auto& unit : units_[u])
        for (std::uint32_t x : unit)
          for (std::uint32_t y : unit) push(x, y, next_flag);
    } else {
      for (const auto& u1 : units_[u])
        for (const auto& u2 : units_[v])
          for (std::uint32_t x : u1)
            for (std::uint32_t y : u2) push(x, y, next_flag);
    }
  }
  return false;
}

std::vector<state_id> pair_conflict_decider::flagged() const {
  std::vector<state_id> out;
  for (std::uint32_t q = 0; q < n_; ++q) {
    for (std::uint32_t r = 0; r < n_; ++r) {
      if (r == q) continue;
      if (conflict(state_id{q}, state_id{r})) {
        out.push_back(state_id{q});
        break;
      }
    }
  }
  return out;
}

bool pair_conflict_exists(const automaton& a, var_id p, state_id q1,
                          state_id q2) {
  return pair_conflict_decider(a, p, false).conflict(q1, q2);
}

bool pair_conflict_forall(const automaton& a, var_id p, state_id q1,
                          state_id q2) {
  return pair_conflict_decider(a, p, true).conflict(q1, q2);
}

}  // namespace alq
