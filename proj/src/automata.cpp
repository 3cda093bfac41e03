#include "alquant/automata.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>

namespace alq {

std::optional<state_id> automaton::find_state(const std::string& name) const {
  for (std::uint32_t i = 0; i < states.size(); ++i)
    if (states[i].name == name) return state_id{i};
  return std::nullopt;
}

std::optional<state_id> automaton::state_of_var(var_id v) const {
  for (std::uint32_t i = 0; i < states.size(); ++i)
    if (states[i].var == v) return state_id{i};
  return std::nullopt;
}

bool automaton::in_alphabet(var_id v) const {
  return std::find(alphabet.begin(), alphabet.end(), v) != alphabet.end();
}

std::string to_string(const letter& l, const fun_manager& m) {
  std::string out = "{";
  for (std::size_t i = 0; i < l.size(); ++i) {
    if (i) out += ",";
    out += m.label(l[i]);
  }
  return out + "}";
}

std::string to_string(const lasso_word& w, const fun_manager& m) {
  std::string out = "stem:";
  for (const letter& l : w.stem) out += " " + to_string(l, m);
  out += " loop:";
  for (const letter& l : w.loop) out += " " + to_string(l, m);
  return out;
}

void validate(const automaton& a) {
  if (!a.mgr) throw internal_error("automaton without manager");
  if (a.delta.size() != a.states.size())
    throw internal_error("transition table size mismatch");
  if (a.initial.v >= a.states.size()) throw internal_error("bad initial state");
  std::set<std::uint32_t> statevars;
  for (auto& s : a.states) {
    if (a.mgr->kind(s.var) != var_kind::state)
      throw internal_error("state bound to a non-state variable");
    statevars.insert(s.var.index);
  }
  std::set<std::uint32_t> alpha;
  for (var_id v : a.alphabet) {
    if (a.mgr->kind(v) != var_kind::alphabet)
      throw internal_error("alphabet contains a state variable");
    alpha.insert(v.index);
  }
  for (std::size_t i = 0; i < a.delta.size(); ++i) {
    for (var_id v : a.mgr->support(a.delta[i])) {
      if (a.mgr->kind(v) == var_kind::state) {
        if (!statevars.count(v.index))
          throw internal_error("transition mentions a foreign state variable");
        if (!a.mgr->is_positive_in(a.delta[i], v))
          throw internal_error("transition not positive in state " +
                               a.mgr->label(v));
      } else if (!alpha.count(v.index)) {
        throw internal_error("transition mentions variable outside alphabet: " +
                             a.mgr->label(v));
      }
    }
  }
}

static state_id require_state(const automaton& a, state_id q) {
  if (q.v >= a.states.size())
    throw unknown_state("no state with id " + std::to_string(q.v));
  return q;
}

std::vector<std::vector<state_id>> post_sets(const automaton& a, state_id q) {
  require_state(a, q);
  if (a.delta[q.v].is_false()) return {};
  std::set<std::vector<state_id>> seen;
  for (const literal_set& m : a.mgr->minimal_models(a.delta[q.v])) {
    std::vector<state_id> part;
    for (var_id v : m.positives)
      if (a.mgr->kind(v) == var_kind::state)
        part.push_back(*a.state_of_var(v));
    std::sort(part.begin(), part.end());
    seen.insert(std::move(part));
  }
  return {seen.begin(), seen.end()};
}

literal_set literals_of(const automaton& a, state_id q, var_id p) {
  require_state(a, q);
  literal_set out;
  if (a.delta[q.v].is_false()) return out;
  bool pos = false, neg = false;
  for (const literal_set& m : a.mgr->minimal_models(a.delta[q.v])) {
    for (var_id v : m.positives) pos |= v == p;
    for (var_id v : m.negatives) neg |= v == p;
  }
  if (pos) out.positives.push_back(p);
  if (neg) out.negatives.push_back(p);
  return out;
}

std::vector<state_id> reachable_states(const automaton& a, state_id q) {
  require_state(a, q);
  std::set<state_id> seen{q};
  std::vector<state_id> work{q};
  while (!work.empty()) {
    state_id cur = work.back();
    work.pop_back();
    for (const auto& part : post_sets(a, cur))
      for (state_id s : part)
        if (seen.insert(s).second) work.push_back(s);
  }
  return {seen.begin(), seen.end()};
}

static automaton statewise(const automaton& a, var_id p, bool universal) {
  validate(a);
  if (!a.in_alphabet(p))
    throw unknown_variable("not an alphabet variable of this automaton: " +
                           a.mgr->label(p));
  automaton out = a;
  out.alphabet.erase(std::remove(out.alphabet.begin(), out.alphabet.end(), p),
                     out.alphabet.end());
  for (auto& d : out.delta)
    d = universal ? a.mgr->forall_var(d, p) : a.mgr->exists_var(d, p);
  return out;
}

automaton statewise_exists(const automaton& a, var_id p) {
  return statewise(a, p, false);
}

automaton statewise_forall(const automaton& a, var_id p) {
  return statewise(a, p, true);
}

static automaton keep_states(const automaton& a, const std::vector<bool>& keep) {
  automaton out;
  out.mgr = a.mgr;
  out.alphabet = a.alphabet;
  std::vector<std::uint32_t> remap(a.states.size(), UINT32_MAX);
  for (std::uint32_t i = 0; i < a.states.size(); ++i) {
    if (!keep[i]) continue;
    remap[i] = static_cast<std::uint32_t>(out.states.size());
    out.states.push_back(a.states[i]);
    out.delta.push_back(a.delta[i]);
  }
  if (remap[a.initial.v] == UINT32_MAX)
    throw internal_error("initial state dropped");
  out.initial = state_id{remap[a.initial.v]};
  return out;
}

automaton prune_unreachable(const automaton& a) {
  validate(a);
  std::vector<bool> keep(a.states.size(), false);
  for (state_id q : reachable_states(a, a.initial)) keep[q.v] = true;
  return keep_states(a, keep);
}

// var(t) := var(s) in f, keeping canonicity
static bf subst_var(fun_manager& m, bf f, var_id t, var_id s) {
  bf f1 = m.restrict_fn(f, {{t, true}});
  bf f0 = m.restrict_fn(f, {{t, false}});
  return m.disj(m.conj(m.var(s), f1), m.conj(m.neg(m.var(s)), f0));
}

automaton simplify_states(const automaton& a) {
  automaton cur = a;
  for (;;) {
    bool changed = false;
    // states with false transitions can never root an accepting subtree
    std::vector<std::pair<var_id, bool>> dead;
    std::vector<bool> keep(cur.states.size(), true);
    for (std::uint32_t i = 0; i < cur.states.size(); ++i) {
      if (cur.delta[i].is_false() && state_id{i} != cur.initial) {
        dead.push_back({cur.states[i].var, false});
        keep[i] = false;
      }
    }
    if (!dead.empty()) {
      for (auto& d : cur.delta) d = cur.mgr->restrict_fn(d, dead);
      cur = keep_states(cur, keep);
      changed = true;
    }
    // equal transition functions mean bisimilar states
    std::map<std::uint32_t, std::uint32_t> rep;  // delta node -> state id
    std::vector<bool> keep2(cur.states.size(), true);
    std::vector<std::pair<var_id, var_id>> renames;
    for (std::uint32_t i = 0; i < cur.states.size(); ++i) {
      auto [it, fresh] = rep.emplace(cur.delta[i].node(), i);
      if (!fresh) {
        keep2[i] = false;
        renames.push_back({cur.states[i].var, cur.states[it->second].var});
        if (cur.initial == state_id{i}) cur.initial = state_id{it->second};
      }
    }
    if (!renames.empty()) {
      for (auto& d : cur.delta)
        for (auto& [t, s] : renames) d = subst_var(*cur.mgr, d, t, s);
      cur = keep_states(cur, keep2);
      changed = true;
    }
    if (!changed) return cur;
  }
}

static std::string subset_name(const automaton& a, const std::vector<state_id>& set) {
  std::string n = "{";
  for (std::size_t i = 0; i < set.size(); ++i) {
    if (i) n += ",";
    n += a.states[set[i].v].name;
  }
  return n + "}";
}

automaton nondeterminize(const automaton& a, std::size_t cap) {
  validate(a);
  automaton out;
  out.mgr = a.mgr;
  out.alphabet = a.alphabet;

  std::map<std::vector<state_id>, std::uint32_t> index;
  std::vector<std::vector<state_id>> work;
  auto intern = [&](const std::vector<state_id>& set) {
    auto it = index.find(set);
    if (it != index.end()) return it->second;
    if (out.states.size() >= cap)
      throw subset_blowup("subset construction exceeded " + std::to_string(cap) +
                          " states");
    std::uint32_t id = static_cast<std::uint32_t>(out.states.size());
    index.emplace(set, id);
    var_id v = out.mgr->make_var(var_kind::state, subset_name(a, set));
    out.states.push_back({subset_name(a, set), v, {origin_kind::macro, set}});
    out.delta.push_back(out.mgr->ff());
    work.push_back(set);
    return id;
  };

  out.initial = state_id{intern({a.initial})};
  while (!work.empty()) {
    std::vector<state_id> set = std::move(work.back());
    work.pop_back();
    std::uint32_t id = index.at(set);
    if (set.empty()) {
      // no obligations left: accept everything
      out.delta[id] = out.mgr->var(out.states[id].var);
      continue;
    }
    bf conj = a.mgr->tt();
    for (state_id q : set) conj = a.mgr->conj(conj, a.delta[q.v]);
    if (conj.is_false()) {
      out.delta[id] = out.mgr->ff();
      continue;
    }
    bf d = out.mgr->ff();
    for (const literal_set& m : a.mgr->minimal_models(conj)) {
      bf cube = out.mgr->tt();
      std::vector<state_id> succ;
      for (var_id v : m.positives) {
        if (a.mgr->kind(v) == var_kind::state)
          succ.push_back(*a.state_of_var(v));
        else
          cube = out.mgr->conj(cube, out.mgr->var(v));
      }
      for (var_id v : m.negatives) cube = out.mgr->conj(cube, out.mgr->nvar(v));
      std::sort(succ.begin(), succ.end());
      std::uint32_t succ_id = intern(succ);
      d = out.mgr->disj(d, out.mgr->conj(cube, out.mgr->var(out.states[succ_id].var)));
    }
    out.delta[id] = d;
  }
  return out;
}

bool is_empty(const automaton& a, std::size_t cap) {
  automaton n = nondeterminize(a, cap);
  // lists of successor subset-states per state
  std::vector<std::vector<std::vector<std::uint32_t>>> succ(n.states.size());
  for (std::uint32_t i = 0; i < n.states.size(); ++i)
    for (const auto& part : post_sets(n, state_id{i})) {
      std::vector<std::uint32_t> ids;
      for (state_id s : part) ids.push_back(s.v);
      succ[i].push_back(std::move(ids));
    }
  std::vector<bool> alive(n.states.size(), true);
  for (bool changed = true; changed;) {
    changed = false;
    for (std::uint32_t i = 0; i < n.states.size(); ++i) {
      if (!alive[i]) continue;
      bool productive = false;
      for (const auto& part : succ[i]) {
        bool ok = true;
        for (std::uint32_t s : part) ok &= alive[s];
        if (ok) { productive = true; break; }
      }
      if (!productive) {
        alive[i] = false;
        changed = true;
      }
    }
  }
  return !alive[n.initial.v];
}

bool accepts_lasso(const automaton& a, const lasso_word& w) {
  validate(a);
  if (w.loop.empty()) throw internal_error("lasso needs a nonempty loop");
  std::vector<letter> word = w.stem;
  word.insert(word.end(), w.loop.begin(), w.loop.end());
  const std::size_t n = word.size();

  std::set<std::uint32_t> alpha;
  for (var_id v : a.alphabet) alpha.insert(v.index);
  for (const letter& l : word)
    for (var_id v : l)
      if (!alpha.count(v.index))
        throw alphabet_mismatch("letter mentions " + a.mgr->label(v) +
                                " outside the alphabet");

  // state parts of the minimal models of δ(q) under each position's letter
  std::vector<std::vector<std::vector<std::vector<std::uint32_t>>>> moves(
      n, std::vector<std::vector<std::vector<std::uint32_t>>>(a.states.size()));
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::pair<var_id, bool>> assign;
    for (var_id v : a.alphabet) {
      bool val = std::find(word[i].begin(), word[i].end(), v) != word[i].end();
      assign.push_back({v, val});
    }
    for (std::uint32_t q = 0; q < a.states.size(); ++q) {
      bf f = a.mgr->restrict_fn(a.delta[q], assign);
      if (f.is_false()) continue;
      for (const literal_set& m : a.mgr->minimal_models(f)) {
        std::vector<std::uint32_t> part;
        for (var_id v : m.positives) part.push_back(a.state_of_var(v)->v);
        moves[i][q].push_back(std::move(part));
      }
    }
  }

  auto next = [&](std::size_t i) { return i + 1 < n ? i + 1 : w.stem.size(); };
  std::vector<std::vector<bool>> alive(n, std::vector<bool>(a.states.size(), true));
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::uint32_t q = 0; q < a.states.size(); ++q) {
        if (!alive[i][q]) continue;
        bool ok = false;
        for (const auto& part : moves[i][q]) {
          bool all = true;
          for (std::uint32_t s : part) all &= alive[next(i)][s];
          if (all) { ok = true; break; }
        }
        if (!ok) {
          alive[i][q] = false;
          changed = true;
        }
      }
    }
  }
  return alive[0][a.initial.v];
}

// backtracking bijection search, alphabet matched by label
bool isomorphic(const automaton& a, const automaton& b) {
  if (a.states.size() != b.states.size()) return false;
  if (a.alphabet.size() != b.alphabet.size()) return false;
  std::vector<std::pair<var_id, var_id>> alpha_map;  // b var -> a var
  for (var_id vb : b.alphabet) {
    auto va = a.mgr->find_var(b.mgr->label(vb));
    if (!va || !a.in_alphabet(*va)) return false;
    alpha_map.push_back({vb, *va});
  }

  const std::size_t nn = a.states.size();
  std::vector<std::uint32_t> map_ba(nn, UINT32_MAX);
  std::vector<bool> used(nn, false);

  // rebuild b's transition in a's manager under the candidate mapping
  auto rebuild = [&](bf f) -> std::optional<bf> {
    std::vector<std::pair<var_id, bf>> repl;  // b var -> a function
    for (var_id v : b.mgr->support(f)) {
      if (b.mgr->kind(v) == var_kind::alphabet) {
        for (auto& [vb, va] : alpha_map)
          if (vb == v) repl.push_back({v, a.mgr->var(va)});
      } else {
        std::uint32_t sb = b.state_of_var(v)->v;
        if (map_ba[sb] == UINT32_MAX) return std::nullopt;  // not decided yet
        repl.push_back({v, a.mgr->var(a.states[map_ba[sb]].var)});
      }
    }
    // evaluate f over a's manager by Shannon expansion on b's support
    std::function<bf(bf)> tr = [&](bf h) -> bf {
      if (h.is_true()) return a.mgr->tt();
      if (h.is_false()) return a.mgr->ff();
      var_id top = b.mgr->support(h).front();
      bf img;
      bool found = false;
      for (auto& [v, av] : repl)
        if (v == top) { img = av; found = true; break; }
      if (!found) throw internal_error("untranslated variable");
      bf h1 = b.mgr->restrict_fn(h, {{top, true}});
      bf h0 = b.mgr->restrict_fn(h, {{top, false}});
      return a.mgr->disj(a.mgr->conj(img, tr(h1)),
                         a.mgr->conj(a.mgr->neg(img), tr(h0)));
    };
    return tr(f);
  };

  std::function<bool(std::uint32_t)> go = [&](std::uint32_t next_b) -> bool {
    if (next_b == nn) {
      for (std::uint32_t sb = 0; sb < nn; ++sb) {
        auto img = rebuild(b.delta[sb]);
        if (!img || *img != a.delta[map_ba[sb]]) return false;
      }
      return true;
    }
    for (std::uint32_t sa = 0; sa < nn; ++sa) {
      if (used[sa]) continue;
      if ((state_id{next_b} == b.initial) != (state_id{sa} == a.initial)) continue;
      used[sa] = true;
      map_ba[next_b] = sa;
      if (go(next_b + 1)) return true;
      used[sa] = false;
      map_ba[next_b] = UINT32_MAX;
    }
    return false;
  };
  return go(0);
}

}  // namespace alq
