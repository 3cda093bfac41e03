#include "alquant/oracle.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <random>
#include <set>

namespace alq {

namespace {

void check_deadline(const oracle_limits& lim) {
  if (lim.deadline && std::chrono::steady_clock::now() > *lim.deadline)
    throw timeout_error("oracle deadline exceeded");
}

std::vector<std::pair<var_id, bool>> letter_assignment(
    const std::vector<var_id>& alphabet, std::size_t letter) {
  std::vector<std::pair<var_id, bool>> out;
  for (std::size_t i = 0; i < alphabet.size(); ++i)
    out.emplace_back(alphabet[i], (letter >> i) & 1);
  return out;
}

// successor state ids of a nondeterminized automaton under a full letter
std::vector<std::uint32_t> nsa_successors(const automaton& n, std::uint32_t s,
                                          std::size_t letter) {
  bf f = n.mgr->restrict_fn(n.delta[s],
                            letter_assignment(n.alphabet, letter));
  std::vector<std::uint32_t> out;
  for (var_id v : n.mgr->support(f)) out.push_back(n.state_of_var(v)->v);
  return out;
}

}  // namespace

explicit_dsa determinize(const automaton& a, const oracle_limits& lim) {
  validate(a);
  if (a.alphabet.size() > lim.max_alphabet_vars)
    throw resource_limit("oracle: alphabet larger than " +
                         std::to_string(lim.max_alphabet_vars) +
                         " variables");
  if (a.state_count() > lim.max_input_states)
    throw resource_limit("oracle: more than " +
                         std::to_string(lim.max_input_states) +
                         " input states");
  automaton n = nondeterminize(a, lim.max_states);
  std::size_t letters = std::size_t{1} << a.alphabet.size();

  // explicit successor table for the first layer
  std::vector<std::vector<std::vector<std::uint32_t>>> succ(n.state_count());
  for (std::uint32_t s = 0; s < n.state_count(); ++s) {
    check_deadline(lim);
    succ[s].resize(letters);
    for (std::size_t l = 0; l < letters; ++l)
      succ[s][l] = nsa_successors(n, s, l);
  }

  explicit_dsa d;
  for (var_id v : a.alphabet) d.vars.push_back(a.mgr->label(v));

  std::map<std::vector<std::uint32_t>, std::uint32_t> ids;
  std::deque<std::vector<std::uint32_t>> work;
  auto intern = [&](std::vector<std::uint32_t> set) {
    std::sort(set.begin(), set.end());
    set.erase(std::unique(set.begin(), set.end()), set.end());
    auto it = ids.find(set);
    if (it != ids.end()) return it->second;
    if (n.state_count() + ids.size() + 1 > lim.max_states)
      throw subset_blowup("oracle: more than " +
                          std::to_string(lim.max_states) +
                          " states across both subset layers");
    std::uint32_t id = static_cast<std::uint32_t>(ids.size());
    ids.emplace(set, id);
    d.next.emplace_back(letters, 0);
    d.dead.push_back(set.empty());
    work.push_back(std::move(set));
    return id;
  };

  d.initial = intern({n.initial.v});
  while (!work.empty()) {
    check_deadline(lim);
    std::vector<std::uint32_t> set = work.front();
    work.pop_front();
    std::uint32_t id = ids.at(set);
    for (std::size_t l = 0; l < letters; ++l) {
      std::vector<std::uint32_t> nxt;
      if (!set.empty())
        for (std::uint32_t s : set)
          for (std::uint32_t t : succ[s][l]) nxt.push_back(t);
      d.next[id][l] = intern(std::move(nxt));
    }
  }
  return d;
}

namespace {

explicit_dsa project(const explicit_dsa& d, const std::string& var,
                     const oracle_limits& lim, bool universal) {
  std::size_t bit = d.vars.size();
  for (std::size_t i = 0; i < d.vars.size(); ++i)
    if (d.vars[i] == var) { bit = i; break; }
  if (bit == d.vars.size())
    throw unknown_variable("oracle: variable '" + var +
                           "' is not in the alphabet");

  explicit_dsa out;
  for (std::size_t i = 0; i < d.vars.size(); ++i)
    if (i != bit) out.vars.push_back(d.vars[i]);
  std::size_t letters = out.letter_count();
  auto widen = [&](std::size_t r, bool value) {
    std::size_t low = r & ((std::size_t{1} << bit) - 1);
    std::size_t high = r >> bit;
    return low | (high << (bit + 1)) |
           (value ? (std::size_t{1} << bit) : std::size_t{0});
  };

  // subset states; the empty set is the dead sink
  std::map<std::vector<std::uint32_t>, std::uint32_t> ids;
  std::deque<std::vector<std::uint32_t>> work;
  auto intern = [&](std::vector<std::uint32_t> set) {
    std::sort(set.begin(), set.end());
    set.erase(std::unique(set.begin(), set.end()), set.end());
    if (universal) {
      // one dead extension kills the word
      for (std::uint32_t s : set)
        if (d.dead[s]) { set.clear(); break; }
    }
    auto it = ids.find(set);
    if (it != ids.end()) return it->second;
    if (ids.size() + 1 > lim.max_states)
      throw subset_blowup("oracle: more than " +
                          std::to_string(lim.max_states) +
                          " projection states");
    std::uint32_t id = static_cast<std::uint32_t>(ids.size());
    ids.emplace(set, id);
    out.next.emplace_back(letters, 0);
    out.dead.push_back(set.empty());
    work.push_back(std::move(set));
    return id;
  };

  std::vector<std::uint32_t> start;
  if (universal || !d.dead[d.initial]) start.push_back(d.initial);
  out.initial = intern(std::move(start));
  while (!work.empty()) {
    check_deadline(lim);
    std::vector<std::uint32_t> set = work.front();
    work.pop_front();
    std::uint32_t id = ids.at(set);
    for (std::size_t r = 0; r < letters; ++r) {
      std::vector<std::uint32_t> nxt;
      for (std::uint32_t s : set) {
        for (bool value : {false, true}) {
          std::uint32_t t = d.next[s][widen(r, value)];
          if (universal || !d.dead[t]) nxt.push_back(t);
        }
      }
      out.next[id][r] = intern(std::move(nxt));
    }
  }
  return out;
}

}  // namespace

explicit_dsa exact_exists(const explicit_dsa& d, const std::string& var,
                          const oracle_limits& lim) {
  return project(d, var, lim, false);
}

explicit_dsa exact_forall(const explicit_dsa& d, const std::string& var,
                          const oracle_limits& lim) {
  return project(d, var, lim, true);
}

namespace {

std::size_t letter_index(const explicit_dsa& d, const letter& l,
                         const fun_manager& m) {
  std::size_t idx = 0;
  for (var_id v : l) {
    const std::string& name = m.label(v);
    std::size_t bit = d.vars.size();
    for (std::size_t i = 0; i < d.vars.size(); ++i)
      if (d.vars[i] == name) { bit = i; break; }
    if (bit == d.vars.size())
      throw alphabet_mismatch("lasso mentions variable '" + name +
                              "' outside the alphabet");
    idx |= std::size_t{1} << bit;
  }
  return idx;
}

}  // namespace

bool dsa_accepts(const explicit_dsa& d, const lasso_word& w,
                 const fun_manager& m) {
  if (w.loop.empty()) throw internal_error("dsa_accepts: empty loop");
  std::vector<std::size_t> stem, loop;
  for (const letter& l : w.stem) stem.push_back(letter_index(d, l, m));
  for (const letter& l : w.loop) loop.push_back(letter_index(d, l, m));

  std::uint32_t s = d.initial;
  if (d.dead[s]) return false;
  for (std::size_t l : stem) {
    s = d.next[s][l];
    if (d.dead[s]) return false;
  }
  std::set<std::uint32_t> seen;
  while (seen.insert(s).second) {
    for (std::size_t l : loop) {
      s = d.next[s][l];
      if (d.dead[s]) return false;
    }
  }
  return true;
}

bool dsa_is_empty(const explicit_dsa& d) {
  std::vector<bool> productive(d.state_count());
  for (std::size_t s = 0; s < d.state_count(); ++s) productive[s] = !d.dead[s];
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t s = 0; s < d.state_count(); ++s) {
      if (!productive[s]) continue;
      bool ok = false;
      for (std::size_t l = 0; l < d.next[s].size(); ++l)
        if (productive[d.next[s][l]]) { ok = true; break; }
      if (!ok) {
        productive[s] = false;
        changed = true;
      }
    }
  }
  return !productive[d.initial];
}

automaton dsa_to_automaton(const explicit_dsa& d,
                           std::shared_ptr<fun_manager> mgr) {
  automaton a;
  a.mgr = mgr;
  for (const std::string& name : d.vars)
    a.alphabet.push_back(mgr->make_var(var_kind::alphabet, name));
  for (std::size_t s = 0; s < d.state_count(); ++s) {
    std::string name = "d" + std::to_string(s);
    var_id v = mgr->make_var(var_kind::state, name);
    a.states.push_back({name, v, {origin_kind::synthetic, {}}});
  }
  for (std::size_t s = 0; s < d.state_count(); ++s) {
    bf f = mgr->ff();
    if (!d.dead[s]) {
      for (std::size_t l = 0; l < d.next[s].size(); ++l) {
        std::uint32_t t = d.next[s][l];
        if (d.dead[t]) continue;
        bf cube = mgr->tt();
        for (std::size_t i = 0; i < d.vars.size(); ++i)
          cube = mgr->conj(cube, ((l >> i) & 1) ? mgr->var(a.alphabet[i])
                                                : mgr->nvar(a.alphabet[i]));
        f = mgr->disj(f, mgr->conj(cube, mgr->var(a.states[t].var)));
      }
    }
    a.delta.push_back(f);
  }
  a.initial = state_id{d.initial};
  validate(a);
  return a;
}

namespace {

letter letter_from_index(const std::vector<var_id>& alphabet,
                         std::size_t idx) {
  letter out;
  for (std::size_t i = 0; i < alphabet.size(); ++i)
    if ((idx >> i) & 1) out.push_back(alphabet[i]);
  return out;
}

}  // namespace

std::optional<lasso_word> includes(const automaton& a, const automaton& b,
                                   const oracle_limits& lim) {
  validate(a);
  validate(b);
  std::vector<std::string> la, lb;
  for (var_id v : a.alphabet) la.push_back(a.mgr->label(v));
  for (var_id v : b.alphabet) lb.push_back(b.mgr->label(v));
  {
    auto sa = la, sb = lb;
    std::sort(sa.begin(), sa.end());
    std::sort(sb.begin(), sb.end());
    if (sa != sb)
      throw alphabet_mismatch("inclusion check needs equal alphabets");
  }

  automaton n = nondeterminize(a, lim.max_states);
  std::size_t letters = std::size_t{1} << a.alphabet.size();
  std::vector<std::vector<std::vector<std::uint32_t>>> succ(n.state_count());
  for (std::uint32_t s = 0; s < n.state_count(); ++s) {
    check_deadline(lim);
    succ[s].resize(letters);
    for (std::size_t l = 0; l < letters; ++l)
      succ[s][l] = nsa_successors(n, s, l);
  }
  // productive first-layer states lie on some infinite run
  std::vector<bool> productive(n.state_count(), true);
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::uint32_t s = 0; s < n.state_count(); ++s) {
      if (!productive[s]) continue;
      bool ok = false;
      for (std::size_t l = 0; l < letters && !ok; ++l)
        for (std::uint32_t t : succ[s][l])
          if (productive[t]) { ok = true; break; }
      if (!ok) {
        productive[s] = false;
        changed = true;
      }
    }
  }

  explicit_dsa db = determinize(b, lim);
  // letter translation: bit j of b's letter is bit pos[j] of a's letter
  std::vector<std::size_t> pos(db.vars.size());
  for (std::size_t j = 0; j < db.vars.size(); ++j)
    pos[j] = static_cast<std::size_t>(
        std::find(la.begin(), la.end(), db.vars[j]) - la.begin());
  std::vector<std::size_t> to_b(letters);
  for (std::size_t l = 0; l < letters; ++l) {
    std::size_t r = 0;
    for (std::size_t j = 0; j < db.vars.size(); ++j)
      if ((l >> pos[j]) & 1) r |= std::size_t{1} << j;
    to_b[l] = r;
  }

  if (!productive[n.initial.v]) return std::nullopt;  // L(a) empty

  struct parent {
    std::uint32_t prev;
    std::size_t letter;
  };
  std::map<std::pair<std::uint32_t, std::uint32_t>, std::uint32_t> ids;
  std::vector<parent> parents;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs;
  std::deque<std::uint32_t> work;
  auto intern = [&](std::uint32_t s, std::uint32_t t, std::uint32_t from,
                    std::size_t l) {
    auto key = std::make_pair(s, t);
    auto it = ids.find(key);
    if (it != ids.end()) return;
    if (pairs.size() + 1 > lim.max_states)
      throw resource_limit("oracle: inclusion product exceeded " +
                           std::to_string(lim.max_states) + " pairs");
    std::uint32_t id = static_cast<std::uint32_t>(pairs.size());
    ids.emplace(key, id);
    pairs.push_back(key);
    parents.push_back({from, l});
    work.push_back(id);
  };

  intern(n.initial.v, db.initial, UINT32_MAX, 0);
  std::optional<std::uint32_t> hit;
  while (!work.empty() && !hit) {
    check_deadline(lim);
    std::uint32_t id = work.front();
    work.pop_front();
    auto [s, t] = pairs[id];
    if (db.dead[t]) {
      hit = id;
      break;
    }
    for (std::size_t l = 0; l < letters; ++l) {
      std::uint32_t tb = db.next[t][to_b[l]];
      for (std::uint32_t sn : succ[s][l]) {
        if (!productive[sn]) continue;
        intern(sn, tb, id, l);
      }
    }
  }
  if (!hit) return std::nullopt;

  lasso_word w;
  std::vector<std::size_t> stem_letters;
  for (std::uint32_t id = *hit; parents[id].prev != UINT32_MAX;
       id = parents[id].prev)
    stem_letters.push_back(parents[id].letter);
  std::reverse(stem_letters.begin(), stem_letters.end());
  for (std::size_t l : stem_letters)
    w.stem.push_back(letter_from_index(a.alphabet, l));

  // extend with any productive cycle from the hit state
  std::uint32_t cur = pairs[*hit].first;
  std::map<std::uint32_t, std::size_t> seen_at;
  std::vector<std::size_t> walk_letters;
  std::vector<std::uint32_t> walk_states;
  while (!seen_at.count(cur)) {
    seen_at[cur] = walk_letters.size();
    walk_states.push_back(cur);
    bool stepped = false;
    for (std::size_t l = 0; l < letters && !stepped; ++l) {
      for (std::uint32_t t : succ[cur][l]) {
        if (!productive[t]) continue;
        walk_letters.push_back(l);
        cur = t;
        stepped = true;
        break;
      }
    }
    if (!stepped)
      throw internal_error("includes: productive state lost its successors");
  }
  std::size_t k = seen_at[cur];
  for (std::size_t i = 0; i < k; ++i)
    w.stem.push_back(letter_from_index(a.alphabet, walk_letters[i]));
  for (std::size_t i = k; i < walk_letters.size(); ++i)
    w.loop.push_back(letter_from_index(a.alphabet, walk_letters[i]));
  return w;
}

equivalence_result equivalent(const automaton& a, const automaton& b,
                              const oracle_limits& lim) {
  equivalence_result r;
  if (auto w = includes(a, b, lim)) {
    r.equal = false;
    r.witness = *w;
    r.witness_in_first = true;
    return r;
  }
  if (auto w = includes(b, a, lim)) {
    r.equal = false;
    r.witness = *w;
    r.witness_in_first = false;
    return r;
  }
  return r;
}

bool eval_ltl_on_lasso(const ltl& f, const lasso_word& w,
                       const std::vector<var_id>& alphabet,
                       const fun_manager& m) {
  if (w.loop.empty()) throw internal_error("eval_ltl_on_lasso: empty loop");
  std::size_t len = w.stem.size() + w.loop.size();
  auto next = [&](std::size_t i) {
    return i + 1 < len ? i + 1 : w.stem.size();
  };
  auto letter_at = [&](std::size_t i) -> const letter& {
    return i < w.stem.size() ? w.stem[i] : w.loop[i - w.stem.size()];
  };

  std::function<std::vector<bool>(const ltl&)> eval =
      [&](const ltl& g) -> std::vector<bool> {
    std::vector<bool> out(len);
    switch (g->op) {
      case ltl_op::true_:
      case ltl_op::false_: {
        bool v = g->op == ltl_op::true_;
        for (std::size_t i = 0; i < len; ++i) out[i] = v;
        return out;
      }
      case ltl_op::var_: {
        auto v = [&]() -> var_id {
          for (var_id x : alphabet)
            if (m.label(x) == g->name) return x;
          throw unknown_variable("eval: variable '" + g->name +
                                 "' is not in the alphabet");
        }();
        for (std::size_t i = 0; i < len; ++i) {
          const letter& l = letter_at(i);
          out[i] = std::find(l.begin(), l.end(), v) != l.end();
        }
        return out;
      }
      case ltl_op::not_: {
        auto c = eval(g->lhs);
        for (std::size_t i = 0; i < len; ++i) out[i] = !c[i];
        return out;
      }
      case ltl_op::and_:
      case ltl_op::or_:
      case ltl_op::implies_:
      case ltl_op::iff_: {
        auto l = eval(g->lhs);
        auto r = eval(g->rhs);
        for (std::size_t i = 0; i < len; ++i) {
          switch (g->op) {
            case ltl_op::and_: out[i] = l[i] && r[i]; break;
            case ltl_op::or_: out[i] = l[i] || r[i]; break;
            case ltl_op::implies_: out[i] = !l[i] || r[i]; break;
            default: out[i] = l[i] == r[i]; break;
          }
        }
        return out;
      }
      case ltl_op::next_: {
        auto c = eval(g->lhs);
        for (std::size_t i = 0; i < len; ++i) out[i] = c[next(i)];
        return out;
      }
      case ltl_op::always_:
      case ltl_op::eventually_: {
        auto c = eval(g->lhs);
        bool greatest = g->op == ltl_op::always_;
        for (std::size_t i = 0; i < len; ++i)out[i] = greatest;
        bool changed = true;
        while (changed) {
          changed = false;
          for (std::size_t i = len; i-- > 0;) {
            bool v = greatest ? (c[i] && out[next(i)]) : (c[i] || out[next(i)]);
            if (v != out[i]) { out[i] = v; changed = true; }
          }
        }
        return out;
      }
      case ltl_op::until_:
      case ltl_op::weak_until_:
      case ltl_op::release_: {
        auto l = eval(g->lhs);
        auto r = eval(g->rhs);
        bool greatest = g->op != ltl_op::until_;
        for (std::size_t i = 0; i < len; ++i) out[i] = greatest;
        bool changed = true;
        while (changed) {
          changed = false;
          for (std::size_t i = len; i-- > 0;) {
            bool v;
            if (g->op == ltl_op::release_)
              v = r[i] && (l[i] || out[next(i)]);
            else
              v = r[i] || (l[i] && out[next(i)]);
            if (v != out[i]) { out[i] = v; changed = true; }
          }
        }
        return out;
      }
    }
    throw internal_error("eval: unhandled operator");
  };
  return eval(f)[0];
}

std::vector<lasso_word> sample_lassos(const std::vector<var_id>& alphabet,
                                      std::size_t count, std::uint64_t seed) {
  std::vector<lasso_word> out;
  lasso_word empty_loop;
  empty_loop.loop.push_back({});
  out.push_back(empty_loop);
  lasso_word full_loop;
  full_loop.loop.push_back(alphabet);
  out.push_back(full_loop);

  std::mt19937_64 rng(seed);
  auto random_letter = [&]() {
    letter l;
    for (var_id v : alphabet)
      if (rng() & 1) l.push_back(v);
    return l;
  };
  while (out.size() < count) {
    lasso_word w;
    std::size_t stem_len = rng() % 5;
    std::size_t loop_len = 1 + rng() % 4;
    for (std::size_t i = 0; i < stem_len; ++i) w.stem.push_back(random_letter());
    for (std::size_t i = 0; i < loop_len; ++i) w.loop.push_back(random_letter());
    out.push_back(std::move(w));
  }
  out.resize(count);
  return out;
}

verdict oracle_solve(const qptl_formula& f, const oracle_limits& lim) {
  auto mgr = std::make_shared<fun_manager>();
  automaton a = translate_to_asa(to_nnf(f.body), f.sigma(), mgr);
  explicit_dsa d = determinize(a, lim);
  for (auto it = f.prefix.rbegin(); it != f.prefix.rend(); ++it) {
    check_deadline(lim);
    d = it->q == quant::exists_q ? exact_exists(d, it->var, lim)
                                 : exact_forall(d, it->var, lim);
  }
  return dsa_is_empty(d) ? verdict::unsat : verdict::sat;
}

diff_report differential_check(
    const qptl_formula& f, const compile_config& cfg, const oracle_limits& lim,
    const std::function<void(const diff_round&)>& on_round) {
  auto mgr = std::make_shared<fun_manager>(cfg.max_fun_nodes);
  automaton a = translate_to_asa(to_nnf(f.body), f.sigma(), mgr);
  explicit_dsa d = determinize(a, lim);
  // macro states can push the pipeline side past the input cap; the intern
  // cap and the deadline still guard the equivalence checks
  oracle_limits eq_lim = lim;
  eq_lim.max_input_states = lim.max_states;
  diff_report rep;
  for (std::size_t i = f.prefix.size(); i-- > 0;) {
    const quantifier& q = f.prefix[i];
    if (a.alphabet.size() <= i || mgr->label(a.alphabet[i]) != q.var)
      throw internal_error("diff: prefix variable lookup failed");
    var_id p = a.alphabet[i];
    automaton before = a;
    a = eliminate_quantifier(a, p, q.q, cfg);
    d = q.q == quant::exists_q ? exact_exists(d, q.var, lim)
                               : exact_forall(d, q.var, lim);
    auto dmgr = std::make_shared<fun_manager>();
    automaton ref = dsa_to_automaton(d, dmgr);
    equivalence_result eq = equivalent(a, ref, eq_lim);
    if (!eq.equal) {
      rep.ok = false;
      const fun_manager& wm = eq.witness_in_first ? *mgr : *dmgr;
      rep.detail =
          "mismatch after " +
          std::string(q.q == quant::exists_q ? "exists " : "forall ") + q.var +
          ": word accepted by " +
          (eq.witness_in_first ? "the pipeline only" : "the reference only") +
          "\n  " + to_string(eq.witness, wm);
      return rep;
    }
    if (on_round) on_round({q.var, q.q, std::move(before), a, d});
  }
  bool pipe_empty = is_empty(a, cfg.subset_cap);
  bool ref_empty = dsa_is_empty(d);
  if (pipe_empty != ref_empty) {
    rep.ok = false;
    rep.detail = std::string("verdict mismatch: pipeline says ") +
                 (pipe_empty ? "UNSAT" : "SAT") + ", reference says " +
                 (ref_empty ? "UNSAT" : "SAT");
  }
  return rep;
}

}  // namespace alq
