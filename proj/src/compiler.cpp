#include "alquant/compiler.hpp"

#include <algorithm>
#include <deque>
#include <map>

#include "alquant/conflicts.hpp"

namespace alq {

namespace {

void check_deadline(const compile_config& cfg) {
  if (cfg.deadline && std::chrono::steady_clock::now() > *cfg.deadline)
    throw timeout_error("deadline exceeded");
}

std::string macro_name(const automaton& a, const compile_config& cfg,
                       const std::vector<state_id>& members) {
  std::string out = cfg.macro_prefix + "{";
  for (std::size_t i = 0; i < members.size(); ++i) {
    if (i) out += ",";
    out += a.states[members[i].v].name;
  }
  out += "}";
  // keep names unique against the carried-over states
  bool clash = true;
  while (clash) {
    clash = false;
    for (const auto& s : a.states)
      if (s.name == out) { out += "_"; clash = true; break; }
  }
  return out;
}

compile_result compile_quant(const automaton& a,
                             const std::vector<state_id>& m_set,
                             const compile_config& cfg, bool universal) {
  validate(a);
  if (m_set.empty())
    throw internal_error("compile: empty merge set");
  for (std::size_t i = 0; i < m_set.size(); ++i) {
    if (m_set[i].v >= a.state_count())
      throw unknown_state("compile: merge set state out of range");
    if (i && !(m_set[i - 1] < m_set[i]))
      throw internal_error("compile: merge set not sorted");
  }
  fun_manager& m = *a.mgr;

  std::vector<bool> in_m(a.state_count(), false);
  for (state_id q : m_set) in_m[q.v] = true;

  // member variables sorted by index, paired with their states
  std::vector<std::pair<var_id, state_id>> mvar_of;
  for (state_id q : m_set) mvar_of.emplace_back(a.states[q.v].var, q);
  std::sort(mvar_of.begin(), mvar_of.end(),
            [](const auto& x, const auto& y) { return x.first < y.first; });

  automaton b;
  b.mgr = a.mgr;
  b.alphabet = a.alphabet;

  std::map<std::vector<state_id>, var_id> macro_var_of;
  std::map<std::uint32_t, std::vector<state_id>> subset_of_var;
  auto macro_var = [&](const std::vector<state_id>& subset) {
    auto it = macro_var_of.find(subset);
    if (it != macro_var_of.end()) return it->second;
    var_id v = m.make_var(var_kind::state, macro_name(a, cfg, subset));
    macro_var_of.emplace(subset, v);
    subset_of_var.emplace(v.index, subset);
    return v;
  };

  std::size_t macro_states = 0;
  std::map<std::uint32_t, std::uint32_t> b_id_of_var;
  std::deque<std::uint32_t> work;
  auto ensure_state = [&](var_id v) {
    auto it = b_id_of_var.find(v.index);
    if (it != b_id_of_var.end()) return state_id{it->second};
    std::uint32_t id = static_cast<std::uint32_t>(b.states.size());
    auto sub = subset_of_var.find(v.index);
    if (sub != subset_of_var.end()) {
      if (++macro_states > cfg.max_macro_states)
        throw macro_blowup("more than " +
                           std::to_string(cfg.max_macro_states) +
                           " macro states");
      b.states.push_back(
          {m.label(v), v, {origin_kind::macro, sub->second}});
    } else {
      auto orig = a.state_of_var(v);
      if (!orig || in_m[orig->v])
        throw internal_error("compile: unexpected state variable in support");
      b.states.push_back(a.states[orig->v]);
    }
    b.delta.push_back(m.ff());
    b_id_of_var.emplace(v.index, id);
    work.push_back(id);
    return state_id{id};
  };

  // source function of a b-state
  auto source_fn = [&](std::uint32_t id) {
    const asa_state& st = b.states[id];
    if (st.origin.kind == origin_kind::macro &&
        subset_of_var.count(st.var.index)) {
      bf f = universal ? m.ff() : m.tt();
      for (state_id q : st.origin.members)
        f = universal ? m.disj(f, a.delta[q.v]) : m.conj(f, a.delta[q.v]);
      return f;
    }
    return a.delta[a.state_of_var(st.var)->v];
  };

  std::map<std::uint32_t, state_id> state_of_mvar;
  for (auto& [v, q] : mvar_of) state_of_mvar.emplace(v.index, q);

  // Each prime cube of f keeps exactly its own member set: the subset X'
  // lands on the models whose member part equals X', and every branch the
  // all-subsets construction adds on top of that is subsumed by one of
  // these, so the language is unchanged.  Grouping by model also keeps
  // unrelated disjuncts out of each other's successor sets.
  auto rewrite = [&](bf f) {
    if (f.is_false() || f.is_true()) return f;
    if (!universal) {
      bf out = m.ff();
      for (const literal_set& mu : m.minimal_models(f, cfg.max_macro_states)) {
        check_deadline(cfg);
        bf c = m.tt();
        std::vector<state_id> subset;
        for (var_id v : mu.positives) {
          auto it = state_of_mvar.find(v.index);
          if (it != state_of_mvar.end())
            subset.push_back(it->second);
          else
            c = m.conj(c, m.var(v));
        }
        for (var_id v : mu.negatives) c = m.conj(c, m.nvar(v));
        if (!subset.empty()) {
          std::sort(subset.begin(), subset.end());
          c = m.conj(m.var(macro_var(subset)), c);
        }
        out = m.disj(out, c);
      }
      return out;
    }
    // dual: each prime clause donates its member part to one macro literal
    bf out = m.tt();
    for (const literal_set& cl : m.minimal_clauses(f, cfg.max_macro_states)) {
      check_deadline(cfg);
      bf c = m.ff();
      std::vector<state_id> subset;
      for (var_id v : cl.positives) {
        auto it = state_of_mvar.find(v.index);
        if (it != state_of_mvar.end())
          subset.push_back(it->second);
        else
          c = m.disj(c, m.var(v));
      }
      for (var_id v : cl.negatives) c = m.disj(c, m.nvar(v));
      if (!subset.empty()) {
        std::sort(subset.begin(), subset.end());
        c = m.disj(m.var(macro_var(subset)), c);
      }
      out = m.conj(out, c);
    }
    return out;
  };

  var_id init_var = in_m[a.initial.v] ? macro_var({a.initial})
                                      : a.states[a.initial.v].var;
  b.initial = ensure_state(init_var);

  while (!work.empty()) {
    check_deadline(cfg);
    std::uint32_t id = work.front();
    work.pop_front();
    bf d = rewrite(source_fn(id));
    b.delta[id] = d;
    for (var_id v : m.support(d))
      if (m.kind(v) == var_kind::state) ensure_state(v);
  }

  validate(b);
  return {std::move(b), macro_states};
}

}  // namespace

compile_result compile_exists(const automaton& a,
                              const std::vector<state_id>& m_set,
                              const compile_config& cfg) {
  return compile_quant(a, m_set, cfg, false);
}

compile_result compile_forall(const automaton& a,
                              const std::vector<state_id>& m_set,
                              const compile_config& cfg) {
  return compile_quant(a, m_set, cfg, true);
}

automaton eliminate_quantifier(const automaton& a, var_id p, quant q,
                               const compile_config& cfg, round_stats* stats) {
  auto t0 = std::chrono::steady_clock::now();
  bool universal = q == quant::forall_q;
  conflict_report rep = universal ? universal_conflicts(a, p)
                                  : existential_conflicts(a, p);
  std::vector<state_id> m_set = rep.conflict_set;
  if (cfg.pairwise_refine) {
    pair_conflict_decider dec(a, p, universal);
    m_set = dec.flagged();
  }
  check_deadline(cfg);

  automaton out;
  std::size_t macro_states = 0;
  if (m_set.empty()) {
    out = a;
  } else {
    compile_result r = universal ? compile_forall(a, m_set, cfg)
                                 : compile_exists(a, m_set, cfg);
    out = std::move(r.a);
    macro_states = r.macro_states;
  }
  out = universal ? statewise_forall(out, p) : statewise_exists(out, p);
  if (cfg.prune_each_round) out = prune_unreachable(out);
  if (cfg.simplify) out = simplify_states(out);
  if (cfg.prune_each_round) out = prune_unreachable(out);

  if (stats) {
    stats->var = a.mgr->label(p);
    stats->q = q;
    stats->fixpoint_conflicts = rep.conflict_set.size();
    stats->merged_states = m_set.size();
    stats->macro_states = macro_states;
    stats->states_before = a.state_count();
    stats->states_after = out.state_count();
    stats->fun_node_peak = a.mgr->node_count();
    stats->millis = std::chrono::duration_cast<std::chrono::milliseconds>(
                        std::chrono::steady_clock::now() - t0)
                        .count();
  }
  return out;
}

run_stats solve_qptl(const qptl_formula& f, const compile_config& cfg) {
  auto t0 = std::chrono::steady_clock::now();
  run_stats rs;
  auto mgr = std::make_shared<fun_manager>(cfg.max_fun_nodes);
  ltl body = to_nnf(f.body);
  automaton a = translate_to_asa(body, f.sigma(), mgr);
  // alphabet position i carries sigma()[i]; prefix vars come first
  for (std::size_t i = f.prefix.size(); i-- > 0;) {
    var_id p = a.alphabet.size() > i ? a.alphabet[i] : var_id{};
    const quantifier& qf = f.prefix[i];
    if (p.index == UINT32_MAX || mgr->label(p) != qf.var)
      throw internal_error("solve: prefix variable lookup failed");
    round_stats round;
    a = eliminate_quantifier(a, p, qf.q, cfg, &round);
    rs.macros_total += round.macro_states;
    rs.rounds.push_back(std::move(round));
  }
  check_deadline(cfg);
  rs.v = is_empty(a, cfg.subset_cap) ? verdict::unsat : verdict::sat;
  rs.states_final = a.state_count();
  rs.total_millis = std::chrono::duration_cast<std::chrono::milliseconds>(
                        std::chrono::steady_clock::now() - t0)
                        .count();
  return rs;
}

const char* to_string(verdict v) {
  return v == verdict::sat ? "SAT" : "UNSAT";
}

}  // namespace alq
