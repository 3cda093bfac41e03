#include "alquant/generator.hpp"

#include <algorithm>
#include <memory>
#include <string>

#include "alquant/oracle.hpp"

namespace alq {

namespace {

ltl random_body(std::mt19937_64& rng, const gen_config& cfg,
                std::size_t depth) {
  auto literal = [&]() {
    std::string name(1, static_cast<char>('a' + rng() % cfg.var_count));
    ltl v = mk_var(name);
    return rng() % 2 ? v : mk_unary(ltl_op::not_, v);
  };
  if (depth == 0) return literal();
  switch (rng() % 12) {
    case 0:
    case 1:
    case 2:
      return literal();
    case 3:
    case 4:
      return mk_binary(ltl_op::and_, random_body(rng, cfg, depth - 1),
                       random_body(rng, cfg, depth - 1));
    case 5:
    case 6:
      return mk_binary(ltl_op::or_, random_body(rng, cfg, depth - 1),
                       random_body(rng, cfg, depth - 1));
    case 7:
    case 8:
      return mk_unary(ltl_op::next_, random_body(rng, cfg, depth - 1));
    case 9:
      return mk_unary(ltl_op::always_, random_body(rng, cfg, depth - 1));
    case 10:
      return mk_binary(ltl_op::weak_until_, random_body(rng, cfg, depth - 1),
                       random_body(rng, cfg, depth - 1));
    default:
      return mk_binary(ltl_op::release_, random_body(rng, cfg, depth - 1),
                       random_body(rng, cfg, depth - 1));
  }
}

void vars_of(const ltl& f, std::vector<std::string>& out) {
  if (f->op == ltl_op::var_) {
    if (std::find(out.begin(), out.end(), f->name) == out.end())
      out.push_back(f->name);
    return;
  }
  if (f->lhs) vars_of(f->lhs, out);
  if (f->rhs) vars_of(f->rhs, out);
}

}  // namespace

ltl random_safety_body(std::mt19937_64& rng, const gen_config& cfg) {
  return random_body(rng, cfg, cfg.max_depth);
}

qptl_formula random_instance(std::uint64_t seed, const gen_config& cfg) {
  std::mt19937_64 rng(seed);
  for (int attempt = 0; attempt < 500; ++attempt) {
    ltl body = random_safety_body(rng, cfg);
    std::vector<std::string> vars;
    vars_of(body, vars);
    if (vars.empty()) continue;

    // quantify a nonempty random subset, in random order
    std::vector<std::string> pool = vars;
    for (std::size_t i = pool.size(); i > 1; --i)
      std::swap(pool[i - 1], pool[rng() % i]);
    std::size_t k = 1 + rng() % pool.size();
    std::string text;
    for (std::size_t i = 0; i < k; ++i)
      text += (rng() % 2 ? "exists " : "forall ") + pool[i] + ". ";
    text += to_string(body);

    qptl_formula f = parse_qptl(text);
    try {
      // the whole differential run must fit the oracle budget; language
      // mismatches are kept so checks downstream can expose them
      compile_config ccfg;
      ccfg.max_fun_nodes = cfg.max_fun_nodes;
      oracle_limits lim;
      lim.max_input_states = cfg.max_states;
      lim.max_states = cfg.max_oracle_states;
      differential_check(f, ccfg, lim);
    } catch (const resource_limit&) {
      continue;
    }
    return f;
  }
  throw internal_error("instance generation did not converge for seed " +
                       std::to_string(seed));
}

std::vector<qptl_formula> random_corpus(std::size_t count,
                                        std::uint64_t base_seed,
                                        const gen_config& cfg) {
  std::vector<qptl_formula> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i)
    out.push_back(random_instance(base_seed + i, cfg));
  return out;
}

qptl_formula template_instance(std::size_t inputs, std::size_t outputs,
                               std::size_t delay) {
  if (inputs == 0 || outputs == 0)
    throw internal_error("template needs at least one input and output");
  std::string text = "exists g. ";
  for (std::size_t i = 0; i < inputs; ++i)
    text += "forall i" + std::to_string(i) + ". ";
  for (std::size_t o = 0; o < outputs; ++o)
    text += "exists o" + std::to_string(o) + ". ";
  for (std::size_t o = 0; o < outputs; ++o) {
    if (o) text += " & ";
    std::string delayed = "i" + std::to_string(o % inputs);
    for (std::size_t d = 0; d < delay; ++d) delayed = "X " + delayed;
    text += "G (o" + std::to_string(o) + " <-> (g & " + delayed + "))";
  }
  return parse_qptl(text);
}

}  // namespace alq
