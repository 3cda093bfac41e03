#pragma once

// Seeded instance generation: random safety-fragment bodies with random
// prenex prefixes for differential testing, plus a parametric
// request/response template family for the bundled benchmarks.

#include <cstdint>
#include <random>
#include <vector>

#include "alquant/frontend.hpp"

namespace alq {

struct gen_config {
  std::size_t var_count = 3;
  std::size_t max_depth = 4;
  // Tractability filter: the translated body must stay at or below this
  // many states and a full differential run must fit the oracle budget.
  std::size_t max_states = 12;
  std::size_t max_oracle_states = 10000;
  // Function node budget for the filter probe; instances needing more are
  // redrawn.
  std::size_t max_fun_nodes = 200000;
};

// Negation normal form safety body over variables a, b, c, ...
ltl random_safety_body(std::mt19937_64& rng, const gen_config& cfg);

// Random prenex instance; the body is redrawn until it passes the
// tractability filter, all driven by the seed alone.
qptl_formula random_instance(std::uint64_t seed, const gen_config& cfg = {});

// Entry i is random_instance(base_seed + i).
std::vector<qptl_formula> random_corpus(std::size_t count,
                                        std::uint64_t base_seed,
                                        const gen_config& cfg = {});

// exists setup. forall inputs. exists outputs. with delayed-copy
// obligations; `delay` controls how much history the reference
// constructions must remember.
qptl_formula template_instance(std::size_t inputs, std::size_t outputs,
                               std::size_t delay);

}  // namespace alq
