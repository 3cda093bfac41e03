#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "alquant/bench.hpp"
#include "alquant/compiler.hpp"
#include "alquant/conflicts.hpp"
#include "alquant/generator.hpp"
#include "alquant/io.hpp"
#include "alquant/oracle.hpp"

namespace {

using nlohmann::json;

std::string read_input(const std::string& path) {
  if (path == "-") {
    std::stringstream buf;
    buf << std::cin.rdbuf();
    return buf.str();
  }
  std::ifstream in(path);
  if (!in) throw alq::error("cannot read '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// Tokens from ALQUANT_OPTS are appended only when the flag is absent from
// the command line; explicit flags always win.
std::vector<std::string> merge_env_opts(const std::vector<std::string>& args) {
  std::vector<std::string> out = args;
  const char* env = std::getenv("ALQUANT_OPTS");
  if (!env) return out;
  std::istringstream in(env);
  std::vector<std::string> tokens;
  for (std::string t; in >> t;) tokens.push_back(t);
  auto present = [&](const std::string& flag) {
    for (const std::string& a : args) {
      if (a == flag) return true;
      if (a.size() > flag.size() && a.compare(0, flag.size(), flag) == 0 &&
          a[flag.size()] == '=')
        return true;
    }
    return false;
  };
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (tokens[i].rfind("--", 0) != 0) continue;
    std::string flag = tokens[i].substr(0, tokens[i].find('='));
    bool has_value = i + 1 < tokens.size() && tokens[i + 1].rfind("--", 0) != 0;
    if (!present(flag)) {
      out.push_back(tokens[i]);
      if (has_value && tokens[i].find('=') == std::string::npos)
        out.push_back(tokens[i + 1]);
    }
    if (has_value && tokens[i].find('=') == std::string::npos) ++i;
  }
  return out;
}

json stats_to_json(const alq::run_stats& rs) {
  json rounds = json::array();
  for (const alq::round_stats& r : rs.rounds) {
    rounds.push_back({{"var", r.var},
                      {"quant", r.q == alq::quant::exists_q ? "exists" : "forall"},
                      {"fixpoint_conflicts", r.fixpoint_conflicts},
                      {"merged_states", r.merged_states},
                      {"macro_states", r.macro_states},
                      {"states_before", r.states_before},
                      {"states_after", r.states_after},
                      {"fun_node_peak", r.fun_node_peak},
                      {"millis", r.millis}});
  }
  return json{{"verdict", alq::to_string(rs.v)},
              {"states_final", rs.states_final},
              {"macros_total", rs.macros_total},
              {"total_millis", rs.total_millis},
              {"rounds", rounds}};
}

struct quant_args {
  std::string var;
  std::string mode = "exists";
  bool pairwise_refine = false;
};

alq::quant parse_mode(const std::string& mode) {
  if (mode == "exists") return alq::quant::exists_q;
  if (mode == "forall") return alq::quant::forall_q;
  throw alq::error("mode must be 'exists' or 'forall'");
}

// Per-round differential check of the pipeline against the reference
// constructions.  Returns true when every round and the final verdict agree.
bool diff_instance(const alq::qptl_formula& f, const alq::compile_config& cfg,
                   const alq::oracle_limits& lim, const std::string& name) {
  alq::diff_report rep = alq::differential_check(f, cfg, lim);
  if (!rep.ok) std::cerr << name << ": " << rep.detail << "\n";
  return rep.ok;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"quantifier compilation for safety automata"};
  app.require_subcommand(1);

  std::string input;
  std::string stats_path;
  alq::compile_config cfg;
  double timeout = 0.0;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--macro-cap", cfg.max_macro_states,
                    "macro state limit per round");
    cmd->add_option("--subset-cap", cfg.subset_cap,
                    "subset construction state limit");
    cmd->add_option("--node-cap", cfg.max_fun_nodes,
                    "function store node budget");
    cmd->add_flag("--pairwise-refine", cfg.pairwise_refine,
                  "merge only states the exact pairwise decider flags");
    cmd->add_flag_callback("--no-simplify", [&]() { cfg.simplify = false; },
                           "skip state merging between rounds");
    cmd->add_flag_callback("--no-prune", [&]() { cfg.prune_each_round = false; },
                           "skip reachability pruning between rounds");
    cmd->add_option("--timeout", timeout, "seconds before giving up");
  };

  CLI::App* sat = app.add_subcommand("sat", "decide satisfiability");
  sat->add_option("file", input, "formula file, or - for stdin")->required();
  sat->add_option("--stats", stats_path, "write run statistics as JSON");
  add_common(sat);

  quant_args qa;
  bool emit_dot = false;
  CLI::App* compile =
      app.add_subcommand("compile", "show the compiled automaton for one "
                                    "quantifier, before the quantifier is "
                                    "applied");
  compile->add_option("file", input, "formula file, or - for stdin")->required();
  compile->add_option("--var", qa.var, "quantified variable")->required();
  compile->add_option("--mode", qa.mode, "exists or forall")
      ->check(CLI::IsMember({"exists", "forall"}));
  compile->add_flag("--emit-dot", emit_dot, "emit DOT instead of text");
  add_common(compile);

  bool trace = false;
  CLI::App* conflicts =
      app.add_subcommand("conflicts", "show the conflict set for one quantifier");
  conflicts->add_option("file", input, "formula file, or - for stdin")->required();
  conflicts->add_option("--var", qa.var, "quantified variable")->required();
  conflicts->add_option("--mode", qa.mode, "exists or forall")
      ->check(CLI::IsMember({"exists", "forall"}));
  conflicts->add_flag("--trace", trace, "print the label history");
  add_common(conflicts);

  std::size_t corpus_count = 0;
  std::uint64_t seed = 1;
  CLI::App* diff = app.add_subcommand(
      "diff", "differential check of the pipeline against the reference");
  diff->add_option("file", input, "formula file, or - for stdin");
  diff->add_option("--corpus", corpus_count, "check this many seeded instances");
  diff->add_option("--seed", seed, "base seed for --corpus");
  add_common(diff);

  alq::bench_options bopt;
  std::string csv_path;
  std::string millis_mode = "wall";
  CLI::App* bench = app.add_subcommand("bench", "run a directory of instances");
  bench->add_option("dir", bopt.dir, "directory with .qptl files")->required();
  bench->add_option("--csv", csv_path, "write the table to a file");
  bench
      ->add_option("--millis", millis_mode,
                   "wall for measured times, zero for reproducible output")
      ->check(CLI::IsMember({"wall", "zero"}));
  bench->add_option("--jobs", bopt.jobs, "parallel workers");
  bench->add_option("--timeout", bopt.timeout_seconds,
                    "seconds per instance before giving up");
  bench->add_option("--macro-cap", bopt.cfg.max_macro_states,
                    "macro state limit per round");
  bench->add_option("--subset-cap", bopt.cfg.subset_cap,
                    "subset construction state limit");
  bench->add_flag("--pairwise-refine", bopt.cfg.pairwise_refine,
                  "merge only states the exact pairwise decider flags");

  std::string gen_dir;
  std::size_t gen_count = 10;
  std::vector<std::size_t> tmpl;
  CLI::App* gen = app.add_subcommand("gen", "write seeded instances");
  gen->add_option("dir", gen_dir, "output directory")->required();
  gen->add_option("--count", gen_count, "number of random instances");
  gen->add_option("--seed", seed, "base seed");
  gen->add_option("--template", tmpl,
                  "inputs outputs delay for one template instance")
      ->expected(3);

  std::vector<std::string> args(argv + 1, argv + argc);
  args = merge_env_opts(args);
  try {
    std::vector<const char*> cargs;
    cargs.push_back(argv[0]);
    for (const std::string& a : args) cargs.push_back(a.c_str());
    app.parse(static_cast<int>(cargs.size()),
              const_cast<char**>(cargs.data()));
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  if (timeout > 0.0)
    cfg.deadline = std::chrono::steady_clock::now() +
                   std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                       std::chrono::duration<double>(timeout));

  try {
    if (sat->parsed()) {
      alq::qptl_formula f = alq::parse_qptl(read_input(input));
      alq::run_stats rs = alq::solve_qptl(f, cfg);
      std::cout << alq::to_string(rs.v) << "\n";
      if (!stats_path.empty()) {
        std::ofstream out(stats_path);
        if (!out) throw alq::error("cannot write '" + stats_path + "'");
        out << stats_to_json(rs).dump(2) << "\n";
      }
      return 0;
    }

    if (compile->parsed() || conflicts->parsed()) {
      alq::qptl_formula f = alq::parse_qptl(read_input(input));
      alq::quant mode = parse_mode(qa.mode);
      auto mgr = std::make_shared<alq::fun_manager>();
      alq::automaton a =
          alq::translate_to_asa(alq::to_nnf(f.body), f.sigma(), mgr);
      // A variable the formula never mentions conflicts with nothing; the
      // compiled automaton is the input itself.
      auto pv = mgr->find_var(qa.var);
      alq::conflict_report rep;
      if (pv && a.in_alphabet(*pv))
        rep = mode == alq::quant::exists_q
                  ? alq::existential_conflicts(a, *pv)
                  : alq::universal_conflicts(a, *pv);
      if (conflicts->parsed()) {
        if (trace) {
          for (std::size_t i = 0; i < rep.history.size(); ++i) {
            std::cout << "iteration " << i << ":\n";
            for (std::size_t q = 0; q < a.state_count(); ++q)
              std::cout << "  " << a.states[q].name << " "
                        << alq::label_to_string(rep.history[i][q], qa.var)
                        << "\n";
          }
        }
        std::cout << "iterations: " << rep.iterations << "\n";
        std::cout << "conflicts:";
        for (alq::state_id q : rep.conflict_set)
          std::cout << " " << a.states[q.v].name;
        std::cout << "\n";
        return 0;
      }
      std::vector<alq::state_id> m_set = rep.conflict_set;
      if (cfg.pairwise_refine && pv && a.in_alphabet(*pv)) {
        alq::pair_conflict_decider dec(a, *pv, mode == alq::quant::forall_q);
        m_set = dec.flagged();
      }
      alq::automaton compiled =
          m_set.empty()
              ? a
              : (mode == alq::quant::exists_q
                     ? alq::compile_exists(a, m_set, cfg).a
                     : alq::compile_forall(a, m_set, cfg).a);
      std::cout << (emit_dot ? alq::emit_dot(compiled)
                             : alq::emit_text(compiled));
      return 0;
    }

    if (diff->parsed()) {
      alq::oracle_limits lim;
      if (cfg.deadline) lim.deadline = cfg.deadline;
      bool ok = true;
      if (corpus_count == 0 && input.empty())
        throw alq::error("diff needs a file or --corpus");
      if (!input.empty()) {
        alq::qptl_formula f = alq::parse_qptl(read_input(input));
        ok = diff_instance(f, cfg, lim, input) && ok;
      }
      if (corpus_count > 0) {
        for (std::size_t i = 0; i < corpus_count; ++i) {
          alq::qptl_formula f = alq::random_instance(seed + i, {});
          std::string name = "seed " + std::to_string(seed + i);
          if (!diff_instance(f, cfg, lim, name)) {
            std::cerr << "  instance: " << alq::to_string(f) << "\n";
            ok = false;
            break;
          }
        }
      }
      if (ok) std::cout << "no mismatches\n";
      return ok ? 0 : 1;
    }

    if (bench->parsed()) {
      std::vector<alq::bench_row> rows = alq::run_bench(bopt);
      std::string csv = alq::to_csv(rows, millis_mode == "zero");
      if (csv_path.empty()) {
        std::cout << csv;
      } else {
        std::ofstream out(csv_path);
        if (!out) throw alq::error("cannot write '" + csv_path + "'");
        out << csv;
      }
      return 0;
    }

    if (gen->parsed()) {
      namespace fs = std::filesystem;
      fs::create_directories(gen_dir);
      if (!tmpl.empty()) {
        alq::qptl_formula f = alq::template_instance(tmpl[0], tmpl[1], tmpl[2]);
        std::ofstream out(fs::path(gen_dir) /
                          ("template_" + std::to_string(tmpl[0]) + "_" +
                           std::to_string(tmpl[1]) + "_" +
                           std::to_string(tmpl[2]) + ".qptl"));
        out << alq::to_string(f) << "\n";
      }
      for (std::size_t i = 0; i < gen_count; ++i) {
        alq::qptl_formula f = alq::random_instance(seed + i, {});
        std::ostringstream name;
        name << "rand_";
        name.width(4);
        name.fill('0');
        name << i << ".qptl";
        std::ofstream out(fs::path(gen_dir) / name.str());
        out << "# seed " << (seed + i) << "\n" << alq::to_string(f) << "\n";
      }
      return 0;
    }
  } catch (const alq::unsupported_fragment& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const alq::parse_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const alq::resource_limit& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 5;
  }
  return 5;
}
