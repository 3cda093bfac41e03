#pragma once

// Benchmark harness: runs every *.qptl file in a directory through the
// solver, one row per instance, in filename order.

#include <cstddef>
#include <string>
#include <vector>

#include "alquant/compiler.hpp"

namespace alq {

struct bench_options {
  std::string dir;
  double timeout_seconds = 30.0;
  std::size_t jobs = 1;
  compile_config cfg;
};

struct bench_row {
  std::string instance;  // file name without extension
  std::string verdict;   // SAT, UNSAT, TIMEOUT, RESOURCE or ERROR
  long long millis = 0;
  std::size_t states_final = 0;
  std::size_t macros_total = 0;
};

// Throws error when the directory is missing; a directory without
// instances yields an empty table.
std::vector<bench_row> run_bench(const bench_options& opt);

// Header plus one line per row; zero_millis pins the millis column to 0 so
// outputs compare byte for byte across runs.
std::string to_csv(const std::vector<bench_row>& rows, bool zero_millis);

}  // namespace alq
