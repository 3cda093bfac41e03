#include "alquant/bench.hpp"

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

namespace alq {

namespace {

bench_row run_one(const std::filesystem::path& path,
                  const bench_options& opt) {
  bench_row row;
  row.instance = path.stem().string();
  auto t0 = std::chrono::steady_clock::now();
  try {
    std::ifstream in(path);
    if (!in) throw error("cannot read " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    qptl_formula f = parse_qptl(buf.str());
    compile_config cfg = opt.cfg;
    cfg.deadline = t0 + std::chrono::duration_cast<
                            std::chrono::steady_clock::duration>(
                            std::chrono::duration<double>(opt.timeout_seconds));
    run_stats rs = solve_qptl(f, cfg);
    row.verdict = to_string(rs.v);
    row.states_final = rs.states_final;
    row.macros_total = rs.macros_total;
  } catch (const timeout_error&) {
    row.verdict = "TIMEOUT";
  } catch (const resource_limit&) {
    row.verdict = "RESOURCE";
  } catch (const std::exception&) {
    row.verdict = "ERROR";
  }
  row.millis = std::chrono::duration_cast<std::chrono::milliseconds>(
                   std::chrono::steady_clock::now() - t0)
                   .count();
  return row;
}

}  // namespace

std::vector<bench_row> run_bench(const bench_options& opt) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(opt.dir))
    throw error("bench: '" + opt.dir + "' is not a directory");
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(opt.dir))
    if (e.is_regular_file() && e.path().extension() == ".qptl")
      files.push_back(e.path());
  std::sort(files.begin(), files.end());

  std::vector<bench_row> rows(files.size());
  std::size_t jobs = std::max<std::size_t>(1, opt.jobs);
  if (jobs == 1) {
    for (std::size_t i = 0; i < files.size(); ++i)
      rows[i] = run_one(files[i], opt);
    return rows;
  }
  std::atomic<std::size_t> cursor{0};
  auto worker = [&]() {
    for (;;) {
      std::size_t i = cursor.fetch_add(1);
      if (i >= files.size()) return;
      rows[i] = run_one(files[i], opt);
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t j = 0; j < std::min(jobs, files.size()); ++j)
    pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  return rows;
}

std::string to_csv(const std::vector<bench_row>& rows, bool zero_millis) {
  std::string out = "instance,verdict,millis,states_final,macros_total\n";
  for (const bench_row& r : rows) {
    out += r.instance + "," + r.verdict + ",";
    out += std::to_string(zero_millis ? 0 : r.millis) + ",";
    out += std::to_string(r.states_final) + ",";
    out += std::to_string(r.macros_total) + "\n";
  }
  return out;
}

}  // namespace alq
