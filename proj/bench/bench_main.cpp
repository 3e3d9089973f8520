// Timing comparison of the parallel kernels against their serial runs and,
// for enumeration, against the definitional reference loop. Every row also
// cross-checks that the variants produced identical results; on a machine
// with a single core the speedup column will hover around 1.0x.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <random>
#include <set>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "pcsp/analyze.hpp"
#include "pcsp/encodings.hpp"
#include "pcsp/instance.hpp"
#include "pcsp/reduce.hpp"
#include "pcsp/splitlist.hpp"
#include "pcsp/treedp.hpp"
#include "test_util.hpp"

namespace {

using namespace pcsp;

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

template <class F>
auto timed(F&& f, double& out_s) {
  auto t0 = std::chrono::steady_clock::now();
  auto result = f();
  out_s = seconds_since(t0);
  return result;
}

void row(const std::string& name, double serial_s, double parallel_s, bool agree) {
  std::printf("%-34s %9.3fs %12.3fs %8.2fx   %s\n", name.c_str(), serial_s, parallel_s,
              serial_s / parallel_s, agree ? "yes" : "NO");
}

WeightedGraph unit_weights(const ConstraintGraph& g) {
  WeightedGraph out;
  out.n = g.n;
  for (auto [x, y] : g.edges) out.edges.emplace_back(x, y, Rat(1));
  return out;
}

ConstraintGraph random_cubic(std::mt19937_64& g, int n) {
  for (;;) {
    std::vector<int> stubs;
    for (int v = 0; v < n; ++v) stubs.insert(stubs.end(), 3, v);
    std::shuffle(stubs.begin(), stubs.end(), g);
    std::set<std::pair<int, int>> edges;
    bool simple = true;
    for (std::size_t i = 0; i + 1 < stubs.size() && simple; i += 2) {
      int x = std::min(stubs[i], stubs[i + 1]), y = std::max(stubs[i], stubs[i + 1]);
      simple = (x != y) && edges.insert({x, y}).second;
    }
    if (!simple) continue;
    ConstraintGraph out;
    out.n = n;
    out.edges.assign(edges.begin(), edges.end());
    return out;
  }
}

WeightedGraph grid(int rows, int cols) {
  ConstraintGraph g;
  g.n = rows * cols;
  auto vid = [cols](int r, int c) { return r * cols + c; };
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) {
      if (c + 1 < cols) g.edges.emplace_back(vid(r, c), vid(r, c + 1));
      if (r + 1 < rows) g.edges.emplace_back(vid(r, c), vid(r + 1, c));
    }
  return unit_weights(g);
}

// Ring plus distance-2 chords with random two-variable scores everywhere:
// dense enough that enumeration has real work per assignment.
Instance chorded_ring(std::mt19937_64& g, int n) {
  RegistryPtr reg = testutil::zw_registry();
  Instance I = Instance::ones(n, 2, reg);
  for (int v = 0; v < n; ++v)
    for (int c = 0; c < I.k; ++c) I.vertex_scores[v][c] = testutil::random_poly(reg, g, 0, 3);
  for (int v = 0; v < n; ++v)
    for (int step : {1, 2}) {
      int u = (v + step) % n;
      auto& tbl = I.edge_table(std::min(v, u), std::max(v, u));
      for (auto& cell : tbl) cell = testutil::random_poly(reg, g, 0, 3);
    }
  return I;
}

}  // namespace

int main(int argc, char** argv) {
  int threads = argc > 1 ? std::atoi(argv[1]) : 4;
  std::mt19937_64 g(2024);
  SolveOptions<Polynomial> serial;
  SolveOptions<Polynomial> parallel;
  parallel.threads = threads;

#ifdef _OPENMP
  std::printf("OpenMP enabled, %d processor(s) available, parallel runs use %d threads\n",
              omp_get_num_procs(), threads);
#else
  std::printf("built without OpenMP: parallel runs fall back to serial\n");
#endif

  char parallel_header[16];
  std::snprintf(parallel_header, sizeof parallel_header, "threads=%d", threads);
  std::printf("%-34s %10s %13s %9s   %s\n\n", "kernel", "serial", parallel_header, "speedup",
              "agree");

  {
    Instance I = chorded_ring(g, 13);
    double def_s, dfs_s, par_s;
    Polynomial a = timed([&] { return brute_force_partition_serial(I); }, def_s);
    Polynomial b = timed([&] { return brute_force_partition(I, serial); }, dfs_s);
    Polynomial c = timed([&] { return brute_force_partition(I, parallel); }, par_s);
    std::printf("%-34s %9.3fs %10.2fx faster than definitional   agree: %s\n",
                "enumerate/definitional reference", def_s, def_s / dfs_s, a == b ? "yes" : "NO");
    row("enumerate/shared-prefix dfs", dfs_s, par_s, b == c);
  }

  {
    Instance I = encode_max_cut(unit_weights(random_cubic(g, 40)));
    SolveOptions<Polynomial> ser = serial, par = parallel;
    ser.post = par.post = make_prune_hook(require_var(I.reg, "z"));
    double ser_s, par_s;
    Polynomial a = timed([&] { return solve_reductive(I, ser); }, ser_s);
    Polynomial b = timed([&] { return solve_reductive(I, par); }, par_s);
    row("reduce/pruned maxcut cubic n=40", ser_s, par_s, a == b);
  }

  {
    Instance I = encode_max_cut(grid(5, 10));
    TreeDecomposition td = greedy_decomposition(I.graph());
    double ser_s, par_s;
    Polynomial a = timed([&] { return solve_treedp(I, td, serial); }, ser_s);
    Polynomial b = timed([&] { return solve_treedp(I, td, parallel); }, par_s);
    row("treedp/maxcut grid 5x10", ser_s, par_s, a == b);
  }

  {
    Instance I = encode_max_cut(unit_weights(random_cubic(g, 18)));
    double ser_s, par_s;
    Polynomial a = timed([&] { return solve_splitlist(I, serial); }, ser_s);
    Polynomial b = timed([&] { return solve_splitlist(I, parallel); }, par_s);
    row("splitlist/maxcut cubic n=18", ser_s, par_s, a == b);
  }

  return 0;
}
