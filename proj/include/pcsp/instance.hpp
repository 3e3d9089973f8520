#ifndef PCSP_INSTANCE_HPP
#define PCSP_INSTANCE_HPP

#include <algorithm>
#include <functional>
#include <iosfwd>
#include <map>
#include <string>
#include <utility>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "pcsp/errors.hpp"
#include "pcsp/ring.hpp"

namespace pcsp {

// Simple undirected graph; edges stored with the smaller endpoint first.
struct ConstraintGraph {
  int n = 0;
  std::vector<std::pair<int, int>> edges;

  std::vector<std::vector<int>> adjacency() const;
  std::vector<int> degrees() const;
};

// Connected components as sorted vertex lists, ordered by smallest member.
std::vector<std::vector<int>> connected_components(const ConstraintGraph& g);

using Assignment = std::vector<int>;

std::string assignment_to_string(const Assignment& a);

struct ValidationResult {
  bool ok = true;
  std::string message;
};

// A 2-CSP instance whose scores live in the ring R (exact polynomials for
// symbolic work, doubles for numeric work). Scores multiply over an
// assignment: nullary * per-vertex * per-edge. Edge tables are stored once,
// keyed (x, y) with x < y, row index = color of x.
template <class R>
struct BasicInstance {
  int n = 0;
  int k = 1;
  RegistryPtr reg;  // shared by all polynomial scores; null for numeric rings
  R nullary = RingTraits<R>::one();
  std::vector<std::vector<R>> vertex_scores;              // n rows of k entries
  std::map<std::pair<int, int>, std::vector<R>> edge_scores;  // k*k, row-major

  static BasicInstance ones(int n, int k, RegistryPtr reg = nullptr) {
    BasicInstance I;
    I.n = n;
    I.k = k;
    I.reg = std::move(reg);
    I.vertex_scores.assign(n, std::vector<R>(k, RingTraits<R>::one()));
    return I;
  }

  int m() const { return static_cast<int>(edge_scores.size()); }

  bool has_edge(int x, int y) const {
    if (x > y) std::swap(x, y);
    return edge_scores.count({x, y}) != 0;
  }

  // Creates the (all-ones) table on first touch; use for building instances.
  std::vector<R>& edge_table(int x, int y) {
    if (x > y) std::swap(x, y);
    auto [it, fresh] = edge_scores.try_emplace({x, y});
    if (fresh) it->second.assign(static_cast<std::size_t>(k) * k, RingTraits<R>::one());
    return it->second;
  }

  const std::vector<R>& edge_table_at(int x, int y) const {
    if (x > y) std::swap(x, y);
    auto it = edge_scores.find({x, y});
    if (it == edge_scores.end()) throw UsageError("no such edge");
    return it->second;
  }

  // Score of the constraint between u and v under colors (cu, cv), looked up
  // with the right orientation whichever way the caller names the endpoints.
  const R& edge_score(int u, int v, int cu, int cv) const {
    if (u > v) {
      std::swap(u, v);
      std::swap(cu, cv);
    }
    return edge_table_at(u, v)[static_cast<std::size_t>(cu) * k + cv];
  }

  ConstraintGraph graph() const {
    ConstraintGraph g;
    g.n = n;
    g.edges.reserve(edge_scores.size());
    for (const auto& [e, tbl] : edge_scores) {
      (void)tbl;
      g.edges.push_back(e);
    }
    return g;
  }
};

using Instance = BasicInstance<Polynomial>;
using NumericInstance = BasicInstance<double>;

// Solver knobs shared by every algorithm. `post` runs on each freshly
// produced ring element (products, partial sums, rewritten scores); it is
// where pruning and the intermediate degree check plug in.
template <class R>
struct SolveOptions {
  std::function<void(R&)> post;
  int threads = 1;
  std::ostream* trace = nullptr;

  void apply(R& x) const {
    if (post) post(x);
  }
};

std::function<void(Polynomial&)> make_prune_hook(VarId v);
std::function<void(Polynomial&)> make_degree_check_hook(Rat bound);
std::function<void(Polynomial&)> chain_hooks(std::function<void(Polynomial&)> first,
                                             std::function<void(Polynomial&)> second);

// Every polynomial produced while solving I stays within this per-variable
// exponent bound: (m + n + 1) * max |exponent| over the input scores.
Rat intermediate_degree_bound(const Instance& I);

template <class R>
ValidationResult validate(const BasicInstance<R>& I) {
  auto fail = [](std::string msg) { return ValidationResult{false, std::move(msg)}; };
  if (I.n < 0) return fail("negative vertex count");
  if (I.k < 1) return fail("color count must be at least 1");
  if (static_cast<int>(I.vertex_scores.size()) != I.n)
    return fail("vertex score table count differs from vertex count");
  for (const auto& row : I.vertex_scores)
    if (static_cast<int>(row.size()) != I.k)
      return fail("vertex score row has wrong number of colors");
  for (const auto& [e, tbl] : I.edge_scores) {
    auto [x, y] = e;
    if (x < 0 || y >= I.n) return fail("edge endpoint out of range");
    if (x >= y) return fail("edge endpoints must satisfy x < y");
    if (tbl.size() != static_cast<std::size_t>(I.k) * I.k)
      return fail("edge score table has wrong size");
  }
  if constexpr (std::is_same_v<R, Polynomial>) {
    auto compatible = [&](const Polynomial& p) {
      return !p.registry() || !I.reg || p.registry() == I.reg ||
             p.registry()->names() == I.reg->names();
    };
    if (!compatible(I.nullary)) return fail("nullary score uses a foreign registry");
    for (const auto& row : I.vertex_scores)
      for (const auto& p : row)
        if (!compatible(p)) return fail("vertex score uses a foreign registry");
    for (const auto& [e, tbl] : I.edge_scores) {
      (void)e;
      for (const auto& p : tbl)
        if (!compatible(p)) return fail("edge score uses a foreign registry");
    }
  }
  return {};
}

template <class R>
void require_valid(const BasicInstance<R>& I) {
  ValidationResult r = validate(I);
  if (!r.ok) throw UsageError("invalid instance: " + r.message);
}

template <class R>
R score_assignment(const BasicInstance<R>& I, const Assignment& a) {
  if (static_cast<int>(a.size()) != I.n) throw UsageError("assignment length differs from n");
  for (int c : a)
    if (c < 0 || c >= I.k) throw UsageError("assignment color out of range");
  R s = I.nullary;
  for (int v = 0; v < I.n; ++v) s = s * I.vertex_scores[v][a[v]];
  for (const auto& [e, tbl] : I.edge_scores)
    s = s * tbl[static_cast<std::size_t>(a[e.first]) * I.k + a[e.second]];
  return s;
}

void check_enumeration_guard(int k, int count, int guard_log2, const std::string& what);

// Plain definitional sum over all k^n assignments; the reference the faster
// enumerator below is tested against.
template <class R>
R brute_force_partition_serial(const BasicInstance<R>& I, int guard_log2 = 24) {
  require_valid(I);
  check_enumeration_guard(I.k, I.n, guard_log2, "brute force");
  R sum = RingTraits<R>::zero();
  Assignment a(I.n, 0);
  for (;;) {
    sum = sum + score_assignment(I, a);
    int v = I.n - 1;
    while (v >= 0 && ++a[v] == I.k) a[v--] = 0;
    if (v < 0) break;
  }
  return sum;
}

namespace detail {

template <class R>
struct BruteForceRun {
  const BasicInstance<R>& I;
  const SolveOptions<R>& opt;
  // Edges listed under their larger endpoint, so a DFS that colors vertices
  // in index order can fold each edge in as soon as both ends are colored.
  std::vector<std::vector<std::pair<int, const std::vector<R>*>>> incoming;
  Assignment colors;

  BruteForceRun(const BasicInstance<R>& inst, const SolveOptions<R>& options)
      : I(inst), opt(options), incoming(inst.n), colors(inst.n, 0) {
    for (const auto& [e, tbl] : I.edge_scores) incoming[e.second].push_back({e.first, &tbl});
  }

  R extend(const R& prod, int v, int c) {
    colors[v] = c;
    R next = prod * I.vertex_scores[v][c];
    opt.apply(next);
    for (const auto& [x, tbl] : incoming[v]) {
      next = next * (*tbl)[static_cast<std::size_t>(colors[x]) * I.k + c];
      opt.apply(next);
    }
    return next;
  }

  void dfs(int v, const R& prod, R& sum) {
    if (v == I.n) {
      sum = sum + prod;
      opt.apply(sum);
      return;
    }
    for (int c = 0; c < I.k; ++c) dfs(v + 1, extend(prod, v, c), sum);
  }
};

}  // namespace detail

// Shared-prefix enumeration of Z: a DFS over vertices in index order reuses
// the partial product of each prefix instead of rescoring every assignment
// from scratch. With threads > 1 the color space of a short vertex prefix is
// split into chunks solved in parallel and combined in chunk order, so the
// result does not depend on scheduling.
template <class R>
R brute_force_partition(const BasicInstance<R>& I, const SolveOptions<R>& opt = {},
                        int guard_log2 = 24) {
  require_valid(I);
  check_enumeration_guard(I.k, I.n, guard_log2, "brute force");
  R start = I.nullary;
  opt.apply(start);
  if (I.n == 0) return start;

  int threads = std::max(1, opt.threads);
#ifdef _OPENMP
  if (threads > 1) {
    int prefix = 0;
    long long chunks = 1;
    while (prefix < I.n && chunks < 4LL * threads) {
      chunks *= I.k;
      ++prefix;
    }
    std::vector<R> partial(static_cast<std::size_t>(chunks), RingTraits<R>::zero());
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
    for (long long chunk = 0; chunk < chunks; ++chunk) {
      detail::BruteForceRun<R> run(I, opt);
      R prod = start;
      long long rest = chunk;
      long long scale = chunks;
      for (int v = 0; v < prefix; ++v) {
        scale /= I.k;
        prod = run.extend(prod, v, static_cast<int>((rest / scale) % I.k));
      }
      run.dfs(prefix, prod, partial[static_cast<std::size_t>(chunk)]);
    }
    R sum = RingTraits<R>::zero();
    for (auto& p : partial) {
      sum = sum + p;
      opt.apply(sum);
    }
    return sum;
  }
#endif
  detail::BruteForceRun<R> run(I, opt);
  R sum = RingTraits<R>::zero();
  run.dfs(0, start, sum);
  return sum;
}

// Relabels vertices: vertex v becomes perm[v].
template <class R>
BasicInstance<R> permute_vertices(const BasicInstance<R>& I, const std::vector<int>& perm) {
  if (static_cast<int>(perm.size()) != I.n) throw UsageError("permutation length differs from n");
  std::vector<char> seen(I.n, 0);
  for (int p : perm) {
    if (p < 0 || p >= I.n || seen[p]) throw UsageError("not a permutation");
    seen[p] = 1;
  }
  BasicInstance<R> out = BasicInstance<R>::ones(I.n, I.k, I.reg);
  out.nullary = I.nullary;
  for (int v = 0; v < I.n; ++v) out.vertex_scores[perm[v]] = I.vertex_scores[v];
  for (const auto& [e, tbl] : I.edge_scores) {
    int x = perm[e.first], y = perm[e.second];
    auto& t = out.edge_table(x, y);
    for (int i = 0; i < I.k; ++i)
      for (int j = 0; j < I.k; ++j) {
        const R& s = tbl[static_cast<std::size_t>(i) * I.k + j];
        if (x < y)
          t[static_cast<std::size_t>(i) * I.k + j] = s;
        else
          t[static_cast<std::size_t>(j) * I.k + i] = s;
      }
  }
  return out;
}

// Restriction to sigma(v) = c: v disappears, its vertex score (at c) folds
// into the nullary score, and each incident edge table collapses into the
// neighbor's vertex scores.
template <class R>
BasicInstance<R> fix_vertex(const BasicInstance<R>& I, int v, int c,
                            const SolveOptions<R>& opt = {}) {
  if (v < 0 || v >= I.n) throw UsageError("fix_vertex: vertex out of range");
  if (c < 0 || c >= I.k) throw UsageError("fix_vertex: color out of range");
  BasicInstance<R> out = BasicInstance<R>::ones(I.n - 1, I.k, I.reg);
  out.nullary = I.nullary * I.vertex_scores[v][c];
  opt.apply(out.nullary);
  auto relabel = [v](int u) { return u < v ? u : u - 1; };
  for (int u = 0; u < I.n; ++u) {
    if (u == v) continue;
    out.vertex_scores[relabel(u)] = I.vertex_scores[u];
  }
  for (const auto& [e, tbl] : I.edge_scores) {
    auto [x, y] = e;
    if (x == v || y == v) {
      int u = (x == v) ? y : x;
      int uu = relabel(u);
      for (int j = 0; j < I.k; ++j) {
        const R& s = (x == v) ? tbl[static_cast<std::size_t>(c) * I.k + j]
                              : tbl[static_cast<std::size_t>(j) * I.k + c];
        out.vertex_scores[uu][j] = out.vertex_scores[uu][j] * s;
        opt.apply(out.vertex_scores[uu][j]);
      }
    } else {
      out.edge_table(relabel(x), relabel(y)) = tbl;
    }
  }
  return out;
}

// Specializes every polynomial score at a numeric point.
NumericInstance evaluate_instance(const Instance& I, const std::map<VarId, double>& values);

// Line-oriented instance files:
//   pcsp <n> <m> <k>
//   var <name>
//   nullary <poly>
//   v <vertex> <color> <poly>
//   e <x> <y> <i> <j> <poly>
// Scores not mentioned default to 1; an edge exists iff some `e` line names
// it, and the header's m must match the number of distinct edges.
Instance read_instance(std::istream& in);
Instance read_instance_file(const std::string& path);
void write_instance(std::ostream& out, const Instance& I);

}  // namespace pcsp

#endif
