#ifndef PCSP_REDUCE_HPP
#define PCSP_REDUCE_HPP

#include <ostream>
#include <string>
#include <vector>

#include "pcsp/instance.hpp"

namespace pcsp {

enum class ReduceStep { Isolated, Split, Type1, Type2, Type3 };

const char* reduce_step_name(ReduceStep s);

namespace detail {

template <class R>
void trace_step(const SolveOptions<R>& opt, ReduceStep kind, int pivot,
                const BasicInstance<R>& I) {
  if (!opt.trace) return;
#ifdef _OPENMP
#pragma omp critical(pcsp_reduce_trace)
#endif
  {
    *opt.trace << reduce_step_name(kind);
    if (pivot >= 0) *opt.trace << " v=" << pivot;
    *opt.trace << " n=" << I.n << " m=" << I.m() << "\n";
  }
}

// Copies the subinstance induced by `verts` (sorted ascending). The nullary
// score transfers only when `with_nullary` is set, so a component split does
// not multiply it in more than once.
template <class R>
BasicInstance<R> induced_subinstance(const BasicInstance<R>& I, const std::vector<int>& verts,
                                     bool with_nullary) {
  BasicInstance<R> out = BasicInstance<R>::ones(static_cast<int>(verts.size()), I.k, I.reg);
  if (with_nullary) out.nullary = I.nullary;
  std::vector<int> where(I.n, -1);
  for (std::size_t i = 0; i < verts.size(); ++i) where[verts[i]] = static_cast<int>(i);
  for (std::size_t i = 0; i < verts.size(); ++i) out.vertex_scores[i] = I.vertex_scores[verts[i]];
  for (const auto& [e, tbl] : I.edge_scores) {
    int x = where[e.first], y = where[e.second];
    if (x < 0 && y < 0) continue;
    if (x < 0 || y < 0)
      throw UsageError("induced subinstance would cut an edge");
    out.edge_scores[{x, y}] = tbl;  // order is preserved, x < y still holds
  }
  return out;
}

}  // namespace detail

// Degree-0 vertex: its color sum folds into the nullary score.
template <class R>
BasicInstance<R> remove_isolated(const BasicInstance<R>& I, int v,
                                 const SolveOptions<R>& opt = {}) {
  if (v < 0 || v >= I.n) throw UsageError("remove_isolated: vertex out of range");
  auto deg = I.graph().degrees();
  if (deg[v] != 0) throw UsageError("remove_isolated: vertex has neighbors");
  R color_sum = RingTraits<R>::zero();
  for (int c = 0; c < I.k; ++c) {
    color_sum = color_sum + I.vertex_scores[v][c];
    opt.apply(color_sum);
  }
  BasicInstance<R> out = detail::induced_subinstance(I, [&] {
    std::vector<int> verts;
    for (int u = 0; u < I.n; ++u)
      if (u != v) verts.push_back(u);
    return verts;
  }(), true);
  out.nullary = out.nullary * color_sum;
  opt.apply(out.nullary);
  return out;
}

// Disconnected instance: one subinstance per component, Z multiplies. The
// first component keeps the nullary score.
template <class R>
std::vector<BasicInstance<R>> split_components(const BasicInstance<R>& I) {
  auto comps = connected_components(I.graph());
  if (comps.size() < 2) throw UsageError("split_components: instance is connected");
  std::vector<BasicInstance<R>> out;
  out.reserve(comps.size());
  for (std::size_t i = 0; i < comps.size(); ++i)
    out.push_back(detail::induced_subinstance(I, comps[i], i == 0));
  return out;
}

// Degree-1 vertex v with neighbor u: summing v's colors against the edge
// rewrites u's vertex scores and v disappears.
//   p~_u(i) = p_u(i) * sum_j p_uv(i, j) p_v(j)
template <class R>
BasicInstance<R> reduce_type1(const BasicInstance<R>& I, int v, const SolveOptions<R>& opt = {}) {
  if (v < 0 || v >= I.n) throw UsageError("reduce_type1: vertex out of range");
  auto adj = I.graph().adjacency();
  if (adj[v].size() != 1) throw UsageError("reduce_type1: vertex degree is not 1");
  int u = adj[v][0];
  std::vector<R> folded(I.k);
  for (int i = 0; i < I.k; ++i) {
    R s = RingTraits<R>::zero();
    for (int j = 0; j < I.k; ++j) {
      s = s + I.edge_score(u, v, i, j) * I.vertex_scores[v][j];
      opt.apply(s);
    }
    folded[i] = I.vertex_scores[u][i] * s;
    opt.apply(folded[i]);
  }
  std::vector<int> keep;
  for (int t = 0; t < I.n; ++t)
    if (t != v) keep.push_back(t);
  BasicInstance<R> out = detail::induced_subinstance(
      [&] {
        BasicInstance<R> tmp = I;
        tmp.edge_scores.erase({std::min(u, v), std::max(u, v)});
        return tmp;
      }(),
      keep, true);
  out.vertex_scores[u < v ? u : u - 1] = std::move(folded);
  return out;
}

// Degree-2 vertex v on the path u - v - w: summing v's colors against both
// edges rewrites (and possibly creates) the edge between u and w.
//   p~_uw(i, j) = p_uw(i, j) * sum_l p_uv(i, l) p_v(l) p_vw(l, j)
template <class R>
BasicInstance<R> reduce_type2(const BasicInstance<R>& I, int v, const SolveOptions<R>& opt = {}) {
  if (v < 0 || v >= I.n) throw UsageError("reduce_type2: vertex out of range");
  auto adj = I.graph().adjacency();
  if (adj[v].size() != 2) throw UsageError("reduce_type2: vertex degree is not 2");
  int u = adj[v][0], w = adj[v][1];  // u < w by adjacency construction
  std::vector<R> folded(static_cast<std::size_t>(I.k) * I.k);
  for (int i = 0; i < I.k; ++i)
    for (int j = 0; j < I.k; ++j) {
      R s = RingTraits<R>::zero();
      for (int l = 0; l < I.k; ++l) {
        s = s + I.edge_score(u, v, i, l) * I.vertex_scores[v][l] * I.edge_score(v, w, l, j);
        opt.apply(s);
      }
      folded[static_cast<std::size_t>(i) * I.k + j] = s;
    }
  BasicInstance<R> tmp = I;
  tmp.edge_scores.erase({std::min(u, v), std::max(u, v)});
  tmp.edge_scores.erase({std::min(v, w), std::max(v, w)});
  auto& uw = tmp.edge_table(u, w);
  for (int i = 0; i < I.k; ++i)
    for (int j = 0; j < I.k; ++j) {
      std::size_t cell = static_cast<std::size_t>(i) * I.k + j;
      // the table is keyed with u < w; folded is indexed the same way
      uw[cell] = uw[cell] * folded[cell];
      opt.apply(uw[cell]);
    }
  std::vector<int> keep;
  for (int t = 0; t < I.n; ++t)
    if (t != v) keep.push_back(t);
  return detail::induced_subinstance(tmp, keep, true);
}

// Branching: one restricted instance per color of v; Z is their sum.
template <class R>
std::vector<BasicInstance<R>> branch_type3(const BasicInstance<R>& I, int v,
                                           const SolveOptions<R>& opt = {}) {
  std::vector<BasicInstance<R>> out;
  out.reserve(I.k);
  for (int c = 0; c < I.k; ++c) out.push_back(fix_vertex(I, v, c, opt));
  return out;
}

namespace detail {

template <class R>
R solve_reductive_rec(BasicInstance<R> I, const SolveOptions<R>& opt, int depth) {
  for (;;) {
    if (I.n == 0) return I.nullary;
    auto deg = I.graph().degrees();

    int isolated = -1, deg1 = -1, deg2 = -1, pivot = 0;
    for (int v = 0; v < I.n; ++v) {
      if (deg[v] == 0 && isolated < 0) isolated = v;
      if (deg[v] == 1 && deg1 < 0) deg1 = v;
      if (deg[v] == 2 && deg2 < 0) deg2 = v;
      if (deg[v] > deg[pivot]) pivot = v;
    }

    if (isolated >= 0) {
      trace_step(opt, ReduceStep::Isolated, isolated, I);
      I = remove_isolated(I, isolated, opt);
      continue;
    }

    auto comps = connected_components(I.graph());
    if (comps.size() > 1) {
      trace_step(opt, ReduceStep::Split, -1, I);
      auto parts = split_components(I);
      R prod = RingTraits<R>::one();
      for (auto& part : parts) {
        prod = prod * solve_reductive_rec(std::move(part), opt, depth);
        opt.apply(prod);
      }
      return prod;
    }

    if (deg1 >= 0) {
      trace_step(opt, ReduceStep::Type1, deg1, I);
      I = reduce_type1(I, deg1, opt);
      continue;
    }
    if (deg2 >= 0) {
      trace_step(opt, ReduceStep::Type2, deg2, I);
      I = reduce_type2(I, deg2, opt);
      continue;
    }

    trace_step(opt, ReduceStep::Type3, pivot, I);
    auto branches = branch_type3(I, pivot, opt);
    std::vector<R> results(branches.size(), RingTraits<R>::zero());
#ifdef _OPENMP
    bool parallel = opt.threads > 1 && depth < 4 && I.n >= 6;
    if (parallel) {
#pragma omp taskgroup
      {
        for (std::size_t c = 0; c < branches.size(); ++c) {
#pragma omp task firstprivate(c) shared(results, branches, opt)
          results[c] = solve_reductive_rec(std::move(branches[c]), opt, depth + 1);
        }
      }
    } else
#endif
    {
      for (std::size_t c = 0; c < branches.size(); ++c)
        results[c] = solve_reductive_rec(std::move(branches[c]), opt, depth + 1);
    }
    R sum = RingTraits<R>::zero();
    for (auto& r : results) {
      sum = sum + r;
      opt.apply(sum);
    }
    return sum;
  }
}

template <class R>
BasicInstance<R> apply_post_to_scores(BasicInstance<R> I, const SolveOptions<R>& opt) {
  if (!opt.post) return I;
  opt.apply(I.nullary);
  for (auto& row : I.vertex_scores)
    for (auto& p : row) opt.apply(p);
  for (auto& [e, tbl] : I.edge_scores) {
    (void)e;
    for (auto& p : tbl) opt.apply(p);
  }
  return I;
}

}  // namespace detail

// Full reduction pipeline. Cheap rewrites take priority over branching:
// isolated vertices, then component splits, then degree-1 and degree-2
// eliminations; only when the instance has minimum degree 3 does it branch,
// on a maximum-degree vertex (ties to the smallest index). `opt.post` is
// applied to the input scores and to every intermediate result.
template <class R>
R solve_reductive(const BasicInstance<R>& I, const SolveOptions<R>& opt = {}) {
  require_valid(I);
  BasicInstance<R> start = detail::apply_post_to_scores(I, opt);
#ifdef _OPENMP
  if (opt.threads > 1) {
    R out = RingTraits<R>::zero();
#pragma omp parallel num_threads(opt.threads)
#pragma omp single
    out = detail::solve_reductive_rec(std::move(start), opt, 0);
    return out;
  }
#endif
  return detail::solve_reductive_rec(std::move(start), opt, 0);
}

}  // namespace pcsp

#endif
