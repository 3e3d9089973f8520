#ifndef PCSP_TREEDP_HPP
#define PCSP_TREEDP_HPP

#include <iosfwd>
#include <tuple>
#include <utility>
#include <vector>

#include "pcsp/instance.hpp"

namespace pcsp {

struct TreeDecomposition {
  std::vector<std::vector<int>> bags;
  std::vector<std::pair<int, int>> edges;  // between bag indices

  int width() const {
    int w = -1;
    for (const auto& b : bags) w = std::max(w, static_cast<int>(b.size()) - 1);
    return w;
  }
};

// Checks the three decomposition properties (vertex coverage, edge coverage,
// connected occurrences) plus that the bag graph is in fact a tree.
ValidationResult validate_decomposition(const ConstraintGraph& g, const TreeDecomposition& td);

// Min-fill elimination: repeatedly removes the vertex whose neighborhood
// needs the fewest fill edges (ties to the smallest index); the bag of each
// vertex is itself plus its still-alive neighbors.
TreeDecomposition greedy_decomposition(const ConstraintGraph& g);

// PACE-style .td files: 'c' comments, 's td <bags> <width+1> <n>', one
// 'b <id> <vertices...>' line per bag, then tree edges; all ids 1-based.
TreeDecomposition read_tree_decomposition(std::istream& in);
TreeDecomposition read_tree_decomposition_file(const std::string& path);
void write_tree_decomposition(std::ostream& out, const TreeDecomposition& td, int n);

// Which bag each vertex / edge score multiplies into: the smallest-index bag
// containing the vertex (resp. both endpoints).
struct ScorePlacement {
  std::vector<int> vertex_bag;
  std::map<std::pair<int, int>, int> edge_bag;
};
ScorePlacement assign_scores_to_bags(const ConstraintGraph& g,
                                     const std::vector<std::vector<int>>& bags);

struct TreeDpStats {
  std::size_t max_table_entries = 0;
  int absorptions = 0;
};

namespace detail {

inline std::vector<std::vector<int>> normalized_bags(const TreeDecomposition& td) {
  auto bags = td.bags;
  for (auto& b : bags) {
    std::sort(b.begin(), b.end());
    b.erase(std::unique(b.begin(), b.end()), b.end());
  }
  return bags;
}

inline std::size_t table_size(int k, std::size_t bag_size) {
  std::size_t s = 1;
  for (std::size_t i = 0; i < bag_size; ++i) s *= static_cast<std::size_t>(k);
  return s;
}

// Positions of the (sorted) subset `sub` within the sorted bag `super`.
inline std::vector<int> positions_in(const std::vector<int>& sub,
                                     const std::vector<int>& super) {
  std::vector<int> pos;
  pos.reserve(sub.size());
  std::size_t j = 0;
  for (int v : sub) {
    while (j < super.size() && super[j] < v) ++j;
    if (j == super.size() || super[j] != v) throw InvariantError("subset position lookup failed");
    pos.push_back(static_cast<int>(j));
  }
  return pos;
}

// Index arithmetic for bag tables: the bag's vertices in ascending order are
// digits of a base-k number, smallest vertex least significant.
inline int digit_at(std::size_t index, int pos, int k) {
  for (int i = 0; i < pos; ++i) index /= static_cast<std::size_t>(k);
  return static_cast<int>(index % static_cast<std::size_t>(k));
}

template <class R>
std::vector<R> build_bag_table(const BasicInstance<R>& I, const std::vector<int>& bag,
                               int bag_index, const ScorePlacement& placement,
                               const SolveOptions<R>& opt) {
  std::size_t size = table_size(I.k, bag.size());
  std::vector<R> table(size, RingTraits<R>::one());
  std::vector<int> owned_vertices;
  for (std::size_t p = 0; p < bag.size(); ++p)
    if (placement.vertex_bag[bag[p]] == bag_index) owned_vertices.push_back(static_cast<int>(p));
  std::vector<std::tuple<int, int, const std::vector<R>*>> owned_edges;
  for (const auto& [e, owner] : placement.edge_bag)
    if (owner == bag_index) {
      auto xpos = positions_in({e.first}, bag)[0];
      auto ypos = positions_in({e.second}, bag)[0];
      owned_edges.emplace_back(xpos, ypos, &I.edge_table_at(e.first, e.second));
    }

  auto fill = [&](std::size_t idx) {
    R val = RingTraits<R>::one();
    for (int p : owned_vertices) {
      val = val * I.vertex_scores[bag[p]][digit_at(idx, p, I.k)];
      opt.apply(val);
    }
    for (const auto& [xp, yp, tbl] : owned_edges) {
      val = val * (*tbl)[static_cast<std::size_t>(digit_at(idx, xp, I.k)) * I.k +
                         digit_at(idx, yp, I.k)];
      opt.apply(val);
    }
    table[idx] = std::move(val);
  };

#ifdef _OPENMP
  if (opt.threads > 1 && size >= 64) {
#pragma omp parallel for schedule(static) num_threads(opt.threads)
    for (std::size_t idx = 0; idx < size; ++idx) fill(idx);
    return table;
  }
#endif
  for (std::size_t idx = 0; idx < size; ++idx) fill(idx);
  return table;
}

}  // namespace detail

// Partition function by dynamic programming over a tree decomposition.
// Every vertex and edge score is multiplied into exactly one bag table; then
// leaves are absorbed into their neighbors until only bag 0 (the root)
// remains. Absorbing leaf L into neighbor P marginalizes L's table down to
// the shared vertices and multiplies it in:
//   f'(s) = sum over colorings of L\P extending s of f_L
//   f_P(t) *= f'(t restricted to L∩P)
// Leaves are absorbed smallest-bag first (ties to the smallest index), and
// Z = nullary * sum of the root table.
template <class R>
R solve_treedp(const BasicInstance<R>& I, const TreeDecomposition& td,
               const SolveOptions<R>& opt = {}, TreeDpStats* stats = nullptr) {
  require_valid(I);
  ValidationResult vr = validate_decomposition(I.graph(), td);
  if (!vr.ok) throw UsageError("invalid tree decomposition: " + vr.message);

  auto bags = detail::normalized_bags(td);
  int nb = static_cast<int>(bags.size());
  ScorePlacement placement = assign_scores_to_bags(I.graph(), bags);

  R nullary = I.nullary;
  opt.apply(nullary);

  std::vector<std::vector<R>> tables(nb);
  for (int b = 0; b < nb; ++b) {
    tables[b] = detail::build_bag_table(I, bags[b], b, placement, opt);
    if (stats) stats->max_table_entries = std::max(stats->max_table_entries, tables[b].size());
  }

  std::vector<std::vector<int>> nbr(nb);
  for (const auto& [a, b] : td.edges) {
    nbr[a].push_back(b);
    nbr[b].push_back(a);
  }
  std::vector<char> alive(nb, 1);
  int alive_count = nb;

  while (alive_count > 1) {
    int leaf = -1;
    for (int b = 1; b < nb; ++b) {
      if (!alive[b]) continue;
      int deg = 0;
      for (int u : nbr[b]) deg += alive[u];
      if (deg != 1) continue;
      if (leaf < 0 || bags[b].size() < bags[leaf].size()) leaf = b;
    }
    if (leaf < 0) throw InvariantError("no absorbable leaf found");
    int parent = -1;
    for (int u : nbr[leaf])
      if (alive[u]) parent = u;

    const auto& L = bags[leaf];
    const auto& P = bags[parent];
    std::vector<int> shared;
    std::set_intersection(L.begin(), L.end(), P.begin(), P.end(), std::back_inserter(shared));
    std::vector<int> only;
    std::set_difference(L.begin(), L.end(), shared.begin(), shared.end(),
                        std::back_inserter(only));
    auto shared_pos_L = detail::positions_in(shared, L);
    auto only_pos_L = detail::positions_in(only, L);
    auto shared_pos_P = detail::positions_in(shared, P);

    std::vector<std::size_t> kpow(L.size() + 1, 1);
    for (std::size_t i = 0; i < L.size(); ++i) kpow[i + 1] = kpow[i] * I.k;

    std::size_t shared_size = detail::table_size(I.k, shared.size());
    std::size_t only_size = detail::table_size(I.k, only.size());
    std::vector<R> folded(shared_size, RingTraits<R>::zero());
    const auto& lt = tables[leaf];

    auto fold_one = [&](std::size_t s) {
      std::size_t base = 0;
      for (std::size_t i = 0; i < shared.size(); ++i)
        base += kpow[shared_pos_L[i]] * detail::digit_at(s, static_cast<int>(i), I.k);
      R acc = RingTraits<R>::zero();
      for (std::size_t o = 0; o < only_size; ++o) {
        std::size_t idx = base;
        for (std::size_t i = 0; i < only.size(); ++i)
          idx += kpow[only_pos_L[i]] * detail::digit_at(o, static_cast<int>(i), I.k);
        acc = acc + lt[idx];
        opt.apply(acc);
      }
      folded[s] = std::move(acc);
    };

    auto& pt = tables[parent];
    auto scale_one = [&](std::size_t t) {
      std::size_t s = 0;
      std::size_t mul = 1;
      for (std::size_t i = 0; i < shared.size(); ++i) {
        s += mul * detail::digit_at(t, shared_pos_P[i], I.k);
        mul *= static_cast<std::size_t>(I.k);
      }
      pt[t] = pt[t] * folded[s];
      opt.apply(pt[t]);
    };

#ifdef _OPENMP
    if (opt.threads > 1 && (shared_size >= 64 || pt.size() >= 64)) {
#pragma omp parallel num_threads(opt.threads)
      {
#pragma omp for schedule(static)
        for (std::size_t s = 0; s < shared_size; ++s) fold_one(s);
#pragma omp for schedule(static)
        for (std::size_t t = 0; t < pt.size(); ++t) scale_one(t);
      }
    } else
#endif
    {
      for (std::size_t s = 0; s < shared_size; ++s) fold_one(s);
      for (std::size_t t = 0; t < pt.size(); ++t) scale_one(t);
    }

    if (opt.trace) {
      *opt.trace << "absorb bag " << leaf << " (" << L.size() << " vertices) into bag "
                 << parent << "\n";
    }
    tables[leaf].clear();
    tables[leaf].shrink_to_fit();
    alive[leaf] = 0;
    --alive_count;
    if (stats) ++stats->absorptions;
  }

  R sum = RingTraits<R>::zero();
  for (const auto& entry : tables[0]) {
    sum = sum + entry;
    opt.apply(sum);
  }
  sum = nullary * sum;
  opt.apply(sum);
  return sum;
}

// Convenience: greedy decomposition of the instance's own graph.
template <class R>
R solve_treedp(const BasicInstance<R>& I, const SolveOptions<R>& opt = {},
               TreeDpStats* stats = nullptr) {
  return solve_treedp(I, greedy_decomposition(I.graph()), opt, stats);
}

}  // namespace pcsp

#endif
