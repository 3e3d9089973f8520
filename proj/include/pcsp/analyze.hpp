#ifndef PCSP_ANALYZE_HPP
#define PCSP_ANALYZE_HPP

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "pcsp/instance.hpp"
#include "pcsp/reduce.hpp"

namespace pcsp {

// Conditional partition functions: fix the vertices of `fixed` (vertex ->
// color), then return one Z per color of `target`. Summing the vector over
// a fully free instance reproduces Z.
template <class R>
std::vector<R> conditional_partition(const BasicInstance<R>& I,
                                     const std::map<int, int>& fixed, int target,
                                     const SolveOptions<R>& opt = {}) {
  if (target < 0 || target >= I.n) throw UsageError("conditional: target vertex out of range");
  if (fixed.count(target)) throw UsageError("conditional: target vertex is already fixed");
  BasicInstance<R> cur = I;
  int target_now = target;
  // fixing in descending order keeps the pending indices stable
  for (auto it = fixed.rbegin(); it != fixed.rend(); ++it) {
    auto [v, c] = *it;
    if (v < 0 || v >= I.n) throw UsageError("conditional: fixed vertex out of range");
    cur = fix_vertex(cur, v, c, opt);
    if (v < target) --target_now;
  }
  std::vector<R> out;
  out.reserve(I.k);
  for (int c = 0; c < I.k; ++c)
    out.push_back(solve_reductive(fix_vertex(cur, target_now, c, opt), opt));
  return out;
}

// Exact uniform draw from [0, bound).
Int uniform_int_below(std::mt19937_64& rng, const Int& bound);

// Assignment achieving the maximum degree of `objective` in Z, built by
// fixing vertices in index order and keeping the smallest color whose
// conditional partition function still reaches the optimum. Requires
// nonnegative coefficients (the walk prunes on the objective variable).
Assignment construct_optimal(const Instance& I, VarId objective,
                             const SolveOptions<Polynomial>& opt = {});

// Uniform sample over the assignments achieving the maximum degree: at each
// vertex a color is drawn with probability proportional to the number of
// optimal completions, which is the leading coefficient mass of the
// conditional partition function.
Assignment sample_optimal(const Instance& I, VarId objective, std::mt19937_64& rng,
                          const SolveOptions<Polynomial>& opt = {});

// Gibbs draw at a numeric point: vertex by vertex, colors are drawn with
// probability proportional to the conditional partition function evaluated
// at `point`, so the joint law is score(sigma) / Z. All evaluated scores
// must be strictly positive.
Assignment sample_gibbs(const Instance& I, const std::map<VarId, double>& point,
                        std::mt19937_64& rng, const SolveOptions<double>& opt = {});

// Key-value report produced by the readout extractors.
struct Report {
  std::vector<std::pair<std::string, std::string>> entries;

  void add(const std::string& key, const std::string& value) { entries.emplace_back(key, value); }
  std::string str() const;
  const std::string& value_of(const std::string& key) const;
};

VarId require_var(const RegistryPtr& reg, const std::string& name);

// max_cut: maximum degree of z and the number of assignments achieving it.
Report extract_cut(const Polynomial& Z, const std::string& zname = "z");

// bisection: restrict to part size floor(n/2) (the w-degree), then report
// the extreme z-degrees; unordered counts are halved when n is even.
Report extract_bisection(const Polynomial& Z, int n, const std::string& zname = "z",
                         const std::string& wname = "w");

// clique: the largest s whose w^s z^(s(s-1)/2) slice is nonempty.
Report extract_clique(const Polynomial& Z, const std::string& zname = "z",
                      const std::string& wname = "w");

// independent set: the largest s with a w^s z^0 term.
Report extract_mis(const Polynomial& Z, const std::string& zname = "z",
                   const std::string& wname = "w");

// sparsest cut: over terms with part size 0 < s < n, the extreme ratio of
// crossing-edge degree to part size (ties to the smaller part, then fewer
// crossing edges).
Report extract_sparsest(const Polynomial& Z, int n, const std::string& zname = "z",
                        const std::string& wname = "w");

// judicious partition: minimize over assignments the larger of the two
// within-side degrees.
Report extract_judicious(const Polynomial& Z, const std::string& z0name = "z0",
                         const std::string& z1name = "z1");

}  // namespace pcsp

#endif
