#include "pcsp/analyze.hpp"

#include <algorithm>

namespace pcsp {

Int uniform_int_below(std::mt19937_64& rng, const Int& bound) {
  if (bound <= 0) throw UsageError("uniform draw from an empty range");
  if (bound == 1) return Int(0);
  unsigned bits = boost::multiprecision::msb(bound - 1) + 1;
  for (;;) {
    Int candidate = 0;
    for (unsigned got = 0; got < bits; got += 64) {
      candidate <<= 64;
      candidate |= Int(rng());
    }
    unsigned produced = ((bits + 63) / 64) * 64;
    candidate >>= (produced - bits);  // keep exactly `bits` random bits
    if (candidate < bound) return candidate;
  }
}

namespace {

SolveOptions<Polynomial> with_objective_prune(const SolveOptions<Polynomial>& opt,
                                              VarId objective) {
  SolveOptions<Polynomial> out = opt;
  out.post = chain_hooks(out.post, make_prune_hook(objective));
  return out;
}

void check_objective(const Instance& I, VarId objective) {
  if (!I.reg || objective < 0 || objective >= I.reg->size())
    throw UsageError("objective variable is not registered");
}

}  // namespace

Assignment construct_optimal(const Instance& I, VarId objective,
                             const SolveOptions<Polynomial>& opt) {
  check_objective(I, objective);
  if (I.n == 0) throw UsageError("cannot optimize over an empty instance");
  SolveOptions<Polynomial> run = with_objective_prune(opt, objective);
  Polynomial Z = solve_reductive(I, run);
  if (Z.is_zero()) throw UsageError("every assignment has score zero");
  Rat target = Z.max_degree(objective);

  Assignment out;
  Instance cur = I;
  for (int t = 0; t < I.n; ++t) {
    int chosen = -1;
    Instance next;
    for (int c = 0; c < I.k; ++c) {
      Instance cand = fix_vertex(cur, 0, c, run);
      Polynomial sub = solve_reductive(cand, run);
      if (!sub.is_zero() && sub.max_degree(objective) == target) {
        chosen = c;
        next = std::move(cand);
        break;
      }
    }
    if (chosen < 0) throw InvariantError("optimum construction found no extension");
    out.push_back(chosen);
    cur = std::move(next);
  }
  return out;
}

Assignment sample_optimal(const Instance& I, VarId objective, std::mt19937_64& rng,
                          const SolveOptions<Polynomial>& opt) {
  check_objective(I, objective);
  if (I.n == 0) throw UsageError("cannot optimize over an empty instance");
  SolveOptions<Polynomial> run = with_objective_prune(opt, objective);
  Polynomial Z = solve_reductive(I, run);
  if (Z.is_zero()) throw UsageError("every assignment has score zero");
  Rat target = Z.max_degree(objective);

  Assignment out;
  Instance cur = I;
  for (int t = 0; t < I.n; ++t) {
    std::vector<Instance> cands;
    std::vector<Int> weight(I.k, Int(0));
    Int total = 0;
    for (int c = 0; c < I.k; ++c) {
      cands.push_back(fix_vertex(cur, 0, c, run));
      Polynomial sub = solve_reductive(cands.back(), run);
      if (!sub.is_zero() && sub.max_degree(objective) == target)
        weight[c] = sub.coefficient_at(objective, target).coefficient_sum();
      total += weight[c];
    }
    if (total <= 0) throw InvariantError("optimum sampling found no extension");
    Int r = uniform_int_below(rng, total);
    int chosen = 0;
    for (int c = 0; c < I.k; ++c) {
      if (r < weight[c]) {
        chosen = c;
        break;
      }
      r -= weight[c];
    }
    out.push_back(chosen);
    cur = std::move(cands[chosen]);
  }
  return out;
}

Assignment sample_gibbs(const Instance& I, const std::map<VarId, double>& point,
                        std::mt19937_64& rng, const SolveOptions<double>& opt) {
  if (I.n == 0) throw UsageError("cannot sample from an empty instance");
  NumericInstance N = evaluate_instance(I, point);
  auto positive = [](double x) { return x > 0.0; };
  if (!positive(N.nullary)) throw UsageError("Gibbs sampling requires strictly positive scores");
  for (const auto& row : N.vertex_scores)
    for (double s : row)
      if (!positive(s)) throw UsageError("Gibbs sampling requires strictly positive scores");
  for (const auto& [e, tbl] : N.edge_scores) {
    (void)e;
    for (double s : tbl)
      if (!positive(s)) throw UsageError("Gibbs sampling requires strictly positive scores");
  }

  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Assignment out;
  NumericInstance cur = N;
  for (int t = 0; t < I.n; ++t) {
    std::vector<NumericInstance> cands;
    std::vector<double> weight(I.k, 0.0);
    double total = 0.0;
    for (int c = 0; c < I.k; ++c) {
      cands.push_back(fix_vertex(cur, 0, c, opt));
      weight[c] = solve_reductive(cands.back(), opt);
      total += weight[c];
    }
    double r = unit(rng) * total;
    int chosen = I.k - 1;
    double acc = 0.0;
    for (int c = 0; c < I.k; ++c) {
      acc += weight[c];
      if (r < acc) {
        chosen = c;
        break;
      }
    }
    out.push_back(chosen);
    cur = std::move(cands[chosen]);
  }
  return out;
}

std::string Report::str() const {
  std::string s;
  for (const auto& [k, v] : entries) s += k + "=" + v + "\n";
  return s;
}

const std::string& Report::value_of(const std::string& key) const {
  for (const auto& [k, v] : entries)
    if (k == key) return v;
  throw UsageError("report has no entry '" + key + "'");
}

VarId require_var(const RegistryPtr& reg, const std::string& name) {
  VarId v = reg ? reg->id_of(name) : -1;
  if (v < 0) throw UsageError("variable '" + name + "' is not present");
  return v;
}

Report extract_cut(const Polynomial& Z, const std::string& zname) {
  if (Z.is_zero()) throw UsageError("zero partition function has no optimum");
  VarId z = require_var(Z.registry(), zname);
  Rat d = Z.max_degree(z);
  Report r;
  r.add("max_cut", rational_to_string(d));
  r.add("count", Z.coefficient_at(z, d).coefficient_sum().str());
  return r;
}

Report extract_bisection(const Polynomial& Z, int n, const std::string& zname,
                         const std::string& wname) {
  VarId z = require_var(Z.registry(), zname);
  VarId w = require_var(Z.registry(), wname);
  if (n < 0) throw UsageError("bisection needs the vertex count");
  int half = n / 2;
  Polynomial slice = Z.coefficient_at(w, Rat(half));
  if (slice.is_zero()) throw UsageError("no assignments with part size " + std::to_string(half));

  auto count_at = [&](const Rat& deg) {
    Int c = slice.coefficient_at(z, deg).coefficient_sum();
    if (n % 2 == 0) {
      // each unordered bisection appears once per orientation
      if (c % 2 != 0) throw InvariantError("bisection count is not even");
      c /= 2;
    }
    return c;
  };

  Report r;
  Rat maxd = slice.max_degree(z);
  r.add("max_bisection", rational_to_string(maxd));
  r.add("max_count", count_at(maxd).str());
  Rat mind = slice.min_degree(z);
  r.add("min_bisection", rational_to_string(mind));
  r.add("min_count", count_at(mind).str());
  return r;
}

namespace {

Report extract_largest_subset(const Polynomial& Z, const std::string& zname,
                              const std::string& wname, bool clique_slice,
                              const std::string& size_key) {
  if (Z.is_zero()) throw UsageError("zero partition function has no optimum");
  VarId z = require_var(Z.registry(), zname);
  VarId w = require_var(Z.registry(), wname);
  Rat maxw = Z.max_degree(w);
  if (rat_den(maxw) != 1 || maxw < 0) throw UsageError("subset sizes must be whole numbers");
  long long top = rat_num(maxw).convert_to<long long>();
  for (long long s = top; s >= 0; --s) {
    Rat zdeg = clique_slice ? Rat(Int(s) * Int(s - 1), Int(2)) : Rat(0);
    Polynomial slice = Z.coefficient_of({{w, Rat(s)}, {z, zdeg}});
    if (slice.is_zero()) continue;
    Report r;
    r.add(size_key, std::to_string(s));
    r.add("count", slice.coefficient_sum().str());
    return r;
  }
  throw UsageError("no qualifying subset found");
}

}  // namespace

Report extract_clique(const Polynomial& Z, const std::string& zname, const std::string& wname) {
  return extract_largest_subset(Z, zname, wname, true, "max_clique");
}

Report extract_mis(const Polynomial& Z, const std::string& zname, const std::string& wname) {
  return extract_largest_subset(Z, zname, wname, false, "mis_size");
}

Report extract_sparsest(const Polynomial& Z, int n, const std::string& zname,
                        const std::string& wname) {
  VarId z = require_var(Z.registry(), zname);
  VarId w = require_var(Z.registry(), wname);
  bool found = false;
  Rat best_ratio, best_part, best_cut;
  Int count;
  for (const auto& t : Z.terms()) {
    Rat part = Polynomial::exponent_in(t, w);
    if (part <= 0 || part >= n) continue;
    Rat cut = Polynomial::exponent_in(t, z);
    Rat ratio = cut / part;
    bool better = !found || ratio > best_ratio ||
                  (ratio == best_ratio &&
                   (part < best_part || (part == best_part && cut < best_cut)));
    if (better) {
      found = true;
      best_ratio = ratio;
      best_part = part;
      best_cut = cut;
      count = t.coeff;
    }
  }
  if (!found) throw UsageError("no terms with a proper part (0 < size < n)");
  Report r;
  r.add("ratio", rational_to_string(best_ratio));
  r.add("cut", rational_to_string(best_cut));
  r.add("part", rational_to_string(best_part));
  r.add("count", count.str());
  return r;
}

Report extract_judicious(const Polynomial& Z, const std::string& z0name,
                         const std::string& z1name) {
  if (Z.is_zero()) throw UsageError("zero partition function has no optimum");
  VarId z0 = require_var(Z.registry(), z0name);
  VarId z1 = require_var(Z.registry(), z1name);
  bool found = false;
  Rat best;
  Int count = 0;
  for (const auto& t : Z.terms()) {
    Rat val = std::max(Polynomial::exponent_in(t, z0), Polynomial::exponent_in(t, z1));
    if (!found || val < best) {
      found = true;
      best = val;
      count = t.coeff;
    } else if (val == best) {
      count += t.coeff;
    }
  }
  Report r;
  r.add("judicious_value", rational_to_string(best));
  r.add("count", count.str());
  return r;
}

}  // namespace pcsp
