#include "pcsp/instance.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include "doctest.h"
#include "pcsp/errors.hpp"
#include "test_util.hpp"

using namespace pcsp;
using testutil::poly;

namespace {

const RegistryPtr kReg = testutil::zw_registry();

// Single-edge Ising chain piece: vertex score w on color 1, edge score z on
// disagreement. Z = 1 + 2wz + w^2.
Instance ising_edge() {
  Instance I = Instance::ones(2, 2, kReg);
  Polynomial w = poly("w", kReg);
  Polynomial z = poly("z", kReg);
  I.vertex_scores[0][1] = w;
  I.vertex_scores[1][1] = w;
  auto& t = I.edge_table(0, 1);
  t[0 * 2 + 1] = z;
  t[1 * 2 + 0] = z;
  return I;
}

Instance cut_edge() {
  Instance I = Instance::ones(2, 2, kReg);
  auto& t = I.edge_table(0, 1);
  t[0 * 2 + 1] = poly("z", kReg);
  t[1 * 2 + 0] = poly("z", kReg);
  return I;
}

bool same_instance(const Instance& a, const Instance& b) {
  if (a.n != b.n || a.k != b.k || a.nullary != b.nullary) return false;
  if (a.vertex_scores != b.vertex_scores) return false;
  if (a.edge_scores.size() != b.edge_scores.size()) return false;
  auto it = b.edge_scores.begin();
  for (const auto& [e, tbl] : a.edge_scores) {
    if (e != it->first || tbl != it->second) return false;
    ++it;
  }
  return true;
}

}  // namespace

TEST_CASE("score_assignment multiplies the right factors") {
  Instance I = ising_edge();
  CHECK(score_assignment(I, {1, 1}) == poly("w^2", kReg));
  CHECK(score_assignment(I, {0, 1}) == poly("z*w", kReg));
  CHECK(score_assignment(I, {0, 0}).is_one());
  CHECK_THROWS_AS(score_assignment(I, {0}), UsageError);
  CHECK_THROWS_AS(score_assignment(I, {0, 2}), UsageError);
}

TEST_CASE("edge_score respects orientation") {
  Instance I = Instance::ones(2, 2, kReg);
  I.edge_table(0, 1)[0 * 2 + 1] = poly("z", kReg);
  CHECK(I.edge_score(0, 1, 0, 1) == poly("z", kReg));
  CHECK(I.edge_score(1, 0, 1, 0) == poly("z", kReg));
  CHECK(I.edge_score(1, 0, 0, 1).is_one());
}

TEST_CASE("brute force agrees with the definitional sum") {
  Instance I = ising_edge();
  Polynomial expect = poly("1 + 2*z*w + w^2", kReg);
  CHECK(brute_force_partition_serial(I) == expect);
  CHECK(brute_force_partition(I) == expect);

  std::mt19937_64 g(99);
  for (int it = 0; it < 30; ++it) {
    Instance R = testutil::random_instance(g, {.max_n = 6, .max_n_k3 = 5, .max_m = 8});
    Polynomial ref = brute_force_partition_serial(R);
    CHECK(brute_force_partition(R) == ref);
    SolveOptions<Polynomial> par;
    par.threads = 4;
    CHECK(brute_force_partition(R, par) == ref);
  }
}

TEST_CASE("empty instance yields the nullary score") {
  Instance I = Instance::ones(0, 3, kReg);
  I.nullary = poly("7*z", kReg);
  CHECK(brute_force_partition(I) == poly("7*z", kReg));
  CHECK(brute_force_partition_serial(I) == poly("7*z", kReg));
}

TEST_CASE("enumeration guard") {
  CHECK_THROWS_AS(check_enumeration_guard(2, 25, 24, "test"), GuardError);
  check_enumeration_guard(2, 24, 24, "test");  // exactly at the limit is fine
  Instance small = Instance::ones(8, 2, kReg);
  CHECK_THROWS_AS(brute_force_partition(small, {}, 7), GuardError);
  CHECK(brute_force_partition(small, {}, 8).coefficient_sum() == (Int(1) << 8));
  Instance big = Instance::ones(30, 2, kReg);
  CHECK_THROWS_AS(brute_force_partition(big), GuardError);
}

TEST_CASE("validation catches malformed instances") {
  CHECK(validate(ising_edge()).ok);

  Instance bad = Instance::ones(2, 2, kReg);
  bad.edge_scores[{0, 5}] = std::vector<Polynomial>(4, Polynomial(Int(1)));
  CHECK_FALSE(validate(bad).ok);

  Instance badk = Instance::ones(2, 2, kReg);
  badk.k = 0;
  CHECK_FALSE(validate(badk).ok);

  Instance badtbl = Instance::ones(2, 2, kReg);
  badtbl.edge_scores[{0, 1}] = std::vector<Polynomial>(3, Polynomial(Int(1)));
  CHECK_FALSE(validate(badtbl).ok);

  Instance foreign = ising_edge();
  foreign.vertex_scores[0][0] = poly("y", make_registry({"y"}));
  CHECK_FALSE(validate(foreign).ok);
}

TEST_CASE("relabeling vertices leaves Z unchanged") {
  std::mt19937_64 g(1234);
  for (int it = 0; it < 20; ++it) {
    Instance I = testutil::random_instance(g, {.max_n = 6, .max_n_k3 = 5, .max_m = 8});
    std::vector<int> perm(I.n);
    for (int v = 0; v < I.n; ++v) perm[v] = v;
    std::shuffle(perm.begin(), perm.end(), g);
    CHECK(brute_force_partition(permute_vertices(I, perm)) == brute_force_partition(I));
  }
}

TEST_CASE("fix_vertex restricts correctly") {
  Instance I = cut_edge();
  Instance fixed = fix_vertex(I, 0, 0);
  CHECK(fixed.n == 1);
  CHECK(fixed.vertex_scores[0][0].is_one());
  CHECK(fixed.vertex_scores[0][1] == poly("z", kReg));

  // summing the restrictions over all colors reproduces Z
  std::mt19937_64 g(555);
  for (int it = 0; it < 15; ++it) {
    Instance R = testutil::random_instance(g, {.max_n = 5, .max_n_k3 = 4, .max_m = 6,
                                               .allow_empty = false});
    std::uniform_int_distribution<int> vd(0, R.n - 1);
    int v = vd(g);
    Polynomial total;
    for (int c = 0; c < R.k; ++c) total += brute_force_partition(fix_vertex(R, v, c));
    CHECK(total == brute_force_partition(R));
  }
}

TEST_CASE("instance files round-trip") {
  std::mt19937_64 g(31337);
  for (int it = 0; it < 15; ++it) {
    Instance I = testutil::random_instance(g, {.max_n = 5, .max_n_k3 = 4, .max_m = 6});
    std::ostringstream os;
    write_instance(os, I);
    std::istringstream is(os.str());
    Instance J = read_instance(is);
    CHECK(same_instance(I, J));
  }
}

TEST_CASE("instance file format details") {
  std::istringstream good(
      "# max cut on a single edge\n"
      "pcsp 2 1 2\n"
      "var z\n"
      "e 0 1 0 1 z\n"
      "e 0 1 1 0 z\n");
  Instance I = read_instance(good);
  CHECK(I.n == 2);
  CHECK(I.m() == 1);
  CHECK(brute_force_partition(I).to_string() == "2 + 2*z");

  // reversed endpoints address the transposed cell
  std::istringstream rev(
      "pcsp 2 1 2\n"
      "var z\n"
      "e 1 0 1 0 z\n");
  Instance R = read_instance(rev);
  CHECK(R.edge_score(0, 1, 0, 1).to_string() == "z");
  CHECK(R.edge_score(0, 1, 1, 0).is_one());

  std::istringstream dup(
      "pcsp 2 1 2\nvar z\ne 0 1 0 1 z\ne 1 0 1 0 w\n");
  CHECK_THROWS_AS(read_instance(dup), UsageError);

  std::istringstream badm("pcsp 2 2 2\nvar z\ne 0 1 0 1 z\n");
  CHECK_THROWS_AS(read_instance(badm), UsageError);

  std::istringstream loop("pcsp 2 1 2\nvar z\ne 1 1 0 1 z\n");
  CHECK_THROWS_AS(read_instance(loop), UsageError);

  std::istringstream noheader("var z\n");
  CHECK_THROWS_AS(read_instance(noheader), UsageError);

  std::istringstream unknownvar("pcsp 1 0 2\nv 0 0 q\n");
  CHECK_THROWS_AS(read_instance(unknownvar), UsageError);
}

TEST_CASE("numeric specialization matches symbolic evaluation") {
  Instance I = ising_edge();
  NumericInstance N = evaluate_instance(I, {{0, 2.0}, {1, 3.0}});
  double direct = brute_force_partition(N);
  double symbolic = brute_force_partition(I).evaluate({{0, 2.0}, {1, 3.0}});
  CHECK(std::abs(direct - symbolic) <= 1e-9 * std::abs(symbolic));
}

TEST_CASE("degree bound and hooks") {
  Instance I = cut_edge();
  // one edge, two vertices, max |exponent| 1 -> bound (1 + 2 + 1) * 1 = 4
  CHECK(intermediate_degree_bound(I) == Rat(4));

  auto check = make_degree_check_hook(Rat(2));
  Polynomial ok = poly("z^2", kReg);
  check(ok);
  Polynomial too_big = poly("z^3", kReg);
  CHECK_THROWS_AS(check(too_big), InvariantError);

  auto prune = make_prune_hook(0);
  Polynomial p = poly("1 + z", kReg);
  prune(p);
  CHECK(p == poly("z", kReg));

  auto both = chain_hooks(make_prune_hook(0), make_degree_check_hook(Rat(1)));
  Polynomial q = poly("1 + z", kReg);
  both(q);
  CHECK(q == poly("z", kReg));
}
