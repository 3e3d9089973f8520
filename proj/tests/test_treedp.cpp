#include "pcsp/treedp.hpp"

#include <random>
#include <sstream>

#include "doctest.h"
#include "pcsp/encodings.hpp"
#include "pcsp/errors.hpp"
#include "test_util.hpp"

using namespace pcsp;

namespace {

WeightedGraph path(int n) {
  WeightedGraph g;
  g.n = n;
  for (int v = 0; v + 1 < n; ++v) g.edges.emplace_back(v, v + 1, Rat(1));
  return g;
}

WeightedGraph cycle(int n) {
  WeightedGraph g = path(n);
  g.edges.emplace_back(0, n - 1, Rat(1));
  return g;
}

WeightedGraph complete(int n) {
  WeightedGraph g;
  g.n = n;
  for (int x = 0; x < n; ++x)
    for (int y = x + 1; y < n; ++y) g.edges.emplace_back(x, y, Rat(1));
  return g;
}

WeightedGraph grid(int rows, int cols) {
  WeightedGraph g;
  g.n = rows * cols;
  auto id = [cols](int r, int c) { return r * cols + c; };
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) {
      if (c + 1 < cols) g.edges.emplace_back(id(r, c), id(r, c + 1), Rat(1));
      if (r + 1 < rows) g.edges.emplace_back(id(r, c), id(r + 1, c), Rat(1));
    }
  return g;
}

}  // namespace

TEST_CASE("decomposition validation") {
  ConstraintGraph p3;
  p3.n = 3;
  p3.edges = {{0, 1}, {1, 2}};

  TreeDecomposition good;
  good.bags = {{0, 1}, {1, 2}};
  good.edges = {{0, 1}};
  CHECK(validate_decomposition(p3, good).ok);

  TreeDecomposition missing_vertex;
  missing_vertex.bags = {{0, 1}};
  CHECK_FALSE(validate_decomposition(p3, missing_vertex).ok);

  TreeDecomposition uncovered_edge;
  uncovered_edge.bags = {{0, 1}, {2}};
  uncovered_edge.edges = {{0, 1}};
  CHECK_FALSE(validate_decomposition(p3, uncovered_edge).ok);

  ConstraintGraph pair;
  pair.n = 2;
  TreeDecomposition split_occurrence;
  split_occurrence.bags = {{0}, {1}, {0}};
  split_occurrence.edges = {{0, 1}, {1, 2}};
  CHECK_FALSE(validate_decomposition(pair, split_occurrence).ok);

  TreeDecomposition not_a_tree;
  not_a_tree.bags = {{0, 1}, {1, 2}};
  not_a_tree.edges = {};
  CHECK_FALSE(validate_decomposition(p3, not_a_tree).ok);
}

TEST_CASE("greedy decomposition widths") {
  ConstraintGraph p6{6, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}}};
  CHECK(greedy_decomposition(p6).width() == 1);
  ConstraintGraph c4{4, {{0, 1}, {1, 2}, {2, 3}, {0, 3}}};
  CHECK(greedy_decomposition(c4).width() == 2);
  ConstraintGraph k4{4, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}};
  CHECK(greedy_decomposition(k4).width() == 3);

  WeightedGraph g44 = grid(4, 4);
  ConstraintGraph cg44{g44.n, {}};
  for (auto& [x, y, w] : g44.edges) cg44.edges.emplace_back(x, y);
  CHECK(greedy_decomposition(cg44).width() == 4);

  WeightedGraph g48 = grid(4, 8);
  ConstraintGraph cg48{g48.n, {}};
  for (auto& [x, y, w] : g48.edges) cg48.edges.emplace_back(x, y);
  TreeDecomposition td = greedy_decomposition(cg48);
  CHECK(td.width() <= 5);
  CHECK(validate_decomposition(cg48, td).ok);

  // every produced decomposition is valid
  std::mt19937_64 rng(7);
  for (int it = 0; it < 40; ++it) {
    int n = std::uniform_int_distribution<int>(0, 12)(rng);
    ConstraintGraph g = testutil::random_graph(rng, n, 0.4);
    CHECK(validate_decomposition(g, greedy_decomposition(g)).ok);
  }
}

TEST_CASE("score placement uses the smallest containing bag") {
  ConstraintGraph p3;
  p3.n = 3;
  p3.edges = {{0, 1}, {1, 2}};
  auto placement = assign_scores_to_bags(p3, {{0, 1}, {1, 2}});
  CHECK(placement.vertex_bag == std::vector<int>{0, 0, 1});
  CHECK(placement.edge_bag.at({0, 1}) == 0);
  CHECK(placement.edge_bag.at({1, 2}) == 1);
  CHECK_THROWS_AS(assign_scores_to_bags(p3, {{0, 1}}), UsageError);
}

TEST_CASE("tree DP matches the oracle") {
  Instance p3 = encode_max_cut(path(3));
  TreeDecomposition td;
  td.bags = {{0, 1}, {1, 2}};
  td.edges = {{0, 1}};
  CHECK(solve_treedp(p3, td) == Polynomial::parse("2 + 4*z + 2*z^2", p3.reg));

  // same with the greedy decomposition
  CHECK(solve_treedp(p3) == Polynomial::parse("2 + 4*z + 2*z^2", p3.reg));

  Instance c4i = encode_ising(cycle(4));
  CHECK(solve_treedp(c4i) == brute_force_partition(c4i));

  Instance empty = Instance::ones(0, 3, testutil::zw_registry());
  empty.nullary = Polynomial::parse("5*w", empty.reg);
  CHECK(solve_treedp(empty) == empty.nullary);

  std::mt19937_64 g(909090);
  for (int it = 0; it < 40; ++it) {
    Instance I = testutil::random_instance(g, {.max_n = 7, .max_n_k3 = 6, .max_m = 12});
    Polynomial ref = brute_force_partition(I);
    TreeDpStats stats;
    CHECK(solve_treedp(I, {}, &stats) == ref);
    // peak table fits in k^(width+1)
    TreeDecomposition td2 = greedy_decomposition(I.graph());
    std::size_t cap = 1;
    for (int i = 0; i <= td2.width(); ++i) cap *= I.k;
    CHECK(stats.max_table_entries <= cap);
    SolveOptions<Polynomial> par;
    par.threads = 4;
    CHECK(solve_treedp(I, par) == ref);
  }
}

TEST_CASE("single-bag decomposition degenerates to enumeration") {
  Instance k4 = encode_max_cut(complete(4));
  TreeDecomposition td;
  td.bags = {{0, 1, 2, 3}};
  CHECK(solve_treedp(k4, td) == Polynomial::parse("2 + 8*z^3 + 6*z^4", k4.reg));
}

TEST_CASE("pruned tree DP equals pruning the full answer") {
  std::mt19937_64 g(6161);
  for (int it = 0; it < 25; ++it) {
    Instance I = testutil::random_instance(g, {.max_n = 7, .max_n_k3 = 5, .max_m = 10});
    SolveOptions<Polynomial> pruned;
    pruned.post = chain_hooks(make_prune_hook(0),
                              make_degree_check_hook(intermediate_degree_bound(I)));
    CHECK(solve_treedp(I, pruned) == brute_force_partition(I).prune_z(0));
  }
}

TEST_CASE("rejects invalid decompositions") {
  Instance p3 = encode_max_cut(path(3));
  TreeDecomposition bad;
  bad.bags = {{0, 1}};
  CHECK_THROWS_AS(solve_treedp(p3, bad), UsageError);
}

TEST_CASE("td files round-trip") {
  ConstraintGraph c4{4, {{0, 1}, {1, 2}, {2, 3}, {0, 3}}};
  TreeDecomposition td = greedy_decomposition(c4);
  std::ostringstream os;
  write_tree_decomposition(os, td, c4.n);
  std::istringstream is(os.str());
  TreeDecomposition back = read_tree_decomposition(is);
  CHECK(back.bags == td.bags);
  CHECK(back.edges == td.edges);
  CHECK(validate_decomposition(c4, back).ok);

  std::istringstream pace(
      "c a path decomposition\n"
      "s td 2 2 3\n"
      "b 1 1 2\n"
      "b 2 2 3\n"
      "1 2\n");
  TreeDecomposition parsed = read_tree_decomposition(pace);
  REQUIRE(parsed.bags.size() == 2);
  CHECK(parsed.bags[0] == std::vector<int>{0, 1});
  CHECK(parsed.bags[1] == std::vector<int>{1, 2});
  CHECK(parsed.edges == std::vector<std::pair<int, int>>{{0, 1}});

  std::istringstream bad("b 1 1\n");
  CHECK_THROWS_AS(read_tree_decomposition(bad), UsageError);
}
