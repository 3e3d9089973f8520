#include "pcsp/encodings.hpp"

#include <random>
#include <sstream>

#include "doctest.h"
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

WeightedGraph complete(int n) {
  WeightedGraph g;
  g.n = n;
  for (int x = 0; x < n; ++x)
    for (int y = x + 1; y < n; ++y) g.edges.emplace_back(x, y, Rat(1));
  return g;
}

WeightedGraph cycle(int n) {
  WeightedGraph g = path(n);
  g.edges.emplace_back(0, n - 1, Rat(1));
  return g;
}

Polynomial expect(const std::string& text, const Instance& I) {
  return Polynomial::parse(text, I.reg);
}

Polynomial solve(const Instance& I) { return brute_force_partition(I); }

}  // namespace

TEST_CASE("lifting an additive CSP") {
  CspInstance csp = CspInstance::zeros(2, 2);
  Instance I = lift_csp(csp);
  CHECK(solve(I).to_string() == "4");

  csp.vertex_scores[0][1] = Rat(1, 2);
  Instance J = lift_csp(csp);
  CHECK(J.vertex_scores[0][1].to_string() == "z^1/2");
  CHECK(J.vertex_scores[0][0].is_one());

  // one max-cut edge expressed as an additive CSP
  CspInstance cut = CspInstance::zeros(2, 2);
  auto& t = cut.edge_table(0, 1);
  t[0 * 2 + 1] = Rat(1);
  t[1 * 2 + 0] = Rat(1);
  CHECK(solve(lift_csp(cut)) == expect("2 + 2*z", lift_csp(cut)));
}

TEST_CASE("max cut") {
  Instance edge = encode_max_cut(path(2));
  CHECK(solve(edge) == expect("2 + 2*z", edge));

  Instance k3 = encode_max_cut(complete(3));
  CHECK(solve(k3) == expect("2 + 6*z^2", k3));

  Instance p3 = encode_max_cut(path(3));
  CHECK(solve(p3) == expect("2 + 4*z + 2*z^2", p3));

  WeightedGraph wg = path(2);
  std::get<2>(wg.edges[0]) = Rat(5, 2);
  Instance we = encode_max_cut(wg);
  CHECK(solve(we) == expect("2 + 2*z^5/2", we));

  Instance k3cut3 = encode_max_cut(complete(3), 3);
  CHECK(solve(k3cut3) == expect("3 + 18*z^2 + 6*z^3", k3cut3));

  CHECK_THROWS_AS(encode_max_cut(path(2), 1), UsageError);
}

TEST_CASE("max dicut") {
  WeightedDigraph one;
  one.n = 2;
  one.arcs.emplace_back(0, 1, Rat(1));
  Instance I = encode_max_dicut(one);
  CHECK(solve(I) == expect("3 + z", I));

  WeightedDigraph both = one;
  both.arcs.emplace_back(1, 0, Rat(1));
  Instance J = encode_max_dicut(both);
  CHECK(solve(J) == expect("2 + 2*z", J));
}

TEST_CASE("ising") {
  WeightedGraph lone;
  lone.n = 1;
  Instance v = encode_ising(lone);
  CHECK(solve(v) == expect("1 + w", v));

  Instance e = encode_ising(path(2));
  CHECK(solve(e) == expect("1 + 2*z*w + w^2", e));

  Instance k3 = encode_ising(complete(3));
  CHECK(solve(k3) == expect("1 + 3*z^2*w + 3*z^2*w^2 + w^3", k3));

  // C4: the w^2 slice is 4z^2 + 2z^4
  Instance c4 = encode_ising(cycle(4));
  Polynomial Z = solve(c4);
  VarId w = c4.reg->id_of("w");
  CHECK(Z.coefficient_at(w, Rat(2)) == Polynomial::parse("4*z^2 + 2*z^4", c4.reg));
}

TEST_CASE("clique and independent set") {
  Instance k3 = encode_clique(complete(3));
  CHECK(solve(k3) == expect("1 + 3*w + 3*z*w^2 + z^3*w^3", k3));

  Instance p3 = encode_clique(path(3));
  CHECK(solve(p3) == expect("1 + 3*w + w^2 + 2*z*w^2 + z^2*w^3", p3));

  WeightedGraph lone;
  lone.n = 1;
  lone.vertex_weights = {Rat(2)};
  Instance wv = encode_clique(lone);
  CHECK(solve(wv) == expect("1 + w*y^2", wv));
}

TEST_CASE("judicious partition") {
  Instance e = encode_judicious(path(2));
  CHECK(solve(e) == expect("2 + z0 + z1", e));

  Instance k3 = encode_judicious(complete(3));
  CHECK(solve(k3) == expect("3*z0 + z0^3 + 3*z1 + z1^3", k3));

  Instance eb = encode_judicious(path(2), true);
  CHECK(solve(eb) == expect("z0 + 2*w + z1*w^2", eb));

  WeightedGraph empty1;
  empty1.n = 1;
  Instance one = encode_judicious(empty1);
  CHECK(solve(one).to_string() == "2");
}

TEST_CASE("simultaneous combination") {
  Instance a = encode_max_cut(path(2));
  Instance b = encode_max_cut(path(2));
  Instance ab = combine_simultaneous(a, b);
  REQUIRE(ab.reg->names() == std::vector<std::string>{"z", "z_2"});
  CHECK(solve(ab) == Polynomial::parse("2 + 2*z*z_2", ab.reg));

  // combining with the trivial all-ones instance changes nothing
  Instance triv = Instance::ones(2, 2, nullptr);
  CHECK(solve(combine_simultaneous(a, triv)) == solve(a));

  // Z of the combination is the sum over assignments of the product of both
  // scores -- check against that definition directly
  Instance ising = encode_ising(path(2));
  Instance comb = combine_simultaneous(a, ising);
  Polynomial want;
  std::vector<VarId> amap{comb.reg->id_of("z")};
  std::vector<VarId> bmap{comb.reg->id_of("z_2"), comb.reg->id_of("w")};
  for (int c0 = 0; c0 < 2; ++c0)
    for (int c1 = 0; c1 < 2; ++c1) {
      Assignment asg{c0, c1};
      Polynomial sa = score_assignment(a, asg);
      Polynomial sb = score_assignment(ising, asg);
      // rebuild both factors over the combined registry by name
      auto rebuild = [&](const Polynomial& p, const std::vector<VarId>& map) {
        std::vector<Polynomial::Term> ts;
        for (const auto& t : p.terms()) {
          Polynomial::Term nt;
          nt.coeff = t.coeff;
          for (const auto& [v, e] : t.exps) nt.exps.emplace_back(map[v], e);
          ts.push_back(nt);
        }
        return Polynomial::from_terms(comb.reg, ts);
      };
      want += rebuild(sa, amap) * rebuild(sb, bmap);
    }
  CHECK(solve(comb) == want);

  Instance wrong = Instance::ones(3, 2, nullptr);
  CHECK_THROWS_AS(combine_simultaneous(a, wrong), UsageError);
}

TEST_CASE("graph files") {
  std::istringstream k3(
      "c complete graph on three vertices\n"
      "p edge 3 3\n"
      "e 1 2\n"
      "e 1 3\n"
      "e 2 3\n");
  WeightedGraph g = read_graph(k3);
  CHECK(g.n == 3);
  REQUIRE(g.edges.size() == 3);
  CHECK(std::get<0>(g.edges[0]) == 0);
  CHECK(std::get<1>(g.edges[0]) == 1);
  CHECK(std::get<2>(g.edges[0]) == Rat(1));

  std::istringstream weighted("p edge 2 1\ne 2 1 2.5\nn 1 3\n");
  WeightedGraph w = read_graph(weighted);
  CHECK(std::get<0>(w.edges[0]) == 0);
  CHECK(std::get<2>(w.edges[0]) == Rat(5, 2));
  REQUIRE(w.vertex_weights.size() == 2);
  CHECK(w.vertex_weights[0] == Rat(3));
  CHECK(w.vertex_weights[1] == Rat(1));

  std::istringstream digraph("p edge 2 2\na 1 2 1\na 2 1 3/2\n");
  WeightedDigraph d = read_digraph(digraph);
  REQUIRE(d.arcs.size() == 2);
  CHECK(std::get<2>(d.arcs[1]) == Rat(3, 2));

  auto bad = [](const std::string& text) {
    std::istringstream in(text);
    return in;
  };
  auto reads_bad = [&](const std::string& text) {
    std::istringstream in(text);
    CHECK_THROWS_AS(read_graph(in), UsageError);
  };
  (void)bad;
  reads_bad("p edge 2 1\ne 1 1\n");          // self-loop
  reads_bad("p edge 2 2\ne 1 2\ne 2 1\n");   // duplicate edge
  reads_bad("p edge 2 2\ne 1 2\n");          // m mismatch
  reads_bad("p edge 2 1\na 1 2\n");          // arcs in an undirected file
  reads_bad("e 1 2\n");                      // edge before header
  reads_bad("p edge 2 1\ne 1 3\n");          // endpoint out of range
}
