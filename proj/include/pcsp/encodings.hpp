#ifndef PCSP_ENCODINGS_HPP
#define PCSP_ENCODINGS_HPP

#include <iosfwd>
#include <tuple>
#include <vector>

#include "pcsp/instance.hpp"

namespace pcsp {

// Classic additive-score CSP: the score of an assignment is the SUM of the
// entries it selects. Lifting turns each entry s into z^s, so the partition
// function of the lift is the generating function of the score distribution.
struct CspInstance {
  int n = 0;
  int k = 1;
  Rat nullary = Rat(0);
  std::vector<std::vector<Rat>> vertex_scores;
  std::map<std::pair<int, int>, std::vector<Rat>> edge_scores;  // x < y, row-major

  static CspInstance zeros(int n, int k) {
    CspInstance s;
    s.n = n;
    s.k = k;
    s.vertex_scores.assign(n, std::vector<Rat>(k, Rat(0)));
    return s;
  }

  std::vector<Rat>& edge_table(int x, int y) {
    if (x > y) std::swap(x, y);
    auto [it, fresh] = edge_scores.try_emplace({x, y});
    if (fresh) it->second.assign(static_cast<std::size_t>(k) * k, Rat(0));
    return it->second;
  }
};

Instance lift_csp(const CspInstance& csp, const std::string& var = "z");

// Undirected simple graph with rational edge weights (default 1) and
// optional per-vertex weights.
struct WeightedGraph {
  int n = 0;
  std::vector<std::tuple<int, int, Rat>> edges;  // x < y
  std::vector<Rat> vertex_weights;               // empty, or one per vertex
};

struct WeightedDigraph {
  int n = 0;
  std::vector<std::tuple<int, int, Rat>> arcs;  // tail, head
};

// DIMACS-like, 1-indexed: 'c' comments, 'p edge <n> <m>' header, then
// 'e <u> <v> [weight]' lines; 'n <v> <weight>' attaches a vertex weight.
// The digraph variant uses 'a <tail> <head> [weight]' lines instead.
WeightedGraph read_graph(std::istream& in);
WeightedGraph read_graph_file(const std::string& path);
WeightedDigraph read_digraph(std::istream& in);
WeightedDigraph read_digraph_file(const std::string& path);

// z tracks the total weight of bichromatic edges; k > 2 gives Max k-Cut.
Instance encode_max_cut(const WeightedGraph& g, int k = 2);

// z tracks arcs from a color-0 tail to a color-1 head.
Instance encode_max_dicut(const WeightedDigraph& g);

// w tracks vertices colored 1, z the weight of bichromatic edges.
Instance encode_ising(const WeightedGraph& g);

// Color 1 selects a vertex subset: w tracks its size (times y^weight per
// vertex when vertex weights are present), z the edges it induces. Cliques
// of size s are the w^s z^(s(s-1)/2) terms; independent sets the w^s z^0.
Instance encode_clique(const WeightedGraph& g);

// z0 / z1 track the edge weight inside the color-0 / color-1 side; with
// `with_balance` an extra w tracks the size of the color-1 side.
Instance encode_judicious(const WeightedGraph& g, bool with_balance = false);

// Product instance over a shared vertex set: scores multiply cell-wise, the
// edge set is the union, and variables of `b` that clash with variables of
// `a` are renamed by appending "_2" (then "_3", ...) until free.
Instance combine_simultaneous(const Instance& a, const Instance& b);

}  // namespace pcsp

#endif
