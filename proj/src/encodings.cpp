#include "pcsp/encodings.hpp"

#include <fstream>
#include <istream>
#include <set>
#include <sstream>

namespace pcsp {

Instance lift_csp(const CspInstance& csp, const std::string& var) {
  RegistryPtr reg = make_registry({var});
  Instance I = Instance::ones(csp.n, csp.k, reg);
  auto lift = [&](const Rat& s) { return Polynomial::variable(reg, 0, s); };
  I.nullary = lift(csp.nullary);
  if (static_cast<int>(csp.vertex_scores.size()) != csp.n)
    throw UsageError("lift_csp: vertex score table count differs from n");
  for (int v = 0; v < csp.n; ++v) {
    if (static_cast<int>(csp.vertex_scores[v].size()) != csp.k)
      throw UsageError("lift_csp: vertex score row has wrong number of colors");
    for (int c = 0; c < csp.k; ++c) I.vertex_scores[v][c] = lift(csp.vertex_scores[v][c]);
  }
  for (const auto& [e, tbl] : csp.edge_scores) {
    if (tbl.size() != static_cast<std::size_t>(csp.k) * csp.k)
      throw UsageError("lift_csp: edge score table has wrong size");
    auto& t = I.edge_table(e.first, e.second);
    for (std::size_t i = 0; i < tbl.size(); ++i) t[i] = lift(tbl[i]);
  }
  require_valid(I);
  return I;
}

namespace {

struct GraphReader {
  std::istream& in;
  bool directed;
  int n = -1, m = -1;
  int seen = 0;
  bool have_header = false;
  WeightedGraph g;
  WeightedDigraph d;
  std::set<std::pair<int, int>> used;

  void fail(const std::string& why, const std::string& line) {
    throw UsageError("graph file: " + why + " in line '" + line + "'");
  }

  void run() {
    std::string line;
    while (std::getline(in, line)) {
      std::size_t start = line.find_first_not_of(" \t\r");
      if (start == std::string::npos || line[start] == 'c' || line[start] == '%') continue;
      std::istringstream ss(line);
      std::string tag;
      ss >> tag;
      if (tag == "p") {
        if (have_header) fail("duplicate problem header", line);
        std::string kind;
        if (!(ss >> kind >> n >> m) || n < 0 || m < 0) fail("bad problem header", line);
        g.n = d.n = n;
        have_header = true;
      } else if (tag == "e" || tag == "a") {
        if (n < 0) fail("edge before problem header", line);
        if ((tag == "a") != directed) fail(directed ? "expected 'a' arcs" : "expected 'e' edges", line);
        int u, v;
        if (!(ss >> u >> v)) fail("bad endpoints", line);
        std::string wtext;
        Rat w(1);
        if (ss >> wtext) w = parse_decimal_or_rational(wtext);
        if (u < 1 || u > n || v < 1 || v > n) fail("endpoint out of range", line);
        if (u == v) fail("self-loop", line);
        int x = u - 1, y = v - 1;
        std::pair<int, int> key = directed ? std::pair{x, y}
                                           : std::pair{std::min(x, y), std::max(x, y)};
        if (!used.insert(key).second) fail("duplicate edge", line);
        if (directed)
          d.arcs.emplace_back(x, y, w);
        else
          g.edges.emplace_back(key.first, key.second, w);
        ++seen;
      } else if (tag == "n") {
        if (n < 0) fail("vertex weight before problem header", line);
        int v;
        std::string wtext;
        if (!(ss >> v >> wtext)) fail("bad vertex weight", line);
        if (v < 1 || v > n) fail("vertex out of range", line);
        if (g.vertex_weights.empty()) g.vertex_weights.assign(n, Rat(1));
        g.vertex_weights[v - 1] = parse_decimal_or_rational(wtext);
      } else {
        fail("unknown line tag '" + tag + "'", line);
      }
    }
    if (n < 0) throw UsageError("graph file: missing 'p' header");
    if (seen != m)
      throw UsageError("graph file: header declares " + std::to_string(m) + " edges but " +
                       std::to_string(seen) + " appear");
  }
};

}  // namespace

WeightedGraph read_graph(std::istream& in) {
  GraphReader r{in, false};
  r.run();
  return r.g;
}

WeightedDigraph read_digraph(std::istream& in) {
  GraphReader r{in, true};
  r.run();
  return r.d;
}

WeightedGraph read_graph_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open graph file '" + path + "'");
  return read_graph(in);
}

WeightedDigraph read_digraph_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open graph file '" + path + "'");
  return read_digraph(in);
}

Instance encode_max_cut(const WeightedGraph& g, int k) {
  if (k < 2) throw UsageError("max cut needs at least 2 colors");
  RegistryPtr reg = make_registry({"z"});
  Instance I = Instance::ones(g.n, k, reg);
  for (const auto& [x, y, w] : g.edges) {
    auto& t = I.edge_table(x, y);
    Polynomial zw = Polynomial::variable(reg, 0, w);
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j)
        if (i != j) t[static_cast<std::size_t>(i) * k + j] = zw;
  }
  require_valid(I);
  return I;
}

Instance encode_max_dicut(const WeightedDigraph& g) {
  RegistryPtr reg = make_registry({"z"});
  Instance I = Instance::ones(g.n, 2, reg);
  for (const auto& [u, v, w] : g.arcs) {
    // the arc scores z^w exactly when its tail is colored 0 and head 1
    auto& t = I.edge_table(u, v);
    std::size_t cell = (u < v) ? (0 * 2 + 1) : (1 * 2 + 0);
    t[cell] = t[cell] * Polynomial::variable(reg, 0, w);
  }
  require_valid(I);
  return I;
}

Instance encode_ising(const WeightedGraph& g) {
  RegistryPtr reg = make_registry({"z", "w"});
  Instance I = Instance::ones(g.n, 2, reg);
  Polynomial w1 = Polynomial::variable(reg, 1);
  for (int v = 0; v < g.n; ++v) I.vertex_scores[v][1] = w1;
  for (const auto& [x, y, w] : g.edges) {
    auto& t = I.edge_table(x, y);
    Polynomial zw = Polynomial::variable(reg, 0, w);
    t[0 * 2 + 1] = zw;
    t[1 * 2 + 0] = zw;
  }
  require_valid(I);
  return I;
}

Instance encode_clique(const WeightedGraph& g) {
  bool weighted = !g.vertex_weights.empty();
  RegistryPtr reg = weighted ? make_registry({"z", "w", "y"}) : make_registry({"z", "w"});
  Instance I = Instance::ones(g.n, 2, reg);
  for (int v = 0; v < g.n; ++v) {
    Polynomial s = Polynomial::variable(reg, 1);
    if (weighted) s = s * Polynomial::variable(reg, 2, g.vertex_weights[v]);
    I.vertex_scores[v][1] = s;
  }
  for (const auto& [x, y, w] : g.edges) {
    (void)w;
    I.edge_table(x, y)[1 * 2 + 1] = Polynomial::variable(reg, 0);
  }
  require_valid(I);
  return I;
}

Instance encode_judicious(const WeightedGraph& g, bool with_balance) {
  RegistryPtr reg = with_balance ? make_registry({"z0", "z1", "w"}) : make_registry({"z0", "z1"});
  Instance I = Instance::ones(g.n, 2, reg);
  if (with_balance) {
    Polynomial w = Polynomial::variable(reg, 2);
    for (int v = 0; v < g.n; ++v) I.vertex_scores[v][1] = w;
  }
  for (const auto& [x, y, w] : g.edges) {
    auto& t = I.edge_table(x, y);
    t[0 * 2 + 0] = Polynomial::variable(reg, 0, w);
    t[1 * 2 + 1] = Polynomial::variable(reg, 1, w);
  }
  require_valid(I);
  return I;
}

namespace {

// Rebuilds p over `reg`, sending variable v of the source to map[v].
Polynomial remap(const Polynomial& p, const RegistryPtr& reg, const std::vector<VarId>& map) {
  std::vector<Polynomial::Term> terms;
  for (const auto& t : p.terms()) {
    Polynomial::Term nt;
    nt.coeff = t.coeff;
    for (const auto& [v, e] : t.exps) nt.exps.emplace_back(map[v], e);
    terms.push_back(std::move(nt));
  }
  return Polynomial::from_terms(reg, std::move(terms));
}

}  // namespace

Instance combine_simultaneous(const Instance& a, const Instance& b) {
  if (a.n != b.n || a.k != b.k)
    throw UsageError("combine: instances must share vertex count and color count");
  auto reg_builder = std::make_shared<VarRegistry>();
  if (a.reg)
    for (const auto& name : a.reg->names()) reg_builder->add(name);
  std::vector<VarId> bmap;
  if (b.reg)
    for (const auto& name : b.reg->names()) {
      std::string candidate = name;
      for (int suffix = 2; reg_builder->id_of(candidate) >= 0; ++suffix)
        candidate = name + "_" + std::to_string(suffix);
      bmap.push_back(reg_builder->add(candidate));
    }
  RegistryPtr reg = reg_builder;

  std::vector<VarId> amap;
  if (a.reg)
    for (VarId v = 0; v < a.reg->size(); ++v) amap.push_back(v);

  Instance out = Instance::ones(a.n, a.k, reg);
  out.nullary = remap(a.nullary, reg, amap) * remap(b.nullary, reg, bmap);
  for (int v = 0; v < a.n; ++v)
    for (int c = 0; c < a.k; ++c)
      out.vertex_scores[v][c] =
          remap(a.vertex_scores[v][c], reg, amap) * remap(b.vertex_scores[v][c], reg, bmap);
  for (const auto& [e, tbl] : a.edge_scores) {
    auto& t = out.edge_table(e.first, e.second);
    for (std::size_t i = 0; i < tbl.size(); ++i) t[i] = t[i] * remap(tbl[i], reg, amap);
  }
  for (const auto& [e, tbl] : b.edge_scores) {
    auto& t = out.edge_table(e.first, e.second);
    for (std::size_t i = 0; i < tbl.size(); ++i) t[i] = t[i] * remap(tbl[i], reg, bmap);
  }
  require_valid(out);
  return out;
}

}  // namespace pcsp
