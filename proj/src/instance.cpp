#include "pcsp/instance.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace pcsp {

std::vector<std::vector<int>> ConstraintGraph::adjacency() const {
  std::vector<std::vector<int>> adj(n);
  for (const auto& [x, y] : edges) {
    adj[x].push_back(y);
    adj[y].push_back(x);
  }
  for (auto& a : adj) std::sort(a.begin(), a.end());
  return adj;
}

std::vector<int> ConstraintGraph::degrees() const {
  std::vector<int> deg(n, 0);
  for (const auto& [x, y] : edges) {
    ++deg[x];
    ++deg[y];
  }
  return deg;
}

std::vector<std::vector<int>> connected_components(const ConstraintGraph& g) {
  auto adj = g.adjacency();
  std::vector<int> comp(g.n, -1);
  std::vector<std::vector<int>> out;
  for (int s = 0; s < g.n; ++s) {
    if (comp[s] != -1) continue;
    std::vector<int> stack{s}, members;
    comp[s] = static_cast<int>(out.size());
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      members.push_back(v);
      for (int u : adj[v])
        if (comp[u] == -1) {
          comp[u] = comp[s];
          stack.push_back(u);
        }
    }
    std::sort(members.begin(), members.end());
    out.push_back(std::move(members));
  }
  return out;
}

std::string assignment_to_string(const Assignment& a) {
  std::string s;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(a[i]);
  }
  return s;
}

std::function<void(Polynomial&)> make_prune_hook(VarId v) {
  return [v](Polynomial& p) { p = p.prune_z(v); };
}

std::function<void(Polynomial&)> make_degree_check_hook(Rat bound) {
  return [bound](Polynomial& p) {
    Rat d = p.max_abs_exponent();
    if (d > bound)
      throw InvariantError("intermediate exponent " + rational_to_string(d) +
                           " exceeds degree bound " + rational_to_string(bound));
  };
}

std::function<void(Polynomial&)> chain_hooks(std::function<void(Polynomial&)> first,
                                             std::function<void(Polynomial&)> second) {
  if (!first) return second;
  if (!second) return first;
  return [f = std::move(first), g = std::move(second)](Polynomial& p) {
    f(p);
    g(p);
  };
}

Rat intermediate_degree_bound(const Instance& I) {
  Rat delta = I.nullary.max_abs_exponent();
  for (const auto& row : I.vertex_scores)
    for (const auto& p : row) delta = std::max(delta, p.max_abs_exponent());
  for (const auto& [e, tbl] : I.edge_scores) {
    (void)e;
    for (const auto& p : tbl) delta = std::max(delta, p.max_abs_exponent());
  }
  return Rat(I.m() + I.n + 1) * delta;
}

void check_enumeration_guard(int k, int count, int guard_log2, const std::string& what) {
  Int budget = Int(1) << guard_log2;
  Int work = 1;
  for (int i = 0; i < count; ++i) {
    work *= k;
    if (work > budget)
      throw GuardError(what + ": " + std::to_string(k) + "^" + std::to_string(count) +
                       " exceeds 2^" + std::to_string(guard_log2) + " guard");
  }
}

NumericInstance evaluate_instance(const Instance& I, const std::map<VarId, double>& values) {
  NumericInstance out = NumericInstance::ones(I.n, I.k);
  out.nullary = I.nullary.evaluate(values);
  for (int v = 0; v < I.n; ++v)
    for (int c = 0; c < I.k; ++c) out.vertex_scores[v][c] = I.vertex_scores[v][c].evaluate(values);
  for (const auto& [e, tbl] : I.edge_scores) {
    auto& t = out.edge_table(e.first, e.second);
    for (std::size_t i = 0; i < tbl.size(); ++i) t[i] = tbl[i].evaluate(values);
  }
  return out;
}

namespace {

// Splits a score line into leading integer fields plus the polynomial text
// that occupies the rest of the line.
std::vector<int> lead_ints(std::istringstream& ss, int count, const std::string& line) {
  std::vector<int> out(count);
  for (int i = 0; i < count; ++i)
    if (!(ss >> out[i])) throw UsageError("malformed line: '" + line + "'");
  return out;
}

std::string rest_of_line(std::istringstream& ss, const std::string& line) {
  std::string rest;
  std::getline(ss, rest);
  std::size_t start = rest.find_first_not_of(" \t");
  if (start == std::string::npos) throw UsageError("missing polynomial in line: '" + line + "'");
  return rest.substr(start);
}

}  // namespace

Instance read_instance(std::istream& in) {
  std::string line;
  bool have_header = false;
  int n = 0, m = 0, k = 0;
  auto reg_builder = std::make_shared<VarRegistry>();
  RegistryPtr reg = reg_builder;
  Instance I;
  bool have_nullary = false;
  std::map<std::pair<int, int>, std::vector<char>> cell_seen;

  auto check_vertex = [&](int v) {
    if (v < 0 || v >= n) throw UsageError("vertex index out of range: " + std::to_string(v));
  };
  auto check_color = [&](int c) {
    if (c < 0 || c >= k) throw UsageError("color out of range: " + std::to_string(c));
  };

  while (std::getline(in, line)) {
    std::size_t start = line.find_first_not_of(" \t\r");
    if (start == std::string::npos || line[start] == '#') continue;
    std::istringstream ss(line);
    std::string tag;
    ss >> tag;
    if (!have_header) {
      if (tag != "pcsp") throw UsageError("instance file must start with a 'pcsp n m k' header");
      auto f = lead_ints(ss, 3, line);
      n = f[0];
      m = f[1];
      k = f[2];
      if (n < 0 || m < 0 || k < 1) throw UsageError("bad instance header: '" + line + "'");
      I = Instance::ones(n, k, reg);
      have_header = true;
      continue;
    }
    if (tag == "var") {
      std::string name;
      if (!(ss >> name)) throw UsageError("malformed line: '" + line + "'");
      reg_builder->add(name);
    } else if (tag == "nullary") {
      if (have_nullary) throw UsageError("duplicate nullary line");
      I.nullary = Polynomial::parse(rest_of_line(ss, line), reg);
      have_nullary = true;
    } else if (tag == "v") {
      auto f = lead_ints(ss, 2, line);
      check_vertex(f[0]);
      check_color(f[1]);
      if (!I.vertex_scores[f[0]][f[1]].is_one())
        throw UsageError("duplicate vertex score for vertex " + std::to_string(f[0]) +
                         " color " + std::to_string(f[1]));
      I.vertex_scores[f[0]][f[1]] = Polynomial::parse(rest_of_line(ss, line), reg);
    } else if (tag == "e") {
      auto f = lead_ints(ss, 4, line);
      int x = f[0], y = f[1], i = f[2], j = f[3];
      check_vertex(x);
      check_vertex(y);
      check_color(i);
      check_color(j);
      if (x == y) throw UsageError("self-loop on vertex " + std::to_string(x));
      if (x > y) {
        std::swap(x, y);
        std::swap(i, j);
      }
      auto& seen = cell_seen[{x, y}];
      if (seen.empty()) seen.assign(static_cast<std::size_t>(k) * k, 0);
      auto cell = static_cast<std::size_t>(i) * k + j;
      if (seen[cell])
        throw UsageError("duplicate edge score for edge (" + std::to_string(x) + "," +
                         std::to_string(y) + ") colors (" + std::to_string(i) + "," +
                         std::to_string(j) + ")");
      seen[cell] = 1;
      I.edge_table(x, y)[cell] = Polynomial::parse(rest_of_line(ss, line), reg);
    } else {
      throw UsageError("unknown line tag '" + tag + "'");
    }
  }
  if (!have_header) throw UsageError("empty instance file");
  if (I.m() != m)
    throw UsageError("header declares " + std::to_string(m) + " edges but " +
                     std::to_string(I.m()) + " are defined");
  require_valid(I);
  return I;
}

Instance read_instance_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open instance file '" + path + "'");
  return read_instance(in);
}

void write_instance(std::ostream& out, const Instance& I) {
  out << "pcsp " << I.n << " " << I.m() << " " << I.k << "\n";
  if (I.reg)
    for (const auto& name : I.reg->names()) out << "var " << name << "\n";
  if (!I.nullary.is_one()) out << "nullary " << I.nullary.to_string() << "\n";
  for (int v = 0; v < I.n; ++v)
    for (int c = 0; c < I.k; ++c)
      if (!I.vertex_scores[v][c].is_one())
        out << "v " << v << " " << c << " " << I.vertex_scores[v][c].to_string() << "\n";
  for (const auto& [e, tbl] : I.edge_scores) {
    bool any = false;
    for (int i = 0; i < I.k; ++i)
      for (int j = 0; j < I.k; ++j) {
        const auto& p = tbl[static_cast<std::size_t>(i) * I.k + j];
        if (!p.is_one()) {
          out << "e " << e.first << " " << e.second << " " << i << " " << j << " "
              << p.to_string() << "\n";
          any = true;
        }
      }
    // an all-ones table still has to declare that the edge exists
    if (!any) out << "e " << e.first << " " << e.second << " 0 0 1\n";
  }
}

}  // namespace pcsp
