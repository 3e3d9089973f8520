#include "pcsp/treedp.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

namespace pcsp {

ValidationResult validate_decomposition(const ConstraintGraph& g, const TreeDecomposition& td) {
  auto fail = [](std::string msg) { return ValidationResult{false, std::move(msg)}; };
  int nb = static_cast<int>(td.bags.size());
  if (nb == 0) return fail("no bags");
  for (const auto& b : td.bags)
    for (int v : b)
      if (v < 0 || v >= g.n) return fail("bag vertex out of range");
  if (static_cast<int>(td.edges.size()) != nb - 1)
    return fail("bag graph is not a tree (edge count)");
  std::set<std::pair<int, int>> seen;
  std::vector<std::vector<int>> nbr(nb);
  for (const auto& [a, b] : td.edges) {
    if (a < 0 || a >= nb || b < 0 || b >= nb) return fail("tree edge names a missing bag");
    if (a == b) return fail("tree edge is a self-loop");
    auto key = std::minmax(a, b);
    if (!seen.insert({key.first, key.second}).second) return fail("duplicate tree edge");
    nbr[a].push_back(b);
    nbr[b].push_back(a);
  }
  // connectivity of the bag tree
  std::vector<char> reached(nb, 0);
  std::vector<int> stack{0};
  reached[0] = 1;
  int count = 1;
  while (!stack.empty()) {
    int b = stack.back();
    stack.pop_back();
    for (int u : nbr[b])
      if (!reached[u]) {
        reached[u] = 1;
        ++count;
        stack.push_back(u);
      }
  }
  if (count != nb) return fail("bag graph is not a tree (disconnected)");

  std::vector<std::vector<char>> contains(nb, std::vector<char>(g.n, 0));
  for (int b = 0; b < nb; ++b)
    for (int v : td.bags[b]) contains[b][v] = 1;

  for (int v = 0; v < g.n; ++v) {
    int home = -1;
    for (int b = 0; b < nb; ++b)
      if (contains[b][v]) {
        home = b;
        break;
      }
    if (home < 0) return fail("vertex " + std::to_string(v) + " is in no bag");
    // occurrences of v must form a connected subtree
    std::vector<char> hit(nb, 0);
    std::vector<int> st{home};
    hit[home] = 1;
    int found = 1, total = 0;
    for (int b = 0; b < nb; ++b) total += contains[b][v];
    while (!st.empty()) {
      int b = st.back();
      st.pop_back();
      for (int u : nbr[b])
        if (contains[u][v] && !hit[u]) {
          hit[u] = 1;
          ++found;
          st.push_back(u);
        }
    }
    if (found != total)
      return fail("occurrences of vertex " + std::to_string(v) + " are disconnected");
  }

  for (const auto& [x, y] : g.edges) {
    bool covered = false;
    for (int b = 0; b < nb && !covered; ++b) covered = contains[b][x] && contains[b][y];
    if (!covered)
      return fail("edge (" + std::to_string(x) + "," + std::to_string(y) + ") is in no bag");
  }
  return {};
}

TreeDecomposition greedy_decomposition(const ConstraintGraph& g) {
  int n = g.n;
  TreeDecomposition td;
  if (n == 0) {
    td.bags.push_back({});
    return td;
  }
  std::vector<std::vector<char>> adj(n, std::vector<char>(n, 0));
  for (const auto& [x, y] : g.edges) adj[x][y] = adj[y][x] = 1;
  std::vector<char> alive(n, 1);
  std::vector<int> elim_step(n, -1);

  for (int step = 0; step < n; ++step) {
    int best = -1;
    long long best_fill = -1;
    for (int v = 0; v < n; ++v) {
      if (!alive[v]) continue;
      std::vector<int> nbrs;
      for (int u = 0; u < n; ++u)
        if (alive[u] && adj[v][u]) nbrs.push_back(u);
      long long fill = 0;
      for (std::size_t i = 0; i < nbrs.size(); ++i)
        for (std::size_t j = i + 1; j < nbrs.size(); ++j)
          if (!adj[nbrs[i]][nbrs[j]]) ++fill;
      if (best < 0 || fill < best_fill) {
        best = v;
        best_fill = fill;
      }
    }
    std::vector<int> bag{best};
    for (int u = 0; u < n; ++u)
      if (alive[u] && adj[best][u]) bag.push_back(u);
    std::sort(bag.begin(), bag.end());
    // neighbors become a clique, then the vertex goes away
    std::vector<int> nbrs;
    for (int u : bag)
      if (u != best) nbrs.push_back(u);
    for (std::size_t i = 0; i < nbrs.size(); ++i)
      for (std::size_t j = i + 1; j < nbrs.size(); ++j) adj[nbrs[i]][nbrs[j]] = adj[nbrs[j]][nbrs[i]] = 1;
    alive[best] = 0;
    elim_step[best] = step;
    td.bags.push_back(std::move(bag));
  }

  // Bag of step i attaches to the bag of the first-eliminated other member;
  // a lone bag chains to the next step so everything stays one tree.
  for (int i = 0; i < n; ++i) {
    int parent = -1;
    for (int u : td.bags[i]) {
      if (elim_step[u] <= i) continue;  // the pivot itself
      if (parent < 0 || elim_step[u] < parent) parent = elim_step[u];
    }
    if (parent >= 0)
      td.edges.emplace_back(i, parent);
    else if (i + 1 < n)
      td.edges.emplace_back(i, i + 1);
  }
  return td;
}

ScorePlacement assign_scores_to_bags(const ConstraintGraph& g,
                                     const std::vector<std::vector<int>>& bags) {
  ScorePlacement placement;
  placement.vertex_bag.assign(g.n, -1);
  int nb = static_cast<int>(bags.size());
  std::vector<std::vector<char>> contains(nb, std::vector<char>(g.n, 0));
  for (int b = 0; b < nb; ++b)
    for (int v : bags[b]) {
      if (v < 0 || v >= g.n) throw UsageError("bag vertex out of range");
      contains[b][v] = 1;
      if (placement.vertex_bag[v] < 0) placement.vertex_bag[v] = b;
    }
  for (int v = 0; v < g.n; ++v)
    if (placement.vertex_bag[v] < 0)
      throw UsageError("vertex " + std::to_string(v) + " is in no bag");
  for (const auto& [x, y] : g.edges) {
    int owner = -1;
    for (int b = 0; b < nb; ++b)
      if (contains[b][x] && contains[b][y]) {
        owner = b;
        break;
      }
    if (owner < 0)
      throw UsageError("edge (" + std::to_string(x) + "," + std::to_string(y) +
                       ") is in no bag");
    placement.edge_bag[{x, y}] = owner;
  }
  return placement;
}

TreeDecomposition read_tree_decomposition(std::istream& in) {
  TreeDecomposition td;
  int nb = -1, n = -1, width_plus1 = -1;
  std::string line;
  while (std::getline(in, line)) {
    std::size_t start = line.find_first_not_of(" \t\r");
    if (start == std::string::npos || line[start] == 'c') continue;
    std::istringstream ss(line);
    std::string tag;
    ss >> tag;
    if (tag == "s") {
      std::string kind;
      if (!(ss >> kind >> nb >> width_plus1 >> n) || kind != "td" || nb < 0)
        throw UsageError("bad solution header in .td file: '" + line + "'");
      td.bags.assign(nb, {});
    } else if (tag == "b") {
      if (nb < 0) throw UsageError(".td file: bag before header");
      int id;
      if (!(ss >> id) || id < 1 || id > nb)
        throw UsageError(".td file: bad bag id in '" + line + "'");
      int v;
      while (ss >> v) {
        if (v < 1 || v > n) throw UsageError(".td file: bag vertex out of range in '" + line + "'");
        td.bags[id - 1].push_back(v - 1);
      }
    } else {
      if (nb < 0) throw UsageError(".td file: edge before header");
      int a = 0, b = 0;
      std::istringstream es(line);
      if (!(es >> a >> b) || a < 1 || a > nb || b < 1 || b > nb)
        throw UsageError(".td file: bad tree edge '" + line + "'");
      td.edges.emplace_back(a - 1, b - 1);
    }
  }
  if (nb < 0) throw UsageError(".td file: missing 's td' header");
  return td;
}

TreeDecomposition read_tree_decomposition_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open decomposition file '" + path + "'");
  return read_tree_decomposition(in);
}

void write_tree_decomposition(std::ostream& out, const TreeDecomposition& td, int n) {
  out << "s td " << td.bags.size() << " " << td.width() + 1 << " " << n << "\n";
  for (std::size_t b = 0; b < td.bags.size(); ++b) {
    out << "b " << b + 1;
    for (int v : td.bags[b]) out << " " << v + 1;
    out << "\n";
  }
  for (const auto& [a, b] : td.edges) out << a + 1 << " " << b + 1 << "\n";
}

}  // namespace pcsp
