#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <random>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "pcsp/analyze.hpp"
#include "pcsp/encodings.hpp"
#include "pcsp/errors.hpp"
#include "pcsp/instance.hpp"
#include "pcsp/reduce.hpp"
#include "pcsp/splitlist.hpp"
#include "pcsp/treedp.hpp"

namespace {

using namespace pcsp;

// Solved partition functions travel between subcommands as .zpoly files:
//   zpoly
//   var <name>      (one per variable, in registry order)
//   n <vertices>    (optional, lets readouts default the vertex count)
//   Z <polynomial>
struct ZPolyFile {
  Polynomial Z;
  int n = -1;
};

ZPolyFile read_zpoly(std::istream& in) {
  ZPolyFile out;
  auto reg_builder = std::make_shared<VarRegistry>();
  RegistryPtr reg = reg_builder;
  bool have_magic = false, have_poly = false;
  std::string line;
  while (std::getline(in, line)) {
    std::size_t start = line.find_first_not_of(" \t\r");
    if (start == std::string::npos || line[start] == '#') continue;
    std::istringstream ss(line);
    std::string tag;
    ss >> tag;
    if (!have_magic) {
      if (tag != "zpoly") throw UsageError("not a zpoly file (missing 'zpoly' header)");
      have_magic = true;
      continue;
    }
    if (tag == "var") {
      std::string name;
      if (!(ss >> name)) throw UsageError("malformed var line: '" + line + "'");
      reg_builder->add(name);
    } else if (tag == "n") {
      if (!(ss >> out.n) || out.n < 0) throw UsageError("malformed n line: '" + line + "'");
    } else if (tag == "Z") {
      std::string rest;
      std::getline(ss, rest);
      out.Z = Polynomial::parse(rest, reg);
      have_poly = true;
    } else {
      throw UsageError("unknown zpoly line tag '" + tag + "'");
    }
  }
  if (!have_poly) throw UsageError("zpoly file has no Z line");
  return out;
}

ZPolyFile read_zpoly_path(const std::string& path) {
  if (path == "-") return read_zpoly(std::cin);
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open '" + path + "'");
  return read_zpoly(in);
}

void write_zpoly(std::ostream& out, const Polynomial& Z, int n) {
  out << "zpoly\n";
  if (Z.registry())
    for (const auto& name : Z.registry()->names()) out << "var " << name << "\n";
  if (n >= 0) out << "n " << n << "\n";
  out << "Z " << Z.to_string() << "\n";
}

Instance load_instance(const std::string& path) {
  if (path == "-") return read_instance(std::cin);
  return read_instance_file(path);
}

std::map<VarId, double> parse_point(const RegistryPtr& reg, const std::string& text) {
  std::map<VarId, double> out;
  std::istringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t eq = item.find('=');
    if (eq == std::string::npos)
      throw UsageError("expected name=value in '" + item + "'");
    std::string name = item.substr(0, eq);
    VarId v = require_var(reg, name);
    try {
      out[v] = std::stod(item.substr(eq + 1));
    } catch (const std::exception&) {
      throw UsageError("bad numeric value in '" + item + "'");
    }
  }
  return out;
}

struct SolveArgs {
  std::string instance_path;
  std::string solver = "reduce";
  std::string prune_var;
  std::string td_path;
  std::string out_path;
  int threads = 1;
  int guard = -1;
  bool trace = false;
  bool check_degree = false;
};

SolveOptions<Polynomial> build_options(const Instance& I, const SolveArgs& a) {
  SolveOptions<Polynomial> opt;
  opt.threads = a.threads;
  if (a.trace) opt.trace = &std::cerr;
  if (!a.prune_var.empty()) opt.post = make_prune_hook(require_var(I.reg, a.prune_var));
  if (a.check_degree)
    opt.post = chain_hooks(opt.post, make_degree_check_hook(intermediate_degree_bound(I)));
  return opt;
}

Polynomial run_solver(const Instance& I, const SolveArgs& a) {
  SolveOptions<Polynomial> opt = build_options(I, a);
  if (a.solver == "reduce") return solve_reductive(I, opt);
  if (a.solver == "treedp") {
    if (!a.td_path.empty())
      return solve_treedp(I, read_tree_decomposition_file(a.td_path), opt);
    return solve_treedp(I, opt);
  }
  if (a.solver == "splitlist") {
    if (!a.prune_var.empty())
      throw UsageError("split-and-list does not support pruned mode");
    return solve_splitlist(I, opt, a.guard > 0 ? a.guard : 13);
  }
  if (a.solver == "brute") return brute_force_partition(I, opt, a.guard > 0 ? a.guard : 24);
  throw UsageError("unknown solver '" + a.solver + "'");
}

int cmd_solve(const SolveArgs& a) {
  Instance I = load_instance(a.instance_path);
  Polynomial Z = run_solver(I, a);
  std::cout << Z.to_string() << "\n";
  if (!a.out_path.empty()) {
    std::ofstream out(a.out_path);
    if (!out) throw UsageError("cannot write '" + a.out_path + "'");
    write_zpoly(out, Z, I.n);
  }
  return 0;
}

int cmd_selftest(const SolveArgs& a) {
  Instance I = load_instance(a.instance_path);
  SolveArgs base = a;
  std::vector<std::pair<std::string, Polynomial>> results;

  base.solver = "reduce";
  results.emplace_back("reduce", run_solver(I, base));
  base.solver = "treedp";
  results.emplace_back("treedp", run_solver(I, base));
  for (const char* guarded : {"splitlist", "brute"}) {
    base.solver = guarded;
    try {
      results.emplace_back(guarded, run_solver(I, base));
    } catch (const GuardError&) {
      std::cout << guarded << ": skipped (guard)\n";
    }
  }
  for (const auto& [name, Z] : results) std::cout << name << ": " << Z.to_string() << "\n";
  for (std::size_t i = 1; i < results.size(); ++i)
    if (results[i].second != results[0].second)
      throw InvariantError("solver disagreement: " + results[i].first + " vs " +
                           results[0].first);
  std::cout << "OK: all solvers agree\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact partition functions of polynomial-scored CSP instances"};
  app.require_subcommand(1);

  SolveArgs sa;
  CLI::App* solve = app.add_subcommand("solve", "compute the partition function of an instance");
  solve->add_option("instance", sa.instance_path, "instance file ('-' for stdin)")->required();
  solve->add_option("--solver", sa.solver, "reduce, treedp, splitlist, or brute")
      ->check(CLI::IsMember({"reduce", "treedp", "splitlist", "brute"}));
  solve->add_option("--prune", sa.prune_var, "prune on this variable at every stage");
  solve->add_option("--td", sa.td_path, "tree decomposition file (treedp only)");
  solve->add_option("--threads", sa.threads, "worker threads")->check(CLI::PositiveNumber);
  solve->add_option("--guard", sa.guard,
                    "override the enumeration guard exponent (brute 24, splitlist rows 13)");
  solve->add_flag("--trace", sa.trace, "log solver steps to stderr");
  solve->add_flag("--check-degree", sa.check_degree,
                  "assert the intermediate degree bound on every step");
  solve->add_option("-o,--output", sa.out_path, "also write the result as a zpoly file");

  struct {
    std::string graph_path, problem, out_path;
    int k = 2;
    bool balance = false;
  } ea;
  CLI::App* encode = app.add_subcommand("encode", "turn a graph into a scored instance");
  encode->add_option("graph", ea.graph_path, "graph file")->required();
  encode->add_option("--problem", ea.problem, "maxcut, dicut, ising, clique, or judicious")
      ->required()
      ->check(CLI::IsMember({"maxcut", "dicut", "ising", "clique", "judicious"}));
  encode->add_option("--k", ea.k, "number of colors (maxcut only)")->check(CLI::PositiveNumber);
  encode->add_flag("--balance", ea.balance, "track part sizes (judicious only)");
  encode->add_option("-o,--output", ea.out_path, "write the instance here instead of stdout");

  struct {
    std::string zpoly_path, readout;
    std::string zname = "z", wname = "w", z0name = "z0", z1name = "z1";
    int n = -1;
  } xa;
  CLI::App* extract = app.add_subcommand("extract", "read a combinatorial answer off a zpoly");
  extract->add_option("zpoly", xa.zpoly_path, "zpoly file ('-' for stdin)")->required();
  extract->add_option("--readout", xa.readout, "cut, bisection, clique, mis, sparsest, judicious")
      ->required()
      ->check(CLI::IsMember({"cut", "bisection", "clique", "mis", "sparsest", "judicious"}));
  extract->add_option("--n", xa.n, "vertex count (defaults to the zpoly's n line)");
  extract->add_option("--z", xa.zname, "edge-tracking variable name");
  extract->add_option("--w", xa.wname, "size-tracking variable name");
  extract->add_option("--z0", xa.z0name, "side-0 variable name (judicious)");
  extract->add_option("--z1", xa.z1name, "side-1 variable name (judicious)");

  struct {
    std::string instance_path, objective = "z";
    int threads = 1;
  } oa;
  CLI::App* optimal = app.add_subcommand("optimal", "construct one optimal assignment");
  optimal->add_option("instance", oa.instance_path, "instance file ('-' for stdin)")->required();
  optimal->add_option("--objective", oa.objective, "variable whose degree is maximized");
  optimal->add_option("--threads", oa.threads, "worker threads")->check(CLI::PositiveNumber);

  struct {
    std::string instance_path, objective = "z";
    int draws = 1;
    unsigned long long seed = 42;
  } pa;
  CLI::App* sample = app.add_subcommand("sample", "draw uniformly from the optimal assignments");
  sample->add_option("instance", pa.instance_path, "instance file ('-' for stdin)")->required();
  sample->add_option("--objective", pa.objective, "variable whose degree is maximized");
  sample->add_option("--draws", pa.draws, "number of samples")->check(CLI::PositiveNumber);
  sample->add_option("--seed", pa.seed, "random seed");

  struct {
    std::string instance_path, at;
    int draws = 1;
    unsigned long long seed = 42;
  } ga;
  CLI::App* gibbs = app.add_subcommand("gibbs", "draw from the Gibbs distribution at a point");
  gibbs->add_option("instance", ga.instance_path, "instance file ('-' for stdin)")->required();
  gibbs->add_option("--at", ga.at, "variable values, e.g. z=0.5,w=2")->required();
  gibbs->add_option("--draws", ga.draws, "number of samples")->check(CLI::PositiveNumber);
  gibbs->add_option("--seed", ga.seed, "random seed");

  SolveArgs ta;
  CLI::App* selftest = app.add_subcommand("selftest", "cross-check all solvers on an instance");
  selftest->add_option("instance", ta.instance_path, "instance file ('-' for stdin)")->required();
  selftest->add_option("--threads", ta.threads, "worker threads")->check(CLI::PositiveNumber);
  selftest->add_option("--guard", ta.guard, "override the enumeration guard exponent");
  selftest->add_option("--prune", ta.prune_var, "prune on this variable (reduce and treedp)");

  try {
    app.parse(argc, argv);

    if (app.got_subcommand(solve)) return cmd_solve(sa);

    if (app.got_subcommand(encode)) {
      Instance I;
      if (ea.problem == "dicut") {
        I = encode_max_dicut(read_digraph_file(ea.graph_path));
      } else {
        WeightedGraph g = read_graph_file(ea.graph_path);
        if (ea.problem == "maxcut")
          I = encode_max_cut(g, ea.k);
        else if (ea.problem == "ising")
          I = encode_ising(g);
        else if (ea.problem == "clique")
          I = encode_clique(g);
        else
          I = encode_judicious(g, ea.balance);
      }
      if (ea.out_path.empty()) {
        write_instance(std::cout, I);
      } else {
        std::ofstream out(ea.out_path);
        if (!out) throw UsageError("cannot write '" + ea.out_path + "'");
        write_instance(out, I);
      }
      return 0;
    }

    if (app.got_subcommand(extract)) {
      ZPolyFile f = read_zpoly_path(xa.zpoly_path);
      int n = xa.n >= 0 ? xa.n : f.n;
      if ((xa.readout == "bisection" || xa.readout == "sparsest") && n < 0)
        throw UsageError("this readout needs --n (or an n line in the zpoly file)");
      Report r;
      if (xa.readout == "cut")
        r = extract_cut(f.Z, xa.zname);
      else if (xa.readout == "bisection")
        r = extract_bisection(f.Z, n, xa.zname, xa.wname);
      else if (xa.readout == "clique")
        r = extract_clique(f.Z, xa.zname, xa.wname);
      else if (xa.readout == "mis")
        r = extract_mis(f.Z, xa.zname, xa.wname);
      else if (xa.readout == "sparsest")
        r = extract_sparsest(f.Z, n, xa.zname, xa.wname);
      else
        r = extract_judicious(f.Z, xa.z0name, xa.z1name);
      std::cout << r.str();
      return 0;
    }

    if (app.got_subcommand(optimal)) {
      Instance I = load_instance(oa.instance_path);
      VarId obj = require_var(I.reg, oa.objective);
      SolveOptions<Polynomial> opt;
      opt.threads = oa.threads;
      Assignment a = construct_optimal(I, obj, opt);
      std::cout << "assignment=" << assignment_to_string(a) << "\n";
      std::cout << "degree=" << rational_to_string(score_assignment(I, a).max_degree(obj))
                << "\n";
      return 0;
    }

    if (app.got_subcommand(sample)) {
      Instance I = load_instance(pa.instance_path);
      VarId obj = require_var(I.reg, pa.objective);
      std::mt19937_64 rng(pa.seed);
      std::cout << "seed=" << pa.seed << "\n";
      for (int d = 0; d < pa.draws; ++d)
        std::cout << "assignment=" << assignment_to_string(sample_optimal(I, obj, rng)) << "\n";
      return 0;
    }

    if (app.got_subcommand(gibbs)) {
      Instance I = load_instance(ga.instance_path);
      auto point = parse_point(I.reg, ga.at);
      std::mt19937_64 rng(ga.seed);
      std::cout << "seed=" << ga.seed << "\n";
      for (int d = 0; d < ga.draws; ++d)
        std::cout << "assignment=" << assignment_to_string(sample_gibbs(I, point, rng)) << "\n";
      return 0;
    }

    if (app.got_subcommand(selftest)) return cmd_selftest(ta);

    throw UsageError("no subcommand given");
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const GuardError& e) {
    std::cerr << "guard: " << e.what() << "\n";
    return 3;
  } catch (const InvariantError& e) {
    std::cerr << "invariant violated: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
