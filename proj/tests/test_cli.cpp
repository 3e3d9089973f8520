#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <string>

#include "doctest.h"

// End-to-end checks that drive the installed binary the way a user would.
// PCSP_CLI_PATH and PCSP_DATA_DIR are injected by CMake.

namespace {

struct RunResult {
  int code = -1;
  std::string out;  // stdout and stderr combined
};

RunResult run(const std::string& args) {
  std::string cmd = std::string(PCSP_CLI_PATH) + " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  RunResult r;
  char buf[4096];
  std::size_t got;
  while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, got);
  int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string data(const std::string& name) { return std::string(PCSP_DATA_DIR) + "/" + name; }

std::string tmp_path(const std::string& name) {
  return std::string(PCSP_TMP_DIR) + "/" + name;
}

bool contains(const std::string& hay, const std::string& needle) {
  return hay.find(needle) != std::string::npos;
}

}  // namespace

TEST_CASE("encode piped into solve yields the triangle cut polynomial") {
  std::string cmd = std::string(PCSP_CLI_PATH) + " encode " + data("k3.graph") +
                    " --problem maxcut | " + PCSP_CLI_PATH + " solve -";
  RunResult r = run("encode " + data("k3.graph") + " --problem maxcut -o " +
                    tmp_path("k3.pcsp"));
  REQUIRE(r.code == 0);
  r = run("solve " + tmp_path("k3.pcsp"));
  CHECK(r.code == 0);
  CHECK(r.out == "2 + 6*z^2\n");
  // and the same through a pipe
  FILE* pipe = popen((cmd + " 2>&1").c_str(), "r");
  REQUIRE(pipe != nullptr);
  char buf[256];
  std::string out;
  std::size_t got;
  while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, got);
  int status = pclose(pipe);
  CHECK(WEXITSTATUS(status) == 0);
  CHECK(out == "2 + 6*z^2\n");
}

TEST_CASE("all four solvers print the same polynomial") {
  run("encode " + data("c4.graph") + " --problem ising -o " + tmp_path("c4i.pcsp"));
  std::string expect;
  for (const char* solver : {"reduce", "treedp", "splitlist", "brute"}) {
    RunResult r = run("solve " + tmp_path("c4i.pcsp") + " --solver " + std::string(solver) +
                      " --threads 2");
    CHECK(r.code == 0);
    if (expect.empty())
      expect = r.out;
    else
      CHECK(r.out == expect);
  }
}

TEST_CASE("pruned solve keeps only the leading cut term") {
  run("encode " + data("k3.graph") + " --problem maxcut -o " + tmp_path("k3.pcsp"));
  RunResult r = run("solve " + tmp_path("k3.pcsp") + " --prune z --check-degree");
  CHECK(r.code == 0);
  CHECK(r.out == "6*z^2\n");
}

TEST_CASE("an explicit tree decomposition is honored") {
  run("encode " + data("k3.graph") + " --problem maxcut -o " + tmp_path("k3.pcsp"));
  FILE* td = fopen(tmp_path("k3.td").c_str(), "w");
  REQUIRE(td != nullptr);
  fputs("s td 1 3 3\nb 1 1 2 3\n", td);
  fclose(td);
  RunResult r = run("solve " + tmp_path("k3.pcsp") + " --solver treedp --td " +
                    tmp_path("k3.td"));
  CHECK(r.code == 0);
  CHECK(r.out == "2 + 6*z^2\n");
}

TEST_CASE("solve writes a zpoly that extract can read back") {
  run("encode " + data("k3.graph") + " --problem maxcut -o " + tmp_path("k3.pcsp"));
  RunResult r = run("solve " + tmp_path("k3.pcsp") + " -o " + tmp_path("k3.zpoly"));
  REQUIRE(r.code == 0);
  r = run("extract " + tmp_path("k3.zpoly") + " --readout cut");
  CHECK(r.code == 0);
  CHECK(r.out == "max_cut=2\ncount=6\n");
}

TEST_CASE("bisection readout picks its n up from the zpoly file") {
  run("encode " + data("c4.graph") + " --problem ising -o " + tmp_path("c4i.pcsp"));
  run("solve " + tmp_path("c4i.pcsp") + " -o " + tmp_path("c4i.zpoly"));
  RunResult r = run("extract " + tmp_path("c4i.zpoly") + " --readout bisection");
  CHECK(r.code == 0);
  CHECK(r.out == "max_bisection=4\nmax_count=1\nmin_bisection=2\nmin_count=2\n");
}

TEST_CASE("optimal prints one maximizing assignment") {
  run("encode " + data("k3.graph") + " --problem maxcut -o " + tmp_path("k3.pcsp"));
  RunResult r = run("optimal " + tmp_path("k3.pcsp"));
  CHECK(r.code == 0);
  CHECK(r.out == "assignment=0,0,1\ndegree=2\n");
}

TEST_CASE("sampling is reproducible for a fixed seed") {
  run("encode " + data("k3.graph") + " --problem maxcut -o " + tmp_path("k3.pcsp"));
  RunResult a = run("sample " + tmp_path("k3.pcsp") + " --draws 5 --seed 7");
  RunResult b = run("sample " + tmp_path("k3.pcsp") + " --draws 5 --seed 7");
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(contains(a.out, "seed=7\n"));
  CHECK(a.out.find("assignment=") != std::string::npos);

  RunResult g1 = run("gibbs " + tmp_path("k3.pcsp") + " --at z=0.5 --draws 4 --seed 9");
  RunResult g2 = run("gibbs " + tmp_path("k3.pcsp") + " --at z=0.5 --draws 4 --seed 9");
  CHECK(g1.code == 0);
  CHECK(g1.out == g2.out);
}

TEST_CASE("selftest cross-checks the solver family") {
  run("encode " + data("petersen.graph") + " --problem maxcut -o " + tmp_path("pet.pcsp"));
  RunResult r = run("selftest " + tmp_path("pet.pcsp") + " --threads 2");
  CHECK(r.code == 0);
  CHECK(contains(r.out, "OK: all solvers agree"));
}

TEST_CASE("failures map onto distinct exit codes") {
  RunResult r = run("solve ./no-such-file.pcsp");
  CHECK(r.code == 2);  // usage: unreadable input

  r = run("solve --solver warp " + data("k3.graph"));
  CHECK(r.code != 0);  // rejected by option validation

  run("encode " + data("k3.graph") + " --problem maxcut -o " + tmp_path("k3.pcsp"));
  r = run("solve " + tmp_path("k3.pcsp") + " --solver splitlist --prune z");
  CHECK(r.code == 2);  // usage: pruning is undefined for split-and-list

  run("encode " + data("grid4x8.graph") + " --problem maxcut -o " + tmp_path("grid.pcsp"));
  r = run("solve " + tmp_path("grid.pcsp") + " --solver brute");
  CHECK(r.code == 3);  // guard: 2^32 assignments is past the enumeration cap
  CHECK(contains(r.out, "guard"));

  r = run("extract " + tmp_path("grid.pcsp") + " --readout cut");
  CHECK(r.code == 2);  // usage: not a zpoly file
}
