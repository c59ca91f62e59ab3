#include <doctest.h>

#include <array>
#include <cstdio>
#include <fstream>
#include <string>
#include <sys/wait.h>

#ifndef CLI_PATH
#error CLI_PATH must point at the command-line binary
#endif

namespace {

struct Run {
  int code;
  std::string out;
};

Run run(const std::string& args) {
  const std::string cmd = std::string(CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  std::string out;
  std::array<char, 4096> buf{};
  while (std::fgets(buf.data(), buf.size(), p)) out += buf.data();
  const int status = pclose(p);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

}  // namespace

TEST_CASE("exit codes") {
  CHECK(run("").code == 1);
  CHECK(run("frobnicate").code == 1);
  CHECK(run("census --degree 0").code == 1);
  CHECK(run("census --out xml").code == 1);
  CHECK(run("fit-greedy").code == 1);
  CHECK(run("fit-greedy --ranking 1234 --uniform-rum").code == 1);
  CHECK(run("fit-greedy --ranking 9999 --steps 1").code == 1);
  CHECK(run("certificate").code == 1);
  CHECK(run("census --data /nonexistent.csv").code == 2);
  CHECK(run("census --help").code == 0);

  const std::string bad = "cli_bad_dataset.csv";
  std::ofstream(bad) << "id,a,b\nx,1,2\ny,1\n";
  auto r = run("census --data " + bad);
  CHECK(r.code == 2);
  const std::string target = "cli_bad_target.csv";
  std::ofstream(target) << "menu,alternative,probability\nbeach|boat,beach,1\n";
  CHECK(run("fit-em --target-file " + target).code == 2);
  std::remove(bad.c_str());
  std::remove(target.c_str());
}

TEST_CASE("subcommands produce their reports") {
  auto d = run("diagnose --builtin fishing --degree 2 --out csv");
  CHECK(d.code == 0);
  CHECK(d.out.find("affinely_independent,yes") != std::string::npos);
  CHECK(d.out.find("generic_bound_holds,yes") != std::string::npos);

  auto c = run("census --out csv");
  CHECK(c.code == 0);
  CHECK(c.out.find("1234,1,no") != std::string::npos);
  CHECK(c.out.find("1342,1,yes") != std::string::npos);

  auto b = run("bound -n 1000 --out csv");
  CHECK(b.code == 0);
  CHECK(b.out.find("1000,0.0269") != std::string::npos);

  auto cert = run("certificate --ranking 1234");
  CHECK(cert.code == 0);
  CHECK(cert.out.find("edge 1234 -- 4321") != std::string::npos);

  auto g = run("fit-greedy --ranking 1234 --alpha 0.5 --steps 5 --restarts 2 --out json");
  CHECK(g.code == 0);
  CHECK(g.out.find("\"engine\":\"greedy\"") != std::string::npos);

  auto e = run("fit-em --ranking 1342 --inits 1 --eta 0.5,0,0,0 --out csv");
  CHECK(e.code == 0);
  CHECK(e.out.find("0.5;0;0;0") != std::string::npos);
  CHECK(run("fit-em --ranking 1342 --eta 1,2").code == 1);
}

TEST_CASE("data files round into the CLI") {
  const std::string path = "cli_three.csv";
  std::ofstream(path) << "id,u,v\nx,0,0\ny,1,0\nz,0,1\n";
  auto r = run("census --data " + path + " --out csv");
  CHECK(r.code == 0);
  CHECK(r.out.find(",no") == std::string::npos);
  std::remove(path.c_str());
}

TEST_CASE("tables are reproducible byte for byte") {
  const std::string args = "table1 --engine greedy --degree 1 --steps 3 --restarts 2 --seed 5 --jobs 2 --out csv";
  auto a = run(args);
  auto b = run(args);
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(a.out.find("1234,1,greedy,") != std::string::npos);
}
