// End-to-end checks of the command-line tool: each case runs the real binary
// and inspects exit codes and outputs. Failures print the offending command.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace {

int g_failures = 0;

#define EXPECT(cond, what)                                                     \
  do {                                                                         \
    if (!(cond)) {                                                             \
      ++g_failures;                                                            \
      std::cerr << "FAIL(" << __LINE__ << "): " << what << "\n";               \
    }                                                                          \
  } while (0)

std::string dir() { return std::string(PPOPT_TEST_DIR); }
std::string cli() { return std::string(PPOPT_CLI_PATH); }

struct RunResult {
  int code;
  std::string out;
};

RunResult run(const std::string& args) {
  std::string out_file = dir() + "/cli_out.txt";
  std::string cmd = cli() + " " + args + " > " + out_file + " 2>&1";
  int rc = std::system(cmd.c_str());
  int code = -1;
  if (rc != -1) code = WEXITSTATUS(rc);
  std::ifstream in(out_file);
  std::stringstream ss;
  ss << in.rdbuf();
  return RunResult{code, ss.str()};
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const char* kIntegratorProblem = R"({
  "mpc": {
    "state_vars": ["x"],
    "input_vars": ["u"],
    "dynamics": ["x + u"],
    "stage_cost": "x^2 + u^2",
    "terminal_cost": "0",
    "constraints": [
      {"poly": "u - 2", "steps": [0, 1, 2]},
      {"poly": "-u - 2", "steps": [0, 1, 2]}
    ],
    "horizon": 3
  }
})";

}  // namespace

int main() {
  const std::string problem = dir() + "/integrator.json";
  const std::string artifact = dir() + "/integrator.art.json";
  write_file(problem, kIntegratorProblem);

  // compile
  auto c = run("compile " + problem + " -o " + artifact + " --quiet");
  EXPECT(c.code == 0, "compile exit code: " << c.code << "\n" << c.out);
  EXPECT(!read_file(artifact).empty(), "artifact written");

  // byte-identical recompilation
  const std::string artifact2 = dir() + "/integrator2.art.json";
  auto c2 = run("compile " + problem + " -o " + artifact2 + " --quiet --jobs 2");
  EXPECT(c2.code == 0, "second compile");
  EXPECT(read_file(artifact) == read_file(artifact2), "recompiled artifact is byte-identical");

  // solve with JSON output: three decision variables expected
  auto s = run("solve " + artifact + " --x \"1.5\" --json --no-timings");
  EXPECT(s.code == 0, "solve exit code: " << s.code << "\n" << s.out);
  {
    auto j = nlohmann::json::parse(s.out, nullptr, false);
    EXPECT(!j.is_discarded(), "solve emits JSON: " << s.out);
    if (!j.is_discarded()) {
      EXPECT(j["u_star"].size() == 3, "u_star has length 3");
      EXPECT(j.contains("candidates"), "candidates present");
      EXPECT(!j.contains("timings"), "--no-timings strips timings");
    }
  }
  auto s_repeat = run("solve " + artifact + " --x \"1.5\" --json --no-timings");
  EXPECT(s.out == s_repeat.out, "repeated solve output is byte-identical");

  auto s_timed = run("solve " + artifact + " --x \"1.5\" --json");
  EXPECT(s_timed.out.find("timings") != std::string::npos, "timings present by default");

  // hash validation
  auto ok_hash = run("solve " + artifact + " --x \"1.5\" --problem " + problem);
  EXPECT(ok_hash.code == 0, "hash validation passes for the right problem");
  const std::string other = dir() + "/other.json";
  write_file(other, R"({"decision_vars": ["u0"], "parameters": ["x"],
                        "objective": "(u0 - x)^2", "constraints": []})");
  auto bad_hash = run("solve " + artifact + " --x \"1.5\" --problem " + other);
  EXPECT(bad_hash.code == 2, "hash mismatch fails fast: " << bad_hash.out);
  EXPECT(bad_hash.out.find("hash mismatch") != std::string::npos, "mismatch message");

  // simulate with CSV
  const std::string csv = dir() + "/traj.csv";
  auto sim = run("simulate " + artifact + " --x0 \"1.0\" --steps 8 --csv " + csv);
  EXPECT(sim.code == 0, "simulate exit: " << sim.out);
  {
    std::string body = read_file(csv);
    EXPECT(body.rfind("step,x,u,j_star,solve_ms\n", 0) == 0, "csv header: " << body);
    EXPECT(std::count(body.begin(), body.end(), '\n') == 9, "csv rows");
  }
  auto freerun = run("simulate " + artifact + " --x0 \"1.0\" --steps 3 --free-response");
  EXPECT(freerun.code == 0, "free response runs");
  EXPECT(freerun.out.find("final state = [1") != std::string::npos,
         "free response leaves the integrator state: " << freerun.out);

  // inspect
  auto ins = run("inspect " + artifact);
  EXPECT(ins.code == 0, "inspect exit");
  EXPECT(ins.out.find("mask") != std::string::npos, "inspect prints the table");
  EXPECT(ins.out.find("closed-form") != std::string::npos, "inspect prints counts");

  // single-row table for an unconstrained problem
  const std::string simple = dir() + "/simple.json";
  const std::string simple_art = dir() + "/simple.art.json";
  write_file(simple, R"({"decision_vars": ["u0"], "parameters": ["x"],
                         "objective": "(u0 - x)^2", "constraints": []})");
  run("compile " + simple + " -o " + simple_art + " --quiet");
  auto ins2 = run("inspect " + simple_art);
  int rows = 0;
  std::stringstream lines(ins2.out);
  std::string line;
  bool in_table = false;
  while (std::getline(lines, line)) {
    if (line.find("mask") != std::string::npos) {
      in_table = true;
      continue;
    }
    if (in_table && !line.empty()) ++rows;
  }
  EXPECT(rows == 1, "single record table, got " << rows << "\n" << ins2.out);

  // error paths
  auto usage = run("solve --definitely-not-a-flag");
  EXPECT(usage.code == 1, "unknown flag is a usage error, got " << usage.code);

  const std::string corrupt = dir() + "/corrupt.art.json";
  write_file(corrupt, "{ not json");
  auto cc = run("inspect " + corrupt);
  EXPECT(cc.code == 2, "corrupted artifact exits 2, got " << cc.code);
  EXPECT(cc.out.find("error") != std::string::npos, "clean error message");

  const std::string future = dir() + "/future.art.json";
  write_file(future, R"({"format_version": 99})");
  auto fv = run("inspect " + future);
  EXPECT(fv.code == 2, "version mismatch exits 2");
  EXPECT(fv.out.find("version") != std::string::npos, "version message: " << fv.out);

  auto bad_vec = run("solve " + artifact + " --x \"1.5,oops\"");
  EXPECT(bad_vec.code == 1, "malformed vector is a usage error, got " << bad_vec.code);

  auto bad_tol = run("solve " + artifact + " --x \"1.5\" --tol-feas -1");
  EXPECT(bad_tol.code == 1, "non-positive tolerance is a usage error, got " << bad_tol.code);

  if (g_failures == 0) {
    std::puts("cli tests passed");
    return 0;
  }
  std::fprintf(stderr, "%d cli test failures\n", g_failures);
  return 1;
}
