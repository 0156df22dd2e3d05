#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ppopt/artifact_io.hpp"
#include "ppopt/compiler.hpp"
#include "ppopt/errors.hpp"
#include "ppopt/mpc.hpp"
#include "ppopt/solver.hpp"

namespace {

std::vector<double> parse_vector(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      while (used < item.size() && std::isspace(static_cast<unsigned char>(item[used]))) ++used;
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw CLI::ValidationError("--x", "'" + item + "' is not a number");
    }
  }
  if (out.empty()) throw CLI::ValidationError("--x", "empty vector");
  return out;
}

struct ToleranceFlags {
  ppopt::Tolerances tol;
  void attach(CLI::App* cmd) {
    auto positive = CLI::PositiveNumber;
    cmd->add_option("--tol-feas", tol.feasibility, "feasibility tolerance (g <= tol)")
        ->envname("PPOPT_TOL_FEAS")
        ->check(positive);
    cmd->add_option("--tol-imag", tol.imag, "imaginary-part tolerance")
        ->envname("PPOPT_TOL_IMAG")
        ->check(positive);
    cmd->add_option("--tol-res", tol.residual, "KKT residual tolerance")
        ->envname("PPOPT_TOL_RES")
        ->check(positive);
    cmd->add_option("--tol-mu", tol.multiplier, "multiplier sign tolerance")
        ->envname("PPOPT_TOL_MU")
        ->check(positive);
    cmd->add_option("--tol-dup", tol.duplicate, "duplicate-merge distance")
        ->envname("PPOPT_TOL_DUP")
        ->check(positive);
    cmd->add_option("--tol-den", tol.denominator, "denominator-vanishing tolerance")
        ->envname("PPOPT_TOL_DEN")
        ->check(positive);
  }
};

int run_compile(const std::string& problem_path, const std::string& out_path,
                const std::string& order_name, unsigned jobs, std::uint64_t budget, bool quiet) {
  ppopt::ProblemFile pf = ppopt::load_problem_file(problem_path);
  ppopt::CompileOptions opts;
  opts.order = ppopt::MonomialOrder::from_name(order_name);
  opts.jobs = jobs;
  opts.budget = budget;
  if (!quiet) {
    opts.progress = [](std::size_t done, std::size_t total) {
      if (done % 64 == 0 || done == total) {
        std::cerr << "\rcompiling: " << done << "/" << total << " active sets" << std::flush;
        if (done == total) std::cerr << "\n";
      }
    };
  }
  ppopt::CompiledProblem artifact = ppopt::compile(pf.program, opts);
  artifact.mpc = pf.mpc;
  ppopt::save_artifact(artifact, out_path);

  std::size_t closed = 0, companion = 0, unresolved = 0;
  for (const auto& r : artifact.records()) {
    if (r.kind == ppopt::RecordKind::ClosedForm) ++closed;
    if (r.kind == ppopt::RecordKind::Companion) ++companion;
    if (r.kind == ppopt::RecordKind::Unresolved) ++unresolved;
  }
  std::cout << "enumerated " << artifact.enumerated << " active sets: "
            << artifact.infeasible_count << " infeasible, " << closed << " closed-form, "
            << companion << " companion, " << unresolved << " unresolved\n"
            << "artifact written to " << out_path << "\n";
  return unresolved == 0 ? 0 : 2;
}

int run_solve(const std::string& artifact_path, const std::string& x_text, std::uint64_t seed,
              const ppopt::Tolerances& tol, bool as_json, bool no_timings,
              const std::string& problem_path) {
  ppopt::CompiledProblem artifact = ppopt::load_artifact(artifact_path);
  if (!problem_path.empty()) {
    ppopt::ProblemFile pf = ppopt::load_problem_file(problem_path);
    std::string expect = ppopt::program_hash(pf.program);
    if (expect != artifact.problem_hash) {
      throw ppopt::ArtifactError("problem hash mismatch: artifact " + artifact.problem_hash +
                                 ", problem file " + expect);
    }
  }
  ppopt::OnlineSolver solver(std::move(artifact));
  ppopt::SolveConfig config;
  config.seed = seed;
  config.tol = tol;
  ppopt::Solution sol = solver.solve(parse_vector(x_text), config);

  if (as_json) {
    std::cout << ppopt::solution_to_json(sol, !no_timings) << "\n";
  } else {
    std::cout << "u* = [";
    for (std::size_t i = 0; i < sol.u_star.size(); ++i) {
      std::cout << (i ? ", " : "") << sol.u_star[i];
    }
    std::cout << "]\nJ* = " << sol.j_star << "\n";
    std::size_t accepted = 0;
    for (const auto& c : sol.candidates) {
      if (c.status == ppopt::CandidateStatus::Accepted) ++accepted;
    }
    std::cout << sol.candidates.size() << " candidates, " << accepted << " accepted, "
              << sol.timings.total_ms << " ms\n";
    for (const auto& w : sol.warnings) std::cout << "warning: " << w << "\n";
  }
  return 0;
}

int run_simulate(const std::string& artifact_path, const std::string& x0_text, int steps,
                 const std::string& csv_path, bool free_response, std::uint64_t seed,
                 const ppopt::Tolerances& tol) {
  ppopt::CompiledProblem artifact = ppopt::load_artifact(artifact_path);
  std::vector<std::string> state_names = artifact.mpc ? artifact.mpc->state_vars
                                                      : std::vector<std::string>{};
  std::vector<std::string> input_names = artifact.mpc ? artifact.mpc->input_vars
                                                      : std::vector<std::string>{};
  ppopt::OnlineSolver solver(std::move(artifact));
  ppopt::SolveConfig config;
  config.seed = seed;
  config.tol = tol;
  ppopt::Trajectory traj =
      ppopt::simulate(solver, parse_vector(x0_text), steps, config, free_response);

  if (!csv_path.empty()) {
    std::ofstream out(csv_path, std::ios::binary);
    if (!out) throw ppopt::Error("cannot write '" + csv_path + "'");
    out << ppopt::trajectory_to_csv(traj, state_names, input_names);
  }
  std::cout << traj.steps.size() << " steps simulated";
  if (traj.aborted) std::cout << " (aborted early)";
  std::cout << "\nfinal state = [";
  for (std::size_t i = 0; i < traj.final_state.size(); ++i) {
    std::cout << (i ? ", " : "") << traj.final_state[i];
  }
  std::cout << "]\n";
  for (const auto& v : traj.violations) std::cout << "violation: " << v << "\n";
  for (const auto& w : traj.warnings) std::cout << "warning: " << w << "\n";
  if (!csv_path.empty()) std::cout << "trajectory written to " << csv_path << "\n";
  return traj.aborted ? 2 : 0;
}

int run_inspect(const std::string& artifact_path) {
  ppopt::CompiledProblem artifact = ppopt::load_artifact(artifact_path);
  const auto& space = artifact.program().space();
  std::cout << "format version: " << ppopt::CompiledProblem::kFormatVersion << "\n"
            << "problem hash:   " << artifact.problem_hash << "\n"
            << "order:          " << artifact.order().name() << "\n"
            << "variables:      " << space.decision_count() << " decision, "
            << space.multiplier_count() << " constraints, " << space.parameter_count()
            << " parameters\n";
  std::size_t closed = 0, companion = 0, unresolved = 0;
  for (const auto& r : artifact.records()) {
    if (r.kind == ppopt::RecordKind::ClosedForm) ++closed;
    if (r.kind == ppopt::RecordKind::Companion) ++companion;
    if (r.kind == ppopt::RecordKind::Unresolved) ++unresolved;
  }
  std::cout << "active sets:    " << artifact.enumerated << " enumerated, "
            << artifact.infeasible_count << " infeasible, " << closed << " closed-form, "
            << companion << " companion, " << unresolved << " unresolved\n";
  if (artifact.mpc) {
    std::cout << "mpc:            horizon " << artifact.mpc->horizon << ", "
              << artifact.mpc->state_vars.size() << " states, "
              << artifact.mpc->input_vars.size() << " inputs\n";
  }
  std::cout << "\n mask  p  kind         sols  matrix  certs\n";
  for (const auto& r : artifact.records()) {
    std::string dim = "-";
    if (!r.matrices.empty()) {
      dim = std::to_string(r.matrices[0].entries.size()) + "x" +
            std::to_string(r.matrices[0].entries.size());
    }
    std::printf("%5u %2zu  %-11s %5zu  %6s  %5zu\n", r.active_set.mask, r.active_set.count(),
                ppopt::to_string(r.kind).c_str(), r.solutions, dim.c_str(), r.certificates.size());
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"parametric polynomial optimization via precompiled companion matrices"};
  app.require_subcommand(1);

  // compile
  auto* compile_cmd = app.add_subcommand("compile", "run the offline phase on a problem file");
  std::string problem_path, out_path = "problem.art.json", order_name = "grevlex";
  unsigned jobs = 0;
  std::uint64_t budget = 200000;
  bool quiet = false;
  compile_cmd->add_option("problem", problem_path, "problem JSON file")->required();
  compile_cmd->add_option("-o,--output", out_path, "artifact output path");
  compile_cmd->add_option("--order", order_name, "monomial order (grevlex|grlex|lex)")
      ->envname("PPOPT_ORDER");
  compile_cmd->add_option("--jobs", jobs, "parallel jobs (0 = hardware)")->envname("PPOPT_JOBS");
  compile_cmd->add_option("--budget", budget, "Buchberger pair-step budget per active set")
      ->envname("PPOPT_BUDGET");
  compile_cmd->add_flag("--quiet", quiet, "suppress progress output");

  // solve
  auto* solve_cmd = app.add_subcommand("solve", "evaluate the optimizer at a parameter value");
  std::string artifact_path, x_text, check_problem;
  std::uint64_t seed = 42;
  bool as_json = false, no_timings = false;
  ToleranceFlags solve_tol;
  solve_cmd->add_option("artifact", artifact_path, "compiled artifact")->required();
  solve_cmd->add_option("--x", x_text, "parameter vector, comma separated")->required();
  solve_cmd->add_option("--seed", seed, "random-combination seed")->envname("PPOPT_SEED");
  solve_cmd->add_option("--problem", check_problem, "problem file to validate the artifact hash");
  solve_cmd->add_flag("--json", as_json, "emit JSON");
  solve_cmd->add_flag("--no-timings", no_timings, "omit timings from JSON output");
  solve_tol.attach(solve_cmd);

  // simulate
  auto* sim_cmd = app.add_subcommand("simulate", "closed-loop receding-horizon simulation");
  std::string sim_artifact, x0_text, csv_path;
  int steps = 100;
  bool free_response = false;
  std::uint64_t sim_seed = 42;
  ToleranceFlags sim_tol;
  sim_cmd->add_option("artifact", sim_artifact, "compiled artifact")->required();
  sim_cmd->add_option("--x0", x0_text, "initial state, comma separated")->required();
  sim_cmd->add_option("--steps", steps, "number of steps");
  sim_cmd->add_option("--csv", csv_path, "trajectory CSV output path");
  sim_cmd->add_flag("--free-response", free_response, "force u = 0 (no control)");
  sim_cmd->add_option("--seed", sim_seed, "random-combination seed")->envname("PPOPT_SEED");
  sim_tol.attach(sim_cmd);

  // inspect
  auto* inspect_cmd = app.add_subcommand("inspect", "print the per-mask classification table");
  std::string inspect_path;
  inspect_cmd->add_option("artifact", inspect_path, "compiled artifact")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*compile_cmd) return run_compile(problem_path, out_path, order_name, jobs, budget, quiet);
    if (*solve_cmd) {
      return run_solve(artifact_path, x_text, seed, solve_tol.tol, as_json, no_timings,
                       check_problem);
    }
    if (*sim_cmd) {
      return run_simulate(sim_artifact, x0_text, steps, csv_path, free_response, sim_seed,
                          sim_tol.tol);
    }
    if (*inspect_cmd) return run_inspect(inspect_path);
  } catch (const CLI::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const ppopt::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}
