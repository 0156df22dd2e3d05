#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ppopt/program.hpp"
#include "ppopt/solver.hpp"

namespace ppopt {

/// A constraint template over (state, input) variables plus the horizon
/// offsets at which it is imposed (offset 0 is the measured state).
struct StageConstraint {
  QPolynomial poly;  // <= 0 form, over the control ring
  std::vector<int> steps;
};

/// Discrete-time polynomial optimal-control problem
///   x(k+1) = f(x(k), u(k)),
/// with cost sum_{k=0}^{N-1} stage(x(k+1), u(k)) + terminal(x(N)): the stage
/// cost couples each input with the state it produces.
class ControlProblem {
public:
  ControlProblem(std::vector<std::string> state_vars, std::vector<std::string> input_vars,
                 std::vector<QPolynomial> dynamics, QPolynomial stage_cost,
                 QPolynomial terminal_cost, std::vector<StageConstraint> constraints, int horizon,
                 std::optional<double> state_bound = std::nullopt);

  const std::vector<std::string>& state_vars() const { return state_vars_; }
  const std::vector<std::string>& input_vars() const { return input_vars_; }
  const std::vector<QPolynomial>& dynamics() const { return dynamics_; }
  const QPolynomial& stage_cost() const { return stage_cost_; }
  const QPolynomial& terminal_cost() const { return terminal_cost_; }
  const std::vector<StageConstraint>& constraints() const { return constraints_; }
  int horizon() const { return horizon_; }
  std::optional<double> state_bound() const { return state_bound_; }

  /// Ring of (states..., inputs...) that dynamics, costs, and constraint
  /// templates live in.
  const RingPtr& control_ring() const { return ring_; }

  /// Next state at numeric (x, u).
  std::vector<double> step(const std::vector<double>& x, const std::vector<double>& u) const;

private:
  std::vector<std::string> state_vars_, input_vars_;
  RingPtr ring_;
  std::vector<QPolynomial> dynamics_;
  QPolynomial stage_cost_, terminal_cost_;
  std::vector<StageConstraint> constraints_;
  int horizon_;
  std::optional<double> state_bound_;
};

struct ExpansionResult {
  ParametricProgram program;
  MpcMetadata metadata;
};

/// Substitutes the dynamics forward so every predicted state becomes a
/// polynomial in the stacked inputs and the initial state; constraints whose
/// expansion touches no input are dropped (they only restrict the measured
/// state) and reported in the metadata.
ExpansionResult expand_horizon(const ControlProblem& problem);

/// The Duffing oscillator benchmark: damping 3/10, sampling step 1/20,
/// horizon 3, unit state weights, input weight 1/10, |x_i(k+j)| <= 5 for
/// j = 1..3.
ControlProblem duffing_problem();

struct TrajectoryStep {
  int step = 0;
  std::vector<double> x;
  std::vector<double> u;
  double j_star = 0.0;
  double solve_ms = 0.0;
};

struct Trajectory {
  std::vector<TrajectoryStep> steps;
  std::vector<double> final_state;
  std::vector<std::string> warnings;
  std::vector<std::string> violations;
  bool aborted = false;
};

/// Receding-horizon closed loop: solve, apply the first input, propagate the
/// true dynamics. free_response forces u = 0 without solving. A solver
/// failure aborts with the partial trajectory.
Trajectory simulate(const OnlineSolver& solver, const std::vector<double>& x0, int steps,
                    const SolveConfig& config = {}, bool free_response = false);

/// step, state components, input components, j_star, solve_ms.
std::string trajectory_to_csv(const Trajectory& t, const std::vector<std::string>& state_names,
                              const std::vector<std::string>& input_names);

}  // namespace ppopt
