#include "ppopt/mpc.hpp"

#include <cmath>
#include <sstream>

#include "ppopt/errors.hpp"
#include "ppopt/poly_io.hpp"

namespace ppopt {

ControlProblem::ControlProblem(std::vector<std::string> state_vars,
                               std::vector<std::string> input_vars,
                               std::vector<QPolynomial> dynamics, QPolynomial stage_cost,
                               QPolynomial terminal_cost, std::vector<StageConstraint> constraints,
                               int horizon, std::optional<double> state_bound)
    : state_vars_(std::move(state_vars)), input_vars_(std::move(input_vars)),
      dynamics_(std::move(dynamics)), stage_cost_(std::move(stage_cost)),
      terminal_cost_(std::move(terminal_cost)), constraints_(std::move(constraints)),
      horizon_(horizon), state_bound_(state_bound) {
  std::vector<std::string> names = state_vars_;
  names.insert(names.end(), input_vars_.begin(), input_vars_.end());
  ring_ = Ring::make(names);

  if (horizon_ < 1) throw Error("horizon must be at least 1");
  if (dynamics_.size() != state_vars_.size()) {
    throw Error("dynamics dimension does not match the state dimension");
  }
  for (const auto& f : dynamics_) require_compatible(ring_, f.ring());
  require_compatible(ring_, stage_cost_.ring());
  require_compatible(ring_, terminal_cost_.ring());
  for (std::size_t j = 0; j < input_vars_.size(); ++j) {
    if (terminal_cost_.degree_in(state_vars_.size() + j) != 0) {
      throw Error("terminal cost may not reference inputs");
    }
  }
  for (const auto& c : constraints_) {
    require_compatible(ring_, c.poly.ring());
    for (int s : c.steps) {
      if (s < 0 || s > horizon_) throw Error("constraint step outside the horizon");
    }
  }
}

std::vector<double> ControlProblem::step(const std::vector<double>& x,
                                         const std::vector<double>& u) const {
  if (x.size() != state_vars_.size() || u.size() != input_vars_.size()) {
    throw Error("state/input dimension mismatch");
  }
  std::vector<double> point = x;
  point.insert(point.end(), u.begin(), u.end());
  std::vector<double> next(state_vars_.size());
  for (std::size_t i = 0; i < dynamics_.size(); ++i) next[i] = evaluate(dynamics_[i], point);
  return next;
}

ExpansionResult expand_horizon(const ControlProblem& cp) {
  const std::size_t n = cp.state_vars().size();
  const std::size_t m_in = cp.input_vars().size();
  const int N = cp.horizon();

  // stacked input names, step-major: u0, u1, ... (per input when m_in > 1)
  std::vector<std::string> decision;
  for (int s = 0; s < N; ++s) {
    for (const auto& in : cp.input_vars()) decision.push_back(in + std::to_string(s));
  }
  const std::vector<std::string>& params = cp.state_vars();

  std::vector<std::string> work_names = decision;
  work_names.insert(work_names.end(), params.begin(), params.end());
  RingPtr work = Ring::make(work_names);
  const std::size_t M = decision.size();

  auto input_var = [&](int step, std::size_t j) {
    return QPolynomial::variable(work, std::size_t(step) * m_in + j, Rational(1));
  };

  // states[s][i]: predicted state component as a polynomial in (u..., x0)
  std::vector<std::vector<QPolynomial>> states(std::size_t(N) + 1);
  for (std::size_t i = 0; i < n; ++i) {
    states[0].push_back(QPolynomial::variable(work, M + i, Rational(1)));
  }
  QPolynomial cost = QPolynomial::zero(work);
  for (int s = 0; s < N; ++s) {
    std::vector<QPolynomial> images;
    images.reserve(n + m_in);
    for (std::size_t i = 0; i < n; ++i) images.push_back(states[s][i]);
    for (std::size_t j = 0; j < m_in; ++j) images.push_back(input_var(s, j));
    for (std::size_t i = 0; i < n; ++i) states[s + 1].push_back(cp.dynamics()[i].substitute(images));

    std::vector<QPolynomial> cost_images;
    cost_images.reserve(n + m_in);
    for (std::size_t i = 0; i < n; ++i) cost_images.push_back(states[s + 1][i]);
    for (std::size_t j = 0; j < m_in; ++j) cost_images.push_back(input_var(s, j));
    cost = cost + cp.stage_cost().substitute(cost_images);
  }
  {
    std::vector<QPolynomial> terminal_images;
    for (std::size_t i = 0; i < n; ++i) terminal_images.push_back(states[N][i]);
    for (std::size_t j = 0; j < m_in; ++j) terminal_images.push_back(QPolynomial::zero(work));
    cost = cost + cp.terminal_cost().substitute(terminal_images);
  }

  std::vector<QPolynomial> retained;
  std::vector<std::string> dropped;
  for (const auto& sc : cp.constraints()) {
    bool touches_input = false;
    for (std::size_t j = 0; j < m_in; ++j) {
      if (sc.poly.degree_in(n + j) != 0) touches_input = true;
    }
    for (int s : sc.steps) {
      if (s == N && touches_input) {
        throw Error("constraint at the terminal step references an input");
      }
      std::vector<QPolynomial> images;
      for (std::size_t i = 0; i < n; ++i) images.push_back(states[s][i]);
      for (std::size_t j = 0; j < m_in; ++j) {
        images.push_back(s < N ? input_var(s, j) : QPolynomial::zero(work));
      }
      QPolynomial inst = sc.poly.substitute(images);
      bool involves_decision = false;
      for (std::size_t d = 0; d < M; ++d) {
        if (inst.degree_in(d) != 0) {
          involves_decision = true;
          break;
        }
      }
      if (involves_decision) {
        retained.push_back(std::move(inst));
      } else {
        dropped.push_back("step " + std::to_string(s) + ": " + to_string(sc.poly) +
                          " (no decision variable; restricts only the measured state)");
      }
    }
  }

  // final ring: decision, multipliers, parameters
  std::vector<std::string> multipliers;
  for (std::size_t i = 0; i < retained.size(); ++i) multipliers.push_back("mu" + std::to_string(i + 1));
  VariableSpace space(decision, multipliers, params);
  std::vector<std::size_t> var_map(work->size());
  for (std::size_t d = 0; d < M; ++d) var_map[d] = d;
  for (std::size_t i = 0; i < n; ++i) var_map[M + i] = M + multipliers.size() + i;

  QPolynomial objective = cost.embed(space.full_ring(), var_map);
  std::vector<QPolynomial> constraints;
  constraints.reserve(retained.size());
  for (const auto& g : retained) constraints.push_back(g.embed(space.full_ring(), var_map));

  ExpansionResult out{ParametricProgram(std::move(space), std::move(objective),
                                        std::move(constraints)),
                      MpcMetadata{}};
  out.metadata.state_vars = cp.state_vars();
  out.metadata.input_vars = cp.input_vars();
  out.metadata.horizon = N;
  for (const auto& f : cp.dynamics()) out.metadata.dynamics.push_back(to_string(f));
  out.metadata.state_bound = cp.state_bound();
  out.metadata.dropped_constraints = std::move(dropped);
  return out;
}

ControlProblem duffing_problem() {
  RingPtr ring = Ring::make({"x1", "x2", "u"});
  auto parse = [&](const std::string& s) { return parse_polynomial(s, ring); };
  std::vector<QPolynomial> dynamics = {
      parse("x1 + 1/20*x2"),
      parse("-1/20*x1 + 97/100*x2 + 1/20*u - 1/20*x1^3"),
  };
  QPolynomial stage = parse("x1^2 + x2^2 + 1/10*u^2");
  QPolynomial terminal = parse("0");
  std::vector<StageConstraint> constraints = {
      {parse("x1 - 5"), {1, 2, 3}},
      {parse("-x1 - 5"), {1, 2, 3}},
      {parse("x2 - 5"), {1, 2, 3}},
      {parse("-x2 - 5"), {1, 2, 3}},
  };
  return ControlProblem({"x1", "x2"}, {"u"}, std::move(dynamics), std::move(stage),
                        std::move(terminal), std::move(constraints), 3, 5.0);
}

Trajectory simulate(const OnlineSolver& solver, const std::vector<double>& x0, int steps,
                    const SolveConfig& config, bool free_response) {
  const CompiledProblem& artifact = solver.compiled();
  if (!artifact.mpc) {
    throw Error("artifact carries no control-problem metadata; it was not built from a horizon expansion");
  }
  const MpcMetadata& meta = *artifact.mpc;
  const std::size_t n = meta.state_vars.size();
  const std::size_t m_in = meta.input_vars.size();
  if (x0.size() != n) throw Error("initial state dimension mismatch");

  std::vector<std::string> names = meta.state_vars;
  names.insert(names.end(), meta.input_vars.begin(), meta.input_vars.end());
  RingPtr control_ring = Ring::make(names);
  std::vector<QPolynomial> dynamics;
  for (const auto& text : meta.dynamics) dynamics.push_back(parse_polynomial(text, control_ring));
  if (dynamics.size() != n) throw Error("artifact dynamics dimension mismatch");

  auto check_bound = [&](int step, const std::vector<double>& x, Trajectory& t) {
    if (!meta.state_bound) return;
    double worst = 0.0;
    for (double v : x) worst = std::max(worst, std::fabs(v));
    if (worst > *meta.state_bound + 1e-9) {
      t.violations.push_back("step " + std::to_string(step) + ": |x|_inf = " +
                             std::to_string(worst) + " exceeds " +
                             std::to_string(*meta.state_bound));
    }
  };

  Trajectory traj;
  std::vector<double> x = x0;
  for (int k = 0; k < steps; ++k) {
    TrajectoryStep st;
    st.step = k;
    st.x = x;
    if (free_response) {
      st.u.assign(m_in, 0.0);
      st.j_star = std::numeric_limits<double>::quiet_NaN();
    } else {
      Solution sol;
      try {
        sol = solver.solve(x, config);
      } catch (const Error& e) {
        traj.warnings.push_back("step " + std::to_string(k) + ": " + e.what());
        traj.aborted = true;
        break;
      }
      for (const auto& w : sol.warnings) {
        traj.warnings.push_back("step " + std::to_string(k) + ": " + w);
      }
      st.u.assign(sol.u_star.begin(), sol.u_star.begin() + m_in);
      st.j_star = sol.j_star;
      st.solve_ms = sol.timings.total_ms;
    }
    check_bound(k, x, traj);
    traj.steps.push_back(st);

    std::vector<double> point = x;
    point.insert(point.end(), st.u.begin(), st.u.end());
    std::vector<double> next(n);
    for (std::size_t i = 0; i < n; ++i) next[i] = evaluate(dynamics[i], point);
    x = std::move(next);
  }
  check_bound(static_cast<int>(traj.steps.size()), x, traj);
  traj.final_state = x;
  return traj;
}

std::string trajectory_to_csv(const Trajectory& t, const std::vector<std::string>& state_names,
                              const std::vector<std::string>& input_names) {
  std::ostringstream out;
  out << "step";
  for (const auto& s : state_names) out << "," << s;
  for (const auto& u : input_names) out << "," << u;
  out << ",j_star,solve_ms\n";
  out.precision(17);
  for (const auto& st : t.steps) {
    out << st.step;
    for (double v : st.x) out << "," << v;
    for (double v : st.u) out << "," << v;
    out << "," << st.j_star << "," << st.solve_ms << "\n";
  }
  return out.str();
}

}  // namespace ppopt
