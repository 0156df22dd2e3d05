#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ppopt/groebner.hpp"
#include "ppopt/program.hpp"
#include "ppopt/rational_function.hpp"

namespace ppopt {

enum class RecordKind { Infeasible, ClosedForm, Companion, Unresolved };

std::string to_string(RecordKind k);
RecordKind record_kind_from_string(const std::string& s);

/// Multiplication-by-variable map on the quotient ring, with respect to the
/// standard-monomial basis b: row i holds the coordinates of the normal form
/// of var*b_i, so the monomial-evaluation vector at a root is a right
/// eigenvector.
struct CompanionMatrix {
  std::string for_variable;
  std::vector<std::vector<RationalFunction>> entries;  // l x l
};

struct SubVarietyRecord {
  ActiveSet active_set;
  RecordKind kind = RecordKind::Infeasible;
  std::size_t solutions = 0;
  std::vector<std::string> unknowns;  // decision variables then active multipliers

  std::vector<std::pair<std::string, RationalFunction>> closed_form;  // unknown -> value
  std::vector<CompanionMatrix> matrices;                              // one per unknown
  std::vector<Monomial> basis_monomials;                              // over the unknown ring

  /// Parameter polynomials that must stay nonzero for the precomputation to
  /// specialize soundly (leading coefficients, removed contents, stored
  /// denominators).
  std::vector<QPolynomial> certificates;

  /// The sub-ideal generators over the full ring (= 0 at any candidate);
  /// used for residual checks and the numeric fallback.
  std::vector<QPolynomial> generators;

  std::string note;  // failure detail for unresolved masks
};

/// The branch system for one active set: the ideal over the unknowns with
/// rational-function coefficients plus the full-ring generator forms.
struct KktSystem {
  ActiveSet active_set;
  Ideal<RationalFunction> ideal;
  std::vector<QPolynomial> full_generators;
  RingPtr unknown_ring;
  std::vector<std::string> unknown_names;
};

/// Stationarity polynomials (objective gradient plus active multiplier
/// terms) and the active constraints; inactive multipliers are identically
/// zero and eliminated from the system.
KktSystem kkt_subideal(const ParametricProgram& program, ActiveSet active);

/// Computes the branch basis and either discards it (trivial basis), solves
/// the affine case in closed form, or builds one companion matrix per
/// unknown. Throws NotZeroDimensionalError / BudgetExceededError.
SubVarietyRecord classify_and_build(const KktSystem& system, const MonomialOrder& order,
                                    const BuchbergerOptions& options = {});

/// Optional control-problem provenance carried by a compiled artifact so the
/// closed loop can be simulated from it.
struct MpcMetadata {
  std::vector<std::string> state_vars;
  std::vector<std::string> input_vars;
  int horizon = 0;
  std::vector<std::string> dynamics;  // textual, over state then input variables
  std::optional<double> state_bound;  // infinity-norm bound used for violation reporting
  std::vector<std::string> dropped_constraints;
};

class CompiledProblem {
public:
  static constexpr int kFormatVersion = 1;

  CompiledProblem(ParametricProgram program, MonomialOrder order)
      : program_(std::move(program)), order_(std::move(order)) {}

  const ParametricProgram& program() const { return program_; }
  const MonomialOrder& order() const { return order_; }

  std::vector<SubVarietyRecord>& records() { return records_; }
  const std::vector<SubVarietyRecord>& records() const { return records_; }

  std::size_t enumerated = 0;
  std::size_t infeasible_count = 0;
  std::string problem_hash;
  std::optional<MpcMetadata> mpc;

private:
  ParametricProgram program_;
  MonomialOrder order_;
  std::vector<SubVarietyRecord> records_;
};

struct CompileOptions {
  MonomialOrder order = MonomialOrder::grevlex();
  unsigned jobs = 0;  // 0: hardware concurrency
  std::uint64_t budget = 200000;
  std::size_t active_set_cap = 20;
  std::function<void(std::size_t done, std::size_t total)> progress;
};

/// Offline phase: enumerate all 2^q active sets, classify every branch, and
/// assemble the artifact. Per-mask resource failures become unresolved
/// records rather than aborting the compilation.
CompiledProblem compile(const ParametricProgram& program, const CompileOptions& options = {});

}  // namespace ppopt
