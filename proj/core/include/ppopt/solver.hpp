#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "ppopt/compiler.hpp"
#include "ppopt/linalg.hpp"

namespace ppopt {

struct Tolerances {
  double imag = 1e-7;         // |Im| <= imag * (1 + |Re|) to accept a coordinate as real
  double residual = 1e-6;     // KKT generator residual, scaled by term magnitude
  double multiplier = 1e-8;   // accept mu >= -multiplier
  double feasibility = 1e-8;  // accept g <= feasibility
  double duplicate = 1e-7;    // inf-norm distance for merging repeated roots
  double denominator = 1e-12; // relative denominator-vanishing test
  double joint = 1e-6;        // eigenvector residual per companion matrix, * max(1, ||M||_F)
  double cluster = 1e-8;      // eigenvalue separation demanded of the random combination
};

struct SolveConfig {
  Tolerances tol;
  std::uint64_t seed = 42;
};

enum class CandidateStatus {
  Accepted,
  RejectedComplex,
  RejectedMultiplierSign,
  RejectedInfeasible,
  RejectedResidual,
};

std::string to_string(CandidateStatus s);

struct CandidatePoint {
  std::vector<double> u;  // empty when rejected before coordinates were extracted
  std::vector<std::pair<std::string, double>> multipliers;
  double objective = std::numeric_limits<double>::quiet_NaN();  // set only when accepted
  std::uint32_t source_mask = 0;
  CandidateStatus status = CandidateStatus::Accepted;
  double residual = 0.0;
  std::string detail;
};

struct SolveTimings {
  double specialize_ms = 0.0;
  double eigen_ms = 0.0;
  double filter_ms = 0.0;
  double total_ms = 0.0;
};

struct Solution {
  std::vector<double> u_star;
  double j_star = std::numeric_limits<double>::quiet_NaN();
  std::vector<CandidatePoint> candidates;
  SolveTimings timings;
  std::vector<std::string> warnings;
};

/// Immutable runtime for a compiled artifact. solve() specializes every
/// record at the given parameter value, extracts candidates by joint
/// eigenvalues (multipliers first), filters, and returns the discrete
/// argmin. Concurrent solve calls are safe.
class OnlineSolver {
public:
  explicit OnlineSolver(CompiledProblem artifact);

  const CompiledProblem& compiled() const { return artifact_; }

  Solution solve(const std::vector<double>& x, const SolveConfig& config = {}) const;

private:
  struct NumTerm {
    double coeff;
    std::vector<std::uint32_t> exps;
  };
  struct NumPoly {
    std::vector<NumTerm> terms;
    double eval(const std::vector<double>& point) const;
    /// 1 + sum of absolute term values; the scale for relative residuals.
    double magnitude(const std::vector<double>& point) const;
  };
  struct NumFraction {
    NumPoly num, den;
    double den_coeff_scale = 0.0;
  };
  struct CompanionRuntime {
    std::string variable;
    std::vector<std::vector<NumFraction>> entries;
  };
  struct RecordRuntime {
    const SubVarietyRecord* record = nullptr;
    std::vector<NumPoly> certificates;
    std::vector<double> certificate_scales;
    std::vector<NumPoly> generators;                                // full ring
    std::vector<std::pair<std::string, NumFraction>> closed_form;   // unknown -> value
    std::vector<CompanionRuntime> matrices;
  };

  static NumPoly lower(const QPolynomial& p);
  static NumFraction lower(const RationalFunction& r);

  struct SpecializedRecord {
    bool usable = false;
    bool infeasible_here = false;
    std::vector<std::pair<std::string, double>> closed_form;
    std::vector<std::string> matrix_variables;
    std::vector<DenseMatrix> matrices;  // decision matrices first, then multipliers
    std::vector<NumPoly> generators;    // full-ring residual polynomials
  };

  SpecializedRecord specialize_runtime(const RecordRuntime& rt, const std::vector<double>& x,
                                       const Tolerances& tol, std::vector<std::string>& warnings) const;
  SpecializedRecord numeric_fallback(const SubVarietyRecord& rec, const std::vector<double>& x) const;

  CompiledProblem artifact_;
  NumPoly objective_;
  std::vector<NumPoly> constraints_;
  std::vector<RecordRuntime> runtimes_;
};

/// Applies, in order: KKT residual, multiplier sign, feasibility (all
/// constraints), duplicate merging, then ranks survivors by objective value.
/// Candidates arriving with a rejected status pass through as diagnostics.
/// Throws NoFeasibleCandidateError when nothing survives.
Solution filter_and_rank(std::vector<CandidatePoint> candidates, const ParametricProgram& program,
                         const std::vector<double>& x, const Tolerances& tol = {});

/// JSON rendering of a solution (u_star, j_star, per-candidate diagnostics;
/// timings optional so byte-identical output is available).
std::string solution_to_json(const Solution& s, bool include_timings = true);

}  // namespace ppopt
