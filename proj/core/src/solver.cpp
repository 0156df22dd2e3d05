#include "ppopt/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>

#include <json.hpp>

#include "ppopt/errors.hpp"

namespace ppopt {

std::string to_string(CandidateStatus s) {
  switch (s) {
    case CandidateStatus::Accepted: return "accepted";
    case CandidateStatus::RejectedComplex: return "rejected_complex";
    case CandidateStatus::RejectedMultiplierSign: return "rejected_multiplier_sign";
    case CandidateStatus::RejectedInfeasible: return "rejected_infeasible";
    case CandidateStatus::RejectedResidual: return "rejected_residual";
  }
  return "accepted";
}

namespace {

double ms_since(const std::chrono::steady_clock::time_point& t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

double int_pow(double base, std::uint32_t e) {
  double r = 1.0;
  while (e > 0) {
    if (e & 1u) r *= base;
    e >>= 1u;
    if (e) base *= base;
  }
  return r;
}

}  // namespace

double OnlineSolver::NumPoly::eval(const std::vector<double>& point) const {
  double acc = 0.0;
  for (const auto& t : terms) {
    double v = t.coeff;
    for (std::size_t i = 0; i < t.exps.size(); ++i) {
      if (t.exps[i]) v *= int_pow(point[i], t.exps[i]);
    }
    acc += v;
  }
  return acc;
}

double OnlineSolver::NumPoly::magnitude(const std::vector<double>& point) const {
  double acc = 0.0;
  for (const auto& t : terms) {
    double v = t.coeff;
    for (std::size_t i = 0; i < t.exps.size(); ++i) {
      if (t.exps[i]) v *= int_pow(point[i], t.exps[i]);
    }
    acc += std::fabs(v);
  }
  return acc;
}

OnlineSolver::NumPoly OnlineSolver::lower(const QPolynomial& p) {
  NumPoly np;
  np.terms.reserve(p.term_count());
  for (const auto& t : p.terms()) {
    np.terms.push_back(NumTerm{to_double(t.coeff), t.mono.exponents()});
  }
  return np;
}

OnlineSolver::NumFraction OnlineSolver::lower(const RationalFunction& r) {
  NumFraction f;
  f.num = lower(r.num());
  f.den = lower(r.den());
  for (const auto& t : r.den().terms()) {
    f.den_coeff_scale = std::max(f.den_coeff_scale, std::fabs(to_double(t.coeff)));
  }
  return f;
}

OnlineSolver::OnlineSolver(CompiledProblem artifact) : artifact_(std::move(artifact)) {
  objective_ = lower(artifact_.program().objective());
  for (const auto& g : artifact_.program().constraints()) constraints_.push_back(lower(g));

  const std::size_t n = artifact_.program().space().parameter_count();
  runtimes_.reserve(artifact_.records().size());
  for (const auto& rec : artifact_.records()) {
    RecordRuntime rt;
    rt.record = &rec;
    for (const auto& c : rec.certificates) {
      if (c.ring()->size() != n) throw ArtifactError("certificate over an unexpected ring");
      rt.certificates.push_back(lower(c));
      double scale = 0.0;
      for (const auto& t : c.terms()) scale = std::max(scale, std::fabs(to_double(t.coeff)));
      rt.certificate_scales.push_back(scale);
    }
    for (const auto& g : rec.generators) rt.generators.push_back(lower(g));
    for (const auto& [name, value] : rec.closed_form) rt.closed_form.emplace_back(name, lower(value));
    for (const auto& cm : rec.matrices) {
      CompanionRuntime cr;
      cr.variable = cm.for_variable;
      cr.entries.resize(cm.entries.size());
      for (std::size_t i = 0; i < cm.entries.size(); ++i) {
        for (const auto& e : cm.entries[i]) cr.entries[i].push_back(lower(e));
      }
      rt.matrices.push_back(std::move(cr));
    }
    runtimes_.push_back(std::move(rt));
  }
}

OnlineSolver::SpecializedRecord OnlineSolver::specialize_runtime(
    const RecordRuntime& rt, const std::vector<double>& x, const Tolerances& tol,
    std::vector<std::string>& warnings) const {
  (void)warnings;
  SpecializedRecord sr;
  auto eval_fraction = [&](const NumFraction& f) {
    double dv = f.den.eval(x);
    if (std::fabs(dv) <= tol.denominator * (1.0 + f.den_coeff_scale)) {
      throw DenominatorVanishesError("denominator vanishes during specialization");
    }
    return f.num.eval(x) / dv;
  };

  if (rt.record->kind == RecordKind::ClosedForm) {
    for (const auto& [name, f] : rt.closed_form) sr.closed_form.emplace_back(name, eval_fraction(f));
  } else {
    for (const auto& cm : rt.matrices) {
      const std::size_t l = cm.entries.size();
      DenseMatrix m(l, l);
      for (std::size_t i = 0; i < l; ++i) {
        for (std::size_t j = 0; j < l; ++j) m.at(i, j) = eval_fraction(cm.entries[i][j]);
      }
      m.validate_finite();
      sr.matrix_variables.push_back(cm.variable);
      sr.matrices.push_back(std::move(m));
    }
  }
  sr.usable = true;
  return sr;
}

OnlineSolver::SpecializedRecord OnlineSolver::numeric_fallback(const SubVarietyRecord& rec,
                                                               const std::vector<double>& x) const {
  const auto& space = artifact_.program().space();
  const std::size_t m = space.decision_count();
  const std::size_t q = space.multiplier_count();
  const std::size_t n = space.parameter_count();

  RingPtr unknown_ring = space.unknown_ring(rec.active_set.mask);

  // exact snap of the parameter value, then substitute into the generators
  std::vector<QPolynomial> images;
  images.reserve(m + q + n);
  std::size_t rank = m;
  for (std::size_t d = 0; d < m; ++d) {
    images.push_back(QPolynomial::variable(unknown_ring, d, Rational(1)));
  }
  for (std::size_t i = 0; i < q; ++i) {
    if (rec.active_set.contains(i)) {
      images.push_back(QPolynomial::variable(unknown_ring, rank++, Rational(1)));
    } else {
      images.push_back(QPolynomial::zero(unknown_ring));
    }
  }
  for (std::size_t j = 0; j < n; ++j) {
    images.push_back(QPolynomial::constant(unknown_ring, rational_from_double(x[j])));
  }

  Ideal<Rational> ideal;
  for (const auto& g : rec.generators) {
    QPolynomial s = g.substitute(images);
    if (!s.is_zero()) ideal.generators.push_back(std::move(s));
  }
  if (ideal.generators.empty()) {
    throw NotZeroDimensionalError("specialized branch system is identically zero");
  }

  const MonomialOrder& ord = artifact_.order();
  auto gb = buchberger(ideal, ord);

  SpecializedRecord sr;
  if (gb.trivial()) {
    sr.usable = true;
    sr.infeasible_here = true;
    return sr;
  }

  StandardBasis sb = standard_monomials(gb);
  bool affine = true;
  for (const auto& e : gb.elements()) {
    if (e.degree() > 1) {
      affine = false;
      break;
    }
  }

  if (affine) {
    std::map<std::string, double> values;
    for (const auto& e : gb.elements()) {
      auto lt = e.leading_term(ord);
      std::size_t var = unknown_ring->size();
      for (std::size_t v = 0; v < unknown_ring->size(); ++v) {
        if (lt.mono.exp(v) == 1 && lt.mono.degree() == 1) {
          var = v;
          break;
        }
      }
      if (var == unknown_ring->size()) throw Error("fallback: unexpected basis element");
      QPolynomial tail = e - QPolynomial::from_terms(e.ring(), {lt});
      double value = tail.is_zero() ? 0.0 : -to_double(tail.terms().front().coeff);
      values[unknown_ring->name(var)] = value;
    }
    for (const auto& name : rec.unknowns) {
      auto it = values.find(name);
      if (it == values.end()) throw Error("fallback: closed form misses unknown " + name);
      sr.closed_form.emplace_back(name, it->second);
    }
  } else {
    const std::size_t l = sb.dimension;
    auto cmp = [](const Monomial& a, const Monomial& b) { return grevlex_compare(a, b) < 0; };
    std::map<Monomial, std::size_t, decltype(cmp)> index(cmp);
    for (std::size_t j = 0; j < l; ++j) index.emplace(sb.monomials[j], j);
    for (std::size_t k = 0; k < unknown_ring->size(); ++k) {
      DenseMatrix mat(l, l);
      Monomial var = Monomial::variable(unknown_ring->size(), k);
      for (std::size_t i = 0; i < l; ++i) {
        QPolynomial shifted = QPolynomial::from_terms(
            unknown_ring, {{var * sb.monomials[i], Rational(1)}});
        QPolynomial nf = normal_form(shifted, gb);
        for (const auto& t : nf.terms()) {
          auto it = index.find(t.mono);
          if (it == index.end()) throw Error("fallback: normal form outside the basis");
          mat.at(i, it->second) = to_double(t.coeff);
        }
      }
      sr.matrix_variables.push_back(unknown_ring->name(k));
      sr.matrices.push_back(std::move(mat));
    }
  }
  sr.usable = true;
  return sr;
}

namespace {

struct FilterContext {
  const std::vector<double>* x;
  const VariableSpace* space;
  const Tolerances* tol;
  // evaluates the candidate's branch generators; returns the max scaled residual
  std::function<double(const CandidatePoint&, const std::vector<double>& full_point)> residual_of;
  std::function<double(std::size_t constraint, const std::vector<double>& full_point)> constraint_value;
  std::function<double(const std::vector<double>& full_point)> objective_value;
};

std::vector<double> assemble_point(const CandidatePoint& c, const VariableSpace& space,
                                   const std::vector<double>& x) {
  std::vector<double> p(space.full_ring()->size(), 0.0);
  const std::size_t m = space.decision_count();
  for (std::size_t d = 0; d < m && d < c.u.size(); ++d) p[d] = c.u[d];
  for (const auto& [name, value] : c.multipliers) {
    auto idx = space.full_ring()->index_of(name);
    if (idx) p[*idx] = value;
  }
  for (std::size_t j = 0; j < x.size(); ++j) p[m + space.multiplier_count() + j] = x[j];
  return p;
}

/// Residual, sign, feasibility, duplicate-merge, then the discrete argmin.
Solution rank_candidates(std::vector<CandidatePoint> pending,
                         std::vector<CandidatePoint> already_rejected, const FilterContext& ctx,
                         std::vector<std::string> warnings) {
  Solution sol;
  sol.warnings = std::move(warnings);
  sol.candidates = std::move(already_rejected);

  std::vector<CandidatePoint> accepted;
  for (auto& c : pending) {
    std::vector<double> point = assemble_point(c, *ctx.space, *ctx.x);

    double res = ctx.residual_of(c, point);
    c.residual = std::max(c.residual, res);
    if (res > ctx.tol->residual) {
      c.status = CandidateStatus::RejectedResidual;
      c.detail = "KKT residual " + std::to_string(res);
      sol.candidates.push_back(std::move(c));
      continue;
    }
    bool bad_sign = false;
    for (const auto& [name, value] : c.multipliers) {
      if (value < -ctx.tol->multiplier) {
        c.status = CandidateStatus::RejectedMultiplierSign;
        c.detail = name + " = " + std::to_string(value);
        bad_sign = true;
        break;
      }
    }
    if (bad_sign) {
      sol.candidates.push_back(std::move(c));
      continue;
    }
    bool infeasible = false;
    for (std::size_t k = 0; k < ctx.space->multiplier_count(); ++k) {
      double g = ctx.constraint_value(k, point);
      if (g > ctx.tol->feasibility) {
        c.status = CandidateStatus::RejectedInfeasible;
        c.detail = "g" + std::to_string(k + 1) + " = " + std::to_string(g);
        infeasible = true;
        break;
      }
    }
    if (infeasible) {
      sol.candidates.push_back(std::move(c));
      continue;
    }
    c.status = CandidateStatus::Accepted;
    c.objective = ctx.objective_value(point);
    accepted.push_back(std::move(c));
  }

  // merge repeated roots (same branch, same point up to the tolerance)
  std::vector<CandidatePoint> unique;
  for (auto& c : accepted) {
    bool merged = false;
    for (auto& kept : unique) {
      if (kept.source_mask != c.source_mask) continue;
      if (kept.u.size() != c.u.size()) continue;
      double dist = 0.0;
      for (std::size_t i = 0; i < c.u.size(); ++i) {
        dist = std::max(dist, std::fabs(c.u[i] - kept.u[i]));
      }
      if (dist <= ctx.tol->duplicate) {
        if (c.residual < kept.residual) kept = c;
        merged = true;
        break;
      }
    }
    if (!merged) unique.push_back(std::move(c));
  }

  const CandidatePoint* best = nullptr;
  for (const auto& c : unique) {
    if (!best) {
      best = &c;
      continue;
    }
    if (c.objective != best->objective) {
      if (c.objective < best->objective) best = &c;
      continue;
    }
    if (c.source_mask != best->source_mask) {
      if (c.source_mask < best->source_mask) best = &c;
      continue;
    }
    if (std::lexicographical_compare(c.u.begin(), c.u.end(), best->u.begin(), best->u.end())) {
      best = &c;
    }
  }
  if (!best) {
    std::size_t rejected = sol.candidates.size();
    throw NoFeasibleCandidateError("no feasible candidate survived filtering (" +
                                   std::to_string(rejected) + " rejected)");
  }
  sol.u_star = best->u;
  sol.j_star = best->objective;
  for (auto& c : unique) sol.candidates.push_back(std::move(c));
  return sol;
}

}  // namespace

Solution OnlineSolver::solve(const std::vector<double>& x, const SolveConfig& config) const {
  const auto& space = artifact_.program().space();
  if (x.size() != space.parameter_count()) {
    throw Error("parameter vector has dimension " + std::to_string(x.size()) + ", expected " +
                std::to_string(space.parameter_count()));
  }
  const Tolerances& tol = config.tol;
  const std::size_t m = space.decision_count();

  auto t_total = std::chrono::steady_clock::now();
  SolveTimings timings;
  std::vector<std::string> warnings;
  std::vector<CandidatePoint> pending;
  std::vector<CandidatePoint> rejected_early;
  std::map<std::uint32_t, const std::vector<NumPoly>*> generators_by_mask;

  for (const auto& rt : runtimes_) {
    const SubVarietyRecord& rec = *rt.record;
    if (rec.kind == RecordKind::Unresolved) {
      warnings.push_back("mask " + std::to_string(rec.active_set.mask) +
                         " is unresolved (" + rec.note + "); candidate set may be incomplete");
      continue;
    }
    generators_by_mask[rec.active_set.mask] = &rt.generators;

    auto t_spec = std::chrono::steady_clock::now();
    bool certificates_ok = true;
    for (std::size_t ci = 0; ci < rt.certificates.size(); ++ci) {
      double v = rt.certificates[ci].eval(x);
      if (std::fabs(v) <= tol.denominator * (1.0 + rt.certificate_scales[ci])) {
        certificates_ok = false;
        break;
      }
    }
    SpecializedRecord sr;
    if (certificates_ok) {
      try {
        sr = specialize_runtime(rt, x, tol, warnings);
      } catch (const DenominatorVanishesError&) {
        certificates_ok = false;
      }
    }
    if (!certificates_ok) {
      warnings.push_back("mask " + std::to_string(rec.active_set.mask) +
                         ": specialization certificates vanished; recomputed numerically");
      try {
        sr = numeric_fallback(rec, x);
      } catch (const Error& e) {
        throw SpecializationError("mask " + std::to_string(rec.active_set.mask) +
                                  ": numeric fallback failed: " + e.what());
      }
    }
    timings.specialize_ms += ms_since(t_spec);
    if (!sr.usable || sr.infeasible_here) continue;

    if (!sr.closed_form.empty()) {
      CandidatePoint c;
      c.source_mask = rec.active_set.mask;
      for (std::size_t i = m; i < sr.closed_form.size(); ++i) c.multipliers.push_back(sr.closed_form[i]);
      bool bad_sign = false;
      for (const auto& [name, value] : c.multipliers) {
        if (value < -tol.multiplier) {
          c.status = CandidateStatus::RejectedMultiplierSign;
          c.detail = name + " = " + std::to_string(value);
          bad_sign = true;
          break;
        }
      }
      if (bad_sign) {
        rejected_early.push_back(std::move(c));
        continue;
      }
      for (std::size_t i = 0; i < m; ++i) c.u.push_back(sr.closed_form[i].second);
      pending.push_back(std::move(c));
      continue;
    }

    // companion branch: joint eigenvalues from a random combination
    auto t_eig = std::chrono::steady_clock::now();
    std::vector<EigenPair> pairs;
    for (int attempt = 0; attempt < 4; ++attempt) {
      DenseMatrix mrand = random_combination(sr.matrices, config.seed + std::uint64_t(attempt));
      pairs = eigen_decompose(mrand);
      double sep_scale = std::max(1.0, mrand.frobenius_norm());
      bool clustered = false;
      for (std::size_t a = 0; a < pairs.size() && !clustered; ++a) {
        for (std::size_t b = a + 1; b < pairs.size(); ++b) {
          if (std::abs(pairs[a].value - pairs[b].value) < tol.cluster * sep_scale) {
            clustered = true;
            break;
          }
        }
      }
      if (!clustered) break;
    }

    for (const auto& pair : pairs) {
      CandidatePoint c;
      c.source_mask = rec.active_set.mask;
      double worst_res = 0.0;
      bool dropped = false;

      // multipliers first; coordinates of u are only read for survivors
      for (std::size_t k = m; k < sr.matrices.size() && !dropped; ++k) {
        double res = 0.0;
        Complex v = rayleigh_value(sr.matrices[k], pair.vector, &res);
        double scale = std::max(1.0, sr.matrices[k].frobenius_norm());
        worst_res = std::max(worst_res, res / scale);
        c.multipliers.emplace_back(sr.matrix_variables[k], v.real());
        if (res > tol.joint * scale) {
          c.status = CandidateStatus::RejectedResidual;
          c.detail = "eigenvector residual on " + sr.matrix_variables[k];
          dropped = true;
        } else if (std::fabs(v.imag()) > tol.imag * (1.0 + std::fabs(v.real()))) {
          c.status = CandidateStatus::RejectedComplex;
          c.detail = sr.matrix_variables[k] + " = " + std::to_string(v.real()) + " + " +
                     std::to_string(v.imag()) + "i";
          dropped = true;
        } else if (v.real() < -tol.multiplier) {
          c.status = CandidateStatus::RejectedMultiplierSign;
          c.detail = sr.matrix_variables[k] + " = " + std::to_string(v.real());
          dropped = true;
        }
      }
      if (dropped) {
        c.residual = worst_res;
        rejected_early.push_back(std::move(c));
        continue;
      }
      for (std::size_t k = 0; k < m && !dropped; ++k) {
        double res = 0.0;
        Complex v = rayleigh_value(sr.matrices[k], pair.vector, &res);
        double scale = std::max(1.0, sr.matrices[k].frobenius_norm());
        worst_res = std::max(worst_res, res / scale);
        if (res > tol.joint * scale) {
          c.status = CandidateStatus::RejectedResidual;
          c.detail = "eigenvector residual on " + sr.matrix_variables[k];
          dropped = true;
        } else if (std::fabs(v.imag()) > tol.imag * (1.0 + std::fabs(v.real()))) {
          c.status = CandidateStatus::RejectedComplex;
          c.detail = sr.matrix_variables[k] + " = " + std::to_string(v.real()) + " + " +
                     std::to_string(v.imag()) + "i";
          dropped = true;
        } else {
          c.u.push_back(v.real());
        }
      }
      c.residual = worst_res;
      if (dropped) {
        rejected_early.push_back(std::move(c));
      } else {
        pending.push_back(std::move(c));
      }
    }
    timings.eigen_ms += ms_since(t_eig);
  }

  auto t_filter = std::chrono::steady_clock::now();
  FilterContext ctx;
  ctx.x = &x;
  ctx.space = &space;
  ctx.tol = &tol;
  ctx.residual_of = [&](const CandidatePoint& c, const std::vector<double>& point) {
    auto it = generators_by_mask.find(c.source_mask);
    if (it == generators_by_mask.end()) return 0.0;
    double worst = 0.0;
    for (const auto& g : *it->second) {
      double val = std::fabs(g.eval(point));
      double scale = 1.0 + g.magnitude(point);
      worst = std::max(worst, val / scale);
    }
    return worst;
  };
  ctx.constraint_value = [&](std::size_t k, const std::vector<double>& point) {
    return constraints_[k].eval(point);
  };
  ctx.objective_value = [&](const std::vector<double>& point) { return objective_.eval(point); };

  Solution sol = rank_candidates(std::move(pending), std::move(rejected_early), ctx,
                                 std::move(warnings));
  timings.filter_ms = ms_since(t_filter);
  timings.total_ms = ms_since(t_total);
  sol.timings = timings;
  return sol;
}

Solution filter_and_rank(std::vector<CandidatePoint> candidates, const ParametricProgram& program,
                         const std::vector<double>& x, const Tolerances& tol) {
  std::vector<CandidatePoint> pending;
  std::vector<CandidatePoint> rejected;
  for (auto& c : candidates) {
    if (c.status == CandidateStatus::Accepted) {
      pending.push_back(std::move(c));
    } else {
      rejected.push_back(std::move(c));
    }
  }

  std::map<std::uint32_t, std::vector<QPolynomial>> generators;
  for (const auto& c : pending) {
    if (!generators.count(c.source_mask)) {
      generators[c.source_mask] =
          kkt_subideal(program, ActiveSet{c.source_mask}).full_generators;
    }
  }

  auto magnitude = [](const QPolynomial& g, const std::vector<double>& point) {
    double acc = 0.0;
    for (const auto& t : g.terms()) {
      double v = std::fabs(to_double(t.coeff));
      for (std::size_t i = 0; i < point.size(); ++i) {
        for (std::uint32_t e = 0; e < t.mono.exp(i); ++e) v *= std::fabs(point[i]);
      }
      acc += v;
    }
    return acc;
  };

  FilterContext ctx;
  ctx.x = &x;
  ctx.space = &program.space();
  ctx.tol = &tol;
  ctx.residual_of = [&](const CandidatePoint& c, const std::vector<double>& point) {
    auto it = generators.find(c.source_mask);
    if (it == generators.end()) return 0.0;
    double worst = 0.0;
    for (const auto& g : it->second) {
      double val = std::fabs(evaluate(g, point));
      worst = std::max(worst, val / (1.0 + magnitude(g, point)));
    }
    return worst;
  };
  ctx.constraint_value = [&](std::size_t k, const std::vector<double>& point) {
    return evaluate(program.constraints()[k], point);
  };
  ctx.objective_value = [&](const std::vector<double>& point) {
    return evaluate(program.objective(), point);
  };
  return rank_candidates(std::move(pending), std::move(rejected), ctx, {});
}

std::string solution_to_json(const Solution& s, bool include_timings) {
  nlohmann::json j;
  j["u_star"] = s.u_star;
  j["j_star"] = s.j_star;
  nlohmann::json cands = nlohmann::json::array();
  for (const auto& c : s.candidates) {
    nlohmann::json jc;
    jc["status"] = to_string(c.status);
    jc["source_mask"] = c.source_mask;
    jc["u"] = c.u;
    nlohmann::json mults = nlohmann::json::array();
    for (const auto& [name, value] : c.multipliers) {
      mults.push_back(nlohmann::json::array({name, value}));
    }
    jc["multipliers"] = mults;
    jc["residual"] = c.residual;
    if (c.status == CandidateStatus::Accepted) jc["objective"] = c.objective;
    if (!c.detail.empty()) jc["detail"] = c.detail;
    cands.push_back(std::move(jc));
  }
  j["candidates"] = cands;
  j["warnings"] = s.warnings;
  if (include_timings) {
    j["timings"] = {
        {"specialize_ms", s.timings.specialize_ms},
        {"eigen_ms", s.timings.eigen_ms},
        {"filter_ms", s.timings.filter_ms},
        {"total_ms", s.timings.total_ms},
    };
  }
  return j.dump(2);
}

}  // namespace ppopt
