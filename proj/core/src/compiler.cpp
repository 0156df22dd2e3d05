#include "ppopt/compiler.hpp"

#include <algorithm>
#include <atomic>
#include <map>
#include <mutex>
#include <set>
#include <thread>

#include "ppopt/artifact_io.hpp"
#include "ppopt/errors.hpp"

namespace ppopt {

std::string to_string(RecordKind k) {
  switch (k) {
    case RecordKind::Infeasible: return "infeasible";
    case RecordKind::ClosedForm: return "closed_form";
    case RecordKind::Companion: return "companion";
    case RecordKind::Unresolved: return "unresolved";
  }
  return "infeasible";
}

RecordKind record_kind_from_string(const std::string& s) {
  if (s == "infeasible") return RecordKind::Infeasible;
  if (s == "closed_form") return RecordKind::ClosedForm;
  if (s == "companion") return RecordKind::Companion;
  if (s == "unresolved") return RecordKind::Unresolved;
  throw ArtifactError("unknown record kind: '" + s + "'");
}

namespace {

/// Splits a full-ring polynomial into a K-polynomial: monomials over the
/// branch unknowns, coefficients polynomial in the parameters.
KPolynomial to_branch_poly(const QPolynomial& p, const VariableSpace& space, ActiveSet active,
                           const RingPtr& unknown_ring) {
  const std::size_t m = space.decision_count();
  const std::size_t q = space.multiplier_count();
  const std::size_t n = space.parameter_count();
  const RingPtr& params = space.parameter_ring();

  // full-ring index -> (unknown index | parameter index)
  std::vector<std::optional<std::size_t>> to_unknown(m + q + n);
  std::vector<std::optional<std::size_t>> to_param(m + q + n);
  for (std::size_t d = 0; d < m; ++d) to_unknown[d] = d;
  std::size_t rank = m;
  for (std::size_t i = 0; i < q; ++i) {
    if (active.contains(i)) to_unknown[m + i] = rank++;
  }
  for (std::size_t j = 0; j < n; ++j) to_param[m + q + j] = j;

  auto desc = [](const Monomial& a, const Monomial& b) { return grevlex_compare(a, b) > 0; };
  std::map<Monomial, std::vector<QPolynomial::Term>, decltype(desc)> groups(desc);

  for (const auto& t : p.terms()) {
    std::vector<std::uint32_t> ue(unknown_ring->size(), 0);
    std::vector<std::uint32_t> pe(n, 0);
    for (std::size_t v = 0; v < t.mono.nvars(); ++v) {
      std::uint32_t e = t.mono.exp(v);
      if (e == 0) continue;
      if (to_unknown[v]) {
        ue[*to_unknown[v]] = e;
      } else if (to_param[v]) {
        pe[*to_param[v]] = e;
      } else {
        throw Error("generator references an inactive multiplier");
      }
    }
    groups[Monomial(std::move(ue))].push_back({Monomial(std::move(pe)), t.coeff});
  }

  std::vector<KPolynomial::Term> terms;
  terms.reserve(groups.size());
  for (auto& [mono, coeff_terms] : groups) {
    QPolynomial c = QPolynomial::from_terms(params, std::move(coeff_terms));
    if (c.is_zero()) continue;
    terms.push_back({mono, RationalFunction(std::move(c))});
  }
  return KPolynomial::from_terms(unknown_ring, std::move(terms));
}

void add_certificate(std::vector<QPolynomial>& certs, const QPolynomial& p) {
  QPolynomial c = integer_primitive(p);
  if (c.is_constant()) return;
  certs.push_back(std::move(c));
}

void finalize_certificates(SubVarietyRecord& rec, std::vector<QPolynomial> certs) {
  std::set<std::string> seen;
  std::vector<std::pair<std::string, QPolynomial>> keep;
  for (auto& c : certs) {
    std::string key = to_string(c);
    if (seen.insert(key).second) keep.emplace_back(std::move(key), std::move(c));
  }
  std::sort(keep.begin(), keep.end(), [](const auto& a, const auto& b) {
    if (a.second.degree() != b.second.degree()) return a.second.degree() < b.second.degree();
    return a.first < b.first;
  });
  rec.certificates.clear();
  for (auto& [key, c] : keep) rec.certificates.push_back(std::move(c));
}

}  // namespace

KktSystem kkt_subideal(const ParametricProgram& program, ActiveSet active) {
  const auto& space = program.space();
  const std::size_t m = space.decision_count();
  const std::size_t q = space.multiplier_count();
  const RingPtr& full = space.full_ring();

  KktSystem sys;
  sys.active_set = active;
  sys.unknown_names = space.unknown_names(active.mask);
  sys.unknown_ring = space.unknown_ring(active.mask);

  for (std::size_t d = 0; d < m; ++d) {
    QPolynomial s = program.objective().derivative(d);
    for (std::size_t i = 0; i < q; ++i) {
      if (!active.contains(i)) continue;
      QPolynomial mu = QPolynomial::variable(full, m + i, Rational(1));
      s = s + mu * program.constraints()[i].derivative(d);
    }
    sys.full_generators.push_back(std::move(s));
  }
  for (std::size_t i = 0; i < q; ++i) {
    if (active.contains(i)) sys.full_generators.push_back(program.constraints()[i]);
  }

  for (const auto& g : sys.full_generators) {
    KPolynomial k = to_branch_poly(g, space, active, sys.unknown_ring);
    if (!k.is_zero()) sys.ideal.generators.push_back(std::move(k));
  }
  return sys;
}

SubVarietyRecord classify_and_build(const KktSystem& sys, const MonomialOrder& order,
                                    const BuchbergerOptions& options) {
  SubVarietyRecord rec;
  rec.active_set = sys.active_set;
  rec.unknowns = sys.unknown_names;
  rec.generators = sys.full_generators;

  if (sys.ideal.generators.empty()) {
    // every generator vanished identically: the whole space is critical
    throw NotZeroDimensionalError("branch system is identically zero");
  }

  std::vector<QPolynomial> certs;
  BuchbergerOptions opts = options;
  auto outer_sink = options.certificate_sink;
  opts.certificate_sink = [&certs, &outer_sink](const QPolynomial& p) {
    add_certificate(certs, p);
    if (outer_sink) outer_sink(p);
  };

  auto gb = buchberger(sys.ideal, order, opts);
  if (gb.trivial()) {
    rec.kind = RecordKind::Infeasible;
    return rec;
  }

  StandardBasis sb = standard_monomials(gb);
  rec.solutions = sb.dimension;
  rec.basis_monomials = sb.monomials;

  bool affine = true;
  for (const auto& e : gb.elements()) {
    if (e.degree() > 1) {
      affine = false;
      break;
    }
  }

  if (affine) {
    rec.kind = RecordKind::ClosedForm;
    std::map<std::string, RationalFunction> values;
    for (const auto& e : gb.elements()) {
      auto lt = e.leading_term(order);
      std::size_t var = sys.unknown_ring->size();
      for (std::size_t v = 0; v < sys.unknown_ring->size(); ++v) {
        if (lt.mono.exp(v) == 1) {
          var = v;
          break;
        }
      }
      if (var == sys.unknown_ring->size() || lt.mono.degree() != 1) {
        throw Error("internal: affine basis element without a variable lead");
      }
      KPolynomial tail = e - KPolynomial::from_terms(e.ring(), {lt});
      if (tail.degree() > 0) throw Error("internal: affine basis element with a non-constant tail");
      RationalFunction value(0);
      if (!tail.is_zero()) value = -tail.terms().front().coeff;
      value = value.reduced_full();
      add_certificate(certs, value.den());
      values[sys.unknown_ring->name(var)] = value;
    }
    for (const auto& name : sys.unknown_names) {
      auto it = values.find(name);
      if (it == values.end()) throw Error("internal: closed form misses unknown " + name);
      rec.closed_form.emplace_back(name, it->second);
    }
  } else {
    rec.kind = RecordKind::Companion;
    const std::size_t l = sb.dimension;
    auto desc = [](const Monomial& a, const Monomial& b) { return grevlex_compare(a, b) < 0; };
    std::map<Monomial, std::size_t, decltype(desc)> basis_index(desc);
    for (std::size_t j = 0; j < l; ++j) basis_index.emplace(sb.monomials[j], j);

    const RingPtr param_ring =
        gb.elements().front().terms().front().coeff.ring()->size() > 0
            ? gb.elements().front().terms().front().coeff.ring()
            : RationalFunction::scalar_ring();

    for (std::size_t k = 0; k < sys.unknown_ring->size(); ++k) {
      CompanionMatrix cm;
      cm.for_variable = sys.unknown_ring->name(k);
      cm.entries.assign(l, std::vector<RationalFunction>(l, RationalFunction::zero(param_ring)));
      Monomial var = Monomial::variable(sys.unknown_ring->size(), k);
      for (std::size_t i = 0; i < l; ++i) {
        KPolynomial shifted = KPolynomial::from_terms(
            sys.unknown_ring, {{var * sb.monomials[i], RationalFunction::one(param_ring)}});
        KPolynomial nf = normal_form(shifted, gb);
        for (const auto& t : nf.terms()) {
          auto it = basis_index.find(t.mono);
          if (it == basis_index.end()) {
            throw Error("internal: normal form outside the standard basis");
          }
          RationalFunction entry = t.coeff.reduced_full();
          add_certificate(certs, entry.den());
          cm.entries[i][it->second] = std::move(entry);
        }
      }
      rec.matrices.push_back(std::move(cm));
    }
  }

  finalize_certificates(rec, std::move(certs));
  return rec;
}

CompiledProblem compile(const ParametricProgram& program, const CompileOptions& options) {
  auto sets = enumerate_active_sets(program.constraint_count(), options.active_set_cap);

  CompiledProblem cp(program, options.order);
  cp.enumerated = sets.size();
  cp.problem_hash = program_hash(program);

  std::vector<std::optional<SubVarietyRecord>> results(sets.size());
  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> finished{0};
  std::mutex progress_mutex;
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto worker = [&]() {
    while (true) {
      std::size_t i = next.fetch_add(1);
      if (i >= sets.size()) return;
      {
        std::lock_guard<std::mutex> lk(failure_mutex);
        if (failure) return;
      }
      SubVarietyRecord rec;
      try {
        KktSystem sys = kkt_subideal(program, sets[i]);
        BuchbergerOptions bo;
        bo.max_pair_steps = options.budget;
        rec = classify_and_build(sys, options.order, bo);
      } catch (const BudgetExceededError& e) {
        rec = SubVarietyRecord{};
        rec.active_set = sets[i];
        rec.kind = RecordKind::Unresolved;
        rec.note = e.what();
      } catch (const NotZeroDimensionalError& e) {
        rec = SubVarietyRecord{};
        rec.active_set = sets[i];
        rec.kind = RecordKind::Unresolved;
        rec.note = e.what();
      } catch (...) {
        std::lock_guard<std::mutex> lk(failure_mutex);
        if (!failure) {
          try {
            throw;
          } catch (const std::exception& e) {
            failure = std::make_exception_ptr(
                Error("active set mask " + std::to_string(sets[i].mask) + ": " + e.what()));
          } catch (...) {
            failure = std::current_exception();
          }
        }
        return;
      }
      results[i] = std::move(rec);
      std::size_t d = ++finished;
      if (options.progress) {
        std::lock_guard<std::mutex> lk(progress_mutex);
        options.progress(d, sets.size());
      }
    }
  };

  unsigned jobs = options.jobs != 0 ? options.jobs : std::max(1u, std::thread::hardware_concurrency());
  jobs = static_cast<unsigned>(std::min<std::size_t>(jobs, sets.size()));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < jobs; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);

  for (auto& r : results) {
    if (!r) throw Error("internal: missing compilation result");
    if (r->kind == RecordKind::Infeasible) {
      ++cp.infeasible_count;
    } else {
      cp.records().push_back(std::move(*r));
    }
  }
  return cp;
}

}  // namespace ppopt
