#include "test_oracle.hpp"

#include <cmath>
#include <set>

#include "ppopt/linalg.hpp"
#include "ppopt/poly_io.hpp"

namespace ppopt_oracle {

using namespace ppopt;

namespace {

struct FastPoly {
  // coefficients with the parameter already substituted; exponents over u
  std::vector<double> coeff;
  std::vector<std::vector<std::uint32_t>> exps;

  double eval(const std::vector<double>& u) const {
    double acc = 0.0;
    for (std::size_t t = 0; t < coeff.size(); ++t) {
      double v = coeff[t];
      for (std::size_t i = 0; i < u.size(); ++i) {
        for (std::uint32_t e = 0; e < exps[t][i]; ++e) v *= u[i];
      }
      acc += v;
    }
    return acc;
  }
};

FastPoly specialize_to_u(const QPolynomial& p, const VariableSpace& space,
                         const std::vector<double>& x) {
  const std::size_t m = space.decision_count();
  const std::size_t q = space.multiplier_count();
  FastPoly fp;
  for (const auto& t : p.terms()) {
    double c = to_double(t.coeff);
    std::vector<std::uint32_t> ue(m, 0);
    for (std::size_t v = 0; v < t.mono.nvars(); ++v) {
      std::uint32_t e = t.mono.exp(v);
      if (e == 0) continue;
      if (v < m) {
        ue[v] = e;
      } else if (v < m + q) {
        c = 0.0;  // multipliers never appear in objective/constraints
      } else {
        for (std::uint32_t k = 0; k < e; ++k) c *= x[v - m - q];
      }
    }
    if (c != 0.0) {
      fp.coeff.push_back(c);
      fp.exps.push_back(std::move(ue));
    }
  }
  return fp;
}

}  // namespace

BruteResult brute_force_minimum(const ParametricProgram& program, const std::vector<double>& x,
                                double bound, double grid_step) {
  const std::size_t m = program.space().decision_count();
  FastPoly obj = specialize_to_u(program.objective(), program.space(), x);
  std::vector<FastPoly> cons;
  for (const auto& g : program.constraints()) {
    cons.push_back(specialize_to_u(g, program.space(), x));
  }
  auto feasible = [&](const std::vector<double>& u) {
    for (const auto& g : cons) {
      if (g.eval(u) > 1e-12) return false;
    }
    return true;
  };

  BruteResult best;
  const long steps = std::lround(2.0 * bound / grid_step);
  std::vector<double> u(m, 0.0);
  if (m == 1) {
    for (long i = 0; i <= steps; ++i) {
      u[0] = -bound + grid_step * double(i);
      if (!feasible(u)) continue;
      double j = obj.eval(u);
      if (!best.found || j < best.j) {
        best.found = true;
        best.j = j;
        best.u = u;
      }
    }
  } else if (m == 2) {
    for (long i = 0; i <= steps; ++i) {
      u[0] = -bound + grid_step * double(i);
      for (long k = 0; k <= steps; ++k) {
        u[1] = -bound + grid_step * double(k);
        if (!feasible(u)) continue;
        double j = obj.eval(u);
        if (!best.found || j < best.j) {
          best.found = true;
          best.j = j;
          best.u = u;
        }
      }
    }
  } else {
    throw Error("brute force oracle supports at most two decision variables");
  }
  if (!best.found) return best;

  // local polish, stage 1: nested grid refinement around the incumbent
  std::vector<double> cur = best.u;
  double curj = best.j;
  double step = grid_step;
  const long radius = 6;
  while (step > 1e-10) {
    step /= 5.0;
    bool moved = true;
    while (moved) {
      moved = false;
      std::vector<double> u2 = cur;
      if (m == 1) {
        for (long i = -radius; i <= radius; ++i) {
          u2[0] = cur[0] + step * double(i);
          if (!feasible(u2)) continue;
          double j = obj.eval(u2);
          if (j < curj) {
            curj = j;
            cur = u2;
            moved = true;
          }
        }
      } else {
        for (long i = -radius; i <= radius; ++i) {
          for (long k = -radius; k <= radius; ++k) {
            u2[0] = cur[0] + step * double(i);
            u2[1] = cur[1] + step * double(k);
            if (!feasible(u2)) continue;
            double j = obj.eval(u2);
            if (j < curj) {
              curj = j;
              cur = u2;
              moved = true;
            }
          }
        }
      }
    }
  }

  // stage 2: compass search to mop up the last digits
  std::vector<std::vector<double>> dirs;
  if (m == 1) {
    dirs = {{1.0}, {-1.0}};
  } else {
    for (int k = 0; k < 16; ++k) {
      double a = 2.0 * M_PI * double(k) / 16.0;
      dirs.push_back({std::cos(a), std::sin(a)});
    }
  }
  double cstep = 1e-7;
  while (cstep > 1e-13) {
    bool improved = false;
    for (const auto& d : dirs) {
      std::vector<double> cand = cur;
      for (std::size_t i = 0; i < m; ++i) cand[i] += cstep * d[i];
      if (!feasible(cand)) continue;
      double j = obj.eval(cand);
      if (j < curj) {
        cur = cand;
        curj = j;
        improved = true;
        break;
      }
    }
    if (!improved) cstep *= 0.5;
  }
  best.u = cur;
  best.j = curj;
  return best;
}

double random_program_bound(std::uint64_t seed) {
  SplitMix64 rng(seed * 2654435761u + 17);
  (void)rng.next();
  return 1.0 + 0.25 * double(rng.next() % 3);
}

ParametricProgram random_program(std::uint64_t seed) {
  SplitMix64 rng(seed * 2654435761u + 17);
  const std::size_t m = 1 + (rng.next() % 2);
  const double bound_probe = random_program_bound(seed);
  const Rational bound = rational_from_double(bound_probe);

  std::vector<std::string> decision = {"u0"};
  if (m == 2) decision.push_back("u1");
  std::vector<std::string> multipliers;
  std::vector<std::string> parameters = {"x"};

  auto small_rational = [&](long max_num, long max_den) {
    long num = long(rng.next() % (2 * max_num + 1)) - max_num;
    long den = 1 + long(rng.next() % max_den);
    Rational r(num, den);
    r.canonicalize();
    return r;
  };

  // objective: coercive quartic anchor plus random lower-degree terms
  std::vector<std::string> names = decision;
  names.push_back("x");
  RingPtr work = Ring::make(names);
  QPolynomial obj = QPolynomial::zero(work);
  for (std::size_t d = 0; d < m; ++d) {
    obj = obj + QPolynomial::from_terms(
                    work, {{Monomial::variable(names.size(), d, 4), Rational(1)}});
  }
  const std::size_t extra_terms = 4 + rng.next() % 5;
  for (std::size_t t = 0; t < extra_terms; ++t) {
    std::vector<std::uint32_t> exps(names.size(), 0);
    std::uint32_t udeg = rng.next() % 4;  // <= 3 on decision variables
    for (std::uint32_t k = 0; k < udeg; ++k) exps[rng.next() % m] += 1;
    exps[names.size() - 1] = rng.next() % 2;  // parameter degree <= 1
    Rational c = small_rational(3, 2);
    if (ppopt::is_zero(c)) c = Rational(1, 2);
    obj = obj + QPolynomial::from_terms(work, {{Monomial(exps), c}});
  }

  // constraints: coordinate boxes, optionally one linear cut through a
  // neighborhood of the origin so the feasible set stays fat
  std::vector<QPolynomial> constraints;
  for (std::size_t d = 0; d < m; ++d) {
    QPolynomial g = QPolynomial::from_terms(
        work, {{Monomial::variable(names.size(), d, 2), Rational(1)},
               {Monomial::one(names.size()), -bound * bound}});
    constraints.push_back(g);
  }
  if (rng.next() % 2 == 0 && constraints.size() < 3) {
    Rational a = small_rational(2, 2);
    Rational b = m == 2 ? small_rational(2, 2) : Rational(0);
    Rational cx = small_rational(1, 2);
    Rational d = -Rational(1, 2) - abs(cx) * 2 - Rational(1, 100);
    std::vector<QPolynomial::Term> ts;
    if (!ppopt::is_zero(a)) ts.push_back({Monomial::variable(names.size(), 0), a});
    if (m == 2 && !ppopt::is_zero(b)) ts.push_back({Monomial::variable(names.size(), 1), b});
    if (!ppopt::is_zero(cx)) ts.push_back({Monomial::variable(names.size(), names.size() - 1), cx});
    ts.push_back({Monomial::one(names.size()), d});
    constraints.push_back(QPolynomial::from_terms(work, std::move(ts)));
  }

  for (std::size_t i = 0; i < constraints.size(); ++i) {
    multipliers.push_back("mu" + std::to_string(i + 1));
  }
  VariableSpace space(decision, multipliers, parameters);
  // lift from the (u..., x) working ring into the full ring
  std::vector<std::size_t> var_map(names.size());
  for (std::size_t d = 0; d < m; ++d) var_map[d] = d;
  var_map[names.size() - 1] = m + multipliers.size();
  QPolynomial objective = obj.embed(space.full_ring(), var_map);
  std::vector<QPolynomial> lifted;
  for (const auto& g : constraints) lifted.push_back(g.embed(space.full_ring(), var_map));
  return ParametricProgram(std::move(space), std::move(objective), std::move(lifted));
}

PlantedIdeal plant_ideal(std::uint64_t seed) {
  SplitMix64 rng(seed * 0x9e3779b97f4a7c15ULL + 3);
  const std::size_t nvars = 1 + rng.next() % 2;
  const std::size_t count = 2 + rng.next() % 4;  // 2..5 roots

  // distinct first coordinates from a small rational pool
  std::vector<Rational> first;
  std::set<std::string> seen;
  while (first.size() < count) {
    long num = long(rng.next() % 13) - 6;
    long den = 1 + long(rng.next() % 2);
    Rational r(num, den);
    r.canonicalize();
    if (seen.insert(to_string(r)).second) first.push_back(r);
  }

  PlantedIdeal out;
  if (nvars == 1) {
    out.ring = Ring::make({"u"});
    QPolynomial p = QPolynomial::constant(out.ring, Rational(1));
    QPolynomial u = QPolynomial::variable(out.ring, 0, Rational(1));
    for (const auto& r : first) {
      p = p * (u - QPolynomial::constant(out.ring, r));
      out.roots.push_back({r});
    }
    out.ideal.generators.push_back(p);
    return out;
  }

  out.ring = Ring::make({"u", "v"});
  std::vector<Rational> second;
  for (std::size_t i = 0; i < count; ++i) {
    long num = long(rng.next() % 13) - 6;
    long den = 1 + long(rng.next() % 2);
    Rational r(num, den);
    r.canonicalize();
    second.push_back(r);
  }

  QPolynomial u = QPolynomial::variable(out.ring, 0, Rational(1));
  QPolynomial v = QPolynomial::variable(out.ring, 1, Rational(1));
  QPolynomial vanish = QPolynomial::constant(out.ring, Rational(1));
  for (const auto& r : first) vanish = vanish * (u - QPolynomial::constant(out.ring, r));

  // Lagrange interpolation of the second coordinate over the first
  QPolynomial lagrange = QPolynomial::zero(out.ring);
  for (std::size_t i = 0; i < count; ++i) {
    QPolynomial term = QPolynomial::constant(out.ring, second[i]);
    for (std::size_t j = 0; j < count; ++j) {
      if (i == j) continue;
      Rational denom = first[i] - first[j];
      term = term * (u - QPolynomial::constant(out.ring, first[j]));
      term = term.scaled(Rational(1) / denom);
    }
    lagrange = lagrange + term;
  }

  out.ideal.generators.push_back(vanish);
  out.ideal.generators.push_back(v - lagrange);
  for (std::size_t i = 0; i < count; ++i) out.roots.push_back({first[i], second[i]});
  return out;
}

}  // namespace ppopt_oracle
