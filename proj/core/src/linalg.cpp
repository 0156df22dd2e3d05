#include "ppopt/linalg.hpp"

#include <algorithm>
#include <cmath>

namespace ppopt {

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), a_(rows * cols, Complex(0.0, 0.0)) {}

DenseMatrix DenseMatrix::identity(std::size_t n) {
  DenseMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1.0;
  return m;
}

DenseMatrix DenseMatrix::from_rows(const std::vector<std::vector<Complex>>& rows) {
  std::size_t r = rows.size();
  std::size_t c = r == 0 ? 0 : rows[0].size();
  DenseMatrix m(r, c);
  for (std::size_t i = 0; i < r; ++i) {
    if (rows[i].size() != c) throw Error("ragged matrix rows");
    for (std::size_t j = 0; j < c; ++j) m.at(i, j) = rows[i][j];
  }
  m.validate_finite();
  return m;
}

DenseMatrix DenseMatrix::from_real_rows(const std::vector<std::vector<double>>& rows) {
  std::vector<std::vector<Complex>> c(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) c[i].assign(rows[i].begin(), rows[i].end());
  return from_rows(c);
}

void DenseMatrix::validate_finite() const {
  for (const auto& v : a_) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
      throw Error("matrix entry is not finite");
    }
  }
}

DenseMatrix DenseMatrix::operator*(const DenseMatrix& o) const {
  if (cols_ != o.rows_) throw Error("matrix dimension mismatch");
  DenseMatrix r(rows_, o.cols_);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t k = 0; k < cols_; ++k) {
      Complex aik = at(i, k);
      if (aik == Complex(0.0, 0.0)) continue;
      for (std::size_t j = 0; j < o.cols_; ++j) r.at(i, j) += aik * o.at(k, j);
    }
  }
  return r;
}

DenseMatrix DenseMatrix::operator+(const DenseMatrix& o) const {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw Error("matrix dimension mismatch");
  DenseMatrix r = *this;
  for (std::size_t i = 0; i < a_.size(); ++i) r.a_[i] += o.a_[i];
  return r;
}

DenseMatrix DenseMatrix::operator-(const DenseMatrix& o) const {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw Error("matrix dimension mismatch");
  DenseMatrix r = *this;
  for (std::size_t i = 0; i < a_.size(); ++i) r.a_[i] -= o.a_[i];
  return r;
}

DenseMatrix DenseMatrix::scaled(Complex c) const {
  DenseMatrix r = *this;
  for (auto& v : r.a_) v *= c;
  return r;
}

std::vector<Complex> DenseMatrix::apply(const std::vector<Complex>& v) const {
  if (v.size() != cols_) throw Error("matrix-vector dimension mismatch");
  std::vector<Complex> r(rows_, Complex(0.0, 0.0));
  for (std::size_t i = 0; i < rows_; ++i) {
    Complex s = 0.0;
    for (std::size_t j = 0; j < cols_; ++j) s += at(i, j) * v[j];
    r[i] = s;
  }
  return r;
}

double DenseMatrix::frobenius_norm() const {
  double s = 0.0;
  for (const auto& v : a_) s += std::norm(v);
  return std::sqrt(s);
}

Complex DenseMatrix::trace() const {
  Complex s = 0.0;
  for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) s += at(i, i);
  return s;
}

std::uint64_t SplitMix64::next() {
  std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double SplitMix64::next_signed_unit() {
  double u = static_cast<double>(next() >> 11) * 0x1.0p-53;  // [0, 1)
  return 2.0 * u - 1.0;
}

namespace {

/// EISPACK-style balancing with powers of two; a similarity transform, so
/// eigenvalues are untouched.
void balance(DenseMatrix& m) {
  const std::size_t n = m.rows();
  bool changed = true;
  int passes = 0;
  while (changed && passes++ < 8) {
    changed = false;
    for (std::size_t i = 0; i < n; ++i) {
      double c = 0.0, r = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        if (j == i) continue;
        c += std::abs(m.at(j, i));
        r += std::abs(m.at(i, j));
      }
      if (c == 0.0 || r == 0.0) continue;
      double f = 1.0;
      const double s = c + r;
      while (c < r / 2.0) {
        c *= 2.0;
        r /= 2.0;
        f *= 2.0;
      }
      while (c > r * 2.0) {
        c /= 2.0;
        r *= 2.0;
        f /= 2.0;
      }
      if ((c + r) < 0.95 * s && f != 1.0) {
        changed = true;
        for (std::size_t j = 0; j < n; ++j) m.at(i, j) /= f;
        for (std::size_t j = 0; j < n; ++j) m.at(j, i) *= f;
      }
    }
  }
}

/// Householder reduction to upper Hessenberg form (in place).
void hessenberg(DenseMatrix& h) {
  const std::size_t n = h.rows();
  if (n < 3) return;
  for (std::size_t k = 0; k + 2 < n; ++k) {
    double colnorm = 0.0;
    for (std::size_t i = k + 1; i < n; ++i) colnorm += std::norm(h.at(i, k));
    colnorm = std::sqrt(colnorm);
    if (colnorm == 0.0) continue;

    Complex x0 = h.at(k + 1, k);
    double ax0 = std::abs(x0);
    Complex phase = ax0 == 0.0 ? Complex(1.0, 0.0) : x0 / ax0;
    Complex alpha = -phase * colnorm;

    // v = x - alpha e1, normalized
    std::vector<Complex> v(n - k - 1);
    v[0] = x0 - alpha;
    for (std::size_t i = k + 2; i < n; ++i) v[i - k - 1] = h.at(i, k);
    double vnorm = 0.0;
    for (const auto& c : v) vnorm += std::norm(c);
    if (vnorm == 0.0) continue;
    vnorm = std::sqrt(vnorm);
    for (auto& c : v) c /= vnorm;

    // H <- (I - 2 v v*) H
    for (std::size_t j = k; j < n; ++j) {
      Complex s = 0.0;
      for (std::size_t i = 0; i < v.size(); ++i) s += std::conj(v[i]) * h.at(k + 1 + i, j);
      s *= 2.0;
      for (std::size_t i = 0; i < v.size(); ++i) h.at(k + 1 + i, j) -= s * v[i];
    }
    // H <- H (I - 2 v v*)
    for (std::size_t i = 0; i < n; ++i) {
      Complex s = 0.0;
      for (std::size_t j = 0; j < v.size(); ++j) s += h.at(i, k + 1 + j) * v[j];
      s *= 2.0;
      for (std::size_t j = 0; j < v.size(); ++j) h.at(i, k + 1 + j) -= s * std::conj(v[j]);
    }
    for (std::size_t i = k + 2; i < n; ++i) h.at(i, k) = 0.0;
    h.at(k + 1, k) = alpha;
  }
}

struct Givens {
  Complex c;
  Complex s;
};

Givens make_givens(Complex a, Complex b) {
  double na = std::abs(a), nb = std::abs(b);
  if (nb == 0.0) return {Complex(1.0, 0.0), Complex(0.0, 0.0)};
  double r = std::hypot(na, nb);
  // unitary G with G [a b]^T = [r', 0]^T
  return {std::conj(a) / r, std::conj(b) / r};
}

/// Eigenvalue of the trailing 2x2 block closest to its (1,1) entry.
Complex wilkinson_shift(Complex a, Complex b, Complex c, Complex d) {
  Complex tr = a + d;
  Complex det = a * d - b * c;
  Complex disc = std::sqrt(tr * tr - 4.0 * det);
  Complex l1 = (tr + disc) / 2.0;
  Complex l2 = (tr - disc) / 2.0;
  return std::abs(l1 - d) < std::abs(l2 - d) ? l1 : l2;
}

/// Complex shifted QR on an upper Hessenberg matrix; returns the diagonal
/// (the eigenvalues) once all subdiagonals deflate.
std::vector<Complex> qr_eigenvalues(DenseMatrix h, const EigenOptions& opts) {
  const std::size_t n = h.rows();
  std::vector<Complex> eig(n);
  if (n == 0) return eig;
  if (n == 1) {
    eig[0] = h.at(0, 0);
    return eig;
  }
  const double eps = 1e-15;
  std::size_t hi = n - 1;
  std::size_t sweeps_here = 0;

  while (true) {
    // deflate negligible subdiagonals
    for (std::size_t i = 1; i <= hi; ++i) {
      double bound = eps * (std::abs(h.at(i - 1, i - 1)) + std::abs(h.at(i, i)));
      if (bound == 0.0) bound = eps * h.frobenius_norm();
      if (std::abs(h.at(i, i - 1)) <= bound) h.at(i, i - 1) = 0.0;
    }
    while (hi > 0 && h.at(hi, hi - 1) == Complex(0.0, 0.0)) {
      eig[hi] = h.at(hi, hi);
      if (hi == 0) break;
      --hi;
      sweeps_here = 0;
    }
    if (hi == 0) {
      eig[0] = h.at(0, 0);
      break;
    }

    std::size_t lo = hi;
    while (lo > 0 && h.at(lo, lo - 1) != Complex(0.0, 0.0)) --lo;

    if (++sweeps_here > opts.max_sweeps) {
      throw EigenConvergenceError("QR iteration failed to converge");
    }

    Complex shift = wilkinson_shift(h.at(hi - 1, hi - 1), h.at(hi - 1, hi), h.at(hi, hi - 1),
                                    h.at(hi, hi));
    if (sweeps_here % 16 == 10) {
      // exceptional shift to break rare symmetric stalls
      shift = h.at(hi, hi) + Complex(std::abs(h.at(hi, hi - 1)), 0.0);
    }

    // explicit shifted QR sweep on the active block [lo..hi]:
    // H - sI = QR, then H <- RQ + sI
    for (std::size_t i = lo; i <= hi; ++i) h.at(i, i) -= shift;
    std::vector<Givens> rots(hi - lo);
    for (std::size_t i = lo; i < hi; ++i) {
      Givens g = make_givens(h.at(i, i), h.at(i + 1, i));
      rots[i - lo] = g;
      for (std::size_t j = i; j <= hi; ++j) {
        Complex x = h.at(i, j), y = h.at(i + 1, j);
        h.at(i, j) = g.c * x + g.s * y;
        h.at(i + 1, j) = -std::conj(g.s) * x + std::conj(g.c) * y;
      }
      h.at(i + 1, i) = 0.0;
    }
    for (std::size_t i = lo; i < hi; ++i) {
      const Givens& g = rots[i - lo];
      std::size_t last = std::min(i + 1, hi);
      for (std::size_t r = lo; r <= last; ++r) {
        Complex x = h.at(r, i), y = h.at(r, i + 1);
        h.at(r, i) = x * std::conj(g.c) + y * std::conj(g.s);
        h.at(r, i + 1) = -x * g.s + y * g.c;
      }
    }
    for (std::size_t i = lo; i <= hi; ++i) h.at(i, i) += shift;
  }
  return eig;
}

}  // namespace

std::vector<Complex> lu_solve(DenseMatrix a, std::vector<Complex> b) {
  if (!a.square() || a.rows() != b.size()) throw Error("lu_solve dimension mismatch");
  const std::size_t n = a.rows();
  const double floor_pivot = 1e-14 * (a.frobenius_norm() + 1e-300);
  std::vector<std::size_t> perm(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = i;

  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    double best = std::abs(a.at(k, k));
    for (std::size_t i = k + 1; i < n; ++i) {
      double m = std::abs(a.at(i, k));
      if (m > best) {
        best = m;
        piv = i;
      }
    }
    if (piv != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a.at(k, j), a.at(piv, j));
      std::swap(b[k], b[piv]);
    }
    Complex pivot = a.at(k, k);
    if (std::abs(pivot) < floor_pivot) {
      pivot = Complex(floor_pivot, 0.0);  // shifted matrices may be exactly singular
      a.at(k, k) = pivot;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      Complex f = a.at(i, k) / pivot;
      if (f == Complex(0.0, 0.0)) continue;
      a.at(i, k) = f;
      for (std::size_t j = k + 1; j < n; ++j) a.at(i, j) -= f * a.at(k, j);
      b[i] -= f * b[k];
    }
  }
  std::vector<Complex> x(n);
  for (std::size_t i = n; i-- > 0;) {
    Complex s = b[i];
    for (std::size_t j = i + 1; j < n; ++j) s -= a.at(i, j) * x[j];
    x[i] = s / a.at(i, i);
  }
  return x;
}

std::vector<EigenPair> eigen_decompose(const DenseMatrix& m, const EigenOptions& opts) {
  if (!m.square()) throw Error("eigen_decompose requires a square matrix");
  const std::size_t n = m.rows();
  if (n > opts.max_dimension) throw Error("matrix dimension exceeds the configured cap");
  m.validate_finite();

  std::vector<EigenPair> out;
  if (n == 0) return out;

  DenseMatrix h = m;
  balance(h);
  hessenberg(h);
  std::vector<Complex> values = qr_eigenvalues(h, opts);
  std::sort(values.begin(), values.end(), [](const Complex& a, const Complex& b) {
    if (a.real() != b.real()) return a.real() > b.real();
    return a.imag() > b.imag();
  });

  bool real_input = true;
  for (std::size_t i = 0; i < n && real_input; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (m.at(i, j).imag() != 0.0) {
        real_input = false;
        break;
      }
    }
  }

  for (std::size_t idx = 0; idx < values.size(); ++idx) {
    Complex lambda = values[idx];
    // A real matrix with a (numerically) real eigenvalue gets a real shift,
    // so the inverse iteration stays in real arithmetic and the eigenvector
    // carries no spurious imaginary part.
    const bool treat_real =
        real_input && std::fabs(lambda.imag()) <= 1e-8 * std::max(1.0, std::fabs(lambda.real()));
    if (treat_real) lambda = Complex(lambda.real(), 0.0);

    double pert = 1e-13 * (1.0 + std::abs(lambda)) * (1.0 + 0.25 * (idx % 4));
    Complex shifted = treat_real ? lambda + Complex(pert, 0.0) : lambda + Complex(pert, 0.5 * pert);

    DenseMatrix shifted_m = m;
    for (std::size_t i = 0; i < n; ++i) shifted_m.at(i, i) -= shifted;

    std::vector<Complex> v(n);
    for (std::size_t k = 0; k < n; ++k) {
      double im = treat_real ? 0.0 : double((3 * k + 5 * idx) % 7) / 17.0;
      v[k] = Complex(1.0 + double((7 * k + 13 * idx) % 11) / 11.0, im);
    }
    auto normalize = [&](std::vector<Complex>& w) {
      double s = 0.0;
      for (const auto& c : w) s += std::norm(c);
      s = std::sqrt(s);
      if (s == 0.0) {
        w.assign(n, Complex(0.0, 0.0));
        w[0] = 1.0;
        return;
      }
      for (auto& c : w) c /= s;
    };
    normalize(v);
    // repeated inverse iteration can wander on defective eigenvalues; keep
    // the best iterate seen
    std::vector<Complex> best = v;
    double best_res = std::numeric_limits<double>::infinity();
    const double fro = std::max(1.0, m.frobenius_norm());
    for (int it = 0; it < 4; ++it) {
      v = lu_solve(shifted_m, v);
      normalize(v);
      auto mv = m.apply(v);
      double res = 0.0;
      for (std::size_t k = 0; k < n; ++k) res += std::norm(mv[k] - lambda * v[k]);
      res = std::sqrt(res);
      if (res < best_res) {
        best_res = res;
        best = v;
      }
      if (best_res <= 1e-14 * fro) break;
    }
    v = std::move(best);
    // rotate the largest component to the positive real axis
    std::size_t big = 0;
    for (std::size_t k = 1; k < n; ++k) {
      if (std::abs(v[k]) > std::abs(v[big])) big = k;
    }
    if (std::abs(v[big]) > 0.0) {
      Complex phase = v[big] / std::abs(v[big]);
      for (auto& c : v) c /= phase;
      auto mv = m.apply(v);
      best_res = 0.0;
      for (std::size_t k = 0; k < n; ++k) best_res += std::norm(mv[k] - lambda * v[k]);
      best_res = std::sqrt(best_res);
    }
    out.push_back(EigenPair{lambda, std::move(v), best_res});
  }
  return out;
}

Complex rayleigh_value(const DenseMatrix& m, const std::vector<Complex>& v, double* residual) {
  if (!m.square() || v.size() != m.rows()) throw Error("rayleigh_value dimension mismatch");
  double vv = 0.0;
  for (const auto& c : v) vv += std::norm(c);
  if (vv == 0.0) throw Error("rayleigh_value of the zero vector");
  auto mv = m.apply(v);
  Complex num = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) num += std::conj(v[i]) * mv[i];
  Complex lambda = num / vv;
  if (residual) {
    double r = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) r += std::norm(mv[i] - lambda * v[i]);
    *residual = std::sqrt(r / vv);
  }
  return lambda;
}

DenseMatrix random_combination(const std::vector<DenseMatrix>& matrices, std::uint64_t seed) {
  if (matrices.empty()) throw Error("random_combination of an empty family");
  const std::size_t r = matrices[0].rows(), c = matrices[0].cols();
  for (const auto& m : matrices) {
    if (m.rows() != r || m.cols() != c) throw Error("matrix dimension mismatch");
  }
  SplitMix64 rng(seed);
  DenseMatrix acc(r, c);
  for (const auto& m : matrices) {
    double coeff = rng.next_signed_unit();
    for (std::size_t i = 0; i < r; ++i) {
      for (std::size_t j = 0; j < c; ++j) acc.at(i, j) += coeff * m.at(i, j);
    }
  }
  return acc;
}

}  // namespace ppopt
