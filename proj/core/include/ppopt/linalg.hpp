#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "ppopt/errors.hpp"

namespace ppopt {

using Complex = std::complex<double>;

/// Dense row-major complex matrix. Construction rejects NaN/Inf entries.
class DenseMatrix {
public:
  DenseMatrix(std::size_t rows, std::size_t cols);
  static DenseMatrix identity(std::size_t n);
  static DenseMatrix from_rows(const std::vector<std::vector<Complex>>& rows);
  static DenseMatrix from_real_rows(const std::vector<std::vector<double>>& rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }

  Complex& at(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
  const Complex& at(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

  DenseMatrix operator*(const DenseMatrix& o) const;
  DenseMatrix operator+(const DenseMatrix& o) const;
  DenseMatrix operator-(const DenseMatrix& o) const;
  DenseMatrix scaled(Complex c) const;
  std::vector<Complex> apply(const std::vector<Complex>& v) const;

  double frobenius_norm() const;
  Complex trace() const;

  /// Throws on non-finite entries; called by the factory constructors.
  void validate_finite() const;

private:
  std::size_t rows_, cols_;
  std::vector<Complex> a_;
};

struct EigenPair {
  Complex value;
  std::vector<Complex> vector;  // unit 2-norm, largest component rotated real-positive
  double residual;              // ||Mv - lambda v||_2
};

struct EigenOptions {
  std::size_t max_dimension = 200;
  /// QR sweeps allowed per eigenvalue before giving up.
  std::size_t max_sweeps = 80;
};

/// All eigenvalues via balancing, Householder Hessenberg reduction and
/// Wilkinson-shifted complex QR; eigenvectors by inverse iteration on the
/// original matrix. Deterministic. Throws EigenConvergenceError if QR stalls.
std::vector<EigenPair> eigen_decompose(const DenseMatrix& m, const EigenOptions& opts = {});

/// (v* M v) / (v* v); optionally reports ||Mv - lambda v|| / ||v||.
Complex rayleigh_value(const DenseMatrix& m, const std::vector<Complex>& v,
                       double* residual = nullptr);

/// Sum of c_i * m_i with c_i drawn i.i.d. uniform on [-1, 1] from a seeded
/// deterministic generator; identical inputs and seed give identical output.
DenseMatrix random_combination(const std::vector<DenseMatrix>& matrices, std::uint64_t seed);

/// Solves A x = b by partial-pivot LU; near-zero pivots are floored so the
/// solve stays usable inside inverse iteration.
std::vector<Complex> lu_solve(DenseMatrix a, std::vector<Complex> b);

/// splitmix64; the deterministic scalar stream behind random_combination.
class SplitMix64 {
public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next();
  /// uniform on [-1, 1]
  double next_signed_unit();

private:
  std::uint64_t state_;
};

}  // namespace ppopt
