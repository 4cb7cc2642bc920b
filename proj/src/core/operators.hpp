#pragma once

#include <complex>
#include <optional>
#include <span>
#include <vector>

#include "field.hpp"

namespace epsnum::linop {

using cplx = std::complex<double>;

// Infinite diagonal operator: a nonincreasing nonnegative weight
// sequence given as a finite prefix plus a constant tail.
struct DiagonalSpec {
  std::vector<double> prefix;  // sigma_1 >= ... >= sigma_m >= tail
  double tail = 0.0;
  PNorm p{2.0};
  Field field = Field::Real;

  // 1-based weight lookup.
  double sigma(std::size_t k) const {
    return k <= prefix.size() ? prefix[k - 1] : tail;
  }
  double norm() const { return prefix.empty() ? tail : prefix.front(); }
};

DiagonalSpec make_diagonal_spec(std::vector<double> prefix, double tail, PNorm p, Field field);

// Finite matrix acting l_p^cols -> l_p^rows over one field. Entries are
// stored complex; real operators keep zero imaginary parts.
struct DenseOperator {
  Field field = Field::Real;
  int rows = 0;
  int cols = 0;
  PNorm p{2.0};
  std::vector<cplx> a;  // row-major

  cplx& at(int r, int c) { return a[static_cast<std::size_t>(r) * cols + c]; }
  const cplx& at(int r, int c) const { return a[static_cast<std::size_t>(r) * cols + c]; }

  int real_rows() const { return realified(field, rows); }
  int real_cols() const { return realified(field, cols); }

  bool is_zero() const;
  // Moduli of the diagonal when the matrix is square with exactly zero
  // off-diagonal entries; nullopt otherwise.
  std::optional<std::vector<double>> diagonal_moduli() const;

  // y = A x on realified vectors (x: real_cols(), y: real_rows()).
  void apply_realified(std::span<const double> x, std::span<double> y) const;
};

DenseOperator make_dense_real(int rows, int cols, PNorm p, std::span<const double> entries);
DenseOperator make_dense_complex(int rows, int cols, PNorm p, std::span<const double> re,
                                 std::span<const double> im);
DenseOperator identity_operator(int dim, PNorm p, Field field);

// Leading n-by-n block of the diagonal operator.
DenseOperator truncate(const DiagonalSpec& spec, int n);

// Conjugate transpose; Hilbert setting only (p = 2).
DenseOperator adjoint(const DenseOperator& A);

// Unique positive semidefinite square root of A*A (p = 2, dims <= 4).
DenseOperator modulus(const DenseOperator& A);

struct PolarParts {
  DenseOperator partial_isometry;  // V, zero on ker |A|
  DenseOperator modulus_part;      // |A|
};
PolarParts polar(const DenseOperator& A);

DenseOperator compose(const DenseOperator& A, const DenseOperator& B);
DenseOperator add(const DenseOperator& A, const DenseOperator& B);
DenseOperator scale(cplx alpha, const DenseOperator& A);

// Singular values, nonincreasing, via cyclic Jacobi on A*A.
std::vector<double> singular_values(const DenseOperator& A);

// Eigendecomposition of a Hermitian matrix (values nonincreasing,
// vectors as columns). Dimension is expected to be small.
struct HermitianEigen {
  std::vector<double> values;
  std::vector<cplx> vectors;  // column-major, n x n
  int n = 0;
};
HermitianEigen hermitian_eigen(std::span<const cplx> h, int n);

}  // namespace epsnum::linop
