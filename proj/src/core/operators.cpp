#include "operators.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "errors.hpp"

namespace epsnum::linop {

namespace {

void require_same_space(const DenseOperator& A, const DenseOperator& B) {
  if (A.field != B.field) fail(ErrorCode::InvalidArgument, "field mismatch");
  if (!(A.p == B.p)) fail(ErrorCode::InvalidArgument, "p mismatch");
}

double entry_abs_max(const DenseOperator& A) {
  double m = 0.0;
  for (const cplx& z : A.a) m = std::max(m, std::abs(z));
  return m;
}

}  // namespace

DiagonalSpec make_diagonal_spec(std::vector<double> prefix, double tail, PNorm p, Field field) {
  for (std::size_t i = 0; i < prefix.size(); ++i) {
    if (!(prefix[i] >= 0.0) || !std::isfinite(prefix[i]))
      fail(ErrorCode::InvalidArgument, "diagonal weights must be finite and nonnegative");
    if (i > 0 && prefix[i] > prefix[i - 1])
      fail(ErrorCode::InvalidArgument, "diagonal weights must be nonincreasing");
  }
  if (!(tail >= 0.0) || !std::isfinite(tail))
    fail(ErrorCode::InvalidArgument, "tail must be finite and nonnegative");
  if (!prefix.empty() && tail > prefix.back())
    fail(ErrorCode::InvalidArgument, "tail must not exceed the last prefix weight");
  return DiagonalSpec{std::move(prefix), tail, p, field};
}

bool DenseOperator::is_zero() const {
  for (const cplx& z : a)
    if (z != cplx{0.0, 0.0}) return false;
  return true;
}

std::optional<std::vector<double>> DenseOperator::diagonal_moduli() const {
  if (rows != cols) return std::nullopt;
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c)
      if (r != c && at(r, c) != cplx{0.0, 0.0}) return std::nullopt;
  std::vector<double> d(static_cast<std::size_t>(rows));
  for (int r = 0; r < rows; ++r) d[r] = std::abs(at(r, r));
  return d;
}

void DenseOperator::apply_realified(std::span<const double> x, std::span<double> y) const {
  if (static_cast<int>(x.size()) != real_cols() || static_cast<int>(y.size()) != real_rows())
    fail(ErrorCode::InvalidArgument, "apply: dimension mismatch");
  if (field == Field::Real) {
    for (int r = 0; r < rows; ++r) {
      double s = 0.0;
      for (int c = 0; c < cols; ++c) s += at(r, c).real() * x[c];
      y[r] = s;
    }
    return;
  }
  for (int r = 0; r < rows; ++r) {
    double re = 0.0, im = 0.0;
    for (int c = 0; c < cols; ++c) {
      const cplx& z = at(r, c);
      const double xr = x[2 * c], xi = x[2 * c + 1];
      re += z.real() * xr - z.imag() * xi;
      im += z.real() * xi + z.imag() * xr;
    }
    y[2 * r] = re;
    y[2 * r + 1] = im;
  }
}

DenseOperator make_dense_real(int rows, int cols, PNorm p, std::span<const double> entries) {
  if (rows < 1 || cols < 1) fail(ErrorCode::InvalidArgument, "rows, cols must be positive");
  if (entries.size() != static_cast<std::size_t>(rows) * cols)
    fail(ErrorCode::InvalidArgument, "entry count mismatch");
  DenseOperator A{Field::Real, rows, cols, p, {}};
  A.a.reserve(entries.size());
  for (double e : entries) {
    if (!std::isfinite(e)) fail(ErrorCode::InvalidArgument, "entries must be finite");
    A.a.emplace_back(e, 0.0);
  }
  return A;
}

DenseOperator make_dense_complex(int rows, int cols, PNorm p, std::span<const double> re,
                                 std::span<const double> im) {
  if (rows < 1 || cols < 1) fail(ErrorCode::InvalidArgument, "rows, cols must be positive");
  const std::size_t n = static_cast<std::size_t>(rows) * cols;
  if (re.size() != n || im.size() != n) fail(ErrorCode::InvalidArgument, "entry count mismatch");
  DenseOperator A{Field::Complex, rows, cols, p, {}};
  A.a.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(re[i]) || !std::isfinite(im[i]))
      fail(ErrorCode::InvalidArgument, "entries must be finite");
    A.a.emplace_back(re[i], im[i]);
  }
  return A;
}

DenseOperator identity_operator(int dim, PNorm p, Field field) {
  if (dim < 1) fail(ErrorCode::InvalidArgument, "dimension must be positive");
  DenseOperator A{field, dim, dim, p, std::vector<cplx>(static_cast<std::size_t>(dim) * dim)};
  for (int i = 0; i < dim; ++i) A.at(i, i) = 1.0;
  return A;
}

DenseOperator truncate(const DiagonalSpec& spec, int n) {
  if (n < 1) fail(ErrorCode::InvalidArgument, "truncation size must be positive");
  DenseOperator A{spec.field, n, n, spec.p, std::vector<cplx>(static_cast<std::size_t>(n) * n)};
  for (int i = 0; i < n; ++i) A.at(i, i) = spec.sigma(static_cast<std::size_t>(i) + 1);
  return A;
}

DenseOperator adjoint(const DenseOperator& A) {
  if (!A.p.is_two())
    fail(ErrorCode::Capability, "adjoint is supported in the Hilbert setting (p = 2) only");
  DenseOperator B{A.field, A.cols, A.rows, A.p,
                  std::vector<cplx>(static_cast<std::size_t>(A.cols) * A.rows)};
  for (int r = 0; r < A.rows; ++r)
    for (int c = 0; c < A.cols; ++c) B.at(c, r) = std::conj(A.at(r, c));
  return B;
}

DenseOperator compose(const DenseOperator& A, const DenseOperator& B) {
  require_same_space(A, B);
  if (A.cols != B.rows) fail(ErrorCode::InvalidArgument, "compose: inner dimensions differ");
  DenseOperator C{A.field, A.rows, B.cols, A.p,
                  std::vector<cplx>(static_cast<std::size_t>(A.rows) * B.cols)};
  for (int r = 0; r < A.rows; ++r)
    for (int k = 0; k < A.cols; ++k) {
      const cplx arik = A.at(r, k);
      if (arik == cplx{0.0, 0.0}) continue;
      for (int c = 0; c < B.cols; ++c) C.at(r, c) += arik * B.at(k, c);
    }
  return C;
}

DenseOperator add(const DenseOperator& A, const DenseOperator& B) {
  require_same_space(A, B);
  if (A.rows != B.rows || A.cols != B.cols)
    fail(ErrorCode::InvalidArgument, "add: shape mismatch");
  DenseOperator C = A;
  for (std::size_t i = 0; i < C.a.size(); ++i) C.a[i] += B.a[i];
  return C;
}

DenseOperator scale(cplx alpha, const DenseOperator& A) {
  if (A.field == Field::Real && alpha.imag() != 0.0)
    fail(ErrorCode::InvalidArgument, "complex scalar on a real operator");
  DenseOperator C = A;
  for (cplx& z : C.a) z *= alpha;
  return C;
}

// ---------------------------------------------------------------------------
// Cyclic Jacobi for Hermitian matrices. Dimensions here are tiny (<= 4 in
// the oracle pipeline), so simplicity and reproducibility win.

HermitianEigen hermitian_eigen(std::span<const cplx> h, int n) {
  if (n < 1 || h.size() != static_cast<std::size_t>(n) * n)
    fail(ErrorCode::InvalidArgument, "hermitian_eigen: bad shape");
  std::vector<cplx> a(h.begin(), h.end());
  std::vector<cplx> v(static_cast<std::size_t>(n) * n, cplx{0.0, 0.0});
  for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i) * n + i] = 1.0;
  auto A = [&](int r, int c) -> cplx& { return a[static_cast<std::size_t>(r) * n + c]; };
  auto V = [&](int r, int c) -> cplx& { return v[static_cast<std::size_t>(r) * n + c]; };

  double scale_f = 0.0;
  for (const cplx& z : a) scale_f += std::norm(z);
  scale_f = std::sqrt(scale_f);
  const double stop = 1e-14 * std::max(1.0, scale_f);

  auto off_mass = [&]() {
    double s = 0.0;
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c)
        if (r != c) s += std::norm(A(r, c));
    return std::sqrt(s);
  };

  const int max_sweeps = 64;
  int sweep = 0;
  while (off_mass() > stop && sweep++ < max_sweeps) {
    for (int pq = 0; pq < n - 1; ++pq) {
      for (int q = pq + 1; q < n; ++q) {
        const int p_i = pq;
        const cplx apq = A(p_i, q);
        const double mag = std::abs(apq);
        if (mag == 0.0) continue;
        const double app = A(p_i, p_i).real();
        const double aqq = A(q, q).real();
        const cplx phase = apq / mag;  // e^{i arg}
        const double tau = (aqq - app) / (2.0 * mag);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const cplx s = t * c * phase;
        // Right rotation on columns p, q and its conjugate on rows.
        for (int k = 0; k < n; ++k) {
          const cplx akp = A(k, p_i), akq = A(k, q);
          A(k, p_i) = c * akp - std::conj(s) * akq;
          A(k, q) = s * akp + c * akq;
        }
        for (int k = 0; k < n; ++k) {
          const cplx apk = A(p_i, k), aqk = A(q, k);
          A(p_i, k) = c * apk - s * aqk;
          A(q, k) = std::conj(s) * apk + c * aqk;
        }
        for (int k = 0; k < n; ++k) {
          const cplx vkp = V(k, p_i), vkq = V(k, q);
          V(k, p_i) = c * vkp - std::conj(s) * vkq;
          V(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }
  if (off_mass() > stop)
    fail(ErrorCode::Numerical,
         "jacobi iteration did not converge; off-diagonal residual = " + std::to_string(off_mass()));

  HermitianEigen out;
  out.n = n;
  out.values.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) out.values[i] = A(i, i).real();
  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int x, int y) { return out.values[x] > out.values[y]; });
  HermitianEigen sorted;
  sorted.n = n;
  sorted.values.resize(static_cast<std::size_t>(n));
  sorted.vectors.assign(static_cast<std::size_t>(n) * n, cplx{0.0, 0.0});
  for (int j = 0; j < n; ++j) {
    sorted.values[j] = out.values[order[j]];
    for (int r = 0; r < n; ++r)
      sorted.vectors[static_cast<std::size_t>(r) * n + j] = V(r, order[j]);
  }
  return sorted;
}

std::vector<double> singular_values(const DenseOperator& A) {
  const DenseOperator gram = [&] {
    DenseOperator At{A.field, A.cols, A.rows, A.p,
                     std::vector<cplx>(static_cast<std::size_t>(A.cols) * A.rows)};
    for (int r = 0; r < A.rows; ++r)
      for (int c = 0; c < A.cols; ++c) At.at(c, r) = std::conj(A.at(r, c));
    DenseOperator G{A.field, A.cols, A.cols, A.p,
                    std::vector<cplx>(static_cast<std::size_t>(A.cols) * A.cols)};
    for (int r = 0; r < A.cols; ++r)
      for (int k = 0; k < A.rows; ++k)
        for (int c = 0; c < A.cols; ++c) G.at(r, c) += At.at(r, k) * A.at(k, c);
    return G;
  }();
  const HermitianEigen eig = hermitian_eigen(gram.a, gram.rows);
  std::vector<double> s(eig.values.size());
  for (std::size_t i = 0; i < s.size(); ++i) s[i] = std::sqrt(std::max(0.0, eig.values[i]));
  return s;
}

namespace {

// Singular values from the Gram eigenvalues; values at the noise floor
// (~1e-16 sigma_max^2 in the eigenvalues, so ~1e-8 sigma_max here) are
// snapped to zero so the modulus and the partial isometry truncate the
// same directions.
std::vector<double> clamped_singular_values(const HermitianEigen& eig) {
  std::vector<double> sv(eig.values.size());
  double smax = 0.0;
  for (std::size_t i = 0; i < sv.size(); ++i) {
    sv[i] = std::sqrt(std::max(0.0, eig.values[i]));
    smax = std::max(smax, sv[i]);
  }
  const double tol = 1e-7 * smax;
  for (double& s : sv)
    if (s <= tol) s = 0.0;
  return sv;
}

}  // namespace

DenseOperator modulus(const DenseOperator& A) {
  if (!A.p.is_two())
    fail(ErrorCode::Capability, "modulus is supported in the Hilbert setting (p = 2) only");
  if (A.rows > 4 || A.cols > 4) fail(ErrorCode::Capability, "modulus: dimensions must be <= 4");
  const DenseOperator At = adjoint(A);
  const DenseOperator gram = compose(At, A);
  const HermitianEigen eig = hermitian_eigen(gram.a, gram.rows);
  const std::vector<double> sv = clamped_singular_values(eig);
  const int n = gram.rows;
  DenseOperator B{A.field, n, n, A.p, std::vector<cplx>(static_cast<std::size_t>(n) * n)};
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) {
      cplx s{0.0, 0.0};
      for (int k = 0; k < n; ++k) {
        s += eig.vectors[static_cast<std::size_t>(r) * n + k] * sv[k] *
             std::conj(eig.vectors[static_cast<std::size_t>(c) * n + k]);
      }
      B.at(r, c) = s;
    }
  if (A.field == Field::Real)
    for (cplx& z : B.a) z = cplx{z.real(), 0.0};

  // Residual check: B*B must reproduce A*A entrywise.
  const DenseOperator bb = compose(B, B);
  double resid = 0.0;
  for (std::size_t i = 0; i < bb.a.size(); ++i) resid = std::max(resid, std::abs(bb.a[i] - gram.a[i]));
  if (resid > 1e-9 * std::max(1.0, entry_abs_max(gram)))
    fail(ErrorCode::Numerical, "modulus residual too large: " + std::to_string(resid));
  return B;
}

PolarParts polar(const DenseOperator& A) {
  if (!A.p.is_two())
    fail(ErrorCode::Capability, "polar is supported in the Hilbert setting (p = 2) only");
  if (A.rows > 4 || A.cols > 4) fail(ErrorCode::Capability, "polar: dimensions must be <= 4");
  const DenseOperator At = adjoint(A);
  const DenseOperator gram = compose(At, A);
  const HermitianEigen eig = hermitian_eigen(gram.a, gram.rows);
  const std::vector<double> sv = clamped_singular_values(eig);
  const int n = gram.rows;

  DenseOperator B{A.field, n, n, A.p, std::vector<cplx>(static_cast<std::size_t>(n) * n)};
  DenseOperator Binv = B;  // pseudoinverse of |A|, zero on its kernel
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) {
      cplx sb{0.0, 0.0}, si{0.0, 0.0};
      for (int k = 0; k < n; ++k) {
        const cplx w = eig.vectors[static_cast<std::size_t>(r) * n + k] *
                       std::conj(eig.vectors[static_cast<std::size_t>(c) * n + k]);
        sb += w * sv[k];
        if (sv[k] > 0.0) si += w / sv[k];
      }
      B.at(r, c) = sb;
      Binv.at(r, c) = si;
    }
  if (A.field == Field::Real)
    for (std::size_t i = 0; i < B.a.size(); ++i) {
      B.a[i] = cplx{B.a[i].real(), 0.0};
      Binv.a[i] = cplx{Binv.a[i].real(), 0.0};
    }

  PolarParts parts{compose(A, Binv), B};
  const DenseOperator recon = compose(parts.partial_isometry, parts.modulus_part);
  double resid = 0.0;
  for (std::size_t i = 0; i < recon.a.size(); ++i)
    resid = std::max(resid, std::abs(recon.a[i] - A.a[i]));
  if (resid > 1e-9 * std::max(1.0, entry_abs_max(A)))
    fail(ErrorCode::Numerical, "polar reconstruction residual too large: " + std::to_string(resid));
  return parts;
}

}  // namespace epsnum::linop
