#include "norms.hpp"

#include <algorithm>
#include <cmath>

#include "errors.hpp"
#include "rng.hpp"

namespace epsnum::norms {

using linop::cplx;
using linop::DenseOperator;

namespace {

double col_sum_norm(const DenseOperator& A) {
  double best = 0.0;
  for (int c = 0; c < A.cols; ++c) {
    double s = 0.0;
    for (int r = 0; r < A.rows; ++r) s += std::abs(A.at(r, c));
    best = std::max(best, s);
  }
  return best;
}

double row_sum_norm(const DenseOperator& A) {
  double best = 0.0;
  for (int r = 0; r < A.rows; ++r) {
    double s = 0.0;
    for (int c = 0; c < A.cols; ++c) s += std::abs(A.at(r, c));
    best = std::max(best, s);
  }
  return best;
}

double vec_p_norm(std::span<const cplx> v, double p) {
  if (std::isinf(p)) {
    double m = 0.0;
    for (const cplx& z : v) m = std::max(m, std::abs(z));
    return m;
  }
  double s = 0.0;
  for (const cplx& z : v) s += std::pow(std::abs(z), p);
  return std::pow(s, 1.0 / p);
}

// phase(z) |z|^(e); the duality map powering the ascent step.
void dual_map(std::span<const cplx> in, double e, std::span<cplx> out) {
  for (std::size_t i = 0; i < in.size(); ++i) {
    const double m = std::abs(in[i]);
    out[i] = m == 0.0 ? cplx{0.0, 0.0} : in[i] / m * std::pow(m, e);
  }
}

void matvec(const DenseOperator& A, std::span<const cplx> x, std::span<cplx> y) {
  for (int r = 0; r < A.rows; ++r) {
    cplx s{0.0, 0.0};
    for (int c = 0; c < A.cols; ++c) s += A.at(r, c) * x[c];
    y[r] = s;
  }
}

void matvec_adj(const DenseOperator& A, std::span<const cplx> y, std::span<cplx> z) {
  for (int c = 0; c < A.cols; ++c) {
    cplx s{0.0, 0.0};
    for (int r = 0; r < A.rows; ++r) s += std::conj(A.at(r, c)) * y[r];
    z[c] = s;
  }
}

// Boyd-style dual power method; every iterate yields ||Ax||_p / ||x||_p,
// a valid lower bound. 8 deterministic starts, best value kept.
double power_lower_bound(const DenseOperator& A, double p) {
  const int n = A.cols;
  const double q = p / (p - 1.0);
  std::vector<std::vector<cplx>> starts;
  for (int i = 0; i < std::min(n, 4); ++i) {
    std::vector<cplx> e(static_cast<std::size_t>(n), cplx{0.0, 0.0});
    e[i] = 1.0;
    starts.push_back(std::move(e));
  }
  starts.push_back(std::vector<cplx>(static_cast<std::size_t>(n), cplx{1.0, 0.0}));
  {
    std::vector<cplx> alt(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) alt[i] = (i % 2 == 0) ? 1.0 : -1.0;
    starts.push_back(std::move(alt));
  }
  Rng rng(0xE5CAFE);
  while (starts.size() < 8) {
    std::vector<cplx> v(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) v[i] = cplx{rng.uniform(-1.0, 1.0), 0.0};
    starts.push_back(std::move(v));
  }

  double best = 0.0;
  std::vector<cplx> x(static_cast<std::size_t>(n)), y(static_cast<std::size_t>(A.rows)),
      z(static_cast<std::size_t>(n));
  for (auto& s : starts) {
    x = s;
    double xn = vec_p_norm(x, p);
    if (xn == 0.0) continue;
    for (cplx& v : x) v /= xn;
    double prev = 0.0;
    for (int it = 0; it < 500; ++it) {
      matvec(A, x, y);
      const double val = vec_p_norm(y, p);
      best = std::max(best, val);
      if (val == 0.0 || std::abs(val - prev) <= 1e-13 * std::max(1.0, val)) break;
      prev = val;
      dual_map(y, p - 1.0, y);
      matvec_adj(A, y, z);
      dual_map(z, q - 1.0, z);
      const double zn = vec_p_norm(z, p);
      if (zn == 0.0) break;
      for (int i = 0; i < n; ++i) x[i] = z[i] / zn;
    }
  }
  return best;
}

}  // namespace

NormBracket operator_norm(const DenseOperator& A) {
  NormBracket out;
  if (A.is_zero()) {
    out.methods = {"zero"};
    return out;
  }
  if (auto diag = A.diagonal_moduli()) {
    const double s = *std::max_element(diag->begin(), diag->end());
    out.lower = out.upper = s;
    out.methods = {"diagonal-exact"};
    return out;
  }
  if (A.p.is_one()) {
    out.lower = out.upper = col_sum_norm(A);
    out.methods = {"column-sums"};
    return out;
  }
  if (A.p.is_inf()) {
    out.lower = out.upper = row_sum_norm(A);
    out.methods = {"row-sums"};
    return out;
  }
  if (A.p.is_two()) {
    const auto sv = linop::singular_values(A);
    out.lower = out.upper = sv.empty() ? 0.0 : sv.front();
    out.methods = {"jacobi-sigma-max"};
    return out;
  }
  const double p = A.p.value();
  const double n1 = col_sum_norm(A);
  const double ninf = row_sum_norm(A);
  // Interpolation between the exact endpoint norms.
  out.upper = std::pow(n1, 1.0 / p) * std::pow(ninf, 1.0 - 1.0 / p);
  out.lower = std::min(power_lower_bound(A, p), out.upper);
  out.methods = {"power-method", "interpolation"};
  return out;
}

}  // namespace epsnum::norms
