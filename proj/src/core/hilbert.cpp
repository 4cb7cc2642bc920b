#include "hilbert.hpp"

#include <algorithm>
#include <cmath>

#include "errors.hpp"

namespace epsnum::hilbert {

using covering::EntropyBracket;

namespace {

// Exact p = 2 norm brackets are singletons from independent Jacobi runs,
// so n = 1 intervals can sit an ulp apart; allow the same 1e-9 the
// singular-value certificate uses.
bool intersects(const EntropyBracket& a, const EntropyBracket& b) {
  const double pad = 1e-9 * (1.0 + std::max(a.upper, b.upper));
  return a.lower <= b.upper + pad && b.lower <= a.upper + pad;
}

}  // namespace

HilbertIdentityReport hilbert_identity_check(const linop::DenseOperator& A, int n_max, double eta,
                                             covering::Effort effort,
                                             const covering::BracketOptions& opts) {
  if (!A.p.is_two())
    fail(ErrorCode::Capability, "the identity check lives in the Hilbert setting (p = 2)");
  if (A.real_rows() > 4 || A.real_cols() > 4)
    fail(ErrorCode::Capability, "identity check supports realified dimensions <= 4");
  if (n_max < 1 || n_max > 16)
    fail(ErrorCode::InvalidArgument, "identity check supports 1 <= n_max <= 16");

  HilbertIdentityReport rep;
  rep.matrix = A;
  const auto adj = linop::adjoint(A);
  const auto mod = linop::modulus(A);

  rep.sv_op = linop::singular_values(A);
  rep.sv_adjoint = linop::singular_values(adj);
  rep.sv_modulus = linop::singular_values(mod);
  // A, A* and |A| share singular values; their images are congruent
  // ellipsoids, which is the finite-dimensional mechanism of the identity.
  const std::size_t sv_n = std::min({rep.sv_op.size(), rep.sv_adjoint.size(),
                                     rep.sv_modulus.size()});
  double gap = 0.0;
  for (std::size_t i = 0; i < sv_n; ++i) {
    gap = std::max(gap, std::abs(rep.sv_op[i] - rep.sv_adjoint[i]));
    gap = std::max(gap, std::abs(rep.sv_op[i] - rep.sv_modulus[i]));
  }
  for (std::size_t i = sv_n; i < rep.sv_op.size(); ++i) gap = std::max(gap, rep.sv_op[i]);
  for (std::size_t i = sv_n; i < rep.sv_adjoint.size(); ++i)
    gap = std::max(gap, rep.sv_adjoint[i]);
  for (std::size_t i = sv_n; i < rep.sv_modulus.size(); ++i)
    gap = std::max(gap, rep.sv_modulus[i]);
  rep.max_singular_gap = gap;

  for (int n = 1; n <= n_max; ++n) {
    TripleBracket t;
    t.n = n;
    t.op = covering::entropy_bracket(A, n, eta, effort, opts);
    t.adjoint_op = covering::entropy_bracket(adj, n, eta, effort, opts);
    t.modulus_op = covering::entropy_bracket(mod, n, eta, effort, opts);
    t.consistent = intersects(t.op, t.adjoint_op) && intersects(t.op, t.modulus_op) &&
                   intersects(t.adjoint_op, t.modulus_op);
    if (!t.consistent) rep.any_violated = true;
    rep.per_n.push_back(std::move(t));
  }
  return rep;
}

}  // namespace epsnum::hilbert
