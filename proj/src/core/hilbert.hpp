#pragma once

#include <string>
#include <vector>

#include "covering.hpp"
#include "operators.hpp"

namespace epsnum::hilbert {

// One n: brackets for T, T* and |T| plus the overlap verdict.
struct TripleBracket {
  int n = 1;
  covering::EntropyBracket op;
  covering::EntropyBracket adjoint_op;
  covering::EntropyBracket modulus_op;
  bool consistent = false;  // the three brackets pairwise intersect
};

struct HilbertIdentityReport {
  linop::DenseOperator matrix;
  std::vector<double> sv_op, sv_adjoint, sv_modulus;
  double max_singular_gap = 0.0;  // certificate: should be <= 1e-9
  std::vector<TripleBracket> per_n;
  bool any_violated = false;
};

// Desk-scale check of eps_n(T) = eps_n(T*) = eps_n(|T|) for matrices
// (p = 2, realified dimensions <= 4, n_max <= 16).
HilbertIdentityReport hilbert_identity_check(const linop::DenseOperator& A, int n_max,
                                             double eta, covering::Effort effort,
                                             const covering::BracketOptions& opts = {});

}  // namespace epsnum::hilbert
