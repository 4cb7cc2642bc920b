#pragma once

#include <string>
#include <vector>

#include "operators.hpp"

namespace epsnum::norms {

// Certified bracket for an operator p->p norm. Exact (lower == upper)
// for p in {1, 2, inf} and for diagonal matrices at every p.
struct NormBracket {
  double lower = 0.0;
  double upper = 0.0;
  std::vector<std::string> methods;
};

NormBracket operator_norm(const linop::DenseOperator& A);

}  // namespace epsnum::norms
