#pragma once

#include <vector>

#include "bounds.hpp"
#include "covering.hpp"
#include "operators.hpp"

namespace epsnum::approx {

struct ConvergenceRow {
  int size = 0;  // truncation size n
  covering::EntropyBracket bracket;
  double wall_ms = 0.0;
};

// Brackets of eps_k(T_n) for nested coordinate truncations T_n, against
// the [delta(k), 4 delta(k)] ceiling of the infinite operator.
struct ConvergenceRecord {
  int k = 1;
  linop::DiagonalSpec spec;
  std::vector<ConvergenceRow> rows;  // sorted by size
  bounds::Interval ceiling;
  bool lower_monotone = false;  // lower endpoints nondecreasing within 2 eta
  int stabilized_at = -1;       // first size from which rows repeat exactly, -1 if never
};

ConvergenceRecord run_truncation_convergence(const linop::DiagonalSpec& spec, int k,
                                             const std::vector<int>& sizes, double eta,
                                             covering::Effort effort,
                                             const covering::BracketOptions& opts = {});

// Bracket-level shadow of eps_k(T_n) <= eps_k(T_m) for n <= m and of the
// 4 delta ceiling. True whenever the brackets are sound.
bool check_monotone(const ConvergenceRecord& record);

// The coordinate-functional demo: row operators R_n x = x_n on l_2^n
// converge to 0 pointwise while eps_1(R_n) = ||R_n|| = 1 for every n,
// showing why the ||Q_n|| ||P_n|| <= 1 factorization hypothesis matters.
struct SotGapDemo {
  std::vector<int> sizes;
  std::vector<double> eps1;  // eps_1(R_n), all 1
  double limit_eps1 = 0.0;   // eps_1 of the pointwise limit operator
};
SotGapDemo sot_gap_demo(int n_max);

}  // namespace epsnum::approx
