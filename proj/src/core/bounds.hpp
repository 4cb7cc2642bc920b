#pragma once

#include <optional>

#include "covering.hpp"
#include "norms.hpp"
#include "operators.hpp"

namespace epsnum::bounds {

// delta(n) = sup_k n^(-e/k) (sigma_1...sigma_k)^(1/k), e = 1 real, 1/2 complex.
struct DeltaValue {
  int n = 1;
  double value = 0.0;
  std::optional<int> attained_k;  // nullopt: supremum attained in the k -> inf limit
  double tolerance = 0.0;         // certified enumeration error (0 when exact)
};

DeltaValue delta(const linop::DiagonalSpec& spec, int n, double tol = 1e-12);

struct Interval {
  double lower = 0.0;
  double upper = 0.0;
};

// [delta(n), 4 delta(n)], guaranteed to contain eps_n of the infinite
// diagonal operator; valid for 1 <= p < inf, rejected for p = inf.
Interval diagonal_sandwich(const linop::DiagonalSpec& spec, int n);

// n^(-1/k) (sigma_1...sigma_k)^(1/k) (real), n^(-1/(2k)) (...) (complex):
// volume-comparison lower bound for eps_n of the k-dimensional truncation.
double volume_lower_bound(const linop::DiagonalSpec& spec, int k, int n);

// Lower bound for eps_k of a norm-one rank-n coordinate projection:
// k^(-1/rank_n) real reading, k^(-1/(2 rank_n)) complex reading.
double projection_entropy_lower(int k, int rank_n, Field field);

// Bracket-level checks of eps_k(T+S) <= eps_k(T) + ||S|| and
// eps_k(SRT) <= ||S|| eps_k(R) ||T||. Brackets can falsify, never prove.
bool check_subadditivity(const covering::EntropyBracket& bracket_t,
                         const covering::EntropyBracket& bracket_ts,
                         const norms::NormBracket& norm_s);
bool check_submultiplicativity(const covering::EntropyBracket& bracket_r,
                               const covering::EntropyBracket& bracket_srt,
                               const norms::NormBracket& norm_s,
                               const norms::NormBracket& norm_t);

}  // namespace epsnum::bounds
