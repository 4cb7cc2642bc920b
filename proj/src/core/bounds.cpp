#include "bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "errors.hpp"

namespace epsnum::bounds {

using linop::DiagonalSpec;

namespace {

double field_exponent(Field f) { return f == Field::Real ? 1.0 : 0.5; }

}  // namespace

DeltaValue delta(const DiagonalSpec& spec, int n, double tol) {
  if (n < 1) fail(ErrorCode::InvalidArgument, "delta needs n >= 1");
  if (!(tol > 0.0)) fail(ErrorCode::InvalidArgument, "delta needs tol > 0");
  const double e = field_exponent(spec.field);
  const double log_n = std::log(static_cast<double>(n));
  const std::size_t m = spec.prefix.size();
  const double c = spec.tail;

  DeltaValue out;
  out.n = n;
  out.tolerance = 0.0;  // the supremum resolves exactly, see below

  // term(k) = exp((-e log n + sum_{i<=k} log sigma_i) / k), enumerated
  // over the prefix. A zero weight kills every later term.
  double log_sum = 0.0;
  double best = -1.0;
  int best_k = 1;
  bool hit_zero = false;
  for (std::size_t k = 1; k <= m; ++k) {
    const double sigma_k = spec.prefix[k - 1];
    if (sigma_k == 0.0) {
      hit_zero = true;
      break;
    }
    log_sum += std::log(sigma_k);
    const double term = std::exp((-e * log_n + log_sum) / static_cast<double>(k));
    if (term > best) {
      best = term;
      best_k = static_cast<int>(k);
    }
  }
  if (hit_zero || c == 0.0) {
    out.value = std::max(best, 0.0);
    out.attained_k = best >= 0.0 ? best_k : 1;
    return out;
  }

  // Beyond the prefix, term(k) = c * exp(B/k) with
  // B = sum log(sigma_i / c) - e log n, monotone in k: for B > 0 the
  // supremum over k > m sits at k = m + 1, otherwise it is the limit c.
  const double b = log_sum - static_cast<double>(m) * std::log(c) - e * log_n;
  double tail_value;
  std::optional<int> tail_k;
  if (b > 0.0) {
    tail_value = c * std::exp(b / static_cast<double>(m + 1));
    tail_k = static_cast<int>(m) + 1;
  } else if (b == 0.0) {
    tail_value = c;
    tail_k = static_cast<int>(m) + 1;  // every tail term equals c
  } else {
    tail_value = c;
    tail_k = std::nullopt;  // supremum approached in the k -> inf limit
  }
  if (best >= tail_value) {
    out.value = best;
    out.attained_k = best_k;
  } else {
    out.value = tail_value;
    out.attained_k = tail_k;
  }
  return out;
}

Interval diagonal_sandwich(const DiagonalSpec& spec, int n) {
  if (spec.p.is_inf())
    fail(ErrorCode::Capability,
         "p = inf is unsupported: l_inf offers no useful norm-one coordinate projections");
  const DeltaValue dv = delta(spec, n, 1e-12);
  return Interval{dv.value, 4.0 * (dv.value + dv.tolerance)};
}

double volume_lower_bound(const DiagonalSpec& spec, int k, int n) {
  if (k < 1 || n < 1) fail(ErrorCode::InvalidArgument, "volume bound needs k, n >= 1");
  double log_sum = 0.0;
  for (int i = 1; i <= k; ++i) {
    const double s = spec.sigma(static_cast<std::size_t>(i));
    if (s == 0.0) return 0.0;
    log_sum += std::log(s);
  }
  const double e = field_exponent(spec.field);
  return std::exp((-e * std::log(static_cast<double>(n)) + log_sum) / static_cast<double>(k));
}

double projection_entropy_lower(int k, int rank_n, Field field) {
  if (k < 1 || rank_n < 1) fail(ErrorCode::InvalidArgument, "projection bound needs k, n >= 1");
  const double e = field_exponent(field);
  return std::pow(static_cast<double>(k), -e / static_cast<double>(rank_n));
}

bool check_subadditivity(const covering::EntropyBracket& bracket_t,
                         const covering::EntropyBracket& bracket_ts,
                         const norms::NormBracket& norm_s) {
  if (bracket_t.n != bracket_ts.n) fail(ErrorCode::InvalidArgument, "brackets must share n");
  return bracket_ts.lower <= bracket_t.upper + norm_s.upper + 1e-9;
}

bool check_submultiplicativity(const covering::EntropyBracket& bracket_r,
                               const covering::EntropyBracket& bracket_srt,
                               const norms::NormBracket& norm_s,
                               const norms::NormBracket& norm_t) {
  if (bracket_r.n != bracket_srt.n) fail(ErrorCode::InvalidArgument, "brackets must share n");
  return bracket_srt.lower <= norm_s.upper * bracket_r.upper * norm_t.upper + 1e-9;
}

}  // namespace epsnum::bounds
