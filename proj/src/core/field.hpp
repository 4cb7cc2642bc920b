#pragma once

#include <cmath>
#include <limits>
#include <string>

#include "errors.hpp"

namespace epsnum {

// Scalar field of the space. Complex spaces are realified: a complex
// d-vector is stored as 2d doubles (re, im interleaved) and all geometry
// treats it as real dimension 2d, with the l_p norm taken over the moduli.
enum class Field { Real, Complex };

inline int realified(Field f, int dim) { return f == Field::Complex ? 2 * dim : dim; }

inline std::string to_string(Field f) { return f == Field::Real ? "real" : "complex"; }

// Exponent of an l_p space; p in [1, inf].
class PNorm {
 public:
  explicit PNorm(double p) : p_(p) {
    if (std::isnan(p) || p < 1.0) fail(ErrorCode::InvalidArgument, "p must satisfy p >= 1");
  }
  static PNorm infinity() { return PNorm(std::numeric_limits<double>::infinity()); }

  double value() const { return p_; }
  bool is_inf() const { return std::isinf(p_); }
  bool is_one() const { return p_ == 1.0; }
  bool is_two() const { return p_ == 2.0; }

  // Hoelder conjugate exponent.
  double dual() const {
    if (is_one()) return std::numeric_limits<double>::infinity();
    if (is_inf()) return 1.0;
    return p_ / (p_ - 1.0);
  }

  bool operator==(const PNorm& o) const { return p_ == o.p_; }

 private:
  double p_;
};

inline std::string to_string(const PNorm& p) {
  if (p.is_inf()) return "inf";
  double v = p.value();
  if (v == static_cast<long long>(v)) return std::to_string(static_cast<long long>(v));
  return std::to_string(v);
}

}  // namespace epsnum
