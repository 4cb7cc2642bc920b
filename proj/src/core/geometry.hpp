#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "field.hpp"

namespace epsnum::linop {
struct DenseOperator;
}

namespace epsnum::geom {

// l_p norm of a realified vector. For Field::Complex the entries are
// (re, im) pairs and the norm is taken over the moduli.
double p_norm(std::span<const double> v, PNorm p, Field field);
double p_distance(std::span<const double> u, std::span<const double> v, PNorm p, Field field);

// Monotone comparison key for distances: sum |d_i|^p for p < inf, max |d_i|
// for p = inf. Avoids the outer root in the covering inner loops.
double p_dist_key(std::span<const double> u, std::span<const double> v, PNorm p, Field field);
double key_from_radius(double r, PNorm p);
double radius_from_key(double k, PNorm p);

// What is known about the true set the cloud samples. Set by the pipeline
// when it can certify the shape; refinement uses it for exact boundary
// arguments. Unknown is always safe.
enum class SetShape { Unknown, EuclideanBall, SymmetricSegment };

// A finite eta-dense sample of a bounded set S, with its density
// certificate. subset_certified means every point lies in S itself, so
// packing witnesses drawn from the cloud need no eta correction.
struct PointCloud {
  int ambient_dim = 0;  // realified dimension (storage stride)
  PNorm p{2.0};
  Field field = Field::Real;
  double density = 0.0;
  bool subset_certified = false;
  SetShape shape = SetShape::Unknown;
  double shape_radius = 0.0;  // ball/segment half-width witness, max point norm

  std::vector<double> data;  // size() * ambient_dim, row-major

  std::size_t size() const {
    return ambient_dim > 0 ? data.size() / static_cast<std::size_t>(ambient_dim) : 0;
  }
  std::span<const double> point(std::size_t i) const {
    return {data.data() + i * static_cast<std::size_t>(ambient_dim),
            static_cast<std::size_t>(ambient_dim)};
  }
};

struct DiscretizeOptions {
  std::size_t point_budget = 50'000;
  // Strict: throw ErrorCode::Budget when the target density is not
  // attainable within the budget. Permissive: return the densest
  // attainable cloud with its achieved (certified) density.
  bool require_target = false;
};

struct BallCloud {
  PointCloud cloud;
  bool target_met = false;
  double grid_step = 0.0;
  double face_step = 0.0;  // 0 when no boundary layer was used
};

// Deterministic eta-dense discretization of the closed unit ball of
// l_p^dim over the given field. Realified dimension must be <= 4.
// Certificate derivation: docs/discretization.md.
BallCloud discretize_unit_ball(int dim, PNorm p, Field field, double target_eta,
                               const DiscretizeOptions& opts = {});

// Pushes a ball cloud through an operator. The density certificate is
// inflated by a certified upper bound of the operator norm, which the
// caller must supply (see norms::operator_norm).
PointCloud image_cloud(const linop::DenseOperator& op, const PointCloud& ball,
                       double op_norm_upper);

}  // namespace epsnum::geom
