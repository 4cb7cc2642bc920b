#include "geometry.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>

#include "errors.hpp"
#include "operators.hpp"

namespace epsnum::geom {

namespace {

double modulus_at(std::span<const double> v, std::size_t i, Field field) {
  if (field == Field::Real) return std::abs(v[i]);
  return std::hypot(v[2 * i], v[2 * i + 1]);
}

std::size_t scalar_count(std::span<const double> v, Field field) {
  if (field == Field::Complex) {
    if (v.size() % 2 != 0) fail(ErrorCode::InvalidArgument, "complex vector needs even storage");
    return v.size() / 2;
  }
  return v.size();
}

}  // namespace

double p_norm(std::span<const double> v, PNorm p, Field field) {
  const std::size_t n = scalar_count(v, field);
  if (p.is_two()) {
    // Complex moduli squared add up to the realified squares.
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
  }
  if (p.is_inf()) {
    double m = 0.0;
    for (std::size_t i = 0; i < n; ++i) m = std::max(m, modulus_at(v, i, field));
    return m;
  }
  if (p.is_one()) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += modulus_at(v, i, field);
    return s;
  }
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += std::pow(modulus_at(v, i, field), p.value());
  return std::pow(s, 1.0 / p.value());
}

double p_distance(std::span<const double> u, std::span<const double> v, PNorm p, Field field) {
  if (u.size() != v.size()) fail(ErrorCode::InvalidArgument, "dimension mismatch");
  std::array<double, 8> buf{};
  std::vector<double> heap;
  double* d;
  if (u.size() <= buf.size()) {
    d = buf.data();
  } else {
    heap.resize(u.size());
    d = heap.data();
  }
  for (std::size_t i = 0; i < u.size(); ++i) d[i] = u[i] - v[i];
  return p_norm({d, u.size()}, p, field);
}

double p_dist_key(std::span<const double> u, std::span<const double> v, PNorm p, Field field) {
  if (u.size() != v.size()) fail(ErrorCode::InvalidArgument, "dimension mismatch");
  const std::size_t len = u.size();
  if (p.is_two()) {
    double s = 0.0;
    for (std::size_t i = 0; i < len; ++i) {
      const double d = u[i] - v[i];
      s += d * d;
    }
    return s;
  }
  if (field == Field::Real) {
    if (p.is_inf()) {
      double m = 0.0;
      for (std::size_t i = 0; i < len; ++i) m = std::max(m, std::abs(u[i] - v[i]));
      return m;
    }
    if (p.is_one()) {
      double s = 0.0;
      for (std::size_t i = 0; i < len; ++i) s += std::abs(u[i] - v[i]);
      return s;
    }
    double s = 0.0;
    for (std::size_t i = 0; i < len; ++i) s += std::pow(std::abs(u[i] - v[i]), p.value());
    return s;
  }
  const std::size_t n = len / 2;
  if (p.is_inf()) {
    double m = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      m = std::max(m, std::hypot(u[2 * i] - v[2 * i], u[2 * i + 1] - v[2 * i + 1]));
    return m;
  }
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double mod = std::hypot(u[2 * i] - v[2 * i], u[2 * i + 1] - v[2 * i + 1]);
    s += p.is_one() ? mod : std::pow(mod, p.value());
  }
  return s;
}

double key_from_radius(double r, PNorm p) {
  if (p.is_inf() || p.is_one()) return r;
  if (p.is_two()) return r * r;
  return std::pow(r, p.value());
}

double radius_from_key(double k, PNorm p) {
  if (p.is_inf() || p.is_one()) return k;
  if (p.is_two()) return std::sqrt(k);
  return std::pow(k, 1.0 / p.value());
}

namespace {

// Fraction of the bounding cube [-1,1]^D occupied by the unit p-ball.
double ball_volume_fraction(PNorm p, int dim, Field field) {
  if (field == Field::Real) {
    if (p.is_inf()) return 1.0;
    const double ip = 1.0 / p.value();
    return std::pow(std::tgamma(1.0 + ip), dim) / std::tgamma(1.0 + dim * ip);
  }
  const int d = dim;  // complex dimension
  const double tp = p.is_inf() ? 0.0 : 2.0 / p.value();
  return std::pow((3.14159265358979323846 / 4.0) * std::tgamma(1.0 + tp), d) /
         std::tgamma(1.0 + d * tp);
}

// Worst-case p-distance moved by rounding every coordinate by h/2
// (free_coords of them; used for both the interior grid and the faces).
double rounding_radius(double h, int free_coords, PNorm p, Field field) {
  if (free_coords <= 0) return 0.0;
  std::vector<double> v(static_cast<std::size_t>(free_coords), h / 2.0);
  // Realified padding so complex norms see whole pairs.
  if (field == Field::Complex && v.size() % 2 != 0) v.push_back(0.0);
  return p_norm(v, p, field);
}

struct GridPlan {
  int m = 0;       // half-count per axis, interior step h = 1/m
  int face_m = 0;  // face grid half-count per axis (0: no boundary layer)
  double eta = 0.0;
  double est_count = 0.0;
};

// eta certificate for a plan; docs/discretization.md carries the derivation.
double plan_eta(const GridPlan& plan, int D, PNorm p, Field field, bool cube_ball) {
  const double h = 1.0 / plan.m;
  const double r_grid = rounding_radius(h, D, p, field);
  if (cube_ball) return r_grid;  // real p = inf: rounding never leaves the cube
  if (plan.face_m == 0) return 2.0 * r_grid;
  const double g = 1.0 / plan.face_m;
  const double r_face = rounding_radius(g, D - 1, p, field);
  return r_grid + 2.0 * r_face;
}

double plan_count_estimate(const GridPlan& plan, int D, double frac) {
  const double per_axis = 2.0 * plan.m + 1.0;
  double c = std::pow(per_axis, D) * std::min(1.0, frac * 1.10 + 0.02);
  if (plan.face_m > 0 && D >= 2)
    c += 2.0 * D * std::pow(2.0 * plan.face_m + 1.0, D - 1);
  else
    c += std::pow(per_axis, D - 1) * 2.0 * D;  // shell-projection allowance
  return c;
}

void sort_dedupe(std::vector<double>& data, int D) {
  const std::size_t n = data.size() / D;
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  auto less = [&](std::size_t a, std::size_t b) {
    for (int j = 0; j < D; ++j) {
      const double x = data[a * D + j], y = data[b * D + j];
      if (x != y) return x < y;
    }
    return false;
  };
  auto eq = [&](std::size_t a, std::size_t b) {
    for (int j = 0; j < D; ++j)
      if (data[a * D + j] != data[b * D + j]) return false;
    return true;
  };
  std::sort(idx.begin(), idx.end(), less);
  idx.erase(std::unique(idx.begin(), idx.end(), eq), idx.end());
  std::vector<double> out;
  out.reserve(idx.size() * D);
  for (std::size_t i : idx)
    for (int j = 0; j < D; ++j) out.push_back(data[i * D + j]);
  data.swap(out);
}

// Enumerates the plan; returns false when the budget aborts it.
bool enumerate_plan(const GridPlan& plan, int D, PNorm p, Field field, bool cube_ball,
                    std::size_t budget, std::vector<double>& out) {
  out.clear();
  const int m = plan.m;
  const double h = 1.0 / m;
  const double r_grid = rounding_radius(h, D, p, field);
  std::size_t count = 0;
  std::array<int, 4> ix{};
  std::array<double, 4> pt{};
  const int per_axis = 2 * m + 1;
  const bool shell_projection = !cube_ball && plan.face_m == 0;
  const double shell_hi = 1.0 + r_grid * (1.0 + 1e-12);

  // Interior grid (plus projected shell points when no boundary layer).
  bool done = false;
  while (!done) {
    for (int j = 0; j < D; ++j) pt[j] = static_cast<double>(ix[j] - m) / m;
    const double nrm = cube_ball ? 1.0 : p_norm({pt.data(), (std::size_t)D}, p, field);
    if (cube_ball || nrm <= 1.0) {
      if (++count > budget) return false;
      for (int j = 0; j < D; ++j) out.push_back(pt[j]);
    } else if (shell_projection && nrm <= shell_hi) {
      if (++count > budget) return false;
      for (int j = 0; j < D; ++j) out.push_back(pt[j] / nrm);
    }
    int axis = 0;
    while (axis < D && ++ix[axis] == per_axis) ix[axis++] = 0;
    done = axis == D;
  }

  // Boundary layer: face grids of the cube projected radially onto the
  // p-sphere (every face point has p-norm >= its sup-norm = 1).
  if (plan.face_m > 0 && D >= 2) {
    const int fm = plan.face_m;
    const int f_axis = 2 * fm + 1;
    for (int a = 0; a < D; ++a) {
      for (int sgn = -1; sgn <= 1; sgn += 2) {
        std::array<int, 3> fx{};
        bool fdone = false;
        while (!fdone) {
          int k = 0;
          for (int j = 0; j < D; ++j) {
            if (j == a) {
              pt[j] = static_cast<double>(sgn);
            } else {
              pt[j] = static_cast<double>(fx[k] - fm) / fm;
              ++k;
            }
          }
          const double nrm = p_norm({pt.data(), (std::size_t)D}, p, field);
          if (++count > budget) return false;
          for (int j = 0; j < D; ++j) out.push_back(p.is_inf() && field == Field::Real
                                                        ? pt[j]
                                                        : pt[j] / nrm);
          int axis = 0;
          while (axis < D - 1 && ++fx[axis] == f_axis) fx[axis++] = 0;
          fdone = axis == D - 1;
        }
      }
    }
  }
  return true;
}

}  // namespace

BallCloud discretize_unit_ball(int dim, PNorm p, Field field, double target_eta,
                               const DiscretizeOptions& opts) {
  if (dim < 1) fail(ErrorCode::InvalidArgument, "dimension must be positive");
  if (!(target_eta > 0.0)) fail(ErrorCode::InvalidArgument, "target_eta must be positive");
  const int D = realified(field, dim);
  if (D > 4)
    fail(ErrorCode::Capability, "unsupported dimension: realified dimension " +
                                    std::to_string(D) + " exceeds 4");
  const std::size_t budget = std::max<std::size_t>(opts.point_budget, 8);
  const bool cube_ball = p.is_inf() && field == Field::Real;

  // 1-D: plain grid on [-1, 1], eta = h/2 (rounding stays in the interval).
  if (D == 1) {
    long long m = static_cast<long long>(std::ceil(1.0 / (2.0 * target_eta)));
    m = std::max(1LL, std::min(m, static_cast<long long>((budget - 1) / 2)));
    GridPlan plan{static_cast<int>(m), 0, 0.0, 0.0};
    std::vector<double> data;
    enumerate_plan(plan, 1, p, field, true, budget, data);
    BallCloud out;
    out.grid_step = 1.0 / static_cast<double>(m);
    out.cloud.ambient_dim = 1;
    out.cloud.p = p;
    out.cloud.field = field;
    out.cloud.density = out.grid_step / 2.0;
    out.cloud.subset_certified = true;
    out.cloud.shape = SetShape::SymmetricSegment;
    out.cloud.shape_radius = 1.0;
    out.cloud.data = std::move(data);
    sort_dedupe(out.cloud.data, 1);
    out.target_met = out.cloud.density <= target_eta;
    if (!out.target_met && opts.require_target)
      fail(ErrorCode::Budget, "eta certificate unattainable under point budget; achieved eta = " +
                                  std::to_string(out.cloud.density));
    return out;
  }

  const double frac = ball_volume_fraction(p, dim, field);
  std::vector<int> face_ratios;
  if (cube_ball) {
    face_ratios = {0};
  } else if (D == 2) {
    face_ratios = {16, 8, 4, 2, 1, 0};
  } else if (D == 3) {
    face_ratios = {4, 2, 1, 0};
  } else {
    face_ratios = {2, 1, 0};
  }

  const int m_cap = std::max(
      1, static_cast<int>((std::pow(static_cast<double>(budget) / std::max(frac * 0.5, 1e-3),
                                    1.0 / D) -
                           1.0) /
                          2.0) +
             2);

  GridPlan best{};  // plan meeting the target with the fewest estimated points
  GridPlan sharpest{};
  for (int m = 1; m <= m_cap; ++m) {
    for (int f : face_ratios) {
      GridPlan plan{m, f == 0 ? 0 : m * f, 0.0, 0.0};
      plan.eta = plan_eta(plan, D, p, field, cube_ball);
      plan.est_count = plan_count_estimate(plan, D, frac);
      if (plan.est_count > static_cast<double>(budget)) continue;
      if (sharpest.m == 0 || plan.eta < sharpest.eta) sharpest = plan;
      if (plan.eta <= target_eta && (best.m == 0 || plan.est_count < best.est_count)) best = plan;
    }
  }
  bool met = best.m != 0;
  GridPlan chosen = met ? best : sharpest;
  if (chosen.m == 0) chosen = GridPlan{1, 0, plan_eta({1, 0}, D, p, field, cube_ball), 0.0};

  std::vector<double> data;
  while (!enumerate_plan(chosen, D, p, field, cube_ball, budget, data)) {
    // Estimate was low; back off deterministically.
    met = false;
    if (chosen.face_m > 0) {
      chosen.face_m = 0;
    } else if (chosen.m > 1) {
      chosen.m -= 1;
    } else {
      fail(ErrorCode::Budget, "point budget too small for any grid");
    }
    chosen.eta = plan_eta(chosen, D, p, field, cube_ball);
  }
  if (met) met = chosen.eta <= target_eta;

  BallCloud out;
  out.grid_step = 1.0 / chosen.m;
  out.face_step = chosen.face_m > 0 ? 1.0 / chosen.face_m : 0.0;
  out.cloud.ambient_dim = D;
  out.cloud.p = p;
  out.cloud.field = field;
  out.cloud.density = chosen.eta;
  out.cloud.subset_certified = true;
  out.cloud.shape = p.is_two() ? SetShape::EuclideanBall : SetShape::Unknown;
  out.cloud.data = std::move(data);
  sort_dedupe(out.cloud.data, D);
  double max_norm = 0.0;
  for (std::size_t i = 0; i < out.cloud.size(); ++i)
    max_norm = std::max(max_norm, p_norm(out.cloud.point(i), p, field));
  out.cloud.shape_radius = max_norm;
  out.target_met = met;
  if (!met && opts.require_target)
    fail(ErrorCode::Budget, "eta certificate unattainable under point budget; achieved eta = " +
                                std::to_string(out.cloud.density));
  return out;
}

PointCloud image_cloud(const linop::DenseOperator& op, const PointCloud& ball,
                       double op_norm_upper) {
  if (op.real_cols() != ball.ambient_dim || op.field != ball.field)
    fail(ErrorCode::InvalidArgument, "operator domain does not match the cloud");
  if (!(op_norm_upper >= 0.0))
    fail(ErrorCode::InvalidArgument, "image_cloud needs a certified operator norm bound");
  PointCloud out;
  out.ambient_dim = op.real_rows();
  out.p = ball.p;
  out.field = ball.field;
  out.density = ball.density * op_norm_upper;
  out.subset_certified = ball.subset_certified;
  out.data.resize(ball.size() * static_cast<std::size_t>(out.ambient_dim));
  std::vector<double> y(static_cast<std::size_t>(out.ambient_dim));
  for (std::size_t i = 0; i < ball.size(); ++i) {
    op.apply_realified(ball.point(i), y);
    std::copy(y.begin(), y.end(), out.data.begin() + i * out.ambient_dim);
  }
  sort_dedupe(out.data, out.ambient_dim);

  if (out.ambient_dim == 1) {
    out.shape = SetShape::SymmetricSegment;
  } else if (ball.shape == SetShape::EuclideanBall && op.p.is_two() && op.rows == op.cols) {
    // Scalar multiple of an isometry keeps the image a euclidean ball.
    // Exact entrywise equality only: the chain decider relies on it.
    const auto g = adjoint(op);
    const auto ata = compose(g, op);
    const linop::cplx c2 = ata.at(0, 0);
    bool scalar = c2.imag() == 0.0 && c2.real() >= 0.0;
    for (int r = 0; r < ata.rows && scalar; ++r)
      for (int c = 0; c < ata.cols && scalar; ++c)
        if (ata.at(r, c) != (r == c ? c2 : linop::cplx{0.0, 0.0})) scalar = false;
    out.shape = scalar ? SetShape::EuclideanBall : SetShape::Unknown;
  }
  if (out.shape != SetShape::Unknown) {
    double max_norm = 0.0;
    for (std::size_t i = 0; i < out.size(); ++i)
      max_norm = std::max(max_norm, p_norm(out.point(i), out.p, out.field));
    out.shape_radius = max_norm;
  }
  return out;
}

}  // namespace epsnum::geom
