#pragma once

// Test-side oracles, independent of the library's covering machinery:
// straightforward brute-force evaluation used to freeze expected values
// and to cross-check certificates.

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "core/field.hpp"
#include "core/geometry.hpp"
#include "core/rng.hpp"

namespace oracles {

using epsnum::Field;
using epsnum::PNorm;
using epsnum::Rng;

// Uniform point of the unit p-ball by rejection from the cube.
inline std::vector<double> random_ball_point(Rng& rng, int real_dim, PNorm p, Field field) {
  std::vector<double> x(static_cast<std::size_t>(real_dim));
  for (;;) {
    for (auto& v : x) v = rng.uniform(-1.0, 1.0);
    if (epsnum::geom::p_norm(x, p, field) <= 1.0) return x;
  }
}

// Max over sampled points of the distance to the nearest cloud point.
// A statistical check of the density certificate (never above it).
template <typename SamplerFn>
double probe_density(const epsnum::geom::PointCloud& cloud, SamplerFn&& sample, int trials) {
  double worst = 0.0;
  for (int t = 0; t < trials; ++t) {
    const std::vector<double> x = sample();
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < cloud.size(); ++i)
      best = std::min(best,
                      epsnum::geom::p_dist_key(x, cloud.point(i), cloud.p, cloud.field));
    worst = std::max(worst, best);
  }
  return epsnum::geom::radius_from_key(worst, cloud.p);
}

// Brute-force max of ||A x||_p over a structured sample of the unit
// sphere (normalized cube points); a lower estimate of the operator norm.
template <typename ApplyFn>
double brute_norm_max(ApplyFn&& apply, int in_dim, PNorm p, Field field, int steps) {
  double best = 0.0;
  std::vector<double> x(static_cast<std::size_t>(in_dim));
  std::vector<int> ix(static_cast<std::size_t>(in_dim), 0);
  bool done = false;
  while (!done) {
    for (int j = 0; j < in_dim; ++j) x[j] = -1.0 + 2.0 * ix[j] / steps;
    const double nrm = epsnum::geom::p_norm(x, p, field);
    if (nrm > 1e-9) {
      std::vector<double> u = x;
      for (auto& v : u) v /= nrm;
      best = std::max(best, apply(u));
    }
    int axis = 0;
    while (axis < in_dim && ++ix[axis] == steps + 1) ix[axis++] = 0;
    done = axis == in_dim;
  }
  return best;
}

// Exact decision "can <= n balls of radius r, centered on the candidate
// list, cover every point?" by plain recursion (first uncovered point,
// candidates in index order). Small instances only.
inline bool brute_cover_decision(const std::vector<std::vector<double>>& points,
                                 const std::vector<std::vector<double>>& candidates, PNorm p,
                                 Field field, int n, double r) {
  const double key_r = epsnum::geom::key_from_radius(r, p);
  std::vector<char> covered(points.size(), 0);
  struct Rec {
    const std::vector<std::vector<double>>& pts;
    const std::vector<std::vector<double>>& cands;
    PNorm p;
    Field field;
    double key_r;
    bool run(std::vector<char>& cov, int left) {
      std::size_t first = cov.size();
      for (std::size_t i = 0; i < cov.size(); ++i)
        if (!cov[i]) {
          first = i;
          break;
        }
      if (first == cov.size()) return true;
      if (left == 0) return false;
      for (const auto& c : cands) {
        if (epsnum::geom::p_dist_key(pts[first], c, p, field) > key_r) continue;
        std::vector<char> next = cov;
        for (std::size_t i = 0; i < cov.size(); ++i)
          if (!next[i] && epsnum::geom::p_dist_key(pts[i], c, p, field) <= key_r) next[i] = 1;
        if (run(next, left - 1)) return true;
      }
      return false;
    }
  } rec{points, candidates, p, field, key_r};
  return rec.run(covered, n);
}

// Known covering values used as frozen expectations:
//   segment [-a, a] with n intervals: a / n.
//   unit disk, n = 2: 1 (each sub-unit ball covers a boundary arc of
//     angle <= 2 arcsin(r); 4 arcsin(r) >= 2 pi forces r >= 1).
//   unit disk, n = 3: sqrt(3)/2 (6 arcsin(r) >= 2 pi forces
//     r >= sin(pi/3); attained by the classical three-ball cover).
inline double segment_cover_value(double half_width, int n) { return half_width / n; }
inline constexpr double kDiskTwoBallValue = 1.0;
inline constexpr double kDiskThreeBallValue = 0.8660254037844386;

}  // namespace oracles
