#include <cmath>

#include "core/covering.hpp"
#include "core/errors.hpp"
#include "core/norms.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace epsnum;
using covering::Effort;
using covering::entropy_bracket;

namespace {

geom::PointCloud disk_cloud(double eta) {
  return geom::discretize_unit_ball(2, PNorm(2), Field::Real, eta).cloud;
}

linop::DenseOperator diag_op(std::vector<double> sigma, double p = 2.0) {
  const int n = static_cast<int>(sigma.size());
  std::vector<double> entries(static_cast<std::size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i) entries[static_cast<std::size_t>(i) * n + i] = sigma[i];
  return linop::make_dense_real(n, n, PNorm(p), entries);
}

}  // namespace

TEST_CASE("packing witnesses on the segment reach the endpoints") {
  const auto seg = geom::discretize_unit_ball(1, PNorm(2), Field::Real, 0.01).cloud;
  covering::PackingWitness w;
  const double lower = covering::packing_lower_bound(seg, 1, &w);
  CHECK(lower >= 1.0 - 1e-12);  // witnesses {-1, +1}, separation 2
  CHECK(w.count == 2);
  CHECK(w.min_separation >= 2.0 - 1e-12);
}

TEST_CASE("packing the disk") {
  const auto disk = disk_cloud(0.03);
  // The farthest-point traversal locks the diameter, so three witnesses
  // realize separation sqrt(2) (the equilateral triangle is out of reach
  // of a single replacement sweep).
  const double lower = covering::packing_lower_bound(disk, 2);
  CHECK(lower >= std::sqrt(2.0) / 2.0 - 1e-9);
  CHECK(lower <= 1.0 + 1e-9);  // soundness: eps_2(disk) = 1
}

TEST_CASE("packing degenerate cases") {
  geom::PointCloud single;
  single.ambient_dim = 1;
  single.p = PNorm(2);
  single.subset_certified = true;
  single.data = {0.25};
  CHECK(covering::packing_lower_bound(single, 3) == 0.0);

  geom::PointCloud uncertified = single;
  uncertified.subset_certified = false;
  CHECK_THROWS_AS(covering::packing_lower_bound(uncertified, 1), Error);
}

TEST_CASE("greedy covering basics") {
  geom::PointCloud single;
  single.ambient_dim = 1;
  single.p = PNorm(2);
  single.subset_certified = true;
  single.data = {0.25};
  CHECK(covering::greedy_covering(single, 1).radius == 0.0);

  geom::PointCloud empty;
  empty.ambient_dim = 1;
  CHECK_THROWS_AS(covering::greedy_covering(empty, 1), Error);

  // Farthest-point traversal on the segment picks the endpoints, so two
  // centers leave the midpoint at distance 1 (the refinement recovers 1/2).
  const auto seg = geom::discretize_unit_ball(1, PNorm(2), Field::Real, 0.01).cloud;
  const auto net = covering::greedy_covering(seg, 2);
  CHECK(net.radius <= 1.0 + 1e-9);
  CHECK(net.radius >= 0.5);
}

TEST_CASE("refined segment bracket hits one half") {
  const auto spec = linop::make_diagonal_spec({1.0}, 0.0, PNorm(2), Field::Real);
  const auto op = linop::truncate(spec, 1);
  const auto b = entropy_bracket(op, 2, 0.02, Effort::Exact);
  CHECK(b.lower <= 0.5);
  CHECK(0.5 <= b.upper);
  CHECK(b.upper - b.lower <= 2.0 * 0.02 + 1e-9);
}

TEST_CASE("rank-one diagonal reduces to a segment") {
  // diag(0.8, 0, 0): the image is the segment [-0.8, 0.8]; five balls
  // cover at 0.8/5 = 0.16.
  const auto op = diag_op({0.8, 0.0, 0.0});
  const auto b = entropy_bracket(op, 5, 0.01, Effort::Exact);
  const double expect = oracles::segment_cover_value(0.8, 5);
  CHECK(b.lower <= expect + 1e-12);
  CHECK(expect <= b.upper + 1e-12);
  CHECK(b.upper - b.lower <= 0.05);
}

TEST_CASE("zero operator brackets to zero") {
  const auto zero = linop::make_dense_real(2, 2, PNorm(2), std::vector<double>(4, 0.0));
  const auto b = entropy_bracket(zero, 3, 0.05, Effort::Exact);
  CHECK(b.lower == 0.0);
  CHECK(b.upper == 0.0);
}

TEST_CASE("first entropy number equals the norm") {
  const auto id = linop::identity_operator(2, PNorm(2), Field::Real);
  const auto b = entropy_bracket(id, 1, 0.05, Effort::Greedy);
  CHECK(b.lower <= 1.0);
  CHECK(1.0 <= b.upper);
  CHECK(b.upper - b.lower <= 1e-9);  // diagonal norm is exact
}

TEST_CASE("disk brackets against the frozen covering values") {
  const auto id = linop::identity_operator(2, PNorm(2), Field::Real);

  SUBCASE("three balls") {
    const auto b = entropy_bracket(id, 3, 0.02, Effort::Exact);
    CHECK(b.lower <= oracles::kDiskThreeBallValue);
    CHECK(oracles::kDiskThreeBallValue <= b.upper);
    CHECK(b.upper - b.lower <= 0.08);
  }
  SUBCASE("two balls cannot beat the full radius") {
    const auto b = entropy_bracket(id, 2, 0.02, Effort::Exact);
    CHECK(b.lower <= oracles::kDiskTwoBallValue);
    CHECK(oracles::kDiskTwoBallValue <= b.upper);
  }
}

TEST_CASE("independent brute decision agrees with the disk optimum") {
  // Coarse grids; the brute oracle brackets the three-ball threshold.
  std::vector<std::vector<double>> pts, cands;
  const int m = 9;
  for (int i = -m; i <= m; ++i)
    for (int j = -m; j <= m; ++j) {
      const double x = static_cast<double>(i) / m, y = static_cast<double>(j) / m;
      if (x * x + y * y <= 1.0) {
        pts.push_back({x, y});
        cands.push_back({x, y});
      }
    }
  CHECK(oracles::brute_cover_decision(pts, cands, PNorm(2), Field::Real, 3, 0.97));
  CHECK_FALSE(oracles::brute_cover_decision(pts, cands, PNorm(2), Field::Real, 3, 0.70));
}

TEST_CASE("volume intersection sharpens identity lower bounds") {
  const auto id = linop::identity_operator(2, PNorm(2), Field::Real);
  for (int n = 2; n <= 4; ++n) {
    const auto b = entropy_bracket(id, n, 0.05, Effort::Greedy);
    CHECK(b.lower >= std::pow(static_cast<double>(n), -0.5) - 1e-9);
  }
}

TEST_CASE("bracket monotonicity in the ball budget") {
  const auto op = diag_op({1.0, 0.5});
  std::vector<covering::EntropyBracket> bs;
  for (int n = 1; n <= 6; ++n) bs.push_back(entropy_bracket(op, n, 0.02, Effort::Exact));
  for (int n = 0; n + 1 < 6; ++n) {
    CHECK(bs[n + 1].lower <= bs[n].upper + 1e-9);
    CHECK(bs[n + 1].upper <= bs[n].upper + 2.0 * bs[n].eta + 1e-9);
  }
}

TEST_CASE("pigeonhole consistency between witnesses") {
  const auto op = diag_op({1.0, 0.6});
  for (int n = 2; n <= 4; ++n) {
    const auto b = entropy_bracket(op, n, 0.03, Effort::Exact);
    REQUIRE(b.lower_witness.has_value());
    CHECK(b.upper >= b.lower_witness->min_separation / 2.0 - 1e-12);
  }
}

TEST_CASE("net centers obey the two-norm normal form") {
  const auto op = diag_op({1.0, 0.5});
  const auto nb = norms::operator_norm(op);
  const auto b = entropy_bracket(op, 3, 0.03, Effort::Exact);
  REQUIRE(b.upper_witness.has_value());
  const auto& w = *b.upper_witness;
  for (std::size_t i = 0; i + w.dim <= w.centers.size(); i += w.dim) {
    std::span<const double> c{w.centers.data() + i, static_cast<std::size_t>(w.dim)};
    CHECK(geom::p_norm(c, op.p, op.field) <= 2.0 * nb.upper + 1e-12);
  }
}

TEST_CASE("exhausted node budget flags a truncated search") {
  covering::BracketOptions opts;
  opts.node_budget = 1;
  const auto op = diag_op({1.0, 0.5});
  const auto b = entropy_bracket(op, 2, 0.05, Effort::Exact, opts);
  CHECK(b.lower <= b.upper);
  CHECK(b.truncated_search);
}

TEST_CASE("refine rejects out-of-envelope requests") {
  const auto disk = disk_cloud(0.05);
  covering::EntropyBracket seed;
  seed.lower = 0.0;
  seed.upper = 2.0;
  CHECK_THROWS_AS(covering::exact_covering_refine(disk, 17, seed, {}), Error);
  CHECK_THROWS_AS(entropy_bracket(linop::identity_operator(3, PNorm(2), Field::Complex), 2, 0.05,
                                  Effort::Greedy),
                  Error);
}

TEST_CASE("diagonal canonicalization makes padded truncations identical") {
  const auto a = entropy_bracket(diag_op({1.0, 0.5}), 3, 0.02, Effort::Exact);
  const auto padded = entropy_bracket(diag_op({1.0, 0.5, 0.0, 0.0}), 3, 0.02, Effort::Exact);
  CHECK(a.lower == padded.lower);
  CHECK(a.upper == padded.upper);
  CHECK(a.eta == padded.eta);
}
