#include <cmath>

#include "core/errors.hpp"
#include "core/hilbert.hpp"
#include "core/rng.hpp"
#include "doctest.h"

using namespace epsnum;
using covering::Effort;

TEST_CASE("self-adjoint positive diagonal gives identical triples") {
  const auto a = linop::make_dense_real(2, 2, PNorm(2), std::vector<double>{2, 0, 0, 1});
  const auto rep = hilbert::hilbert_identity_check(a, 3, 0.05, Effort::Exact);
  CHECK(rep.max_singular_gap <= 1e-12);
  CHECK_FALSE(rep.any_violated);
  for (const auto& t : rep.per_n) {
    CHECK(t.consistent);
    CHECK(t.op.lower == t.adjoint_op.lower);
    CHECK(t.op.upper == t.adjoint_op.upper);
    CHECK(t.op.lower == t.modulus_op.lower);
    CHECK(t.op.upper == t.modulus_op.upper);
  }
}

TEST_CASE("nilpotent shift: all three second brackets contain one half") {
  const auto a = linop::make_dense_real(2, 2, PNorm(2), std::vector<double>{0, 1, 0, 0});
  const auto rep = hilbert::hilbert_identity_check(a, 2, 0.02, Effort::Exact);
  CHECK(rep.max_singular_gap <= 1e-9);
  CHECK_FALSE(rep.any_violated);
  const auto& t = rep.per_n.back();
  REQUIRE(t.n == 2);
  for (const auto* b : {&t.op, &t.adjoint_op, &t.modulus_op}) {
    CHECK(b->lower <= 0.5);
    CHECK(0.5 <= b->upper);
  }
}

TEST_CASE("random real matrices never violate the identity") {
  Rng rng(404);
  for (int t = 0; t < 6; ++t) {
    std::vector<double> e(4);
    for (auto& v : e) v = rng.uniform(-1.0, 1.0);
    const auto a = linop::make_dense_real(2, 2, PNorm(2), e);
    const auto rep = hilbert::hilbert_identity_check(a, 3, 0.05, Effort::Exact);
    CHECK(rep.max_singular_gap <= 1e-9);
    CHECK_FALSE(rep.any_violated);
  }
}

TEST_CASE("a complex matrix runs through the realified pipeline") {
  covering::BracketOptions opts;
  opts.cloud_budget = 4000;  // keep the 4-D cloud small here
  const auto a = linop::make_dense_complex(2, 2, PNorm(2), std::vector<double>{0.8, 0.2, 0, 0.5},
                                           std::vector<double>{0.1, -0.3, 0.4, 0});
  const auto rep = hilbert::hilbert_identity_check(a, 2, 0.3, Effort::Exact, opts);
  CHECK(rep.max_singular_gap <= 1e-9);
  CHECK_FALSE(rep.any_violated);
}

TEST_CASE("partial isometry shadow on a scaled rotation") {
  // 0.8 * rotation(30 deg): the image is a euclidean ball, so the chain
  // decider keeps both uppers within the 2-eta shadow.
  const double c = 0.8 * std::cos(0.5235987755982988), s = 0.8 * std::sin(0.5235987755982988);
  const auto a = linop::make_dense_real(2, 2, PNorm(2), std::vector<double>{c, -s, s, c});
  const auto rep = hilbert::hilbert_identity_check(a, 3, 0.02, Effort::Exact);
  CHECK_FALSE(rep.any_violated);
  for (const auto& t : rep.per_n) {
    const double slack = 2.0 * std::max(t.op.eta, t.modulus_op.eta) + 1e-9;
    CHECK(t.op.upper <= t.modulus_op.upper + slack);
    CHECK(t.modulus_op.upper <= t.op.upper + slack);
  }
}

TEST_CASE("identity check preconditions") {
  const auto lp = linop::make_dense_real(2, 2, PNorm(3), std::vector<double>{1, 0, 0, 1});
  CHECK_THROWS_AS(hilbert::hilbert_identity_check(lp, 2, 0.05, Effort::Greedy), Error);
  const auto big = linop::identity_operator(3, PNorm(2), Field::Complex);
  CHECK_THROWS_AS(hilbert::hilbert_identity_check(big, 2, 0.05, Effort::Greedy), Error);
  const auto ok = linop::identity_operator(2, PNorm(2), Field::Real);
  CHECK_THROWS_AS(hilbert::hilbert_identity_check(ok, 17, 0.05, Effort::Greedy), Error);
}
