#include <cmath>

#include "core/bounds.hpp"
#include "core/errors.hpp"
#include "core/rng.hpp"
#include "doctest.h"

using namespace epsnum;
using bounds::delta;

namespace {

linop::DiagonalSpec spec_of(std::vector<double> prefix, double tail,
                            Field field = Field::Real, double p = 2.0) {
  return linop::make_diagonal_spec(std::move(prefix), tail, PNorm(p), field);
}

linop::DiagonalSpec random_spec(Rng& rng, bool allow_tail = true) {
  const int len = 1 + static_cast<int>(rng.below(6));
  std::vector<double> prefix(static_cast<std::size_t>(len));
  for (auto& v : prefix) v = rng.uniform(0.01, 2.0);
  std::sort(prefix.begin(), prefix.end(), std::greater<double>());
  const double tail = (allow_tail && rng.next_double() < 0.5) ? prefix.back() * rng.next_double()
                                                              : 0.0;
  return spec_of(std::move(prefix), tail);
}

}  // namespace

TEST_CASE("delta of the identity is one at every n") {
  const auto id = spec_of({}, 1.0);
  for (int n : {1, 2, 10}) {
    const auto dv = delta(id, n, 1e-12);
    CHECK(dv.value == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(dv.tolerance <= 1e-12);
    if (n > 1) CHECK_FALSE(dv.attained_k.has_value());  // approached in the limit
  }
}

TEST_CASE("delta enumerates the finite prefix exactly") {
  const auto s = spec_of({1.0, 0.5, 0.25}, 0.0);
  const auto dv = delta(s, 2, 1e-12);
  CHECK(std::abs(dv.value - 0.5) <= 1e-12);
  REQUIRE(dv.attained_k.has_value());
  CHECK((*dv.attained_k == 1 || *dv.attained_k == 2));
  CHECK(dv.tolerance == 0.0);
}

TEST_CASE("delta at n = 1 is the norm") {
  const auto s = spec_of({0.9, 0.5}, 0.1);
  const auto dv = delta(s, 1, 1e-12);
  CHECK(dv.value == doctest::Approx(0.9).epsilon(1e-14));
  REQUIRE(dv.attained_k.has_value());
  CHECK(*dv.attained_k == 1);
}

TEST_CASE("delta respects the tail tolerance contract") {
  const auto s = spec_of({1.0}, 1.0 / 3.0);
  const auto dv = delta(s, 2, 1e-10);
  CHECK(dv.value == doctest::Approx(0.5).epsilon(1e-12));  // k = 1 term dominates
  // enumeration stopped once GM was within tol of the tail
  CHECK(dv.tolerance <= 1e-10);
}

TEST_CASE("delta is nonincreasing in n") {
  Rng rng(11);
  for (int t = 0; t < 200; ++t) {
    const auto s = random_spec(rng);
    double prev = std::numeric_limits<double>::infinity();
    for (int n : {1, 2, 3, 5, 8, 13}) {
      const double v = delta(s, n, 1e-12).value;
      CHECK(v <= prev + 1e-12);
      prev = v;
    }
  }
}

TEST_CASE("index-r property from the proof of the sandwich") {
  Rng rng(13);
  for (int t = 0; t < 300; ++t) {
    const auto s = random_spec(rng);
    for (int n : {1, 2, 3, 7, 16}) {
      int r = 0;
      while (n > (1LL << (r + 1))) ++r;  // smallest r with n <= 2^(r+1)
      const double dv = delta(s, n, 1e-12).value;
      CHECK(s.sigma(static_cast<std::size_t>(r) + 1) <= 2.0 * dv + 1e-9);
    }
  }
}

TEST_CASE("diagonal sandwich") {
  const auto id = spec_of({}, 1.0);
  const auto iv = bounds::diagonal_sandwich(id, 5);
  CHECK(iv.lower == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(iv.upper >= 4.0 - 1e-9);
  CHECK(iv.lower <= 1.0);  // contains eps_n(I) = 1
  CHECK(1.0 <= iv.upper);

  const auto s = spec_of({1.0, 0.5, 0.25}, 0.0);
  const auto iv2 = bounds::diagonal_sandwich(s, 2);
  CHECK(iv2.lower == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(iv2.upper == doctest::Approx(2.0).epsilon(1e-9));

  const auto s1 = spec_of({0.7}, 0.0);
  const auto iv3 = bounds::diagonal_sandwich(s1, 1);
  CHECK(iv3.lower == doctest::Approx(0.7).epsilon(1e-12));
  CHECK(0.7 <= iv3.upper);

  CHECK_THROWS_AS(
      bounds::diagonal_sandwich(
          linop::make_diagonal_spec({1.0}, 0.0, PNorm::infinity(), Field::Real), 2),
      Error);
  // p = 1 is fine (dual of c_0)
  CHECK_NOTHROW(bounds::diagonal_sandwich(
      linop::make_diagonal_spec({1.0}, 0.0, PNorm(1.0), Field::Real), 2));
}

TEST_CASE("volume lower bounds") {
  const auto id = spec_of({}, 1.0);
  CHECK(bounds::volume_lower_bound(id, 2, 3) ==
        doctest::Approx(std::pow(3.0, -0.5)).epsilon(1e-14));
  const auto s = spec_of({1.0, 0.0}, 0.0);
  CHECK(bounds::volume_lower_bound(s, 2, 3) == 0.0);
  const auto s1 = spec_of({0.8}, 0.0);
  CHECK(bounds::volume_lower_bound(s1, 1, 1) == doctest::Approx(0.8).epsilon(1e-14));
  // complex reading halves the exponent
  const auto idc = spec_of({}, 1.0, Field::Complex);
  CHECK(bounds::volume_lower_bound(idc, 2, 3) ==
        doctest::Approx(std::pow(3.0, -0.25)).epsilon(1e-14));
}

TEST_CASE("projection entropy lower bounds") {
  CHECK(bounds::projection_entropy_lower(1, 3, Field::Complex) == 1.0);
  CHECK(bounds::projection_entropy_lower(4, 2, Field::Complex) ==
        doctest::Approx(std::pow(4.0, -0.25)).epsilon(1e-14));
  CHECK(bounds::projection_entropy_lower(4, 2, Field::Real) ==
        doctest::Approx(0.5).epsilon(1e-14));
  for (int k : {1, 2, 5, 9})
    for (int n : {1, 2, 3})
      CHECK(bounds::projection_entropy_lower(k, n, Field::Complex) <= 1.0 + 1e-15);
}

TEST_CASE("bracket-level inequality checks") {
  covering::EntropyBracket t;
  t.n = 2;
  t.lower = 0.4;
  t.upper = 0.6;
  covering::EntropyBracket ts = t;
  norms::NormBracket zero;

  // S = 0 reduces to bracket soundness for T itself
  CHECK(bounds::check_subadditivity(t, ts, zero));

  norms::NormBracket s;
  s.lower = s.upper = 0.1;
  covering::EntropyBracket shifted;
  shifted.n = 2;
  shifted.lower = 0.69;
  shifted.upper = 0.8;
  CHECK(bounds::check_subadditivity(t, shifted, s));
  shifted.lower = 0.75;
  CHECK_FALSE(bounds::check_subadditivity(t, shifted, s));

  covering::EntropyBracket r = t, srt;
  srt.n = 2;
  srt.lower = 0.25;
  srt.upper = 0.4;
  norms::NormBracket half;
  half.lower = half.upper = 0.5;
  norms::NormBracket one;
  one.lower = one.upper = 1.0;
  CHECK(bounds::check_submultiplicativity(r, srt, half, one));
  srt.lower = 0.5;
  CHECK_FALSE(bounds::check_submultiplicativity(r, srt, half, one));

  covering::EntropyBracket mismatched = srt;
  mismatched.n = 3;
  CHECK_THROWS_AS(bounds::check_submultiplicativity(r, mismatched, half, one), Error);
}
