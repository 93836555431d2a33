#include "oracles.hpp"
#include "thinring/special.hpp"

#include <doctest.h>

#include <cmath>
#include <stdexcept>

using namespace thinring::special;

TEST_SUITE("special") {

TEST_CASE("elliptic integrals against boost") {
  for (double k : {0.0, 0.1, 0.5, 0.9, 0.99, 0.999999}) {
    const EllipticPair ke = elliptic_ke(k);
    CHECK(ke.big_k == doctest::Approx(boost::math::ellint_1(k)).epsilon(1e-14));
    CHECK(ke.big_e == doctest::Approx(boost::math::ellint_2(k)).epsilon(1e-14));
  }
  const EllipticPair zero = elliptic_ke(0.0);
  CHECK(zero.big_k == doctest::Approx(oracle::kPi / 2).epsilon(1e-15));
  CHECK(zero.big_e == doctest::Approx(oracle::kPi / 2).epsilon(1e-15));
}

TEST_CASE("elliptic domain") {
  CHECK_THROWS_AS(elliptic_ke(1.0), std::domain_error);
  CHECK_THROWS_AS(elliptic_ke(-0.1), std::domain_error);
  CHECK_THROWS_AS(f_elliptic(0.0), std::domain_error);
  CHECK_THROWS_AS(f_direct(-1.0), std::domain_error);
}

TEST_CASE("three routes to F agree") {
  for (double s = 1e-8; s <= 10.0; s *= 3.0) {
    const double ref = oracle::f_boost(s);
    CHECK(std::abs(f_elliptic(s) - ref) <= 1e-12 * std::max(1.0, std::abs(ref)));
    CHECK(std::abs(f_direct(s) - ref) <= 1e-11 * std::max(1.0, std::abs(ref)));
    if (s <= 1.0) CHECK(std::abs(f_split(s).recombine(s) - ref) <= 1e-13 * std::max(1.0, std::abs(ref)));
  }
}

TEST_CASE("split at the origin") {
  const FSplit z = f_split(0.0);
  CHECK(z.q == doctest::Approx(-0.5).epsilon(1e-15));
  CHECK(z.p == doctest::Approx(std::log(8.0) - 2.0).epsilon(1e-14));
  CHECK(std::abs(z.f1()) < 1e-15);
  CHECK(std::abs(z.f2()) < 1e-15);
  // f1, f2 vanish linearly.
  const FSplit small = f_split(1e-6);
  CHECK(std::abs(small.f1()) < 1e-5);
  CHECK(std::abs(small.f2()) < 1e-5);
}

TEST_CASE("split range") {
  CHECK_THROWS_AS(f_split(1.5), std::range_error);
  CHECK_NOTHROW(f_split(1.5, 2.0));
  CHECK_THROWS_AS(f_split(-1e-3), std::domain_error);
}

TEST_CASE("large-s decay") {
  const double s = 1e4;
  CHECK(std::abs(f_elliptic(s)) <= 10.0 / std::sqrt(s));
  CHECK(f_elliptic(s) > 0.0);
}

}  // TEST_SUITE
