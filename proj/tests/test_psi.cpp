#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "varcs/psi.hpp"
#include "varcs/rng.hpp"

using namespace varcs;

// Frozen against a 50-digit mpmath evaluation of the defining formulas.
TEST_CASE("psi_e spot values") {
  CHECK(psi_e(0.0) == 0.0);
  CHECK(psi_e(0.5) == doctest::Approx(0.19314718055994531).epsilon(1e-14));
  CHECK(psi_e(0.99) == doctest::Approx(3.6151701859880914).epsilon(1e-14));
  CHECK(psi_e(0.25) == doctest::Approx(0.037682072451780927).epsilon(1e-14));
}

TEST_CASE("psi_e series branch keeps relative precision") {
  CHECK(psi_e(1e-5) == doctest::Approx(5.0000333335833353e-11).epsilon(1e-14));
  CHECK(psi_e(1e-8) == doctest::Approx(5.0000000333333336e-17).epsilon(1e-14));
  // continuity across the series cutoff
  CHECK(psi_e(0.99e-4) == doctest::Approx(-std::log1p(-0.99e-4) - 0.99e-4).epsilon(1e-10));
  CHECK(psi_e(1.01e-4) == doctest::Approx(-std::log1p(-1.01e-4) - 1.01e-4).epsilon(1e-10));
}

TEST_CASE("psi_e diverges near one") { CHECK(psi_e(1.0 - 1e-12) > 20.0); }

TEST_CASE("psi_e domain") {
  CHECK_THROWS_AS(psi_e(-0.1), std::domain_error);
  CHECK_THROWS_AS(psi_e(1.0), std::domain_error);
  CHECK_THROWS_AS(psi_e(1.5), std::domain_error);
}

TEST_CASE("psi_p spot values") {
  CHECK(psi_p(0.0) == 0.0);
  CHECK(psi_p(1.0) == doctest::Approx(0.71828182845904524).epsilon(1e-14));
  CHECK(psi_p(2.0) == doctest::Approx(4.3890560989306502).epsilon(1e-14));
  CHECK(psi_p(0.5) == doctest::Approx(0.14872127070012815).epsilon(1e-14));
  CHECK(psi_p(1e-5) == doctest::Approx(5.0000166667083334e-11).epsilon(1e-14));
  CHECK_THROWS_AS(psi_p(-1e-9), std::domain_error);
}

TEST_CASE("psi_n is lambda^2/2") {
  CHECK(psi_n(0.0) == 0.0);
  CHECK(psi_n(1.0) == 0.5);
  CHECK(psi_n(0.2) == doctest::Approx(0.02).epsilon(1e-15));
  CHECK(psi_n(-0.2) == doctest::Approx(0.02).epsilon(1e-15));
}

TEST_CASE("psi_e dominates psi_n and their ratio is nondecreasing") {
  double prev_ratio = 0.0;
  for (int i = 1; i < 1000; ++i) {
    const double lam = i / 1000.0;
    const double ratio = psi_e(lam) / psi_n(lam);
    CHECK(psi_e(lam) >= psi_n(lam));
    CHECK(ratio >= prev_ratio - 1e-12);
    prev_ratio = ratio;
  }
}

TEST_CASE("scaling inequality psi(ab) <= a^2 psi(b)") {
  Xoshiro256pp rng(20240811);
  for (int i = 0; i < 10000; ++i) {
    const double a = rng.uniform01();
    const double b = 4.0 * rng.uniform01();
    CHECK(psi_p(a * b) <= a * a * psi_p(b) + 1e-15);
    if (b < 1.0 && a * b < 1.0) {
      CHECK(psi_e(a * b) <= a * a * psi_e(b) + 1e-15);
    }
  }
}
