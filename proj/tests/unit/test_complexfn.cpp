#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <random>

#include "sindyn/complexfn.hpp"
#include "sindyn/constants.hpp"

using sindyn::Cplx;

TEST_CASE("real sin/cos kernel matches libm on moderate arguments", "[complexfn]") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> uni(-50.0, 50.0);
  for (int i = 0; i < 2000; ++i) {
    const double x = uni(rng);
    double s, c;
    sindyn::sin_cos(x, s, c);
    REQUIRE(s == Catch::Approx(std::sin(x)).margin(1e-15));
    REQUIRE(c == Catch::Approx(std::cos(x)).margin(1e-15));
    REQUIRE(s * s + c * c == Catch::Approx(1.0).margin(1e-14));
  }
}

TEST_CASE("large arguments are reduced before evaluation", "[complexfn]") {
  // beyond 2^31 the kernel reduces mod 2*pi in extended precision; compare
  // against libm, whose own reduction is exact for every finite double
  for (double x : {3.0e9, 1.0e12, 9.9e14, -4.2e13}) {
    double s, c;
    sindyn::sin_cos(x, s, c);
    REQUIRE(s == Catch::Approx(std::sin(x)).margin(2e-15));
    REQUIRE(c == Catch::Approx(std::cos(x)).margin(2e-15));
  }
}

TEST_CASE("sine kernel is odd bit-for-bit", "[complexfn]") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> uni(0.0, 1.0e12);
  for (int i = 0; i < 2000; ++i) {
    const double x = uni(rng);
    double sp, cp, sn, cn;
    sindyn::sin_cos(x, sp, cp);
    sindyn::sin_cos(-x, sn, cn);
    REQUIRE(sn == -sp);  // exact, not approximate
    REQUIRE(cn == cp);
  }
}

TEST_CASE("sinh/cosh kernel is odd/even bit-for-bit and satisfies the identity",
          "[complexfn]") {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> uni(0.0, 700.0);
  for (int i = 0; i < 2000; ++i) {
    const double y = uni(rng);
    double shp, chp, shn, chn;
    sindyn::sinh_cosh(y, shp, chp);
    sindyn::sinh_cosh(-y, shn, chn);
    REQUIRE(shn == -shp);
    REQUIRE(chn == chp);
    if (y < 350.0) {  // identity check while squares stay in range
      const double lhs = (chp - shp) * (chp + shp);
      REQUIRE(lhs == Catch::Approx(1.0).margin(1e-13));
    }
  }
}

TEST_CASE("sinh/cosh throws past the representable range", "[complexfn]") {
  double sh, ch;
  REQUIRE_THROWS_AS(sindyn::sinh_cosh(710.0, sh, ch), sindyn::MagnitudeOverflow);
  REQUIRE_THROWS_AS(sindyn::sinh_cosh(-710.0, sh, ch), sindyn::MagnitudeOverflow);
  REQUIRE_NOTHROW(sindyn::sinh_cosh(709.0, sh, ch));
}

TEST_CASE("complex sine agrees with the standard library", "[complexfn]") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> re(-30.0, 30.0), im(-20.0, 20.0);
  for (int i = 0; i < 2000; ++i) {
    const Cplx z(re(rng), im(rng));
    const Cplx mine = sindyn::complex_sin(z);
    const Cplx ref = std::sin(z);
    REQUIRE(std::abs(mine - ref) <= 1e-14 * (1.0 + std::abs(ref)));
    const Cplx minec = sindyn::complex_cos(z);
    const Cplx refc = std::cos(z);
    REQUIRE(std::abs(minec - refc) <= 1e-14 * (1.0 + std::abs(refc)));
  }
}

TEST_CASE("complex_sin_cos returns the same values as the single calls",
          "[complexfn]") {
  const Cplx z(1.25, -0.75);
  Cplx s, c;
  sindyn::complex_sin_cos(z, s, c);
  REQUIRE(s == sindyn::complex_sin(z));
  REQUIRE(c == sindyn::complex_cos(z));
}

TEST_CASE("growth bounds chain |sin z| <= cosh(Im z) <= e^|z|", "[complexfn]") {
  std::mt19937_64 rng(19);
  std::uniform_real_distribution<double> re(-10.0, 10.0), im(-6.0, 6.0);
  for (int i = 0; i < 500; ++i) {
    const Cplx z(re(rng), im(rng));
    const auto g = sindyn::growth_bounds(z);
    REQUIRE(g.sin_magnitude <= g.cosh_bound * (1.0 + 1e-12) + 1e-12);
    REQUIRE(g.cosh_bound <= g.exp_bound * (1.0 + 1e-12));
  }
}

TEST_CASE("non-finite inputs are rejected", "[complexfn]") {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  const double inf = std::numeric_limits<double>::infinity();
  REQUIRE_THROWS_AS(sindyn::complex_sin(Cplx(nan, 0.0)), sindyn::NonFiniteInput);
  REQUIRE_THROWS_AS(sindyn::complex_sin(Cplx(0.0, inf)), sindyn::NonFiniteInput);
  REQUIRE_THROWS_AS(sindyn::growth_bounds(Cplx(inf, 0.0)), sindyn::NonFiniteInput);
}
