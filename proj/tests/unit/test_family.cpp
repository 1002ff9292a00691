#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <random>

#include "sindyn/family.hpp"

using sindyn::Cplx;
using sindyn::FamilyParams;

TEST_CASE("evaluate matches lambda*std::sin(z)+a", "[family]") {
  const FamilyParams p(Cplx(0.4, -1.1), Cplx(0.3, 0.2));
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> re(-15.0, 15.0), im(-10.0, 10.0);
  for (int i = 0; i < 1000; ++i) {
    const Cplx z(re(rng), im(rng));
    const Cplx got = sindyn::evaluate(p, z);
    const Cplx ref = p.lambda * std::sin(z) + p.a;
    REQUIRE(std::abs(got - ref) <= 1e-13 * (1.0 + std::abs(ref)));
    const Cplx dgot = sindyn::derivative(p, z);
    const Cplx dref = p.lambda * std::cos(z);
    REQUIRE(std::abs(dgot - dref) <= 1e-13 * (1.0 + std::abs(dref)));
  }
}

TEST_CASE("evaluate_with_derivative equals the two single-pass calls", "[family]") {
  const FamilyParams p(Cplx(2.0, 0.0), Cplx(0.0, 0.0));
  const Cplx z(0.7, -1.3);
  Cplx f, df;
  sindyn::evaluate_with_derivative(p, z, f, df);
  REQUIRE(f == sindyn::evaluate(p, z));
  REQUIRE(df == sindyn::derivative(p, z));
}

TEST_CASE("central symmetry is bit-exact when a = 0", "[family]") {
  const FamilyParams p(Cplx(1.7, 0.9), Cplx(0.0, 0.0));
  std::mt19937_64 rng(29);
  std::uniform_real_distribution<double> re(-40.0, 40.0), im(-8.0, 8.0);
  for (int i = 0; i < 2000; ++i) {
    const Cplx z(re(rng), im(rng));
    const auto pair = sindyn::central_pair(p, z);
    REQUIRE(pair.left.real() == pair.right.real());  // exact equality
    REQUIRE(pair.left.imag() == pair.right.imag());
  }
}

TEST_CASE("reflection about pi/2 holds to rounding for every parameter",
          "[family]") {
  const FamilyParams p(Cplx(-1.003, 0.0), Cplx(sindyn::kHalfPi - 1.003, 0.0));
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> re(-10.0, 10.0), im(-6.0, 6.0);
  for (int i = 0; i < 2000; ++i) {
    const Cplx w(re(rng), im(rng));
    const auto pair = sindyn::symmetry_pair(p, w);
    const double scale = 1.0 + std::abs(pair.left);
    REQUIRE(std::abs(pair.left - pair.right) <= 1e-12 * scale);
  }
}

TEST_CASE("2*pi periodicity holds to rounding", "[family]") {
  const FamilyParams p(Cplx(0.5, 0.5), Cplx(1.0, -2.0));
  std::mt19937_64 rng(37);
  std::uniform_real_distribution<double> re(-10.0, 10.0), im(-5.0, 5.0);
  for (int i = 0; i < 1000; ++i) {
    const Cplx z(re(rng), im(rng));
    const int k = static_cast<int>(rng() % 9) - 4;
    const auto pair = sindyn::periodicity_pair(p, z, k);
    const double scale = 1.0 + std::abs(pair.left);
    REQUIRE(std::abs(pair.left - pair.right) <= 1e-12 * scale);
  }
}

TEST_CASE("singular data lists the critical lattice and both critical values",
          "[family]") {
  const FamilyParams p(Cplx(0.8, 0.1), Cplx(-0.2, 0.4));
  const auto sd = sindyn::singular_data(p, 3);
  REQUIRE(sd.critical_points.size() == 7);
  for (const Cplx& c : sd.critical_points) {
    REQUIRE(std::abs(sindyn::derivative(p, c)) <= 1e-12 * std::abs(p.lambda));
    REQUIRE(c.imag() == 0.0);
  }
  REQUIRE(sd.critical_value_plus == p.a + p.lambda);
  REQUIRE(sd.critical_value_minus == p.a - p.lambda);
  REQUIRE_THROWS_AS(sindyn::singular_data(p, -1), std::invalid_argument);
}

TEST_CASE("parameter validation", "[family]") {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  REQUIRE_THROWS_AS(FamilyParams(Cplx(0.0, 0.0), Cplx(0.0, 0.0)),
                    std::invalid_argument);
  REQUIRE_THROWS_AS(FamilyParams(Cplx(nan, 0.0), Cplx(0.0, 0.0)),
                    sindyn::NonFiniteInput);
  REQUIRE_THROWS_AS(FamilyParams(Cplx(1.0, 0.0), Cplx(0.0, nan)),
                    sindyn::NonFiniteInput);
}

TEST_CASE("escape radius floors at 50 and scales with the parameters", "[family]") {
  REQUIRE(sindyn::default_escape_radius(FamilyParams(Cplx(1.0, 0.0), Cplx(0.0, 0.0))) ==
          50.0);
  REQUIRE(sindyn::default_escape_radius(FamilyParams(Cplx(20.0, 0.0), Cplx(5.0, 0.0))) ==
          Catch::Approx(100.0));
}

TEST_CASE("evaluation overflows throw rather than return infinities", "[family]") {
  const FamilyParams p(Cplx(1.0, 0.0), Cplx(0.0, 0.0));
  REQUIRE_THROWS_AS(sindyn::evaluate(p, Cplx(0.0, 800.0)), sindyn::MagnitudeOverflow);
  // lambda large enough to push a representable sin past double range
  const FamilyParams big(Cplx(1e308, 0.0), Cplx(0.0, 0.0));
  REQUIRE_THROWS_AS(sindyn::evaluate(big, Cplx(0.0, 700.0)), sindyn::MagnitudeOverflow);
}
