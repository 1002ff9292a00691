#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "sindyn/magnitude.hpp"

using sindyn::Magnitude;

TEST_CASE("plain values round-trip at level 0", "[magnitude]") {
  const Magnitude m = Magnitude::from_value(123.5);
  REQUIRE(m.level() == 0);
  REQUIRE(m.value() == 123.5);
  REQUIRE(m.log_value() == Catch::Approx(std::log(123.5)));
}

TEST_CASE("from_log promotes exactly when the value leaves double comfort",
          "[magnitude]") {
  REQUIRE(Magnitude::from_log(5.0).level() == 0);
  REQUIRE(Magnitude::from_log(5.0).value() == Catch::Approx(std::exp(5.0)));
  const Magnitude big = Magnitude::from_log(500.0);
  REQUIRE(big.level() == 1);
  REQUIRE(big.value() == Catch::Approx(std::exp(500.0)));
  REQUIRE(big.log_value() == 500.0);
}

TEST_CASE("ordering is the ordering of denoted values across levels",
          "[magnitude]") {
  const Magnitude a = Magnitude::from_value(700.0);
  const Magnitude b = Magnitude::from_log(10.0);   // e^10 ~ 22026
  const Magnitude c = Magnitude::from_log(500.0);  // e^500
  const Magnitude d = c.square();                  // e^1000
  REQUIRE(a < b);
  REQUIRE(b < c);
  REQUIRE(c < d);
  REQUIRE(a.value() < b.value());
  // squares of towers: (e^500)^2 = e^1000, still level 1
  REQUIRE(d.level() == 1);
  REQUIRE(d.log_value() == Catch::Approx(1000.0));
}

TEST_CASE("cosh scaling promotes through the tower", "[magnitude]") {
  // 2*cosh(700) overflows a double but its log is exact enough: 700 + log(1)
  const Magnitude m = Magnitude::from_value(700.0).scale_cosh(2.0);
  REQUIRE(m.level() == 1);
  REQUIRE(m.log_value() == Catch::Approx(700.0).margin(1e-9));
  // at level >= 1 cosh and e^x/2 agree below double resolution
  const Magnitude h = Magnitude::from_log(300.0).scale_cosh(2.0);
  REQUIRE(h.level() == 2);
}

TEST_CASE("sinh with subtraction refuses to go negative", "[magnitude]") {
  REQUIRE_THROWS_AS(Magnitude::from_value(0.1).scale_sinh_minus(1.0, 10.0),
                    std::domain_error);
  const Magnitude ok = Magnitude::from_value(5.0).scale_sinh_minus(1.0, 2.0);
  REQUIRE(ok.value() == Catch::Approx(std::sinh(5.0) - 2.0));
}

TEST_CASE("square then sqrt returns to the start", "[magnitude]") {
  for (double x : {3.0, 555.0}) {
    const Magnitude m = Magnitude::from_value(x).square().sqrt();
    REQUIRE(m.value() == Catch::Approx(x).epsilon(1e-12));
  }
  const Magnitude big = Magnitude::from_log(600.0);
  REQUIRE(big.square().sqrt().log_value() == Catch::Approx(600.0));
}

TEST_CASE("chain-style compound: sqrt(c^2 - 1) * N", "[magnitude]") {
  // the concrete escape-floor arithmetic used by the chain reports
  const Magnitude c = Magnitude::from_value(44.0);
  const Magnitude floor1 = c.square().offset(-1.0).sqrt().scale(4.0);
  REQUIRE(floor1.value() == Catch::Approx(std::sqrt(44.0 * 44.0 - 1.0) * 4.0));
}

TEST_CASE("describe prints doubles while it can and towers once it cannot",
          "[magnitude]") {
  REQUIRE(Magnitude::from_value(2.0).describe() == "2");
  const Magnitude deep = Magnitude::from_log(400.0).square().square();  // e^1600
  REQUIRE(deep.describe().rfind("exp^", 0) == 0);
}

TEST_CASE("domain errors on invalid construction and operations", "[magnitude]") {
  REQUIRE_THROWS_AS(Magnitude::from_value(-1.0), std::domain_error);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  REQUIRE_THROWS_AS(Magnitude::from_value(nan), std::domain_error);
  REQUIRE_THROWS_AS(Magnitude::from_log(nan), std::domain_error);
  REQUIRE_THROWS_AS(Magnitude::from_value(5.0).scale(-2.0), std::domain_error);
  REQUIRE_THROWS_AS(Magnitude::from_value(5.0).add(-1.0), std::domain_error);
  REQUIRE_THROWS_AS(Magnitude::from_value(5.0).offset(-10.0), std::domain_error);
}

TEST_CASE("value() saturates to infinity only past level 1", "[magnitude]") {
  const Magnitude lvl2 = Magnitude::from_log(600.0).square();  // e^1200
  REQUIRE(lvl2.level() == 1);
  REQUIRE(std::isinf(Magnitude::from_log(600.0).square().square().value()) ==
          (Magnitude::from_log(600.0).square().square().level() >= 2));
}
