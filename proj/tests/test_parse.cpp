#include <cmath>
#include <numbers>

#include "doctest.h"
#include "gen.hpp"
#include "qcalc/error.hpp"
#include "qcalc/parse.hpp"

using namespace qcalc;

TEST_CASE("scalar grammar") {
  auto q = CycScalar::q_power(3, 1);
  CHECK(parse_scalar("1 + q + q^2", 3).is_zero());
  CHECK(parse_scalar("3/2", 3) == CycScalar(Rational(3, 2)));
  CHECK(parse_scalar("0.25", 3) == CycScalar(Rational(1, 4)));
  CHECK(parse_scalar("2e-2", 3) == CycScalar(Rational(1, 50)));
  CHECK(parse_scalar("q^-1", 3) == q * q);
  CHECK(parse_scalar("\xE2\x88\x92q", 3) == -q);
  CHECK(parse_scalar("z^2", 4) == CycScalar::q_power(4, 1));
  CHECK(parse_scalar("(1+q)*(1+q^2)", 3) == CycScalar(1L));
  CHECK_THROWS_AS(parse_scalar("1/0", 3), DivisionByZero);
  CHECK_THROWS_AS(parse_scalar("1 +", 3), ParseError);
  CHECK_THROWS_AS(parse_scalar("w", 3), ParseError);
  CHECK_THROWS_AS(parse_scalar("(1", 3), ParseError);
}

TEST_CASE("scalar print/parse round trip") {
  std::mt19937_64 rng(5);
  for (int N : {2, 3, 4, 5, 6}) {
    for (int t = 0; t < 30; ++t) {
      auto s = gen::scalar(rng, N);
      CHECK(parse_scalar(s.str(), N) == s);
    }
  }
}

TEST_CASE("polynomial grammar") {
  auto f = parse_poly("2*x1^2*x2 + (1+q)*x3 - 1/2", 3, 3);
  CHECK(f.terms().size() == 3);
  CHECK(f.terms().at({2, 1, 0}) == CycScalar(2L));
  CHECK(f.terms().at({0, 0, 1}) == -CycScalar::q_power(3, 2));
  CHECK(parse_poly("t^3 + 3*t", 3, 1, {"t"}) == parse_poly("x1^3+3*x1", 3, 1));
  CHECK_THROWS_AS(parse_poly("x4", 3, 3), ParseError);
  CHECK_THROWS_AS(parse_poly("1/x1", 3, 1), ParseError);
  CHECK_THROWS_AS(parse_poly("x1^-1", 3, 1), ParseError);
}

TEST_CASE("polynomial print/parse round trip") {
  for (std::uint64_t s = 0; s < 40; ++s) {
    auto f = random_poly(s, 3, 4) * CycScalar::q_power(3, static_cast<long>(s % 3));
    CHECK(parse_poly(f.str(), 3, 3) == f);
  }
}

TEST_CASE("numeric expressions with derivatives") {
  auto e = NumExpr::parse("2*cos(t) + t^2 - sqrt(exp(t))");
  for (double t : {0.0, 0.3, 1.7, 5.0}) {
    std::vector<double> a{t};
    auto d = e.eval_dual(a);
    CHECK(d.v == doctest::Approx(2 * std::cos(t) + t * t - std::exp(t / 2)));
    CHECK(d.d == doctest::Approx(-2 * std::sin(t) + 2 * t - 0.5 * std::exp(t / 2)));
  }
  std::vector<double> a{1.0};
  CHECK(NumExpr::parse("pi/2").eval(a) == doctest::Approx(std::numbers::pi / 2));
  CHECK_THROWS_AS(NumExpr::parse("foo(t)"), ParseError);
}
