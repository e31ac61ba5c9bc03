#include <cmath>
#include <functional>
#include <numbers>
#include <random>

#include "doctest.h"
#include "gen.hpp"
#include "qcalc/dim1.hpp"
#include "qcalc/error.hpp"
#include "qcalc/parse.hpp"

using namespace qcalc;

namespace {

using Word = std::vector<DiffFactor>;
using Terms = std::vector<std::pair<CoeffPoly, Word>>;

CycScalar q(long k = 1) { return CycScalar::q_power(3, k); }
CoeffPoly P(const char* s) { return parse_poly(s, 3, 1, {"t"}); }
CoeffPoly Z() { return CoeffPoly(1); }

EvenForm1D random_even(std::mt19937_64& rng) {
  const int m = static_cast<int>(gen::small_int(rng, 0, 4));
  EvenForm1D w{m, random_poly(rng(), 1, 3), Z()};
  if (m > 0) w.psi = random_poly(rng(), 1, 3);
  return w;
}

OddForm1D random_odd(std::mt19937_64& rng) {
  return {static_cast<int>(gen::small_int(rng, 0, 4)), random_poly(rng(), 1, 3)};
}

CoeffPoly random_reparam(std::mt19937_64& rng) {
  for (;;) {
    auto p = random_poly(rng(), 1, 3);
    if (p.total_degree() >= 2) return p;
  }
}

// Moves the function g from the right of `w` to its left. First-order factors
// commute with functions; d2tau g = g d2tau - q (1 - q^2) g' dtau dtau. With
// `commuting` the correction is dropped.
Terms move_left(const Word& w, const CoeffPoly& g, bool commuting) {
  if (w.empty() || g.is_zero()) return {{g, w}};
  Word head(w.begin(), w.end() - 1);
  const DiffFactor last = w.back();
  Terms out;
  for (auto& [c, rest] : move_left(head, g, commuting)) {
    Word nw = rest;
    nw.push_back(last);
    out.push_back({c, nw});
  }
  if (last.alpha == 2 && !commuting) {
    CoeffPoly corr = g.partial(0) * (q() * (CycScalar(1L) - q(2))) * CycScalar(-1L);
    for (auto& [c, rest] : move_left(head, corr, commuting)) {
      Word nw = rest;
      nw.push_back({1, 1});
      nw.push_back({1, 1});
      out.push_back({c, nw});
    }
  }
  return out;
}

// Left-coefficient product of two term lists in the free tower.
Terms mul(const Terms& a, const Terms& b, bool commuting) {
  Terms out;
  for (const auto& [ca, wa] : a)
    for (const auto& [cb, wb] : b)
      for (auto& [c, w] : move_left(wa, cb, commuting)) {
        Word nw = w;
        nw.insert(nw.end(), wb.begin(), wb.end());
        out.push_back({ca * c, nw});
      }
  return out;
}

Form to_tower(const Terms& t) {
  Form f(tower_algebra());
  for (const auto& [c, w] : t) f += Form::word(tower_algebra(), w, c);
  return f;
}

// Substitutes t = t(tau) word by word, expanding every product.
Form substitute_oracle(const EvenForm1D& w, const CoeffPoly& T, bool commuting) {
  const CoeffPoly t1 = T.partial(0), t2 = t1.partial(0);
  const Terms dt{{t1, {{1, 1}}}};
  const Terms d2t{{t2, {{1, 1}, {1, 1}}}, {t1, {{2, 1}}}};
  std::vector<CoeffPoly> sub{T};
  Terms acc{{w.phi.substitute(sub), {}}};
  for (int i = 0; i < w.m; ++i) acc = mul(acc, d2t, commuting);
  Form f = to_tower(acc);
  if (w.m > 0) {
    Terms b{{w.psi.substitute(sub), {}}};
    b = mul(mul(b, dt, commuting), dt, commuting);
    for (int i = 0; i < w.m - 1; ++i) b = mul(b, d2t, commuting);
    f += to_tower(b);
  }
  return f;
}

double gauss_legendre(const std::function<double(double)>& f, double a, double b) {
  // 10-point rule on 256 panels; nodes by Newton iteration on P_10
  constexpr int n = 10;
  std::vector<double> x(n), wt(n);
  for (int i = 0; i < n; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = z;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      double dp = n * (z * p1 - p0) / (z * z - 1.0);
      double dz = p1 / dp;
      z -= dz;
      if (std::fabs(dz) < 1e-16) {
        x[i] = z;
        wt[i] = 2.0 / ((1.0 - z * z) * dp * dp);
        break;
      }
    }
  }
  constexpr int panels = 256;
  const double h = (b - a) / panels;
  double s = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double c = a + (p + 0.5) * h;
    for (int i = 0; i < n; ++i) s += wt[i] * f(c + 0.5 * h * x[i]);
  }
  return 0.5 * h * s;
}

std::vector<std::vector<CoeffPoly>> euclid(int n) {
  std::vector<std::vector<CoeffPoly>> g(n, std::vector<CoeffPoly>(n, CoeffPoly(n)));
  for (int i = 0; i < n; ++i) g[i][i] = CoeffPoly::constant(n, CycScalar(1L));
  return g;
}

}  // namespace

TEST_CASE("tower forms embed into the free one-variable algebra") {
  EvenForm1D w{2, P("t^2"), P("3*t")};
  Form f = to_form(w);
  CHECK(f.str({"t"}) == "(3*t) ⊗ dt*dt*d2t + (t^2) ⊗ d2t*d2t");
  CHECK(even_from_form(f) == w);
  OddForm1D th{1, P("t - 1")};
  CHECK(odd_from_form(to_form(th)) == th);
  CHECK_THROWS_AS(odd_from_form(f), NotHomogeneous);
  CHECK_THROWS_AS(even_from_form(to_form(th)), NotHomogeneous);
  CHECK_THROWS_AS(to_form(EvenForm1D{0, P("t"), P("1")}), InvalidArgument);
}

TEST_CASE("d1 agrees with the q-Leibniz differential of the embedded form") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 60; ++trial) {
    auto w = random_even(rng);
    CHECK(to_form(d1(w)) == exterior_d(to_form(w)));
    auto th = random_odd(rng);
    CHECK(to_form(d1(th)) == exterior_d(to_form(th)));
  }
}

TEST_CASE("d^3 = 0 on the tower") {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 50; ++trial) {
    auto w = random_even(rng);
    auto r = d1(d1(d1(w)));
    CHECK(r.eta.is_zero());
    auto th = random_odd(rng);
    CHECK(d1(d1(d1(th))).phi.is_zero());
    CHECK(d1(d1(d1(th))).psi.is_zero());
  }
}

TEST_CASE("primitive inverts d1 on closed forms") {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 40; ++trial) {
    auto th = random_odd(rng);
    auto w = d1(th);
    CHECK(is_closed(w));
    CHECK(primitive(w) == th);
  }
  CHECK_THROWS_AS(primitive(EvenForm1D{1, P("t^2"), P("t")}), NotClosed);
}

TEST_CASE("pullback of d2t along t = tau^2") {
  auto r = pullback(EvenForm1D{1, P("1"), Z()}, P("t^2"));
  CHECK(r.m == 1);
  CHECK(r.phi == P("2*t"));
  CHECK(r.psi == P("2"));
  CHECK(pullback_commuting(EvenForm1D{1, P("1"), Z()}, P("t^2")) == r);
}

TEST_CASE("pullback matches the left-module substitution and commutes with d") {
  std::mt19937_64 rng(14);
  for (int trial = 0; trial < 50; ++trial) {
    auto w = random_even(rng);
    auto T = random_reparam(rng);
    CHECK(to_form(pullback(w, T)) == substitute_oracle(w, T, false));
    CHECK(pullback(d1(w), T) == d1(pullback(w, T)));
    auto th = random_odd(rng);
    CHECK(pullback(d1(th), T) == d1(pullback(th, T)));
  }
}

TEST_CASE("commuting-coefficient pullback matches its own oracle and breaks naturality for m >= 2") {
  std::mt19937_64 rng(15);
  int broken = 0;
  for (int trial = 0; trial < 50; ++trial) {
    auto w = random_even(rng);
    auto T = random_reparam(rng);
    CHECK(to_form(pullback_commuting(w, T)) == substitute_oracle(w, T, true));
    if (w.m <= 1) CHECK(pullback_commuting(w, T) == pullback(w, T));
    if (w.m >= 2 && !w.phi.is_zero()) broken += !(pullback(d1(w), T) == d1(pullback_commuting(w, T)));
  }
  CHECK(broken > 0);
}

TEST_CASE("square roots") {
  // sigma = t^2 + 1, l = 1: omega = sigma^2 (dt)^2 (d2t)^2
  EvenForm1D w{3, Z(), P("t^4 + 2*t^2 + 1")};
  auto th = sqrt_even(w);
  CHECK(th.m == 1);
  Form sq = form_mul(to_form(th), to_form(th), CoefficientPolicy::pointwise);
  CHECK(sq == to_form(w));
  // the genuine module product adds only terms with four dt factors
  Terms tt{{th.eta, {{1, 1}, {2, 1}}}};
  CHECK(to_tower(mul(tt, tt, false)) == to_form(w));

  CHECK_THROWS_AS(sqrt_even(EvenForm1D{2, Z(), P("1")}), OddPower);
  CHECK_THROWS_AS(sqrt_even(EvenForm1D{1, Z(), P("t")}), NotAPerfectSquare);
  CHECK_THROWS_AS(sqrt_even(EvenForm1D{1, P("1"), P("1")}), InvalidArgument);
}

TEST_CASE("square roots of random squares") {
  std::mt19937_64 rng(16);
  for (int trial = 0; trial < 40; ++trial) {
    const int l = static_cast<int>(gen::small_int(rng, 0, 3));
    auto sigma = random_poly(rng(), 1, 3);
    if (sigma.is_zero()) continue;
    EvenForm1D w{2 * l + 1, Z(), sigma * sigma};
    auto th = sqrt_even(w);
    CHECK(form_mul(to_form(th), to_form(th), CoefficientPolicy::pointwise) == to_form(w));
  }
}

TEST_CASE("integration operator") {
  auto r = integrate_iab(OddForm1D{2, P("t^2")}, Rational(0), Rational(1));
  CHECK(r.m == 2);
  CHECK(r.phi == CoeffPoly::constant(1, CycScalar(Rational(1, 3))));
  CHECK_THROWS_AS(integrate_iab(OddForm1D{0, P("1")}, Rational(1), Rational(1)), BadInterval);

  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    auto eta = random_poly(rng(), 1, 4);
    auto v = integrate_iab(OddForm1D{0, eta}, Rational(-1), Rational(2)).phi.constant_term();
    auto f = [&](double t) {
      const double p[1] = {t};
      return eta.evaluate(std::span<const double>(p));
    };
    CHECK(v.to_double() == doctest::Approx(gauss_legendre(f, -1.0, 2.0)).epsilon(1e-12));
  }
}

TEST_CASE("unit circle and ellipse lengths") {
  std::vector<NumExpr> circle{NumExpr::parse("cos(t)"), NumExpr::parse("sin(t)")};
  auto r = curve_length(euclid(2), circle, 0.0, 2.0 * std::numbers::pi);
  CHECK(std::fabs(r.length - 2.0 * std::numbers::pi) <= 1e-8);
  CHECK(r.evaluations > 0);

  std::vector<NumExpr> ellipse{NumExpr::parse("2*cos(t)"), NumExpr::parse("sin(t)")};
  auto e = curve_length(euclid(2), ellipse, 0.0, 2.0 * std::numbers::pi);
  auto oracle = gauss_legendre(
      [](double t) { return std::sqrt(4.0 * std::sin(t) * std::sin(t) + std::cos(t) * std::cos(t)); }, 0.0,
      2.0 * std::numbers::pi);
  CHECK(std::fabs(e.length - oracle) <= 1e-8);
}

TEST_CASE("length under a curved metric") {
  auto g = euclid(2);
  g[0][0] = parse_poly("1 + x2^2", 3, 2, {"x1", "x2"});
  std::vector<NumExpr> c{NumExpr::parse("t"), NumExpr::parse("t^2")};
  auto r = curve_length(g, c, 0.0, 1.5);
  auto oracle = gauss_legendre([](double t) { return std::sqrt(1.0 + t * t * t * t + 4.0 * t * t); }, 0.0, 1.5);
  CHECK(std::fabs(r.length - oracle) <= 1e-8);

  auto bad = euclid(2);
  bad[1][1] = parse_poly("-1", 3, 2, {"x1", "x2"});
  CHECK_THROWS_AS(curve_length(bad, c, 0.0, 1.0), NonPositiveMetric);
  CHECK_THROWS_AS(curve_length(euclid(2), c, 1.0, 0.0), BadInterval);
}

TEST_CASE("exact length through the square root") {
  // x' = t^2 - 1, y' = 2t: speed t^2 + 1
  std::vector<CoeffPoly> c{P("1/3*t^3 - t"), P("t^2")};
  auto L = length_exact(euclid(2), c, Rational(0), Rational(3));
  REQUIRE(L.has_value());
  CHECK(*L == Rational(12));
  std::vector<NumExpr> cn{NumExpr::parse("t^3/3 - t"), NumExpr::parse("t^2")};
  CHECK(curve_length(euclid(2), cn, 0.0, 3.0).length == doctest::Approx(12.0).epsilon(1e-10));

  std::vector<CoeffPoly> parabola{P("t"), P("t^2")};
  CHECK_FALSE(length_exact(euclid(2), parabola, Rational(0), Rational(1)).has_value());
}
