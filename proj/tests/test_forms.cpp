#include <algorithm>
#include <random>
#include <set>

#include "doctest.h"
#include "qcalc/error.hpp"
#include "qcalc/forms.hpp"
#include "qcalc/parse.hpp"

using namespace qcalc;

namespace {

using Word = std::vector<DiffFactor>;

CycScalar q(int N, long k = 1) { return CycScalar::q_power(N, k); }
CoeffPoly one(int n) { return CoeffPoly::constant(n, CycScalar(1L)); }

Word rotate(const Word& w) {
  Word r(w.begin() + 1, w.end());
  r.push_back(w.front());
  return r;
}

// Oracle: apply w = q^{a1} rot(w) one step at a time and keep the least word.
std::pair<Word, long> rotation_oracle(const Word& w) {
  Word cur = w, best = w;
  long phase = 0, best_phase = 0;
  for (std::size_t s = 1; s < w.size(); ++s) {
    phase += cur.front().alpha;
    cur = rotate(cur);
    if (cur < best) {
      best = cur;
      best_phase = phase;
    }
  }
  return {best, best_phase};
}

Word random_word(std::mt19937_64& rng, int N, int n, int order) {
  Word w;
  int left = order;
  while (left > 0) {
    int a = 1 + static_cast<int>(rng() % static_cast<unsigned>(std::min(N - 1, left)));
    w.push_back({a, 1 + static_cast<int>(rng() % static_cast<unsigned>(n))});
    left -= a;
  }
  return w;
}

}  // namespace

TEST_CASE("normal form examples, N = 3") {
  Algebra alg{3, 3, Mode::truncated};
  auto a = normal_form(alg, {{1, 1}, {1, 2}, {1, 3}});
  CHECK_FALSE(a.zero);
  CHECK(a.q_exp == 0);
  CHECK(a.mono.str() == "dx1*dx2*dx3");

  Word w{{1, 2}, {1, 3}, {1, 1}};
  auto b = normal_form(alg, w);
  auto [oword, ophase] = rotation_oracle(w);
  CHECK(b.mono.factors == oword);
  CHECK(b.q_exp % 3 == ophase % 3);
  CHECK(b.q_exp % 3 == 2);

  CHECK(normal_form(alg, {{1, 1}, {1, 1}, {1, 1}}).zero);
  CHECK(normal_form(alg, {{1, 1}, {1, 1}, {1, 2}, {1, 2}}).zero);
  CHECK_THROWS_AS(normal_form(alg, {{3, 1}}), BadOrder);
  CHECK_THROWS_AS(normal_form(alg, {{1, 4}}), IndexOutOfRange);
}

TEST_CASE("normal form agrees with the rotation oracle") {
  std::mt19937_64 rng(99);
  for (int N : {3, 4, 5}) {
    Algebra alg{N, 3, Mode::truncated};
    for (int t = 0; t < 200; ++t) {
      Word w = random_word(rng, N, 3, N);
      auto nf = normal_form(alg, w);
      auto [oword, ophase] = rotation_oracle(w);
      if (nf.zero) {
        // a zero word is periodic with a nontrivial phase
        Word cur = w;
        long phase = 0;
        bool found = false;
        for (std::size_t s = 1; s < w.size(); ++s) {
          phase += cur.front().alpha;
          cur = rotate(cur);
          if (cur == w) {
            found = phase % N != 0;
            break;
          }
        }
        CHECK(found);
      } else {
        CHECK(nf.mono.factors == oword);
        CHECK((nf.q_exp - ophase) % N == 0);
      }
    }
  }
}

TEST_CASE("rotating through all positions returns the phase q^N = 1") {
  std::mt19937_64 rng(7);
  for (int N : {3, 4}) {
    Algebra alg{N, 2, Mode::truncated};
    for (int t = 0; t < 100; ++t) {
      Word w = random_word(rng, N, 2, N);
      auto base = normal_form(alg, w);
      Word cur = w;
      long prefix = 0;
      for (std::size_t s = 1; s <= w.size(); ++s) {
        prefix += cur.front().alpha;
        cur = rotate(cur);
        auto r = normal_form(alg, cur);
        CHECK(r.zero == base.zero);
        if (!base.zero) {
          CHECK(r.mono == base.mono);
          CHECK(q(N, base.q_exp) == q(N, prefix + r.q_exp));
        }
      }
      CHECK(prefix == N);
    }
  }
}

TEST_CASE("products") {
  Algebra alg{3, 2, Mode::truncated};
  auto f = parse_poly("x1 + 2", 3, 2), g = parse_poly("x2^2", 3, 2);
  Form a = Form::word(alg, {{1, 1}}, f), b = Form::word(alg, {{1, 2}}, g);
  CHECK(form_mul(a, b) == Form::word(alg, {{1, 1}, {1, 2}}, f * g));
  Form c = Form::word(alg, {{2, 1}}, f);
  CHECK_THROWS_AS(form_mul(c, b), NonCommutativeCoefficient);
  CHECK_NOTHROW(form_mul(c, Form::word(alg, {{1, 2}})));
  CHECK_THROWS_AS(form_mul(a, Form(Algebra{3, 2, Mode::raw})), MismatchedAlgebra);
}

TEST_CASE("free one-variable tower: square of q^{-l} sigma dt (d2t)^l") {
  Algebra alg{3, 1, Mode::free};
  auto t = CoeffPoly::variable(1, 0);
  for (int l = 0; l <= 3; ++l) {
    Word w{{1, 1}};
    for (int k = 0; k < l; ++k) w.push_back({2, 1});
    for (const CoeffPoly& sigma : {t * t + one(1), one(1) * CycScalar(3L)}) {
      Form theta = Form::word(alg, w, sigma * q(3, -l));
      Word sq{{1, 1}, {1, 1}};
      for (int k = 0; k < 2 * l; ++k) sq.push_back({2, 1});
      Form expect = Form::word(alg, sq, sigma * sigma);
      CHECK(form_mul(theta, theta, CoefficientPolicy::pointwise) == expect);
      if (sigma.is_constant()) CHECK(form_mul(theta, theta) == expect);
    }
  }
  // moving dt left past d2t collects q^{-1}
  auto nf = normal_form(alg, {{2, 1}, {1, 1}});
  CHECK(nf.mono.str() == "dx1*d2x1");
  CHECK(q(3, nf.q_exp) == q(3, -1));
  CHECK(normal_form(alg, {{1, 1}, {1, 1}, {1, 1}}).zero);
  CHECK_THROWS_AS(normal_form(Algebra{3, 2, Mode::free}, {{1, 1}}), InvalidArgument);
}

TEST_CASE("exterior differential basics") {
  Algebra alg{3, 2, Mode::truncated};
  Form x1 = Form::function(alg, CoeffPoly::variable(2, 0));
  CHECK(exterior_d(x1) == Form::differential(alg, 1, 1));
  CHECK(exterior_d(Form::differential(alg, 1, 1)) == Form::differential(alg, 2, 1));
  CHECK(exterior_d(Form::differential(alg, 2, 1)).is_zero());

  Algebra one_d{3, 1, Mode::free};
  Form dt2 = Form::word(one_d, {{1, 1}, {1, 1}});
  CHECK(exterior_d(dt2) == -Form::word(one_d, {{1, 1}, {2, 1}}));
  // d(t^2) = 2t dt, d^2 = 2 dt dt + 2t d2t, d^3 = 2(1 + q + q^2) dt d2t = 0
  Form f = Form::function(one_d, parse_poly("t^2", 3, 1, {"t"}));
  CHECK(exterior_d(f) == Form::word(one_d, {{1, 1}}, parse_poly("2*t", 3, 1, {"t"})));
  CHECK(exterior_d_pow(f, 3).is_zero());
}

TEST_CASE("quotient consistency and grading") {
  std::mt19937_64 rng(3);
  for (int N : {3, 4}) {
    Algebra raw{N, 2, Mode::raw}, trunc{N, 2, Mode::truncated};
    for (int t = 0; t < 50; ++t) {
      Word w = random_word(rng, N, 2, N);
      Form diff = Form::word(raw, w) - Form::word(raw, rotate(w)) * q(N, w.front().alpha);
      CHECK(reduce_in(diff, trunc).is_zero());
      CHECK(reduce_in(exterior_d(diff), trunc).is_zero());
      Word shorter = random_word(rng, N, 2, 1 + static_cast<int>(rng() % (N - 1)));
      Form a = Form::word(trunc, shorter, parse_poly("x1*x2 + 1", N, 2));
      const int g = a.homogeneous_grade();
      Form da = exterior_d(a);
      if (!da.is_zero()) CHECK(da.homogeneous_grade() == (g + 1) % N);
    }
  }
}

TEST_CASE("q-Leibniz rule where products are defined") {
  std::mt19937_64 rng(11);
  int checked = 0;
  for (int N : {3, 4}) {
    Algebra alg{N, 2, Mode::truncated};
    for (int t = 0; t < 200; ++t) {
      const int oa = 1 + static_cast<int>(rng() % (N - 1));
      const int ob = 1 + static_cast<int>(rng() % (N - 1));
      Word wa = random_word(rng, N, 2, oa), wb = random_word(rng, N, 2, ob);
      auto fa = random_poly(rng(), 2, 2), fb = random_poly(rng(), 2, 2);
      if (rng() % 2) fb = CoeffPoly::constant(2, CycScalar(static_cast<long>(rng() % 5) + 1));
      Form a = Form::word(alg, wa, fa), b = Form::word(alg, wb, fb);
      Form lhs(alg), rhs(alg);
      try {
        lhs = exterior_d(form_mul(a, b));
        rhs = form_mul(exterior_d(a), b) + form_mul(a, exterior_d(b)) * q(N, a.homogeneous_grade());
      } catch (const NonCommutativeCoefficient&) {
        continue;
      }
      CHECK(lhs == rhs);
      ++checked;
    }
  }
  CHECK(checked > 100);
}

TEST_CASE("module basis for N = 3") {
  CHECK(basis_enumerate(1).size() == 4);
  CHECK(basis_enumerate(2).size() == 14);
  for (int n = 1; n <= 6; ++n)
    CHECK(static_cast<long>(basis_enumerate(n).size()) == module_dimension(n));
  CHECK(module_dimension(3) == 32);
  CHECK_THROWS_AS(basis_enumerate(2, 4), UnsupportedN);
  CHECK_THROWS_AS(module_dimension(2, 4), UnsupportedN);

  // brute force for n = 3: count rotation classes by hand
  const int n = 3;
  std::set<Word> classes;
  long count = 0;
  for (int i = 1; i <= n; ++i) {
    count += 1;  // dx^i
    count += 1;  // d2x^i
    for (int j = 1; j <= n; ++j) {
      count += 1;  // dx^i dx^j
      Word w{{1, i}, {2, j}};
      classes.insert(std::min(w, rotate(w)));
      for (int k = 1; k <= n; ++k) {
        if (i == j && j == k) continue;
        Word u{{1, i}, {1, j}, {1, k}};
        classes.insert(std::min({u, rotate(u), rotate(rotate(u))}));
      }
    }
  }
  count += static_cast<long>(classes.size());
  CHECK(count == 32);

  std::vector<std::string> names;
  for (const auto& m : basis_enumerate(2)) names.push_back(m.str());
  std::vector<std::string> expect{"dx1", "dx1*dx1", "dx1*dx1*dx2", "dx1*dx2", "dx1*dx2*dx2",
                                  "dx1*d2x1", "dx1*d2x2", "dx2", "dx2*dx1", "dx2*dx2",
                                  "dx2*d2x1", "dx2*d2x2", "d2x1", "d2x2"};
  CHECK(names == expect);
}

TEST_CASE("printing") {
  Algebra alg{4, 3, Mode::truncated};
  Form f = Form::word(alg, {{2, 1}, {1, 3}}, parse_poly("2*x1", 4, 3));
  CHECK(f.str() == "(2*x1) ⊗ d2x1*dx3");
  CHECK(Form(alg).str() == "0");
}
