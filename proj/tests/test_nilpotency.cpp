#include <algorithm>
#include <numeric>

#include "doctest.h"
#include "qcalc/error.hpp"
#include "qcalc/nilpotency.hpp"
#include "qcalc/parse.hpp"

using namespace qcalc;

namespace {

CycScalar q(int N, long k = 1) { return CycScalar::q_power(N, k); }

// Symmetrized word: average over all orderings of the index slots, the
// differential orders staying in place.
Form sym_word(const Algebra& alg, const std::vector<int>& alphas, const std::vector<int>& idx) {
  std::vector<int> perm(idx.size());
  std::iota(perm.begin(), perm.end(), 0);
  Form out(alg);
  long count = 0;
  do {
    std::vector<DiffFactor> w;
    for (std::size_t s = 0; s < idx.size(); ++s) w.push_back({alphas[s], idx[perm[s]]});
    out += Form::word(alg, w);
    ++count;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return out * CycScalar(Rational(1, count));
}

}  // namespace

TEST_CASE("low L-polynomials match their displayed forms") {
  for (int N : {3, 4, 5}) {
    Algebra raw{N, 3, Mode::raw};
    for (auto [i, j] : {std::pair{1, 2}, std::pair{2, 2}, std::pair{3, 1}}) {
      CHECK(l_poly(N, 3, 2, {i, j}) == sym_word(raw, {1, 1}, {i, j}));
      Form l3 = sym_word(raw, {2, 1}, {i, j}) + sym_word(raw, {1, 2}, {i, j}) * (CycScalar(1L) + q(N));
      CHECK(l_poly(N, 3, 3, {i, j}) == l3);
    }
  }
  for (int N : {4, 5}) {
    Algebra raw{N, 3, Mode::raw};
    const CycScalar c2 = CycScalar(1L) + q(N), c3 = c2 + q(N, 2);
    for (auto [i, j] : {std::pair{1, 2}, std::pair{3, 3}}) {
      Form l4 = sym_word(raw, {3, 1}, {i, j}) + sym_word(raw, {2, 2}, {i, j}) * c3 +
                sym_word(raw, {1, 3}, {i, j}) * c3;
      CHECK(l_poly(N, 3, 4, {i, j}) == l4);
    }
    Form l4 = sym_word(raw, {2, 1, 1}, {1, 2, 3}) + sym_word(raw, {1, 2, 1}, {1, 2, 3}) * c2 +
              sym_word(raw, {1, 1, 2}, {1, 2, 3}) * c3;
    CHECK(l_poly(N, 3, 4, {1, 2, 3}) == l4);
  }
  CHECK(l_poly(3, 2, 2, {1}) == Form::differential(Algebra{3, 2, Mode::raw}, 2, 1));
  CHECK(l_poly(3, 2, 3, {1}).is_zero());
  CHECK_THROWS_AS(l_poly(3, 3, 2, {1, 2, 3}), BadIndexCount);
  CHECK_THROWS_AS(l_poly(3, 3, 2, {}), BadIndexCount);
}

TEST_CASE("L-polynomials are homogeneous of order k") {
  for (int k = 1; k <= 4; ++k)
    for (int m = 1; m <= k; ++m)
      for (const auto& I : multisets(2, m)) {
        Form l = l_poly(5, 2, k, I);
        for (const auto& [mono, c] : l.terms()) CHECK(mono.order() == k);
      }
}

TEST_CASE("dk_expand low orders") {
  auto f = parse_poly("x1^3*x2 - 2*x2^2 + x1", 3, 2);
  Algebra raw{3, 2, Mode::raw};
  Form d1(raw), d2(raw);
  for (int i = 1; i <= 2; ++i) {
    d1 += Form::word(raw, {{1, i}}, f.partial(i - 1));
    d2 += Form::word(raw, {{2, i}}, f.partial(i - 1));
    for (int j = 1; j <= 2; ++j) d2 += f.partial(i - 1).partial(j - 1) * sym_word(raw, {1, 1}, {i, j});
  }
  CHECK(dk_expand(f, 3, 1) == d1);
  CHECK(dk_expand(f, 3, 2) == d2);
}

TEST_CASE("dk_expand equals iterated d in the raw algebra") {
  for (int N : {3, 4}) {
    for (int n = 1; n <= 3; ++n) {
      for (std::uint64_t s = 0; s < 5; ++s) {
        auto f = random_poly(trial_seed(s, n), n, 4);
        for (int k = 1; k <= N; ++k)
          CHECK(dk_expand(f, N, k) == exterior_d_pow(Form::function(Algebra{N, n, Mode::raw}, f), k));
      }
    }
  }
}

TEST_CASE("d^N f = 0 examples") {
  Algebra t3{3, 2, Mode::truncated};
  CHECK(exterior_d_pow(Form::function(t3, parse_poly("x1*x2", 3, 2)), 3).is_zero());
  CHECK(exterior_d(Form::function(t3, parse_poly("5/7", 3, 2))).is_zero());
  auto cube = parse_poly("x1^3", 4, 1);
  CHECK(dk_expand(cube, 4, 4, Mode::truncated).is_zero());
  CHECK(exterior_d_pow(Form::function(Algebra{4, 1, Mode::truncated}, cube), 4).is_zero());
  // without the relations d^3 (x1 x2) is not zero
  CHECK_FALSE(exterior_d_pow(Form::function(Algebra{3, 2, Mode::raw}, parse_poly("x1*x2", 3, 2)), 3).is_zero());
}

TEST_CASE("verify_dN_zero reports") {
  auto rep = verify_dN_zero(3, 2, 6, 1);
  CHECK(rep.all_pass());
  CHECK(rep.checks.size() == 12);
  auto serial = verify_dN_zero(3, 2, 6, 1, 4, Execution::serial);
  CHECK(serial.to_json() == rep.to_json());
  CHECK(verify_dN_zero(4, 1, 3, 2).all_pass());
}

TEST_CASE("the cyclic relations solve every condition") {
  auto r3 = verify_l_conditions(3, 3);
  CHECK(r3.all_pass());
  CHECK(r3.checks.size() == 10 + 6 + 3);
  auto r4 = verify_l_conditions(4, 2);
  CHECK(r4.all_pass());
  // without the relations the ternary condition is not zero
  Form l = l_poly(3, 3, 3, {1, 2, 3});
  CHECK_FALSE(l.is_zero());
  CHECK_FALSE(reduce_in(l_poly(3, 2, 3, {1, 2}), Algebra{3, 2, Mode::raw}).is_zero());
}

TEST_CASE("multisets") {
  CHECK(multisets(2, 2) == std::vector<std::vector<int>>{{1, 1}, {1, 2}, {2, 2}});
  CHECK(multisets(3, 3).size() == 10);
}
