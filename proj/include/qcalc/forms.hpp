#pragma once

// The Z_N-graded left module of differential forms on an n-dimensional chart.
//
// A monomial is a word d^{a1}x^{i1} ... d^{ar}x^{ir} with 1 <= a <= N-1; its
// order is a1+...+ar and its grade is the order mod N. Coefficients are
// polynomials written on the left.
//
// Three algebras share one representation:
//   raw        no relations at all; used to build L-polynomials before any
//              relation is imposed.
//   truncated  order-N words obey the r-cyclic relation
//                w = q^{a1} rot(w)
//              and every word of order > N vanishes.
//   free       the cyclic relation is applied to every contiguous window of
//              order N, with no truncation. This is the one-variable tower
//              where powers of d^2 t survive. Only n = 1 is supported.

#include <compare>
#include <map>
#include <string>
#include <vector>

#include "qcalc/symfun.hpp"

namespace qcalc {

enum class Mode { raw, truncated, free };

std::string to_string(Mode m);

struct Algebra {
  int N = 3;
  int n = 1;
  Mode mode = Mode::truncated;

  friend bool operator==(const Algebra&, const Algebra&) = default;
};

/// d^{alpha} x^{index}; index is 1-based.
struct DiffFactor {
  int alpha = 1;
  int index = 1;

  friend auto operator<=>(const DiffFactor&, const DiffFactor&) = default;
};

struct DiffMonomial {
  std::vector<DiffFactor> factors;

  int order() const;
  int grade(int N) const { return order() % N; }
  bool first_order_only() const;

  /// "d2x1*dx3"; "1" for the empty word. `names` overrides x1..xn.
  std::string str(const std::vector<std::string>& names = {}) const;

  friend auto operator<=>(const DiffMonomial&, const DiffMonomial&) = default;
};

/// Result of reducing a word: either zero, or q^{q_exp} times a normal-form
/// monomial.
struct NormalForm {
  bool zero = false;
  long q_exp = 0;
  DiffMonomial mono;
};

/// Throws BadOrder if some factor has alpha outside 1..N-1 and
/// IndexOutOfRange if an index is outside 1..n.
NormalForm normal_form(const Algebra& alg, const std::vector<DiffFactor>& word);

/// How coefficients behave when a product moves them to the left.
enum class CoefficientPolicy {
  /// Coefficients cross first-order differentials only (left-module rule).
  left_module,
  /// Coefficients commute with everything. Used where the algebra is a
  /// formal device for commuting functions (one-variable square roots and
  /// pullbacks), never for the module itself.
  pointwise,
};

class Form {
 public:
  explicit Form(Algebra alg = {}) : alg_(alg) {}

  static Form function(Algebra alg, const CoeffPoly& f);
  /// coeff * word, with the word reduced to normal form.
  static Form word(Algebra alg, const std::vector<DiffFactor>& w, const CoeffPoly& coeff);
  static Form word(Algebra alg, const std::vector<DiffFactor>& w);
  /// d^{alpha} x^{index}.
  static Form differential(Algebra alg, int alpha, int index);

  const Algebra& algebra() const { return alg_; }
  const std::map<DiffMonomial, CoeffPoly>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  /// Coefficient of a normal-form monomial (zero polynomial if absent).
  CoeffPoly coefficient(const DiffMonomial& m) const;

  /// Adds coeff * mono; mono must already be in normal form.
  void add_term(const DiffMonomial& mono, const CoeffPoly& coeff);

  /// Grade if all terms share one, else -1. The zero form reports 0.
  int homogeneous_grade() const;

  Form operator-() const;
  Form& operator+=(const Form& o);
  Form& operator-=(const Form& o);
  Form& operator*=(const CycScalar& c);
  friend Form operator+(Form a, const Form& b) { return a += b; }
  friend Form operator-(Form a, const Form& b) { return a -= b; }
  friend Form operator*(const CycScalar& c, Form a) { return a *= c; }
  friend Form operator*(Form a, const CycScalar& c) { return a *= c; }
  /// Left multiplication by a function; always allowed in a left module.
  friend Form operator*(const CoeffPoly& f, const Form& a);
  friend bool operator==(const Form& a, const Form& b);

  /// Lists "coeff ⊗ monomial" pairs in canonical monomial order.
  std::string str(const std::vector<std::string>& names = {}) const;

 private:
  Algebra alg_;
  std::map<DiffMonomial, CoeffPoly> terms_;
};

/// Product of two forms over the same algebra. Under the left-module policy a
/// non-constant right coefficient may only cross a first-order-only left
/// monomial; otherwise NonCommutativeCoefficient is thrown.
Form form_mul(const Form& a, const Form& b,
              CoefficientPolicy policy = CoefficientPolicy::left_module);

/// The q-Leibniz exterior differential. d(d^{N-1}x) = 0.
Form exterior_d(const Form& a);

/// Applies exterior_d k times.
Form exterior_d_pow(const Form& a, int k);

/// Re-expresses a form in another algebra over the same N and n by reducing
/// every monomial there (e.g. raw -> truncated).
Form reduce_in(const Form& a, const Algebra& target);

/// All normal-form monomials of order 1..max_order in `alg`, sorted.
std::vector<DiffMonomial> enumerate_monomials(const Algebra& alg, int max_order);

/// Independent monomials of degree 1, 2, 3 in the truncated N = 3 algebra.
/// Throws UnsupportedN when N != 3.
std::vector<DiffMonomial> basis_enumerate(int n, int N = 3);

/// (n^3 + 6n^2 + 5n) / 3. Throws UnsupportedN when N != 3.
long module_dimension(int n, int N = 3);

}  // namespace qcalc
