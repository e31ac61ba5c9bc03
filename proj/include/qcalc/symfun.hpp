#pragma once

// Coefficient functions: exact multivariate polynomials over CycScalar.
// They stand in for smooth functions on a chart; every identity checked by
// this library is a polynomial identity, so exactness removes tolerances.

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qcalc/scalar.hpp"

namespace qcalc {

using Exponents = std::vector<int>;

class CoeffPoly {
 public:
  explicit CoeffPoly(int nvars = 0) : nvars_(nvars) {}

  static CoeffPoly constant(int nvars, const CycScalar& c);
  /// The coordinate function x^{axis+1}; axis is 0-based.
  static CoeffPoly variable(int nvars, int axis);

  int nvars() const { return nvars_; }
  const std::map<Exponents, CycScalar>& terms() const { return terms_; }

  /// Adds c * x^e, dropping the term if the sum cancels.
  void add_term(const Exponents& e, const CycScalar& c);

  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  CycScalar constant_term() const;
  /// -1 for the zero polynomial.
  int total_degree() const;
  /// Degree in one variable; -1 for zero.
  int degree_in(int axis) const;

  CoeffPoly operator-() const;
  CoeffPoly& operator+=(const CoeffPoly& o);
  CoeffPoly& operator-=(const CoeffPoly& o);
  CoeffPoly& operator*=(const CycScalar& c);
  friend CoeffPoly operator+(CoeffPoly a, const CoeffPoly& b) { return a += b; }
  friend CoeffPoly operator-(CoeffPoly a, const CoeffPoly& b) { return a -= b; }
  friend CoeffPoly operator*(const CoeffPoly& a, const CoeffPoly& b);
  friend CoeffPoly operator*(CoeffPoly a, const CycScalar& c) { return a *= c; }
  friend CoeffPoly operator*(const CycScalar& c, CoeffPoly a) { return a *= c; }
  friend bool operator==(const CoeffPoly& a, const CoeffPoly& b);

  CoeffPoly pow(int e) const;

  /// Formal partial derivative; axis is 0-based.
  CoeffPoly partial(int axis) const;
  /// Antiderivative in one variable (constant of integration 0).
  CoeffPoly antiderivative(int axis) const;

  /// Substitutes x^{i+1} -> subs[i]; all subs share one arity, which becomes
  /// the arity of the result.
  CoeffPoly substitute(std::span<const CoeffPoly> subs) const;

  CycScalar evaluate(std::span<const CycScalar> point) const;
  /// Requires rational coefficients.
  double evaluate(std::span<const double> point) const;

  /// Default variable names are x1..xn.
  std::string str(const std::vector<std::string>& names = {}) const;

 private:
  int nvars_;
  std::map<Exponents, CycScalar> terms_;

  void check_arity(const CoeffPoly& o) const;
};

/// A polynomial change of chart y = forward(x) with polynomial inverse
/// x = inverse(y). Construction verifies both compositions are the identity.
class PolyMap {
 public:
  PolyMap(std::vector<CoeffPoly> forward, std::vector<CoeffPoly> inverse);
  static PolyMap identity(int n);

  int dim() const { return static_cast<int>(forward_.size()); }
  const std::vector<CoeffPoly>& forward() const { return forward_; }
  const std::vector<CoeffPoly>& inverse() const { return inverse_; }

 private:
  std::vector<CoeffPoly> forward_;
  std::vector<CoeffPoly> inverse_;
};

enum class Direction { forward, inverse };

/// compose(f, m, forward) = f(forward(x)); compose(f, m, inverse) = f(inverse(y)).
CoeffPoly compose(const CoeffPoly& f, const PolyMap& m, Direction dir);

/// Deterministic random polynomial of total degree <= maxdeg with small
/// rational coefficients. Stable across platforms for a fixed seed.
CoeffPoly random_poly(std::uint64_t seed, int nvars, int maxdeg);

/// Exact square root of a scalar, if one exists in its field.
std::optional<CycScalar> scalar_sqrt(const CycScalar& c);

/// Exact square root of a univariate polynomial, if it is a perfect square.
std::optional<CoeffPoly> poly_sqrt(const CoeffPoly& p);

}  // namespace qcalc
