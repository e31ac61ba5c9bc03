#pragma once

// Text grammars for configs and reports.
//
// Exact expressions: integers, decimals (read exactly), q, z, variables,
// + - * / ^ and parentheses. "z" is the generator of the field hosting q
// (zeta_{2N} for even N, equal to q for odd N). Division is only allowed by
// nonzero constants. Exponents are non-negative integer literals, except that
// q and z accept negative ones. The Unicode minus sign is accepted.
//
// Numeric expressions (curves): the same operators over doubles plus
// sin, cos, tan, exp, log, sqrt and the constant pi.

#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qcalc/scalar.hpp"
#include "qcalc/symfun.hpp"

namespace qcalc {

/// Default names for an n-variable chart: "x1".."xn".
std::vector<std::string> default_var_names(int nvars);

/// Parses a polynomial over Q(q) for the given N. `names` lists the variable
/// spellings (index = axis); when empty, x1..x{nvars} are used.
CoeffPoly parse_poly(std::string_view text, int N, int nvars,
                     const std::vector<std::string>& names = {});

/// Parses a scalar "a0 + a1*q + a2*q^2" (any expression without variables).
CycScalar parse_scalar(std::string_view text, int N);

/// Value and first derivative, for evaluating a curve and its velocity at once.
struct Dual {
  double v = 0.0;
  double d = 0.0;
};

class NumExpr {
 public:
  struct Node;

  /// `vars` names the free variables, in argument order.
  static NumExpr parse(std::string_view text, const std::vector<std::string>& vars = {"t"});

  double eval(std::span<const double> args) const;
  /// Derivative with respect to argument `wrt`.
  Dual eval_dual(std::span<const double> args, int wrt = 0) const;

 private:
  std::shared_ptr<const Node> root_;
};

}  // namespace qcalc
