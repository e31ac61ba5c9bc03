#pragma once

// The one-variable N = 3 calculus: forms
//   even  phi (d2t)^m + psi (dt)^2 (d2t)^{m-1}
//   odd   eta dt (d2t)^m
// with coefficient polynomials in t, their differentials, pullbacks,
// square roots, the integration operator and curve length.

#include <optional>
#include <vector>

#include "qcalc/forms.hpp"
#include "qcalc/parse.hpp"

namespace qcalc {

struct EvenForm1D {
  int m = 0;
  CoeffPoly phi{1};
  CoeffPoly psi{1};  // must be zero when m == 0

  friend bool operator==(const EvenForm1D&, const EvenForm1D&) = default;
};

struct OddForm1D {
  int m = 0;
  CoeffPoly eta{1};

  friend bool operator==(const OddForm1D&, const OddForm1D&) = default;
};

/// The free one-variable algebra the tower lives in.
Algebra tower_algebra();

Form to_form(const EvenForm1D& w);
Form to_form(const OddForm1D& t);
/// Reads a tower element back; throws NotHomogeneous when the form mixes
/// degrees or is not of the expected parity.
EvenForm1D even_from_form(const Form& f);
OddForm1D odd_from_form(const Form& f);

/// d(omega) = (phi' - psi) dt (d2t)^m.
OddForm1D d1(const EvenForm1D& w);
/// d(theta) = eta' (dt)^2 (d2t)^m + eta (d2t)^{m+1}.
EvenForm1D d1(const OddForm1D& t);

bool is_closed(const EvenForm1D& w);

/// theta = phi dt (d2t)^{m-1}; throws NotClosed when phi' != psi.
OddForm1D primitive(const EvenForm1D& w);

/// Pullback along t = t(tau). Coefficients are moved through d2 tau with the
/// module identity g d2x - d2x g = q (dg dx - q^2 dx dg), which gives
///   eta~ = (t')^{m+1} eta(t),
///   phi~ = (t')^m phi(t),
///   psi~ = m (t')^{m-1} t'' phi(t) + (t')^{m+1} psi(t).
/// This is the law that commutes with d.
OddForm1D pullback(const OddForm1D& t, const CoeffPoly& t_of_tau);
EvenForm1D pullback(const EvenForm1D& w, const CoeffPoly& t_of_tau);

/// The same substitution with coefficients treated as commuting with d2 tau,
/// which replaces m by [m]_q in psi~. Kept for comparison; it agrees with
/// pullback() for m <= 1 only.
EvenForm1D pullback_commuting(const EvenForm1D& w, const CoeffPoly& t_of_tau);

/// theta with theta^2 = omega for omega = sigma^2 (dt)^2 (d2t)^{2l}:
/// theta = q^{-l} sigma dt (d2t)^l. Throws NotAPerfectSquare, OddPower, or
/// InvalidArgument when phi != 0 or m == 0.
OddForm1D sqrt_even(const EvenForm1D& w);

/// (integral_a^b eta dt) (d2t)^m, exactly. Throws BadInterval unless a < b.
EvenForm1D integrate_iab(const OddForm1D& t, const Rational& a, const Rational& b);

/// Exact length I_ab(omega^{1/2}) for a polynomial curve whose speed squared
/// g_ij x'^i x'^j is a perfect square that keeps one sign on [a, b].
/// Returns nullopt otherwise.
std::optional<Rational> length_exact(const std::vector<std::vector<CoeffPoly>>& metric,
                                     const std::vector<CoeffPoly>& curve, const Rational& a,
                                     const Rational& b);

struct LengthResult {
  double length = 0.0;
  double tolerance = 0.0;
  long evaluations = 0;
};

/// Numerical length of x(t), t in [a, b], under the metric g (polynomials in
/// the chart coordinates). Adaptive Simpson to an absolute tolerance. The
/// metric must be positive definite along the curve (Cholesky test at each
/// sample); otherwise NonPositiveMetric.
LengthResult curve_length(const std::vector<std::vector<CoeffPoly>>& metric,
                          const std::vector<NumExpr>& curve, double a, double b,
                          double tolerance = 1e-9);

}  // namespace qcalc
