#include "qcalc/dim1.hpp"

#include <cmath>
#include <functional>

#include "qcalc/error.hpp"

namespace qcalc {

namespace {

constexpr int kN = 3;

CoeffPoly zero1() { return CoeffPoly(1); }

std::vector<DiffFactor> even_word(int m) { return std::vector<DiffFactor>(m, {2, 1}); }

std::vector<DiffFactor> even_psi_word(int m) {
  std::vector<DiffFactor> w{{1, 1}, {1, 1}};
  w.insert(w.end(), m - 1, {2, 1});
  return w;
}

std::vector<DiffFactor> odd_word(int m) {
  std::vector<DiffFactor> w{{1, 1}};
  w.insert(w.end(), m, {2, 1});
  return w;
}

void check_even(const EvenForm1D& w) {
  if (w.m < 0) throw InvalidArgument("negative power of d2t");
  if (w.phi.nvars() != 1 || w.psi.nvars() != 1) throw MismatchedArity("tower coefficients take one variable");
  if (w.m == 0 && !w.psi.is_zero()) throw InvalidArgument("psi must vanish when m = 0");
}

void check_odd(const OddForm1D& t) {
  if (t.m < 0) throw InvalidArgument("negative power of d2t");
  if (t.eta.nvars() != 1) throw MismatchedArity("tower coefficients take one variable");
}

CycScalar q_int(int m) {
  CycScalar s(0L);
  for (int k = 0; k < m; ++k) s += CycScalar::q_power(kN, k);
  return s;
}

CoeffPoly after(const CoeffPoly& f, const CoeffPoly& t_of_tau) {
  std::vector<CoeffPoly> sub{t_of_tau};
  return f.substitute(sub);
}

CoeffPoly after_all(const CoeffPoly& f, const std::vector<CoeffPoly>& curve) {
  if (f.nvars() != static_cast<int>(curve.size())) throw MismatchedArity("metric entries take the chart coordinates");
  return f.substitute(curve);
}

EvenForm1D pullback_with(const EvenForm1D& w, const CoeffPoly& t_of_tau, const CycScalar& c_m) {
  check_even(w);
  if (t_of_tau.nvars() != 1) throw MismatchedArity("reparametrisation takes one variable");
  const CoeffPoly t1 = t_of_tau.partial(0);
  const CoeffPoly t2 = t1.partial(0);
  const CoeffPoly phi = after(w.phi, t_of_tau);
  EvenForm1D out{w.m, t1.pow(w.m) * phi, zero1()};
  if (w.m > 0) out.psi = c_m * t1.pow(w.m - 1) * t2 * phi + t1.pow(w.m + 1) * after(w.psi, t_of_tau);
  return out;
}

}  // namespace

Algebra tower_algebra() { return Algebra{kN, 1, Mode::free}; }

Form to_form(const EvenForm1D& w) {
  check_even(w);
  const Algebra alg = tower_algebra();
  Form f = Form::word(alg, even_word(w.m), w.phi);
  if (w.m > 0) f += Form::word(alg, even_psi_word(w.m), w.psi);
  return f;
}

Form to_form(const OddForm1D& t) {
  check_odd(t);
  return Form::word(tower_algebra(), odd_word(t.m), t.eta);
}

EvenForm1D even_from_form(const Form& f) {
  if (!(f.algebra() == tower_algebra())) throw MismatchedAlgebra("not a tower form");
  if (f.is_zero()) return {};
  int m = -1;
  EvenForm1D out{0, zero1(), zero1()};
  for (const auto& [mono, c] : f.terms()) {
    int mm = -1;
    bool is_psi = false;
    if (mono.factors == even_word(static_cast<int>(mono.factors.size()))) {
      mm = static_cast<int>(mono.factors.size());
    } else if (mono.factors.size() >= 2 && mono.factors == even_psi_word(static_cast<int>(mono.factors.size()) - 1)) {
      mm = static_cast<int>(mono.factors.size()) - 1;
      is_psi = true;
    } else {
      throw NotHomogeneous("monomial " + mono.str({"t"}) + " is not even");
    }
    if (m != -1 && mm != m) throw NotHomogeneous("mixed powers of d2t");
    m = mm;
    (is_psi ? out.psi : out.phi) = c;
  }
  out.m = m;
  return out;
}

OddForm1D odd_from_form(const Form& f) {
  if (!(f.algebra() == tower_algebra())) throw MismatchedAlgebra("not a tower form");
  if (f.is_zero()) return {0, zero1()};
  if (f.terms().size() != 1) throw NotHomogeneous("odd tower forms have one monomial");
  const auto& [mono, c] = *f.terms().begin();
  const int m = static_cast<int>(mono.factors.size()) - 1;
  if (m < 0 || mono.factors != odd_word(m)) throw NotHomogeneous("monomial " + mono.str({"t"}) + " is not odd");
  return {m, c};
}

OddForm1D d1(const EvenForm1D& w) {
  check_even(w);
  return {w.m, w.phi.partial(0) - w.psi};
}

EvenForm1D d1(const OddForm1D& t) {
  check_odd(t);
  return {t.m + 1, t.eta, t.eta.partial(0)};
}

bool is_closed(const EvenForm1D& w) {
  check_even(w);
  return w.phi.partial(0) == w.psi;
}

OddForm1D primitive(const EvenForm1D& w) {
  if (!is_closed(w)) throw NotClosed("phi' != psi");
  if (w.m == 0) throw InvalidArgument("a closed function has no primitive in the tower");
  return {w.m - 1, w.phi};
}

OddForm1D pullback(const OddForm1D& t, const CoeffPoly& t_of_tau) {
  check_odd(t);
  if (t_of_tau.nvars() != 1) throw MismatchedArity("reparametrisation takes one variable");
  const CoeffPoly t1 = t_of_tau.partial(0);
  return {t.m, t1.pow(t.m + 1) * after(t.eta, t_of_tau)};
}

EvenForm1D pullback(const EvenForm1D& w, const CoeffPoly& t_of_tau) {
  return pullback_with(w, t_of_tau, CycScalar(static_cast<long>(w.m)));
}

EvenForm1D pullback_commuting(const EvenForm1D& w, const CoeffPoly& t_of_tau) {
  return pullback_with(w, t_of_tau, q_int(w.m));
}

OddForm1D sqrt_even(const EvenForm1D& w) {
  check_even(w);
  if (!w.phi.is_zero()) throw InvalidArgument("square roots need phi = 0");
  if (w.m == 0) throw InvalidArgument("square roots need a (dt)^2 factor");
  if ((w.m - 1) % 2 != 0) throw OddPower("power of d2t is odd");
  const int l = (w.m - 1) / 2;
  auto sigma = poly_sqrt(w.psi);
  if (!sigma) throw NotAPerfectSquare("psi = " + w.psi.str({"t"}));
  return {l, *sigma * CycScalar::q_power(kN, -l)};
}

EvenForm1D integrate_iab(const OddForm1D& t, const Rational& a, const Rational& b) {
  check_odd(t);
  if (!(a < b)) throw BadInterval("need a < b");
  const CoeffPoly F = t.eta.antiderivative(0);
  const CycScalar pa[1] = {CycScalar(a)};
  const CycScalar pb[1] = {CycScalar(b)};
  const CycScalar v = F.evaluate(pb) - F.evaluate(pa);
  return {t.m, CoeffPoly::constant(1, v), zero1()};
}

std::optional<Rational> length_exact(const std::vector<std::vector<CoeffPoly>>& metric,
                                     const std::vector<CoeffPoly>& curve, const Rational& a,
                                     const Rational& b) {
  const std::size_t n = curve.size();
  if (metric.size() != n) throw MismatchedArity("metric and curve dimensions differ");
  if (!(a < b)) throw BadInterval("need a < b");
  std::vector<CoeffPoly> vel;
  for (const auto& c : curve) {
    if (c.nvars() != 1) throw MismatchedArity("curve components take one variable");
    vel.push_back(c.partial(0));
  }
  CoeffPoly speed2 = zero1();
  for (std::size_t i = 0; i < n; ++i) {
    if (metric[i].size() != n) throw MismatchedArity("metric is not square");
    for (std::size_t j = 0; j < n; ++j) speed2 += after_all(metric[i][j], curve) * vel[i] * vel[j];
  }
  EvenForm1D omega{1, zero1(), speed2};
  OddForm1D theta;
  try {
    theta = sqrt_even(omega);
  } catch (const NotAPerfectSquare&) {
    return std::nullopt;
  }
  for (const auto& [e, c] : theta.eta.terms())
    if (!c.is_rational()) return std::nullopt;
  // sigma has to keep one sign on [a, b]; sampled, not proven
  const double da = a.get_d(), db = b.get_d();
  int sign = 0;
  for (int k = 0; k <= 512; ++k) {
    const double t = da + (db - da) * k / 512.0;
    const double pt[1] = {t};
    const double v = theta.eta.evaluate(std::span<const double>(pt));
    const int s = v > 1e-14 ? 1 : (v < -1e-14 ? -1 : 0);
    if (s == 0) continue;
    if (sign != 0 && s != sign) return std::nullopt;
    sign = s;
  }
  Rational val = integrate_iab(theta, a, b).phi.constant_term().rational_value();
  return sign < 0 ? Rational(-val) : val;
}

namespace {

bool positive_definite(const std::vector<double>& g, std::size_t n) {
  std::vector<double> L(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      double s = 0.5 * (g[i * n + j] + g[j * n + i]);
      for (std::size_t k = 0; k < j; ++k) s -= L[i * n + k] * L[j * n + k];
      if (i == j) {
        if (!(s > 0.0)) return false;
        L[i * n + i] = std::sqrt(s);
      } else {
        L[i * n + j] = s / L[j * n + j];
      }
    }
  }
  return true;
}

}  // namespace

LengthResult curve_length(const std::vector<std::vector<CoeffPoly>>& metric,
                          const std::vector<NumExpr>& curve, double a, double b, double tolerance) {
  const std::size_t n = curve.size();
  if (n == 0) throw InvalidArgument("empty curve");
  if (metric.size() != n) throw MismatchedArity("metric and curve dimensions differ");
  for (const auto& row : metric) {
    if (row.size() != n) throw MismatchedArity("metric is not square");
    for (const auto& g : row)
      if (g.nvars() != static_cast<int>(n)) throw MismatchedArity("metric entries take the chart coordinates");
  }
  if (!(a < b) || !std::isfinite(a) || !std::isfinite(b)) throw BadInterval("need finite a < b");
  if (!(tolerance > 0.0)) throw InvalidArgument("tolerance must be positive");

  long evals = 0;
  std::vector<double> x(n), v(n), g(n * n);
  auto speed = [&](double t) {
    ++evals;
    const double tt[1] = {t};
    for (std::size_t i = 0; i < n; ++i) {
      Dual d = curve[i].eval_dual(tt, 0);
      x[i] = d.v;
      v[i] = d.d;
    }
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) g[i * n + j] = metric[i][j].evaluate(std::span<const double>(x));
    if (!positive_definite(g, n)) throw NonPositiveMetric("metric not positive definite at t = " + std::to_string(t));
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) s += g[i * n + j] * v[i] * v[j];
    if (!std::isfinite(s)) throw NonFiniteState("speed is not finite at t = " + std::to_string(t));
    return std::sqrt(std::max(s, 0.0));
  };

  std::function<double(double, double, double, double, double, double, double, int)> simpson =
      [&](double l, double r, double fl, double fm, double fr, double whole, double tol, int depth) {
        const double m = 0.5 * (l + r);
        const double lm = 0.5 * (l + m), rm = 0.5 * (m + r);
        const double flm = speed(lm), frm = speed(rm);
        const double left = (m - l) / 6.0 * (fl + 4.0 * flm + fm);
        const double right = (r - m) / 6.0 * (fm + 4.0 * frm + fr);
        const double delta = left + right - whole;
        if (depth <= 0 || std::fabs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
        return simpson(l, m, fl, flm, fm, left, 0.5 * tol, depth - 1) +
               simpson(m, r, fm, frm, fr, right, 0.5 * tol, depth - 1);
      };

  // a fixed first subdivision keeps periodic integrands from fooling the
  // error estimate on the first step
  constexpr int panels = 16;
  double total = 0.0;
  const double h = (b - a) / panels;
  double fl = speed(a);
  for (int p = 0; p < panels; ++p) {
    const double l = a + p * h, r = (p + 1 == panels) ? b : a + (p + 1) * h;
    const double fm = speed(0.5 * (l + r)), fr = speed(r);
    const double whole = (r - l) / 6.0 * (fl + 4.0 * fm + fr);
    total += simpson(l, r, fl, fm, fr, whole, tolerance / panels, 40);
    fl = fr;
  }
  return {total, tolerance, evals};
}

}  // namespace qcalc
