#include "qcalc/symfun.hpp"

#include <numeric>
#include <random>
#include <sstream>

#include "qcalc/error.hpp"

namespace qcalc {

CoeffPoly CoeffPoly::constant(int nvars, const CycScalar& c) {
  CoeffPoly p(nvars);
  p.add_term(Exponents(nvars, 0), c);
  return p;
}

CoeffPoly CoeffPoly::variable(int nvars, int axis) {
  if (axis < 0 || axis >= nvars) throw AxisOutOfRange("axis " + std::to_string(axis + 1));
  CoeffPoly p(nvars);
  Exponents e(nvars, 0);
  e[axis] = 1;
  p.add_term(e, CycScalar(1L));
  return p;
}

void CoeffPoly::add_term(const Exponents& e, const CycScalar& c) {
  if (static_cast<int>(e.size()) != nvars_) throw MismatchedArity("exponent length");
  if (c.is_zero()) return;
  auto [it, inserted] = terms_.try_emplace(e, c);
  if (inserted) return;
  it->second += c;
  if (it->second.is_zero()) terms_.erase(it);
}

bool CoeffPoly::is_constant() const {
  if (terms_.empty()) return true;
  if (terms_.size() > 1) return false;
  const auto& e = terms_.begin()->first;
  return std::all_of(e.begin(), e.end(), [](int v) { return v == 0; });
}

CycScalar CoeffPoly::constant_term() const {
  auto it = terms_.find(Exponents(nvars_, 0));
  return it == terms_.end() ? CycScalar() : it->second;
}

int CoeffPoly::total_degree() const {
  int d = -1;
  for (const auto& [e, c] : terms_) d = std::max(d, std::accumulate(e.begin(), e.end(), 0));
  return d;
}

int CoeffPoly::degree_in(int axis) const {
  int d = -1;
  for (const auto& [e, c] : terms_) d = std::max(d, e[axis]);
  return d;
}

void CoeffPoly::check_arity(const CoeffPoly& o) const {
  if (o.nvars_ != nvars_)
    throw MismatchedArity(std::to_string(nvars_) + " vs " + std::to_string(o.nvars_) + " variables");
}

CoeffPoly CoeffPoly::operator-() const {
  CoeffPoly r = *this;
  for (auto& [e, c] : r.terms_) c = -c;
  return r;
}

CoeffPoly& CoeffPoly::operator+=(const CoeffPoly& o) {
  check_arity(o);
  for (const auto& [e, c] : o.terms_) add_term(e, c);
  return *this;
}

CoeffPoly& CoeffPoly::operator-=(const CoeffPoly& o) {
  check_arity(o);
  for (const auto& [e, c] : o.terms_) add_term(e, -c);
  return *this;
}

CoeffPoly& CoeffPoly::operator*=(const CycScalar& c) {
  if (c.is_zero()) {
    terms_.clear();
    return *this;
  }
  for (auto& [e, v] : terms_) v *= c;
  return *this;
}

CoeffPoly operator*(const CoeffPoly& a, const CoeffPoly& b) {
  a.check_arity(b);
  CoeffPoly out(a.nvars_);
  Exponents e(a.nvars_);
  for (const auto& [ea, ca] : a.terms_) {
    for (const auto& [eb, cb] : b.terms_) {
      for (int i = 0; i < a.nvars_; ++i) e[i] = ea[i] + eb[i];
      out.add_term(e, ca * cb);
    }
  }
  return out;
}

bool operator==(const CoeffPoly& a, const CoeffPoly& b) {
  if (a.nvars_ != b.nvars_ || a.terms_.size() != b.terms_.size()) return false;
  auto ib = b.terms_.begin();
  for (const auto& [e, c] : a.terms_) {
    if (e != ib->first || !(c == ib->second)) return false;
    ++ib;
  }
  return true;
}

CoeffPoly CoeffPoly::pow(int e) const {
  if (e < 0) throw InvalidArgument("negative polynomial power");
  CoeffPoly result = constant(nvars_, CycScalar(1L)), base = *this;
  while (e > 0) {
    if (e & 1) result = result * base;
    e >>= 1;
    if (e) base = base * base;
  }
  return result;
}

CoeffPoly CoeffPoly::partial(int axis) const {
  if (axis < 0 || axis >= nvars_) throw AxisOutOfRange("axis " + std::to_string(axis + 1));
  CoeffPoly out(nvars_);
  for (const auto& [e, c] : terms_) {
    if (e[axis] == 0) continue;
    Exponents f = e;
    --f[axis];
    out.add_term(f, c * CycScalar(static_cast<long>(e[axis])));
  }
  return out;
}

CoeffPoly CoeffPoly::antiderivative(int axis) const {
  if (axis < 0 || axis >= nvars_) throw AxisOutOfRange("axis " + std::to_string(axis + 1));
  CoeffPoly out(nvars_);
  for (const auto& [e, c] : terms_) {
    Exponents f = e;
    ++f[axis];
    out.add_term(f, c * CycScalar(Rational(1, f[axis])));
  }
  return out;
}

CoeffPoly CoeffPoly::substitute(std::span<const CoeffPoly> subs) const {
  if (static_cast<int>(subs.size()) != nvars_) throw MismatchedArity("substitution length");
  const int m = subs.empty() ? 0 : subs[0].nvars();
  for (const auto& s : subs) s.check_arity(subs[0]);
  // powers[i][k] = subs[i]^k, grown on demand
  std::vector<std::vector<CoeffPoly>> powers(nvars_);
  auto power = [&](int i, int k) -> const CoeffPoly& {
    auto& row = powers[i];
    if (row.empty()) row.push_back(constant(m, CycScalar(1L)));
    while (static_cast<int>(row.size()) <= k) row.push_back(row.back() * subs[i]);
    return row[k];
  };
  CoeffPoly out(m);
  for (const auto& [e, c] : terms_) {
    CoeffPoly term = constant(m, c);
    for (int i = 0; i < nvars_; ++i)
      if (e[i] > 0) term = term * power(i, e[i]);
    out += term;
  }
  return out;
}

CycScalar CoeffPoly::evaluate(std::span<const CycScalar> point) const {
  if (static_cast<int>(point.size()) != nvars_) throw MismatchedArity("evaluation point");
  CycScalar acc;
  for (const auto& [e, c] : terms_) {
    CycScalar t = c;
    for (int i = 0; i < nvars_; ++i)
      if (e[i]) t *= point[i].pow(e[i]);
    acc += t;
  }
  return acc;
}

double CoeffPoly::evaluate(std::span<const double> point) const {
  if (static_cast<int>(point.size()) != nvars_) throw MismatchedArity("evaluation point");
  double acc = 0.0;
  for (const auto& [e, c] : terms_) {
    double t = c.to_double();
    for (int i = 0; i < nvars_; ++i)
      for (int k = 0; k < e[i]; ++k) t *= point[i];
    acc += t;
  }
  return acc;
}

std::string CoeffPoly::str(const std::vector<std::string>& names) const {
  if (terms_.empty()) return "0";
  auto name = [&](int i) {
    return i < static_cast<int>(names.size()) ? names[i] : "x" + std::to_string(i + 1);
  };
  std::ostringstream os;
  bool first = true;
  // highest total degree first reads more naturally
  std::vector<const std::pair<const Exponents, CycScalar>*> order;
  for (const auto& t : terms_) order.push_back(&t);
  std::stable_sort(order.begin(), order.end(), [](auto* a, auto* b) {
    return std::accumulate(a->first.begin(), a->first.end(), 0) >
           std::accumulate(b->first.begin(), b->first.end(), 0);
  });
  for (const auto* t : order) {
    const auto& [e, c] = *t;
    std::string mono;
    for (int i = 0; i < nvars_; ++i) {
      if (e[i] == 0) continue;
      if (!mono.empty()) mono += "*";
      mono += name(i);
      if (e[i] > 1) mono += "^" + std::to_string(e[i]);
    }
    std::string coeff;
    bool negative = false;
    if (c.is_rational()) {
      Rational r = c.rational_value();
      negative = r < 0;
      r = abs(r);
      if (r != 1 || mono.empty()) coeff = rational_str(r);
    } else {
      coeff = "(" + c.str() + ")";
    }
    if (first) {
      if (negative) os << "-";
    } else {
      os << (negative ? " - " : " + ");
    }
    first = false;
    os << coeff;
    if (!coeff.empty() && !mono.empty()) os << "*";
    os << mono;
  }
  return os.str();
}

PolyMap::PolyMap(std::vector<CoeffPoly> forward, std::vector<CoeffPoly> inverse)
    : forward_(std::move(forward)), inverse_(std::move(inverse)) {
  const int n = dim();
  if (static_cast<int>(inverse_.size()) != n) throw MismatchedArity("chart inverse length");
  for (const auto& p : forward_) {
    if (p.nvars() != n) throw MismatchedArity("chart forward arity");
  }
  for (const auto& p : inverse_) {
    if (p.nvars() != n) throw MismatchedArity("chart inverse arity");
  }
  for (int i = 0; i < n; ++i) {
    if (!(forward_[i].substitute(inverse_) == CoeffPoly::variable(n, i)) ||
        !(inverse_[i].substitute(forward_) == CoeffPoly::variable(n, i)))
      throw NonInvertibleChart("component " + std::to_string(i + 1) +
                               " does not compose to the identity");
  }
}

PolyMap PolyMap::identity(int n) {
  std::vector<CoeffPoly> id;
  for (int i = 0; i < n; ++i) id.push_back(CoeffPoly::variable(n, i));
  return PolyMap(id, id);
}

CoeffPoly compose(const CoeffPoly& f, const PolyMap& m, Direction dir) {
  if (f.nvars() != m.dim()) throw MismatchedArity("compose: polynomial and chart arity differ");
  return f.substitute(dir == Direction::forward ? m.forward() : m.inverse());
}

namespace {

void enumerate_exponents(int nvars, int maxdeg, Exponents& cur, int pos, int used,
                         std::vector<Exponents>& out) {
  if (pos == nvars) {
    out.push_back(cur);
    return;
  }
  for (int k = 0; k + used <= maxdeg; ++k) {
    cur[pos] = k;
    enumerate_exponents(nvars, maxdeg, cur, pos + 1, used + k, out);
  }
  cur[pos] = 0;
}

}  // namespace

CoeffPoly random_poly(std::uint64_t seed, int nvars, int maxdeg) {
  if (maxdeg < 0) throw InvalidArgument("maxdeg must be >= 0");
  std::mt19937_64 rng(seed);
  std::vector<Exponents> monos;
  Exponents cur(nvars, 0);
  enumerate_exponents(nvars, maxdeg, cur, 0, 0, monos);
  CoeffPoly p(nvars);
  for (const auto& e : monos) {
    // modulo reduction keeps the stream identical across standard libraries
    const bool keep = rng() % 3 != 0;
    const long num = static_cast<long>(rng() % 11) - 5;
    const long den = static_cast<long>(rng() % 3) + 1;
    if (keep && num != 0) p.add_term(e, CycScalar(Rational(num, den)));
  }
  return p;
}

namespace {

std::optional<Rational> rational_sqrt(const Rational& r) {
  if (r < 0) return std::nullopt;
  Rational c = r;
  c.canonicalize();
  if (!mpz_perfect_square_p(c.get_num_mpz_t()) || !mpz_perfect_square_p(c.get_den_mpz_t()))
    return std::nullopt;
  mpz_class n = sqrt(c.get_num()), d = sqrt(c.get_den());
  return Rational(n, d);
}

}  // namespace

std::optional<CycScalar> scalar_sqrt(const CycScalar& c) {
  if (c.is_zero()) return CycScalar();
  if (!c.field()) {
    auto r = rational_sqrt(c.rational_value());
    if (!r) return std::nullopt;
    return CycScalar(*r);
  }
  const CycField& f = *c.field();
  const int m = f.order();
  for (int k = 0; k < m; ++k) {
    CycScalar rest = c * CycScalar::zeta_power(f, -k);
    if (!rest.is_rational()) continue;
    auto r = rational_sqrt(rest.rational_value());
    if (!r) continue;
    if (k % 2 == 0) return CycScalar(*r) * CycScalar::zeta_power(f, k / 2);
    if (m % 2 == 1) return CycScalar(*r) * CycScalar::zeta_power(f, (k + m) / 2);
  }
  return std::nullopt;
}

std::optional<CoeffPoly> poly_sqrt(const CoeffPoly& p) {
  if (p.nvars() != 1) throw InvalidArgument("poly_sqrt expects a univariate polynomial");
  if (p.is_zero()) return p;
  const int deg = p.degree_in(0);
  if (deg % 2 != 0) return std::nullopt;
  const int half = deg / 2;
  auto lead = scalar_sqrt(p.terms().at({deg}));
  if (!lead) return std::nullopt;
  const CycScalar two_lead_inv = (CycScalar(2L) * *lead).inverse();
  CoeffPoly root(1);
  root.add_term({half}, *lead);
  for (int k = 1; k <= half; ++k) {
    CoeffPoly rem = p - root * root;
    auto it = rem.terms().find({deg - k});
    if (it != rem.terms().end()) root.add_term({half - k}, it->second * two_lead_inv);
  }
  if (!(root * root == p)) return std::nullopt;
  return root;
}

}  // namespace qcalc
