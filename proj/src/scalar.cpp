#include "qcalc/scalar.hpp"

#include <cmath>
#include <memory>
#include <numbers>
#include <sstream>

#include "qcalc/error.hpp"

namespace qcalc {

namespace {

using IntPoly = std::vector<mpz_class>;

// Exact division by a monic divisor.
IntPoly poly_div_exact(IntPoly num, const IntPoly& den) {
  const std::size_t dn = den.size() - 1;
  IntPoly quot(num.size() - dn);
  for (std::size_t k = num.size(); k-- > dn;) {
    mpz_class c = num[k];
    quot[k - dn] = c;
    if (c == 0) continue;
    for (std::size_t j = 0; j <= dn; ++j) num[k - dn + j] -= c * den[j];
  }
  return quot;
}

IntPoly cyclotomic(int m) {
  IntPoly p(m + 1);
  p[0] = -1;
  p[m] = 1;
  for (int d = 1; d < m; ++d)
    if (m % d == 0) p = poly_div_exact(p, cyclotomic(d));
  return p;
}

// Solve M x = rhs over Q; M is square, row-major. Returns false when singular.
bool solve(std::vector<std::vector<Rational>> m, std::vector<Rational>& rhs) {
  const std::size_t n = rhs.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    while (piv < n && m[piv][col] == 0) ++piv;
    if (piv == n) return false;
    std::swap(m[piv], m[col]);
    std::swap(rhs[piv], rhs[col]);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col || m[r][col] == 0) continue;
      Rational f = m[r][col] / m[col][col];
      for (std::size_t c = col; c < n; ++c) m[r][c] -= f * m[col][c];
      rhs[r] -= f * rhs[col];
    }
  }
  for (std::size_t r = 0; r < n; ++r) rhs[r] /= m[r][r];
  return true;
}

long mod(long a, long m) {
  long r = a % m;
  return r < 0 ? r + m : r;
}

}  // namespace

CycField::CycField(int m) : order_(m), phi_(cyclotomic(m)) {
  const int d = degree();
  powers_.assign(m, std::vector<mpz_class>(d));
  std::vector<mpz_class> cur(d);
  cur[0] = 1;
  for (int k = 0; k < m; ++k) {
    powers_[k] = cur;
    // multiply by zeta, then reduce zeta^d = -sum phi_i zeta^i
    mpz_class top = cur[d - 1];
    for (int i = d - 1; i > 0; --i) cur[i] = cur[i - 1];
    cur[0] = 0;
    for (int i = 0; i < d; ++i) cur[i] -= top * phi_[i];
  }
}

const CycField& CycField::get(int m) {
  if (m < 1) throw InvalidArgument("cyclotomic order must be >= 1");
  static std::mutex mu;
  static std::map<int, std::unique_ptr<CycField>> registry;
  std::lock_guard lock(mu);
  auto& slot = registry[m];
  if (!slot) slot.reset(new CycField(m));
  return *slot;
}

CycScalar::CycScalar(const CycField& field, std::vector<Rational> coords)
    : field_(&field), coeffs_(std::move(coords)) {
  if (static_cast<int>(coeffs_.size()) != field.degree())
    throw InvalidArgument("coordinate count does not match field degree");
  for (auto& c : coeffs_) c.canonicalize();
}

CycScalar CycScalar::zeta_power(const CycField& field, long k) {
  const auto& p = field.power(static_cast<int>(mod(k, field.order())));
  std::vector<Rational> c(p.begin(), p.end());
  return CycScalar(field, std::move(c));
}

CycScalar CycScalar::q_power(int N, long k) {
  if (N < 1) throw InvalidArgument("root order must be >= 1");
  const CycField& f = CycField::for_root(N);
  return zeta_power(f, mod(k, N) * (f.order() / N));
}

CycScalar CycScalar::sqrt_q(int N) {
  const CycField& f = CycField::for_root(N);
  if (N % 2 == 0) return zeta_power(f, 1);
  return q_power(N, (N + 1) / 2);
}

const CycField* CycScalar::common_field(const CycScalar& a, const CycScalar& b) {
  if (!a.field_) return b.field_;
  if (!b.field_ || a.field_ == b.field_) return a.field_;
  throw MismatchedOrder("Q(zeta_" + std::to_string(a.field_->order()) + ") vs Q(zeta_" +
                        std::to_string(b.field_->order()) + ")");
}

CycScalar CycScalar::promoted(const CycField* f) const {
  if (f == field_ || !f) return *this;
  std::vector<Rational> c(f->degree());
  c[0] = coeffs_[0];
  return CycScalar(*f, std::move(c));
}

bool CycScalar::is_zero() const {
  for (const auto& c : coeffs_)
    if (c != 0) return false;
  return true;
}

bool CycScalar::is_rational() const {
  for (std::size_t i = 1; i < coeffs_.size(); ++i)
    if (coeffs_[i] != 0) return false;
  return true;
}

Rational CycScalar::rational_value() const {
  if (!is_rational()) throw InvalidArgument("scalar " + str() + " is not rational");
  return coeffs_[0];
}

std::complex<double> CycScalar::to_complex() const {
  if (!field_) return {coeffs_[0].get_d(), 0.0};
  std::complex<double> acc;
  const double step = 2.0 * std::numbers::pi / field_->order();
  for (std::size_t i = 0; i < coeffs_.size(); ++i)
    acc += coeffs_[i].get_d() * std::polar(1.0, step * static_cast<double>(i));
  return acc;
}

CycScalar CycScalar::conj() const {
  if (!field_) return *this;
  const int m = field_->order();
  std::vector<Rational> out(coeffs_.size());
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    if (coeffs_[i] == 0) continue;
    const auto& p = field_->power(static_cast<int>(mod(-static_cast<long>(i), m)));
    for (std::size_t j = 0; j < out.size(); ++j) out[j] += coeffs_[i] * p[j];
  }
  return CycScalar(*field_, std::move(out));
}

CycScalar CycScalar::operator-() const {
  CycScalar r = *this;
  for (auto& c : r.coeffs_) c = -c;
  return r;
}

CycScalar& CycScalar::operator+=(const CycScalar& o) {
  const CycField* f = common_field(*this, o);
  if (f != field_) *this = promoted(f);
  if (o.field_ == field_) {
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
  } else {
    coeffs_[0] += o.coeffs_[0];
  }
  return *this;
}

CycScalar& CycScalar::operator-=(const CycScalar& o) { return *this += -o; }

CycScalar operator*(const CycScalar& a, const CycScalar& b) {
  const CycField* f = CycScalar::common_field(a, b);
  if (!a.field_ || !b.field_) {
    const CycScalar& s = a.field_ ? b : a;  // field-less side
    CycScalar r = a.field_ ? a : b;
    for (auto& c : r.coeffs_) c *= s.coeffs_[0];
    return r;
  }
  const int d = f->degree();
  const int m = f->order();
  std::vector<Rational> conv(2 * d - 1);
  bool any = false;
  for (int i = 0; i < d; ++i) {
    if (a.coeffs_[i] == 0) continue;
    for (int j = 0; j < d; ++j) {
      if (b.coeffs_[j] == 0) continue;
      conv[i + j] += a.coeffs_[i] * b.coeffs_[j];
      any = true;
    }
  }
  std::vector<Rational> out(d);
  if (any) {
    for (int k = 0; k < 2 * d - 1; ++k) {
      if (conv[k] == 0) continue;
      if (k < d) {
        out[k] += conv[k];
        continue;
      }
      const auto& p = f->power(k % m);
      for (int j = 0; j < d; ++j)
        if (p[j] != 0) out[j] += conv[k] * p[j];
    }
  }
  return CycScalar(*f, std::move(out));
}

CycScalar& CycScalar::operator*=(const CycScalar& o) { return *this = *this * o; }

bool operator==(const CycScalar& a, const CycScalar& b) {
  const CycField* f = CycScalar::common_field(a, b);
  return a.promoted(f).coeffs_ == b.promoted(f).coeffs_;
}

CycScalar CycScalar::inverse() const {
  if (is_zero()) throw DivisionByZero("inverse of zero");
  if (!field_) return CycScalar(Rational(1) / coeffs_[0]);
  const int d = field_->degree();
  // Column j of the multiplication matrix is this * zeta^j.
  std::vector<std::vector<Rational>> mat(d, std::vector<Rational>(d));
  for (int j = 0; j < d; ++j) {
    CycScalar col = *this * zeta_power(*field_, j);
    for (int i = 0; i < d; ++i) mat[i][j] = col.coeffs_[i];
  }
  std::vector<Rational> rhs(d);
  rhs[0] = 1;
  if (!solve(std::move(mat), rhs)) throw DivisionByZero("singular element");
  return CycScalar(*field_, std::move(rhs));
}

CycScalar CycScalar::pow(long e) const {
  if (e < 0) return inverse().pow(-e);
  CycScalar result(1L), base = *this;
  while (e > 0) {
    if (e & 1) result *= base;
    e >>= 1;
    if (e) base *= base;
  }
  return result;
}

std::string rational_str(const Rational& r) {
  if (r.get_den() == 1) return r.get_num().get_str();
  return r.get_num().get_str() + "/" + r.get_den().get_str();
}

std::string CycScalar::str() const {
  std::ostringstream os;
  bool first = true;
  const bool even = field_ && field_->order() % 2 == 0;
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    Rational c = coeffs_[i];
    if (c == 0) continue;
    if (first) {
      if (c < 0) os << "-";
    } else {
      os << (c < 0 ? " - " : " + ");
    }
    c = abs(c);
    first = false;
    if (i == 0) {
      os << rational_str(c);
      continue;
    }
    std::string sym;
    if (even && i % 2 == 1) {
      sym = i == 1 ? "z" : "z^" + std::to_string(i);
    } else {
      const std::size_t k = even ? i / 2 : i;
      sym = k == 1 ? "q" : "q^" + std::to_string(k);
    }
    if (c != 1) os << rational_str(c) << "*";
    os << sym;
  }
  if (first) return "0";
  return os.str();
}

QNumberTower::QNumberTower(int N) : N_(N) {
  if (N < 2) throw InvalidArgument("N must be >= 2");
}

CycScalar QNumberTower::operator()(int l, int i) const {
  if (l < 1 || i < 0) throw InvalidArgument("q-number needs l >= 1, i >= 0");
  {
    std::lock_guard lock(mu_);
    auto it = cache_.find({l, i});
    if (it != cache_.end()) return it->second;
  }
  CycScalar value;
  if (i == 0) {
    for (int k = 0; k < l; ++k) value += CycScalar::q_power(N_, k);
  } else {
    for (int k = 1; k <= l; ++k) value += CycScalar::q_power(N_, k - 1) * (*this)(k, i - 1);
  }
  std::lock_guard lock(mu_);
  cache_.emplace(std::make_pair(l, i), value);
  return value;
}

CycScalar q_number(int N, int l, int i) {
  static std::mutex mu;
  static std::map<int, std::unique_ptr<QNumberTower>> towers;
  const QNumberTower* tower;
  {
    std::lock_guard lock(mu);
    auto& slot = towers[N];
    if (!slot) slot = std::make_unique<QNumberTower>(N);
    tower = slot.get();
  }
  return (*tower)(l, i);
}

CycScalar alpha_coeff(int N, int l, int i, int a) {
  if (i < 0 || i > l) throw IndexOutOfRange("alpha index i=" + std::to_string(i) + " with l=" +
                                            std::to_string(l));
  if (i == 0) return CycScalar(1L);
  const long sigma = (2L * a + i - 1) * i / 2;
  CycScalar sign = i % 2 == 0 ? CycScalar(1L) : CycScalar(-1L);
  return sign * CycScalar::q_power(N, sigma) * q_number(N, l - i + 1, i - 1);
}

}  // namespace qcalc
