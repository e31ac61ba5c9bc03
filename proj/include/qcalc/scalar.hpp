#pragma once

// Exact arithmetic in cyclotomic fields Q(zeta_m).
//
// A CycScalar is a residue modulo the m-th cyclotomic polynomial, stored as its
// coordinates in the power basis 1, zeta, ..., zeta^{phi(m)-1}. The Z_N
// calculus places q = exp(2 pi i / N) in Q(zeta_m) with m = N for odd N and
// m = 2N for even N, so that sqrt(q) is available whenever it is needed.
//
// Scalars without a field are plain rationals; they combine with any field.

#include <gmpxx.h>

#include <complex>
#include <map>
#include <mutex>
#include <string>
#include <utility>
#include <vector>

namespace qcalc {

using Rational = mpq_class;

class CycField {
 public:
  /// Process-wide registry; the returned reference stays valid forever.
  static const CycField& get(int m);

  /// Cyclotomic order hosting the primitive N-th root q.
  static int order_for_root(int N) { return N % 2 == 0 ? 2 * N : N; }
  static const CycField& for_root(int N) { return get(order_for_root(N)); }

  int order() const { return order_; }
  int degree() const { return static_cast<int>(phi_.size()) - 1; }

  /// Phi_m, low degree first, monic.
  const std::vector<mpz_class>& cyclotomic_polynomial() const { return phi_; }

  /// Coordinates of zeta^k, 0 <= k < m.
  const std::vector<mpz_class>& power(int k) const { return powers_[k]; }

 private:
  explicit CycField(int m);

  int order_;
  std::vector<mpz_class> phi_;
  std::vector<std::vector<mpz_class>> powers_;
};

class CycScalar {
 public:
  CycScalar() : coeffs_(1) {}
  CycScalar(long v) : coeffs_{Rational(v)} {}  // NOLINT(google-explicit-constructor)
  CycScalar(Rational v) : coeffs_{std::move(v)} {  // NOLINT(google-explicit-constructor)
    coeffs_[0].canonicalize();
  }
  CycScalar(const CycField& field, std::vector<Rational> coords);

  static CycScalar zeta_power(const CycField& field, long k);
  /// q^k for the primitive N-th root q.
  static CycScalar q_power(int N, long k);
  /// A fixed square root of q: zeta_{2N} for even N, q^{(N+1)/2} for odd N.
  static CycScalar sqrt_q(int N);

  const CycField* field() const { return field_; }
  /// Coordinates in the power basis; a single entry for field-less scalars.
  const std::vector<Rational>& coords() const { return coeffs_; }

  bool is_zero() const;
  bool is_rational() const;
  /// Throws InvalidArgument unless is_rational().
  Rational rational_value() const;
  double to_double() const { return rational_value().get_d(); }
  std::complex<double> to_complex() const;

  /// Complex conjugate (zeta -> zeta^{-1}).
  CycScalar conj() const;
  bool is_real() const { return *this == conj(); }

  CycScalar inverse() const;
  CycScalar pow(long e) const;

  CycScalar operator-() const;
  CycScalar& operator+=(const CycScalar& o);
  CycScalar& operator-=(const CycScalar& o);
  CycScalar& operator*=(const CycScalar& o);
  CycScalar& operator/=(const CycScalar& o) { return *this *= o.inverse(); }

  friend CycScalar operator+(CycScalar a, const CycScalar& b) { return a += b; }
  friend CycScalar operator-(CycScalar a, const CycScalar& b) { return a -= b; }
  friend CycScalar operator*(const CycScalar& a, const CycScalar& b);
  friend CycScalar operator/(CycScalar a, const CycScalar& b) { return a /= b; }
  friend bool operator==(const CycScalar& a, const CycScalar& b);

  /// "a0 + a1*q + a2*q^2" style; odd powers of zeta_{2N} print as z^k.
  std::string str() const;

 private:
  const CycField* field_ = nullptr;
  std::vector<Rational> coeffs_;

  static const CycField* common_field(const CycScalar& a, const CycScalar& b);
  CycScalar promoted(const CycField* f) const;
};

/// Printable form of a rational: "3", "-3/2".
std::string rational_str(const Rational& r);

/// Tower of q-numbers [l]^{(i)}_q for a fixed N:
///   [l]^{(0)} = 1 + q + ... + q^{l-1},
///   [l]^{(i)} = sum_{k=1}^{l} q^{k-1} [k]^{(i-1)}.
/// [l]^{(i)} equals the Gaussian binomial coefficient (l+i choose i+1).
class QNumberTower {
 public:
  explicit QNumberTower(int N);
  int N() const { return N_; }
  CycScalar operator()(int l, int i) const;

 private:
  int N_;
  mutable std::mutex mu_;
  mutable std::map<std::pair<int, int>, CycScalar> cache_;
};

/// [l]^{(i)}_q using a shared tower per N.
CycScalar q_number(int N, int l, int i);

/// Coefficient of Gamma^{l-i} B Gamma^i in the l-th power of the q-commutator
/// differential applied to B of grade a.
CycScalar alpha_coeff(int N, int l, int i, int a);

}  // namespace qcalc
