#pragma once

// Covariant second and third differentials in the Z_3-graded algebra of an
// n-dimensional chart, their coefficient tensors, and how they transform.
//
//   D2 x^k = d2x^k + G^k_lm dx^l dx^m
//   D3 x^k = d(D2 x^k) + B^k_lm Dx^l D2x^m + C^k_lmn Dx^l Dx^m Dx^n
//          = Bt^k_lm Dx^l D2x^m + Ct^k_lmn Dx^l Dx^m Dx^n
// with Bt = B + q G_lm + q^2 G_ml and Ct = C + K(G),
//   K(G)^k_lmn = d_l G^k_mn - G^r_lm G^k_rn - q G^r_mn G^k_lr.
// Only the Z_3-anti part of Ct survives the contraction with Dx Dx Dx.

#include <cstdint>
#include <initializer_list>
#include <vector>

#include "qcalc/forms.hpp"
#include "qcalc/parallel.hpp"
#include "qcalc/report.hpp"

namespace qcalc {

/// One upper and `lower` lower indices, each in 1..dim, polynomial entries in
/// `nvars` variables.
class Tensor {
 public:
  Tensor() = default;
  Tensor(int dim, int lower, int nvars);

  int dim() const { return dim_; }
  int lower() const { return lower_; }
  int nvars() const { return nvars_; }
  std::size_t size() const { return data_.size(); }

  /// Entry (k, l, m, ...), 1-based. Throws IndexOutOfRange / BadIndexCount.
  CoeffPoly& operator()(std::initializer_list<int> idx);
  const CoeffPoly& operator()(std::initializer_list<int> idx) const;
  CoeffPoly& at(const std::vector<int>& idx);
  const CoeffPoly& at(const std::vector<int>& idx) const;

  CoeffPoly& flat(std::size_t i) { return data_[i]; }
  const CoeffPoly& flat(std::size_t i) const { return data_[i]; }
  /// 1-based index tuple of a flat position.
  std::vector<int> unflatten(std::size_t i) const;

  bool is_zero() const;
  Tensor operator-() const;
  Tensor& operator+=(const Tensor& o);
  Tensor& operator-=(const Tensor& o);
  friend Tensor operator+(Tensor a, const Tensor& b) { return a += b; }
  friend Tensor operator-(Tensor a, const Tensor& b) { return a -= b; }
  friend Tensor operator*(const CycScalar& c, const Tensor& t);
  friend bool operator==(const Tensor& a, const Tensor& b);

  /// Nonzero entries as {"k,l,m": "poly"}.
  Json to_json(const std::vector<std::string>& names = {}) const;

 private:
  int dim_ = 0;
  int lower_ = 0;
  int nvars_ = 0;
  std::vector<CoeffPoly> data_;

  std::size_t offset(const std::vector<int>& idx) const;
  void check_shape(const Tensor& o) const;
};

struct ConnectionBundle {
  int n = 0;
  Tensor gamma;  // G^k_lm
  Tensor bcoef;  // B^k_lm
  Tensor ccoef;  // C^k_lmn

  /// Zero bundle on an n-dimensional chart.
  static ConnectionBundle zero(int n);
  /// Throws MismatchedArity if the shapes disagree with n.
  void validate() const;
};

/// Entries random_poly(..., maxdeg); symmetric_gamma mirrors G^k_lm = G^k_ml.
ConnectionBundle random_bundle(int n, std::uint64_t seed, int maxdeg, bool symmetric_gamma = false);

struct TildeCoefficients {
  Tensor btilde;
  Tensor ctilde;
};

/// The closed forms Bt = B + q G_lm + q^2 G_ml, Ct = C + K(G).
TildeCoefficients tilde_closed_form(const ConnectionBundle& b);

/// K(G) = d_l G^k_mn - G^r_lm G^k_rn - q G^r_mn G^k_lr.
Tensor k_tensor(const Tensor& gamma);

Algebra chart_algebra(int n);

Form covariant_d1(int n, int k);
Form covariant_d2(const ConnectionBundle& b, int k);

struct D3Expansion {
  Form form;
  /// Bt^k_lm read off dx^l d2x^m, as a (1,2) tensor with only row k filled.
  Tensor btilde;
  /// The Z_3-anti representative of Ct^k_lmn reproducing the Dx Dx Dx part.
  Tensor ctilde_anti;
};

/// Expands D3 x^k with exterior_d and rewrites it in the covariant basis
/// {Dx^l D2x^m, Dx^l Dx^m Dx^n}. Throws BasisRewriteFailure if a term is left
/// over.
D3Expansion covariant_d3(const ConnectionBundle& b, int k);

/// Both tilde tensors for every k, Ct as its anti representative.
TildeCoefficients extract_tilde(const ConnectionBundle& b, Execution exec = Execution::parallel);

struct Z3Parts {
  Tensor sym;   // eigenvalue 1 of (rho T)_lmn = T_nlm
  Tensor conj;  // eigenvalue q
  Tensor anti;  // eigenvalue q^2
};

/// Z_3 split over the three lower indices. Throws BadIndexCount otherwise.
Z3Parts z3_split(const Tensor& t);
/// (rho T)^k_lmn = T^k_nlm.
Tensor rotate_lower(const Tensor& t);

/// Tensor transformation of a (1, r) tensor to the chart y = forward(x):
/// T'^{k'}_{l'...} = (dy^{k'}/dx^k) T^k_{l...} (dx^l/dy^{l'}) ..., all as
/// polynomials in y.
Tensor transform_tensor(const Tensor& t, const PolyMap& chart);

/// Triangular test charts on n coordinates, polynomial both ways:
///   identity
///   affine  y1 = 2 x1 + 1, yi = xi + x(i-1)
///   shear   y1 = x1, yi = xi + x(i-1)^2
/// Throws InvalidArgument for other names.
PolyMap standard_chart(const std::string& name, int n);

/// G and B transform as connections (inhomogeneous term d2x/dy dy), C so
/// that Ct is a tensor: C' = T(C + K(G)) - K(G').
ConnectionBundle transform_bundle(const ConnectionBundle& b, const PolyMap& chart);

/// Bt and the anti part of Ct against their tensor transforms, and D2 and D3
/// of the new chart against U D2x and U D3x computed as forms in the old chart.
Report verify_tensoriality(const ConnectionBundle& b, const PolyMap& chart,
                           Execution exec = Execution::parallel);

/// Extracted Bt, Ct_anti equal the closed forms.
Report verify_tilde(const ConnectionBundle& b, Execution exec = Execution::parallel);

/// Bt = (B - G_(lm)) + (q - q^2) S with S the torsion (G_lm - G_ml)/2;
/// with real B and G, Bt is real iff S = 0.
Report torsion_and_reality(const ConnectionBundle& b);

/// Riemann tensor R^k_lmn = d_l G^k_mn - d_m G^k_ln + G^k_lr G^r_mn - G^k_mr G^r_ln.
Tensor riemann(const Tensor& gamma);

/// The combination (1/3)[R_nlm + R_mln] + (q/3)[R_mnl + R_lnm] + (q^2/3)[R_lmn + R_nml].
Tensor riemann_combination(const Tensor& gamma);

/// Compares the anti part of K(G) with the Riemann combination for symmetric
/// G. Throws NonSymmetricGamma.
Report riemann_identification(const Tensor& gamma);

/// The optional constraint C^k_{mnl} (conjugate part) = C^k_{lnm} (anti part).
bool conjugate_constraint_holds(const Tensor& c);

/// Adding a tensor with zero anti part to C leaves D3 x^k unchanged.
Report verify_contraction_blindness(const ConnectionBundle& b, std::uint64_t seed);

}  // namespace qcalc
