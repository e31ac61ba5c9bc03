#pragma once

// The generalized Clifford algebra C_{p,N}: generators G_1..G_p with
// G_i G_j = q G_j G_i (i < j) and G_k^N = 1. Elements are stored on normal
// ordered monomials G_1^{a_1} ... G_p^{a_p}, 0 <= a_k < N.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qcalc/parallel.hpp"
#include "qcalc/report.hpp"
#include "qcalc/scalar.hpp"

namespace qcalc {

class CliffordElement {
 public:
  using Exponents = std::vector<int>;

  CliffordElement() = default;
  CliffordElement(int p, int N);

  static CliffordElement scalar(int p, int N, const CycScalar& c);
  static CliffordElement unit(int p, int N) { return scalar(p, N, CycScalar(1L)); }
  /// G_k, 1-based.
  static CliffordElement generator(int p, int N, int k);
  /// c G_1^{e_1} ... G_p^{e_p}; exponents are reduced mod N.
  static CliffordElement monomial(int p, int N, Exponents e, const CycScalar& c = CycScalar(1L));

  int p() const { return p_; }
  int N() const { return N_; }
  const std::map<Exponents, CycScalar>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  void add_term(Exponents e, const CycScalar& c);

  /// Grade if every monomial shares one (zero reports 0), else nullopt.
  std::optional<int> grade() const;
  /// Splits into grade-homogeneous parts.
  std::map<int, CliffordElement> homogeneous_parts() const;

  CliffordElement operator-() const;
  CliffordElement& operator+=(const CliffordElement& o);
  CliffordElement& operator-=(const CliffordElement& o);
  CliffordElement& operator*=(const CycScalar& c);
  friend CliffordElement operator+(CliffordElement a, const CliffordElement& b) { return a += b; }
  friend CliffordElement operator-(CliffordElement a, const CliffordElement& b) { return a -= b; }
  friend CliffordElement operator*(const CliffordElement& a, const CliffordElement& b);
  friend CliffordElement operator*(CliffordElement a, const CycScalar& c) { return a *= c; }
  friend CliffordElement operator*(const CycScalar& c, CliffordElement a) { return a *= c; }
  friend bool operator==(const CliffordElement& a, const CliffordElement& b);

  /// "(2) G1^2*G2 + (q) G2"; "0" for zero, "1" marks the unit monomial.
  std::string str() const;

 private:
  int p_ = 1;
  int N_ = 2;
  std::map<Exponents, CycScalar> terms_;

  void check_same(const CliffordElement& o) const;
};

/// Normal-ordered product G_{w_1} ... G_{w_r} (1-based indices).
/// Throws IndexOutOfRange.
CliffordElement normal_order(int p, int N, const std::vector<int>& word);

/// Product over all N! orderings of the arguments, summed. Throws
/// ArityMismatch unless exactly N elements are given.
CliffordElement n_anticommutator(const std::vector<CliffordElement>& elems);

/// d_k B = G_k B - q^b B G_k on each homogeneous part of B (b its grade).
CliffordElement q_exterior_d(int k, const CliffordElement& B);

/// All N^p normal monomials with coefficient 1.
std::vector<CliffordElement> clifford_basis(int p, int N);

class CycMatrix {
 public:
  CycMatrix() = default;
  explicit CycMatrix(int dim) : dim_(dim), a_(static_cast<std::size_t>(dim) * dim, CycScalar(0L)) {}
  static CycMatrix identity(int dim);

  int dim() const { return dim_; }
  CycScalar& at(int i, int j) { return a_[static_cast<std::size_t>(i) * dim_ + j]; }
  const CycScalar& at(int i, int j) const { return a_[static_cast<std::size_t>(i) * dim_ + j]; }

  CycMatrix& operator+=(const CycMatrix& o);
  friend CycMatrix operator+(CycMatrix a, const CycMatrix& b) { return a += b; }
  friend CycMatrix operator-(const CycMatrix& a, const CycMatrix& b);
  friend CycMatrix operator*(const CycMatrix& a, const CycMatrix& b);
  friend CycMatrix operator*(const CycScalar& c, const CycMatrix& a);
  friend bool operator==(const CycMatrix& a, const CycMatrix& b);
  bool is_zero() const;
  CycMatrix pow(int e) const;
  /// Rows as "[a, b; c, d]".
  std::string str() const;

 private:
  int dim_ = 0;
  std::vector<CycScalar> a_;
};

CycMatrix kron(const CycMatrix& a, const CycMatrix& b);

/// shift, diagonal(q^i) and the third matrix (sqrt(q) sigma3 sigma1 for even
/// N, sigma3 sigma1 for odd N), all N x N.
CycMatrix sigma1(int N);
CycMatrix sigma3(int N);
CycMatrix sigma2(int N);

enum class RepLayout {
  /// k = max(1, floor(p/2)) tensor slots, odd p ends with sigma3^{(x)k}.
  compact,
  /// k = ceil(p/2) slots, odd p takes the first p generators of the p+1
  /// scheme. Faithful, so it is the stronger oracle.
  faithful,
};

struct CliffordMatrixRep {
  int p = 0;
  int N = 0;
  RepLayout layout = RepLayout::compact;
  std::vector<CycMatrix> gamma;

  int dim() const { return gamma.empty() ? 0 : gamma.front().dim(); }
  CycMatrix represent(const CliffordElement& e) const;
};

/// Tensor-product representation; relations are checked after construction
/// (std::logic_error if they fail).
CliffordMatrixRep matrix_rep(int p, int N, RepLayout layout = RepLayout::compact);

/// Relations, homomorphism on words, Kronecker relation, d_k^N = 0, operator
/// anticommutators of differentials, and the alpha expansion of d_k^l.
Report verify_clifford(int p, int N, Execution exec = Execution::parallel);

// ---- connections and curvature ----

struct CliffordConnection {
  std::vector<CliffordElement> components;  // A_1..A_p, each of grade 1

  int p() const { return static_cast<int>(components.size()); }
  /// Throws InvalidArgument if some component is not of grade 1 or the
  /// components live in different algebras.
  void validate() const;
};

/// Random connection: each grade-1 monomial is kept with probability 1/2
/// and given a random coefficient in the field of N.
CliffordConnection random_connection(int p, int N, std::uint64_t seed);

/// D_k B = d_k B + A_k B.
CliffordElement covariant_apply(const CliffordConnection& A, int k, const CliffordElement& B);

/// How an operator anticommutator over an index multiset is summed.
enum class Symmetrization {
  /// each distinct arrangement of the multiset once (so {D_1, D_1} = D_1^2)
  distinct,
  /// all N! orderings of the positions
  all_orderings,
};

enum class CurvatureMethod { direct, formula };

struct CurvatureComponent {
  std::vector<int> index;
  CliffordElement value;
};

/// Omega_{i_1...i_N}. `direct` applies the operator anticommutator of the D's
/// to 1 and then checks it acts as left multiplication on every basis element
/// (NotLeftMultiplication otherwise). `formula` replaces generators by
/// connection components over every nonempty sub-multiset of the index.
/// The index must be sorted, of length N, entries in 1..p.
CurvatureComponent curvature(const CliffordConnection& A, const std::vector<int>& index,
                             CurvatureMethod method,
                             Symmetrization sym = Symmetrization::distinct);

/// The low-dimensional closed forms, transcribed term by term:
/// (p, N) = (2, 2) in terms of sigma_k and (2, 3) in terms of eta_k.
/// Braces are summed over distinct arrangements. nullopt for other (p, N).
std::optional<CliffordElement> closed_form_curvature(const CliffordConnection& A,
                                                     const std::vector<int>& index);
/// The closed form as text, e.g. "{G1, G1, A2} + {G1, A1, A2} + ...".
std::optional<std::string> closed_form_text(int p, int N, const std::vector<int>& index);

/// How the Bianchi sum runs over an index multiset of length N+1.
enum class BianchiSum {
  /// over positions s = 1..N+1 (pairs with all-orderings curvature)
  positions,
  /// over distinct index values (pairs with distinct-arrangement curvature)
  distinct_values,
};

struct BianchiResult {
  CliffordElement lhs;  // sum d_{i_s} Omega_{...}
  CliffordElement rhs;  // sum [Omega_{...}, A_{i_s}]_q
  bool holds() const { return lhs == rhs; }
};

BianchiResult bianchi(const CliffordConnection& A, const std::vector<int>& index, Symmetrization sym,
                      BianchiSum sum);

/// Direct = formula for every sorted index, the closed forms, grade 0.
Report verify_curvature(const CliffordConnection& A, Execution exec = Execution::parallel);

/// Bianchi on every sorted index of length N+1 in both consistent pairings.
Report verify_bianchi(const CliffordConnection& A, Execution exec = Execution::parallel);

}  // namespace qcalc
