#include "qcalc/clifford.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>

#include "qcalc/error.hpp"
#include "qcalc/nilpotency.hpp"

namespace qcalc {

namespace {

int mod(long a, int N) { return static_cast<int>(((a % N) + N) % N); }

std::string index_str(const std::vector<int>& idx) {
  std::string s;
  for (std::size_t i = 0; i < idx.size(); ++i) s += (i ? "," : "") + std::to_string(idx[i]);
  return s;
}

long factorial(int n) { return n <= 1 ? 1 : n * factorial(n - 1); }

}  // namespace

CliffordElement::CliffordElement(int p, int N) : p_(p), N_(N) {
  if (p < 1) throw InvalidArgument("p must be >= 1");
  if (N < 2) throw InvalidArgument("N must be >= 2");
}

CliffordElement CliffordElement::scalar(int p, int N, const CycScalar& c) {
  CliffordElement e(p, N);
  e.add_term(Exponents(p, 0), c);
  return e;
}

CliffordElement CliffordElement::generator(int p, int N, int k) {
  if (k < 1 || k > p) throw IndexOutOfRange("generator " + std::to_string(k));
  Exponents e(p, 0);
  e[k - 1] = 1;
  return monomial(p, N, e);
}

CliffordElement CliffordElement::monomial(int p, int N, Exponents e, const CycScalar& c) {
  CliffordElement out(p, N);
  out.add_term(std::move(e), c);
  return out;
}

void CliffordElement::add_term(Exponents e, const CycScalar& c) {
  if (static_cast<int>(e.size()) != p_) throw MismatchedArity("exponent sequence length");
  for (auto& a : e) a = mod(a, N_);
  if (c.is_zero()) return;
  auto [it, inserted] = terms_.try_emplace(std::move(e), c);
  if (inserted) return;
  it->second += c;
  if (it->second.is_zero()) terms_.erase(it);
}

std::optional<int> CliffordElement::grade() const {
  std::optional<int> g;
  for (const auto& [e, c] : terms_) {
    const int ge = mod(std::accumulate(e.begin(), e.end(), 0L), N_);
    if (g && *g != ge) return std::nullopt;
    g = ge;
  }
  return g.value_or(0);
}

std::map<int, CliffordElement> CliffordElement::homogeneous_parts() const {
  std::map<int, CliffordElement> parts;
  for (const auto& [e, c] : terms_) {
    const int ge = mod(std::accumulate(e.begin(), e.end(), 0L), N_);
    parts.try_emplace(ge, p_, N_).first->second.add_term(e, c);
  }
  return parts;
}

void CliffordElement::check_same(const CliffordElement& o) const {
  if (o.p_ != p_ || o.N_ != N_) throw MismatchedAlgebra("Clifford elements of different algebras");
}

CliffordElement CliffordElement::operator-() const {
  CliffordElement r = *this;
  for (auto& [e, c] : r.terms_) c = -c;
  return r;
}

CliffordElement& CliffordElement::operator+=(const CliffordElement& o) {
  check_same(o);
  for (const auto& [e, c] : o.terms_) add_term(e, c);
  return *this;
}

CliffordElement& CliffordElement::operator-=(const CliffordElement& o) { return *this += -o; }

CliffordElement& CliffordElement::operator*=(const CycScalar& c) {
  if (c.is_zero()) {
    terms_.clear();
    return *this;
  }
  for (auto& [e, v] : terms_) v *= c;
  return *this;
}

CliffordElement operator*(const CliffordElement& a, const CliffordElement& b) {
  a.check_same(b);
  const int p = a.p_, N = a.N_;
  CliffordElement out(p, N);
  for (const auto& [ea, ca] : a.terms_) {
    for (const auto& [eb, cb] : b.terms_) {
      // G_k of b passes every G_j of a with j > k: q^{-1} per swap
      long swaps = 0, tail = 0;
      for (int k = p - 1; k >= 0; --k) {
        swaps += tail * eb[k];
        tail += ea[k];
      }
      CliffordElement::Exponents e(p);
      for (int k = 0; k < p; ++k) e[k] = ea[k] + eb[k];
      out.add_term(std::move(e), ca * cb * CycScalar::q_power(N, -swaps));
    }
  }
  return out;
}

bool operator==(const CliffordElement& a, const CliffordElement& b) {
  return a.p_ == b.p_ && a.N_ == b.N_ && a.terms_ == b.terms_;
}

std::string CliffordElement::str() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [e, c] : terms_) {
    if (!first) os << " + ";
    first = false;
    os << "(" << c.str() << ") ";
    std::string mono;
    for (int k = 0; k < p_; ++k) {
      if (e[k] == 0) continue;
      if (!mono.empty()) mono += "*";
      mono += "G" + std::to_string(k + 1);
      if (e[k] > 1) mono += "^" + std::to_string(e[k]);
    }
    os << (mono.empty() ? "1" : mono);
  }
  return os.str();
}

CliffordElement normal_order(int p, int N, const std::vector<int>& word) {
  CliffordElement r = CliffordElement::unit(p, N);
  for (int k : word) r = r * CliffordElement::generator(p, N, k);
  return r;
}

CliffordElement n_anticommutator(const std::vector<CliffordElement>& elems) {
  if (elems.empty()) throw ArityMismatch("no arguments");
  const int N = elems.front().N(), p = elems.front().p();
  if (static_cast<int>(elems.size()) != N)
    throw ArityMismatch("the N-anticommutator takes " + std::to_string(N) + " arguments");
  std::vector<int> perm(N);
  std::iota(perm.begin(), perm.end(), 0);
  CliffordElement sum(p, N);
  do {
    CliffordElement prod = CliffordElement::unit(p, N);
    for (int i : perm) prod = prod * elems[i];
    sum += prod;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return sum;
}

CliffordElement q_exterior_d(int k, const CliffordElement& B) {
  const int p = B.p(), N = B.N();
  const CliffordElement G = CliffordElement::generator(p, N, k);
  CliffordElement out(p, N);
  for (const auto& [b, part] : B.homogeneous_parts()) out += G * part - CycScalar::q_power(N, b) * (part * G);
  return out;
}

namespace {

// [X, Y]_q = XY - q^{xy} YX on homogeneous parts
CliffordElement q_commutator(const CliffordElement& X, const CliffordElement& Y) {
  const int N = X.N();
  CliffordElement out(X.p(), N);
  for (const auto& [x, xp] : X.homogeneous_parts())
    for (const auto& [y, yp] : Y.homogeneous_parts())
      out += xp * yp - CycScalar::q_power(N, static_cast<long>(x) * y) * (yp * xp);
  return out;
}

}  // namespace

std::vector<CliffordElement> clifford_basis(int p, int N) {
  std::vector<CliffordElement> out;
  CliffordElement::Exponents e(p, 0);
  for (;;) {
    out.push_back(CliffordElement::monomial(p, N, e));
    int k = p - 1;
    while (k >= 0 && e[k] == N - 1) e[k--] = 0;
    if (k < 0) break;
    ++e[k];
  }
  return out;
}

// ---- matrices ----

CycMatrix CycMatrix::identity(int dim) {
  CycMatrix m(dim);
  for (int i = 0; i < dim; ++i) m.at(i, i) = CycScalar(1L);
  return m;
}

CycMatrix& CycMatrix::operator+=(const CycMatrix& o) {
  if (o.dim_ != dim_) throw MismatchedArity("matrix sizes differ");
  for (std::size_t i = 0; i < a_.size(); ++i) a_[i] += o.a_[i];
  return *this;
}

CycMatrix operator-(const CycMatrix& a, const CycMatrix& b) { return a + CycScalar(-1L) * b; }

CycMatrix operator*(const CycMatrix& a, const CycMatrix& b) {
  if (a.dim_ != b.dim_) throw MismatchedArity("matrix sizes differ");
  const int d = a.dim_;
  CycMatrix r(d);
  for (int i = 0; i < d; ++i)
    for (int k = 0; k < d; ++k) {
      const CycScalar& x = a.at(i, k);
      if (x.is_zero()) continue;
      for (int j = 0; j < d; ++j)
        if (!b.at(k, j).is_zero()) r.at(i, j) += x * b.at(k, j);
    }
  return r;
}

CycMatrix operator*(const CycScalar& c, const CycMatrix& a) {
  CycMatrix r = a;
  for (auto& x : r.a_) x *= c;
  return r;
}

bool operator==(const CycMatrix& a, const CycMatrix& b) { return a.dim_ == b.dim_ && a.a_ == b.a_; }

bool CycMatrix::is_zero() const {
  return std::all_of(a_.begin(), a_.end(), [](const CycScalar& x) { return x.is_zero(); });
}

CycMatrix CycMatrix::pow(int e) const {
  CycMatrix r = identity(dim_);
  for (int i = 0; i < e; ++i) r = r * *this;
  return r;
}

std::string CycMatrix::str() const {
  std::string s = "[";
  for (int i = 0; i < dim_; ++i) {
    if (i) s += "; ";
    for (int j = 0; j < dim_; ++j) s += (j ? ", " : "") + at(i, j).str();
  }
  return s + "]";
}

CycMatrix kron(const CycMatrix& a, const CycMatrix& b) {
  const int da = a.dim(), db = b.dim();
  CycMatrix r(da * db);
  for (int i = 0; i < da; ++i)
    for (int j = 0; j < da; ++j) {
      if (a.at(i, j).is_zero()) continue;
      for (int k = 0; k < db; ++k)
        for (int l = 0; l < db; ++l) r.at(i * db + k, j * db + l) = a.at(i, j) * b.at(k, l);
    }
  return r;
}

CycMatrix sigma1(int N) {
  CycMatrix m(N);
  for (int i = 0; i < N; ++i) m.at(i, (i + 1) % N) = CycScalar(1L);
  return m;
}

CycMatrix sigma3(int N) {
  CycMatrix m(N);
  for (int i = 0; i < N; ++i) m.at(i, i) = CycScalar::q_power(N, i);
  return m;
}

CycMatrix sigma2(int N) {
  CycMatrix m = sigma3(N) * sigma1(N);
  return N % 2 == 0 ? CycScalar::sqrt_q(N) * m : m;
}

CycMatrix CliffordMatrixRep::represent(const CliffordElement& e) const {
  if (e.p() != p || e.N() != N) throw MismatchedAlgebra("element and representation differ");
  CycMatrix out(dim());
  for (const auto& [ex, c] : e.terms()) {
    CycMatrix m = CycMatrix::identity(dim());
    for (int k = 0; k < p; ++k)
      if (ex[k] > 0) m = m * gamma[k].pow(ex[k]);
    out += c * m;
  }
  return out;
}

CliffordMatrixRep matrix_rep(int p, int N, RepLayout layout) {
  if (p < 1) throw InvalidArgument("p must be >= 1");
  if (N < 2) throw InvalidArgument("N must be >= 2");
  const int k = layout == RepLayout::compact ? std::max(1, p / 2) : std::max(1, (p + 1) / 2);
  const CycMatrix I = CycMatrix::identity(N), s1 = sigma1(N), s2 = sigma2(N), s3 = sigma3(N);
  CliffordMatrixRep rep{p, N, layout, {}};
  for (int g = 1; g <= p; ++g) {
    std::vector<const CycMatrix*> slots;
    if (g <= 2 * k) {
      const int l = (g + 1) / 2;
      for (int s = 1; s < l; ++s) slots.push_back(&s3);
      slots.push_back(g % 2 == 1 ? &s1 : &s2);
      for (int s = l; s < k; ++s) slots.push_back(&I);
    } else {
      for (int s = 0; s < k; ++s) slots.push_back(&s3);
    }
    CycMatrix m = *slots.front();
    for (std::size_t s = 1; s < slots.size(); ++s) m = kron(m, *slots[s]);
    rep.gamma.push_back(std::move(m));
  }
  const CycMatrix Id = CycMatrix::identity(rep.dim());
  for (int i = 0; i < p; ++i) {
    if (!(rep.gamma[i].pow(N) == Id)) throw std::logic_error("G^N != 1 in the representation");
    for (int j = i + 1; j < p; ++j)
      if (!(rep.gamma[i] * rep.gamma[j] == CycScalar::q_power(N, 1) * (rep.gamma[j] * rep.gamma[i])))
        throw std::logic_error("commutation relation fails in the representation");
  }
  return rep;
}

Report verify_clifford(int p, int N, Execution exec) {
  Report rep;
  rep.command = "clifford verify";
  rep.params = {{"p", p}, {"N", N}};
  const auto compact = matrix_rep(p, N, RepLayout::compact);
  const auto faithful = matrix_rep(p, N, RepLayout::faithful);
  const CycMatrix Id = CycMatrix::identity(compact.dim());

  for (int i = 1; i <= p; ++i) {
    const auto& Gi = compact.gamma[i - 1];
    rep.add("matrix G" + std::to_string(i) + "^N = 1", Gi.pow(N) == Id);
    for (int j = 1; j <= p; ++j) {
      if (i == j) continue;
      const CycScalar qij = CycScalar::q_power(N, i < j ? 1 : -1);
      const auto& Gj = compact.gamma[j - 1];
      rep.add("matrix G" + std::to_string(i) + " G" + std::to_string(j) + " = q_ij G" + std::to_string(j) +
                  " G" + std::to_string(i),
              Gi * Gj == qij * (Gj * Gi));
    }
  }
  rep.results["matrix_dim"] = compact.dim();
  rep.results["faithful_dim"] = faithful.dim();

  // words of length 1..4 through normal_order and through the faithful matrices
  std::vector<std::vector<int>> words;
  for (int len = 1; len <= 4; ++len) {
    std::vector<int> w(len, 1);
    for (;;) {
      words.push_back(w);
      int i = len - 1;
      while (i >= 0 && w[i] == p) w[i--] = 1;
      if (i < 0) break;
      ++w[i];
    }
  }
  auto hom = map_indices<int>(
      words.size(),
      [&](std::size_t i) {
        CycMatrix direct = CycMatrix::identity(faithful.dim());
        for (int g : words[i]) direct = direct * faithful.gamma[g - 1];
        return faithful.represent(normal_order(p, N, words[i])) == direct ? 1 : 0;
      },
      exec);
  {
    auto bad = std::find(hom.begin(), hom.end(), 0);
    rep.add("normal_order agrees with matrix products (words of length <= 4)", bad == hom.end(),
            bad == hom.end() ? std::nullopt
                             : std::optional<std::string>("word " + index_str(words[bad - hom.begin()])),
            {{"words", words.size()}});
  }

  // generalized Kronecker relation on every N-tuple of generators
  std::vector<std::vector<int>> tuples;
  {
    std::vector<int> t(N, 1);
    for (;;) {
      tuples.push_back(t);
      int i = N - 1;
      while (i >= 0 && t[i] == p) t[i--] = 1;
      if (i < 0) break;
      ++t[i];
    }
  }
  auto kron_ok = map_indices<int>(
      tuples.size(),
      [&](std::size_t i) {
        std::vector<CliffordElement> g;
        for (int k : tuples[i]) g.push_back(CliffordElement::generator(p, N, k));
        const bool equal = std::all_of(tuples[i].begin(), tuples[i].end(), [&](int k) { return k == tuples[i][0]; });
        const CliffordElement want = CliffordElement::scalar(p, N, CycScalar(equal ? factorial(N) : 0L));
        return n_anticommutator(g) == want ? 1 : 0;
      },
      exec);
  {
    auto bad = std::find(kron_ok.begin(), kron_ok.end(), 0);
    rep.add("{G_i1, ..., G_iN} = N! delta on all generator N-tuples", bad == kron_ok.end(),
            bad == kron_ok.end() ? std::nullopt
                                 : std::optional<std::string>("tuple " + index_str(tuples[bad - kron_ok.begin()])),
            {{"tuples", tuples.size()}});
  }

  const auto basis = clifford_basis(p, N);

  // d_k against the matrix commutator
  {
    auto ok = map_indices<int>(
        basis.size(),
        [&](std::size_t b) {
          const int g = *basis[b].grade();
          const CycMatrix B = faithful.represent(basis[b]);
          for (int k = 1; k <= p; ++k) {
            const auto& G = faithful.gamma[k - 1];
            CycMatrix want = G * B - CycScalar::q_power(N, g) * (B * G);
            if (!(faithful.represent(q_exterior_d(k, basis[b])) == want)) return 0;
          }
          return 1;
        },
        exec);
    rep.add("d_k B = G_k B - q^b B G_k matches the matrix commutator", std::find(ok.begin(), ok.end(), 0) == ok.end(),
            std::nullopt, {{"basis", basis.size()}});
  }

  for (int k = 1; k <= p; ++k) {
    auto res = map_indices<std::string>(
        basis.size(),
        [&](std::size_t b) {
          CliffordElement x = basis[b];
          for (int i = 0; i < N; ++i) x = q_exterior_d(k, x);
          return x.is_zero() ? std::string() : basis[b].str() + " -> " + x.str();
        },
        exec);
    auto bad = std::find_if(res.begin(), res.end(), [](const std::string& s) { return !s.empty(); });
    rep.add("d_" + std::to_string(k) + "^N = 0 on the basis", bad == res.end(),
            bad == res.end() ? std::nullopt : std::optional<std::string>(*bad), {{"basis", basis.size()}});
  }

  for (const auto& idx : multisets(p, N)) {
    auto res = map_indices<std::string>(
        basis.size(),
        [&](std::size_t b) {
          std::vector<int> perm(N);
          std::iota(perm.begin(), perm.end(), 0);
          CliffordElement sum(p, N);
          do {
            CliffordElement x = basis[b];
            for (int i = N - 1; i >= 0; --i) x = q_exterior_d(idx[perm[i]], x);
            sum += x;
          } while (std::next_permutation(perm.begin(), perm.end()));
          return sum.is_zero() ? std::string() : basis[b].str() + " -> " + sum.str();
        },
        exec);
    auto bad = std::find_if(res.begin(), res.end(), [](const std::string& s) { return !s.empty(); });
    rep.add("{d_" + index_str(idx) + "} = 0 on the basis", bad == res.end(),
            bad == res.end() ? std::nullopt : std::optional<std::string>(*bad));
  }

  for (int k = 1; k <= p; ++k) {
    const CliffordElement G = CliffordElement::generator(p, N, k);
    auto res = map_indices<std::string>(
        basis.size(),
        [&](std::size_t b) {
          const int a = *basis[b].grade();
          CliffordElement iter = basis[b];
          for (int l = 1; l <= N; ++l) {
            iter = q_exterior_d(k, iter);
            CliffordElement expansion(p, N);
            for (int i = 0; i <= l; ++i) {
              CliffordElement left = CliffordElement::unit(p, N), right = CliffordElement::unit(p, N);
              for (int s = 0; s < l - i; ++s) left = left * G;
              for (int s = 0; s < i; ++s) right = right * G;
              expansion += alpha_coeff(N, l, i, a) * (left * basis[b] * right);
            }
            if (!(expansion == iter))
              return "l = " + std::to_string(l) + ", B = " + basis[b].str() + ": " + (expansion - iter).str();
          }
          return std::string();
        },
        exec);
    auto bad = std::find_if(res.begin(), res.end(), [](const std::string& s) { return !s.empty(); });
    rep.add("d_" + std::to_string(k) + "^l B = sum alpha^(l)_i G^(l-i) B G^i, l = 1..N", bad == res.end(),
            bad == res.end() ? std::nullopt : std::optional<std::string>(*bad));
  }
  return rep;
}

// ---- connections and curvature ----

void CliffordConnection::validate() const {
  if (components.empty()) throw InvalidArgument("empty connection");
  const int p = components.front().p(), N = components.front().N();
  if (static_cast<int>(components.size()) != p)
    throw InvalidArgument("a connection on C_{p,N} has p components");
  for (std::size_t k = 0; k < components.size(); ++k) {
    const auto& A = components[k];
    if (A.p() != p || A.N() != N) throw MismatchedAlgebra("connection components of different algebras");
    if (!A.is_zero() && A.grade() != std::optional<int>(1 % N))
      throw InvalidArgument("A_" + std::to_string(k + 1) + " is not of grade 1");
  }
}

CliffordConnection random_connection(int p, int N, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const auto& field = CycField::for_root(N);
  CliffordConnection A;
  for (int k = 0; k < p; ++k) {
    CliffordElement Ak(p, N);
    for (const auto& b : clifford_basis(p, N)) {
      if (b.grade() != std::optional<int>(1 % N)) continue;
      if (rng() % 2 == 0) continue;
      std::vector<Rational> c(field.degree());
      for (auto& x : c) x = Rational(static_cast<long>(rng() % 7) - 3, static_cast<long>(rng() % 2) + 1);
      Ak.add_term(b.terms().begin()->first, CycScalar(field, c));
    }
    A.components.push_back(std::move(Ak));
  }
  return A;
}

CliffordElement covariant_apply(const CliffordConnection& A, int k, const CliffordElement& B) {
  if (k < 1 || k > A.p()) throw IndexOutOfRange("connection component " + std::to_string(k));
  return q_exterior_d(k, B) + A.components[k - 1] * B;
}

namespace {

void check_index(const CliffordConnection& A, const std::vector<int>& index, std::size_t len) {
  if (index.size() != len) throw BadIndexCount("index must have length " + std::to_string(len));
  if (!std::is_sorted(index.begin(), index.end())) throw InvalidArgument("index must be sorted");
  for (int i : index)
    if (i < 1 || i > A.p()) throw IndexOutOfRange("index " + std::to_string(i));
}

// Calls fn on every arrangement of `items` under the given summation rule.
template <class T, class F>
void for_arrangements(std::vector<T> items, Symmetrization sym, F&& fn) {
  if (sym == Symmetrization::distinct) {
    std::sort(items.begin(), items.end());
    do fn(items);
    while (std::next_permutation(items.begin(), items.end()));
    return;
  }
  std::vector<int> perm(items.size());
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<T> arranged(items.size());
  do {
    for (std::size_t i = 0; i < perm.size(); ++i) arranged[i] = items[perm[i]];
    fn(arranged);
  } while (std::next_permutation(perm.begin(), perm.end()));
}

CliffordElement apply_anticommutator(const CliffordConnection& A, const std::vector<int>& index,
                                     const CliffordElement& B, Symmetrization sym) {
  CliffordElement sum(B.p(), B.N());
  for_arrangements(index, sym, [&](const std::vector<int>& w) {
    CliffordElement x = B;
    for (auto it = w.rbegin(); it != w.rend(); ++it) x = covariant_apply(A, *it, x);
    sum += x;
  });
  return sum;
}

// symbol code: 2k for G_k, 2k+1 for A_k
CliffordElement symbol_value(const CliffordConnection& A, int code) {
  const int k = code / 2;
  const auto& A1 = A.components.front();
  return code % 2 == 0 ? CliffordElement::generator(A1.p(), A1.N(), k) : A.components[k - 1];
}

// Brace of symbols, summed over arrangements.
CliffordElement brace(const CliffordConnection& A, const std::vector<int>& codes, Symmetrization sym) {
  const auto& A1 = A.components.front();
  CliffordElement sum(A1.p(), A1.N());
  for_arrangements(codes, sym, [&](const std::vector<int>& w) {
    CliffordElement prod = CliffordElement::unit(A1.p(), A1.N());
    for (int c : w) prod = prod * symbol_value(A, c);
    sum += prod;
  });
  return sum;
}

CliffordElement curvature_formula(const CliffordConnection& A, const std::vector<int>& index, Symmetrization sym) {
  const auto& A1 = A.components.front();
  CliffordElement sum(A1.p(), A1.N());
  const std::size_t n = index.size();
  if (sym == Symmetrization::all_orderings) {
    // every nonempty set of positions
    for (unsigned mask = 1; mask < (1u << n); ++mask) {
      std::vector<int> codes;
      for (std::size_t s = 0; s < n; ++s) codes.push_back(2 * index[s] + ((mask >> s) & 1u));
      sum += brace(A, codes, sym);
    }
    return sum;
  }
  // every nonempty sub-multiset: how many copies of each value are replaced
  std::vector<std::pair<int, int>> groups;  // value, multiplicity
  for (int i : index) {
    if (groups.empty() || groups.back().first != i) groups.push_back({i, 0});
    ++groups.back().second;
  }
  std::vector<int> take(groups.size(), 0);
  for (;;) {
    std::size_t g = 0;
    while (g < groups.size() && take[g] == groups[g].second) take[g++] = 0;
    if (g == groups.size()) break;
    ++take[g];
    std::vector<int> codes;
    for (std::size_t h = 0; h < groups.size(); ++h)
      for (int c = 0; c < groups[h].second; ++c) codes.push_back(2 * groups[h].first + (c < take[h] ? 1 : 0));
    sum += brace(A, codes, sym);
  }
  return sum;
}

struct ClosedForm {
  int p, N;
  std::vector<int> index;
  std::vector<std::vector<int>> braces;
};

constexpr int G(int k) { return 2 * k; }
constexpr int C(int k) { return 2 * k + 1; }

const std::vector<ClosedForm>& closed_forms() {
  static const std::vector<ClosedForm> table{
      {2, 2, {1, 1}, {{G(1), C(1)}, {C(1), C(1)}}},
      {2, 2, {1, 2}, {{G(1), C(2)}, {G(2), C(1)}, {C(1), C(2)}}},
      {2, 2, {2, 2}, {{G(2), C(2)}, {C(2), C(2)}}},
      {2, 3, {1, 1, 1}, {{G(1), G(1), C(1)}, {G(1), C(1), C(1)}, {C(1), C(1), C(1)}}},
      {2, 3, {1, 1, 2}, {{G(1), G(1), C(2)}, {G(1), C(1), C(2)}, {C(1), G(1), G(2)}, {C(1), C(1), C(2)}}},
      {2, 3, {1, 2, 2}, {{G(1), G(2), C(2)}, {G(1), C(2), C(2)}, {C(1), G(2), G(2)}, {C(1), C(2), C(2)}}},
      {2, 3, {2, 2, 2}, {{G(2), G(2), C(2)}, {G(2), C(2), C(2)}, {C(2), C(2), C(2)}}},
  };
  return table;
}

const ClosedForm* find_closed_form(int p, int N, const std::vector<int>& index) {
  for (const auto& cf : closed_forms())
    if (cf.p == p && cf.N == N && cf.index == index) return &cf;
  return nullptr;
}

}  // namespace

CurvatureComponent curvature(const CliffordConnection& A, const std::vector<int>& index, CurvatureMethod method,
                             Symmetrization sym) {
  A.validate();
  const int p = A.p(), N = A.components.front().N();
  check_index(A, index, static_cast<std::size_t>(N));
  if (method == CurvatureMethod::formula) return {index, curvature_formula(A, index, sym)};
  CliffordElement omega = apply_anticommutator(A, index, CliffordElement::unit(p, N), sym);
  for (const auto& B : clifford_basis(p, N)) {
    CliffordElement got = apply_anticommutator(A, index, B, sym);
    if (!(got == omega * B))
      throw NotLeftMultiplication("at B = " + B.str() + ": " + (got - omega * B).str());
  }
  return {index, std::move(omega)};
}

std::optional<CliffordElement> closed_form_curvature(const CliffordConnection& A, const std::vector<int>& index) {
  A.validate();
  const auto* cf = find_closed_form(A.p(), A.components.front().N(), index);
  if (!cf) return std::nullopt;
  CliffordElement sum(A.p(), A.components.front().N());
  for (const auto& b : cf->braces) sum += brace(A, b, Symmetrization::distinct);
  return sum;
}

std::optional<std::string> closed_form_text(int p, int N, const std::vector<int>& index) {
  const auto* cf = find_closed_form(p, N, index);
  if (!cf) return std::nullopt;
  std::string s;
  for (const auto& b : cf->braces) {
    if (!s.empty()) s += " + ";
    s += "{";
    for (std::size_t i = 0; i < b.size(); ++i)
      s += (i ? ", " : "") + std::string(b[i] % 2 ? "A" : "G") + std::to_string(b[i] / 2);
    s += "}";
  }
  return s;
}

BianchiResult bianchi(const CliffordConnection& A, const std::vector<int>& index, Symmetrization sym,
                      BianchiSum sum) {
  A.validate();
  const int p = A.p(), N = A.components.front().N();
  check_index(A, index, static_cast<std::size_t>(N) + 1);
  BianchiResult r{CliffordElement(p, N), CliffordElement(p, N)};
  for (std::size_t s = 0; s < index.size(); ++s) {
    if (sum == BianchiSum::distinct_values && s > 0 && index[s] == index[s - 1]) continue;
    std::vector<int> rest = index;
    rest.erase(rest.begin() + static_cast<long>(s));
    const CliffordElement omega = apply_anticommutator(A, rest, CliffordElement::unit(p, N), sym);
    r.lhs += q_exterior_d(index[s], omega);
    r.rhs += q_commutator(omega, A.components[index[s] - 1]);
  }
  return r;
}

Report verify_curvature(const CliffordConnection& A, Execution exec) {
  A.validate();
  const int p = A.p(), N = A.components.front().N();
  Report rep;
  rep.command = "clifford curvature";
  rep.params = {{"p", p}, {"N", N}};
  const auto idxs = multisets(p, N);
  struct Outcome {
    std::vector<Check> checks;
    std::string omega;
  };
  auto out = map_indices<Outcome>(
      idxs.size(),
      [&](std::size_t i) {
        const auto& idx = idxs[i];
        const std::string tag = "Omega_{" + index_str(idx) + "}";
        Outcome o;
        auto witness = [](const CliffordElement& a, const CliffordElement& b) {
          return a == b ? std::nullopt : std::optional<std::string>((a - b).str());
        };
        CliffordElement direct(p, N);
        try {
          direct = curvature(A, idx, CurvatureMethod::direct).value;
          o.checks.push_back({tag + " acts by left multiplication", true, std::nullopt, {}});
        } catch (const NotLeftMultiplication& e) {
          o.checks.push_back({tag + " acts by left multiplication", false, e.what(), {}});
          direct = apply_anticommutator(A, idx, CliffordElement::unit(p, N), Symmetrization::distinct);
        }
        o.omega = direct.str();
        const auto formula = curvature(A, idx, CurvatureMethod::formula).value;
        o.checks.push_back({tag + " direct = formula", direct == formula, witness(direct, formula), {}});
        o.checks.push_back({tag + " has grade 0", direct.grade() == std::optional<int>(0), std::nullopt, {}});
        const auto dall = apply_anticommutator(A, idx, CliffordElement::unit(p, N), Symmetrization::all_orderings);
        const auto fall = curvature(A, idx, CurvatureMethod::formula, Symmetrization::all_orderings).value;
        o.checks.push_back({tag + " direct = formula (all orderings)", dall == fall, witness(dall, fall), {}});
        if (auto cf = closed_form_curvature(A, idx)) {
          o.checks.push_back({tag + " closed form", *cf == direct, witness(*cf, direct),
                              {{"closed_form", *closed_form_text(p, N, idx)}}});
        }
        return o;
      },
      exec);
  Json omegas = Json::object();
  for (std::size_t i = 0; i < idxs.size(); ++i) {
    for (auto& c : out[i].checks) rep.checks.push_back(std::move(c));
    omegas[index_str(idxs[i])] = out[i].omega;
  }
  rep.results["omega"] = omegas;
  return rep;
}

Report verify_bianchi(const CliffordConnection& A, Execution exec) {
  A.validate();
  const int p = A.p(), N = A.components.front().N();
  Report rep;
  rep.command = "clifford bianchi";
  rep.params = {{"p", p}, {"N", N}};
  const auto idxs = multisets(p, N + 1);
  auto out = map_indices<std::vector<Check>>(
      idxs.size(),
      [&](std::size_t i) {
        std::vector<Check> cs;
        const std::string tag = "Bianchi (" + index_str(idxs[i]) + ")";
        auto r1 = bianchi(A, idxs[i], Symmetrization::distinct, BianchiSum::distinct_values);
        cs.push_back({tag + " distinct arrangements", r1.holds(),
                      r1.holds() ? std::nullopt : std::optional<std::string>((r1.lhs - r1.rhs).str()), {}});
        auto r2 = bianchi(A, idxs[i], Symmetrization::all_orderings, BianchiSum::positions);
        cs.push_back({tag + " all orderings", r2.holds(),
                      r2.holds() ? std::nullopt : std::optional<std::string>((r2.lhs - r2.rhs).str()), {}});
        return cs;
      },
      exec);
  for (auto& cs : out)
    for (auto& c : cs) rep.checks.push_back(std::move(c));
  return rep;
}

}  // namespace qcalc
