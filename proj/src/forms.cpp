#include "qcalc/forms.hpp"

#include <set>
#include <sstream>

#include "qcalc/error.hpp"

namespace qcalc {

std::string to_string(Mode m) {
  switch (m) {
    case Mode::raw:
      return "raw";
    case Mode::truncated:
      return "truncated";
    case Mode::free:
      return "free";
  }
  return "?";
}

int DiffMonomial::order() const {
  int s = 0;
  for (const auto& f : factors) s += f.alpha;
  return s;
}

bool DiffMonomial::first_order_only() const {
  for (const auto& f : factors)
    if (f.alpha != 1) return false;
  return true;
}

std::string DiffMonomial::str(const std::vector<std::string>& names) const {
  if (factors.empty()) return "1";
  std::string out;
  for (const auto& f : factors) {
    if (!out.empty()) out += "*";
    out += "d";
    if (f.alpha > 1) out += std::to_string(f.alpha);
    if (f.index - 1 < static_cast<int>(names.size())) {
      out += names[f.index - 1];
    } else {
      out += "x" + std::to_string(f.index);
    }
  }
  return out;
}

namespace {

struct CycleReduction {
  bool zero = false;
  long phase = 0;  // exponent of q
  std::vector<DiffFactor> canonical;
};

// Reduces an order-N word with w = q^{a1} rot(w). Rotating left by s positions
// costs q^{a1+...+as}.
CycleReduction reduce_cycle(const std::vector<DiffFactor>& w, int N) {
  const std::size_t r = w.size();
  auto rotated = [&](std::size_t s) {
    std::vector<DiffFactor> out(r);
    for (std::size_t i = 0; i < r; ++i) out[i] = w[(i + s) % r];
    return out;
  };
  CycleReduction best{false, 0, w};
  long prefix = 0;
  for (std::size_t s = 1; s < r; ++s) {
    prefix += w[s - 1].alpha;
    auto rot = rotated(s);
    if (rot == w) {
      // smallest period: the word equals q^{prefix} times itself
      if (prefix % N != 0) return {true, 0, {}};
      break;
    }
    if (rot < best.canonical) {
      best.canonical = std::move(rot);
      best.phase = prefix;
    }
  }
  return best;
}

int word_order(const std::vector<DiffFactor>& w, std::size_t from, std::size_t to) {
  int s = 0;
  for (std::size_t i = from; i < to; ++i) s += w[i].alpha;
  return s;
}

}  // namespace

NormalForm normal_form(const Algebra& alg, const std::vector<DiffFactor>& word) {
  for (const auto& f : word) {
    if (f.alpha < 1 || f.alpha > alg.N - 1)
      throw BadOrder("differential order " + std::to_string(f.alpha) + " outside 1.." +
                     std::to_string(alg.N - 1));
    if (f.index < 1 || f.index > alg.n)
      throw IndexOutOfRange("coordinate index " + std::to_string(f.index));
  }
  if (alg.mode == Mode::raw) return {false, 0, DiffMonomial{word}};

  if (alg.mode == Mode::truncated) {
    const int ord = word_order(word, 0, word.size());
    if (ord < alg.N) return {false, 0, DiffMonomial{word}};
    if (ord > alg.N) return {true, 0, {}};
    auto red = reduce_cycle(word, alg.N);
    if (red.zero) return {true, 0, {}};
    return {false, red.phase, DiffMonomial{std::move(red.canonical)}};
  }

  // free mode: rewrite order-N windows until none is out of normal form
  if (alg.n != 1) throw InvalidArgument("free mode supports n = 1 only");
  std::vector<DiffFactor> w = word;
  long phase = 0;
  for (int guard = 0;; ++guard) {
    if (guard > 100000) throw InvalidArgument("free-mode rewriting did not terminate");
    bool changed = false;
    for (std::size_t i = 0; i < w.size() && !changed; ++i) {
      int ord = 0;
      for (std::size_t j = i; j < w.size(); ++j) {
        ord += w[j].alpha;
        if (ord > alg.N) break;
        if (ord < alg.N) continue;
        std::vector<DiffFactor> window(w.begin() + i, w.begin() + j + 1);
        auto red = reduce_cycle(window, alg.N);
        if (red.zero) return {true, 0, {}};
        if (red.canonical != window) {
          std::copy(red.canonical.begin(), red.canonical.end(), w.begin() + i);
          phase += red.phase;
          changed = true;
        }
        break;
      }
    }
    if (!changed) break;
  }
  return {false, phase, DiffMonomial{std::move(w)}};
}

Form Form::function(Algebra alg, const CoeffPoly& f) {
  Form out(alg);
  out.add_term(DiffMonomial{}, f);
  return out;
}

Form Form::word(Algebra alg, const std::vector<DiffFactor>& w, const CoeffPoly& coeff) {
  Form out(alg);
  auto nf = normal_form(alg, w);
  if (!nf.zero) out.add_term(nf.mono, coeff * CycScalar::q_power(alg.N, nf.q_exp));
  return out;
}

Form Form::word(Algebra alg, const std::vector<DiffFactor>& w) {
  return word(alg, w, CoeffPoly::constant(alg.n, CycScalar(1L)));
}

Form Form::differential(Algebra alg, int alpha, int index) { return word(alg, {{alpha, index}}); }

CoeffPoly Form::coefficient(const DiffMonomial& m) const {
  auto it = terms_.find(m);
  return it == terms_.end() ? CoeffPoly(alg_.n) : it->second;
}

void Form::add_term(const DiffMonomial& mono, const CoeffPoly& coeff) {
  if (coeff.nvars() != alg_.n) throw MismatchedArity("form coefficient arity");
  if (coeff.is_zero()) return;
  auto [it, inserted] = terms_.try_emplace(mono, coeff);
  if (inserted) return;
  it->second += coeff;
  if (it->second.is_zero()) terms_.erase(it);
}

int Form::homogeneous_grade() const {
  int g = -1;
  for (const auto& [m, c] : terms_) {
    const int gm = m.grade(alg_.N);
    if (g == -1) {
      g = gm;
    } else if (g != gm) {
      return -1;
    }
  }
  return g == -1 ? 0 : g;
}

Form Form::operator-() const {
  Form r = *this;
  for (auto& [m, c] : r.terms_) c = -c;
  return r;
}

Form& Form::operator+=(const Form& o) {
  if (!(o.alg_ == alg_)) throw MismatchedAlgebra("adding forms over different algebras");
  for (const auto& [m, c] : o.terms_) add_term(m, c);
  return *this;
}

Form& Form::operator-=(const Form& o) { return *this += -o; }

Form& Form::operator*=(const CycScalar& c) {
  if (c.is_zero()) {
    terms_.clear();
    return *this;
  }
  for (auto& [m, v] : terms_) v *= c;
  return *this;
}

Form operator*(const CoeffPoly& f, const Form& a) {
  Form out(a.alg_);
  for (const auto& [m, c] : a.terms_) out.add_term(m, f * c);
  return out;
}

bool operator==(const Form& a, const Form& b) {
  if (!(a.alg_ == b.alg_) || a.terms_.size() != b.terms_.size()) return false;
  auto ib = b.terms_.begin();
  for (const auto& [m, c] : a.terms_) {
    if (!(m == ib->first) || !(c == ib->second)) return false;
    ++ib;
  }
  return true;
}

std::string Form::str(const std::vector<std::string>& names) const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [m, c] : terms_) {
    if (!first) os << " + ";
    first = false;
    os << "(" << c.str(names) << ") ⊗ " << m.str(names);
  }
  return os.str();
}

Form form_mul(const Form& a, const Form& b, CoefficientPolicy policy) {
  if (!(a.algebra() == b.algebra())) throw MismatchedAlgebra("multiplying forms over different algebras");
  const Algebra& alg = a.algebra();
  Form out(alg);
  for (const auto& [ma, ca] : a.terms()) {
    for (const auto& [mb, cb] : b.terms()) {
      if (policy == CoefficientPolicy::left_module && !cb.is_constant() && !ma.first_order_only())
        throw NonCommutativeCoefficient("coefficient " + cb.str() + " cannot cross " + ma.str());
      std::vector<DiffFactor> w = ma.factors;
      w.insert(w.end(), mb.factors.begin(), mb.factors.end());
      auto nf = normal_form(alg, w);
      if (nf.zero) continue;
      out.add_term(nf.mono, ca * cb * CycScalar::q_power(alg.N, nf.q_exp));
    }
  }
  return out;
}

Form exterior_d(const Form& a) {
  const Algebra& alg = a.algebra();
  Form out(alg);
  auto emit = [&](const std::vector<DiffFactor>& w, const CoeffPoly& c) {
    auto nf = normal_form(alg, w);
    if (!nf.zero) out.add_term(nf.mono, c * CycScalar::q_power(alg.N, nf.q_exp));
  };
  for (const auto& [m, f] : a.terms()) {
    // d(f) M
    for (int i = 0; i < alg.n; ++i) {
      CoeffPoly g = f.partial(i);
      if (g.is_zero()) continue;
      std::vector<DiffFactor> w{{1, i + 1}};
      w.insert(w.end(), m.factors.begin(), m.factors.end());
      emit(w, g);
    }
    // f dM, factor by factor with q-Leibniz signs
    int before = 0;
    for (std::size_t j = 0; j < m.factors.size(); ++j) {
      const int alpha = m.factors[j].alpha;
      if (alpha < alg.N - 1) {
        std::vector<DiffFactor> w = m.factors;
        ++w[j].alpha;
        emit(w, f * CycScalar::q_power(alg.N, before));
      }
      before += alpha;
    }
  }
  return out;
}

Form exterior_d_pow(const Form& a, int k) {
  Form r = a;
  for (int i = 0; i < k; ++i) r = exterior_d(r);
  return r;
}

Form reduce_in(const Form& a, const Algebra& target) {
  const Algebra& src = a.algebra();
  if (src.N != target.N || src.n != target.n)
    throw MismatchedAlgebra("reduce_in needs the same N and n");
  Form out(target);
  for (const auto& [m, c] : a.terms()) {
    auto nf = normal_form(target, m.factors);
    if (!nf.zero) out.add_term(nf.mono, c * CycScalar::q_power(target.N, nf.q_exp));
  }
  return out;
}

namespace {

void grow_words(const Algebra& alg, int max_order, std::vector<DiffFactor>& cur, int ord,
                std::set<DiffMonomial>& out) {
  if (!cur.empty()) {
    auto nf = normal_form(alg, cur);
    if (!nf.zero) out.insert(nf.mono);
  }
  for (int a = 1; a <= alg.N - 1 && ord + a <= max_order; ++a) {
    for (int i = 1; i <= alg.n; ++i) {
      cur.push_back({a, i});
      grow_words(alg, max_order, cur, ord + a, out);
      cur.pop_back();
    }
  }
}

}  // namespace

std::vector<DiffMonomial> enumerate_monomials(const Algebra& alg, int max_order) {
  std::set<DiffMonomial> found;
  std::vector<DiffFactor> cur;
  grow_words(alg, max_order, cur, 0, found);
  return {found.begin(), found.end()};
}

std::vector<DiffMonomial> basis_enumerate(int n, int N) {
  if (N != 3) throw UnsupportedN("basis enumeration is defined for N = 3 only");
  if (n < 1) throw InvalidArgument("n must be >= 1");
  return enumerate_monomials(Algebra{3, n, Mode::truncated}, 3);
}

long module_dimension(int n, int N) {
  if (N != 3) throw UnsupportedN("the dimension formula is specific to N = 3");
  if (n < 1) throw InvalidArgument("n must be >= 1");
  const long m = n;
  return (m * m * m + 6 * m * m + 5 * m) / 3;
}

}  // namespace qcalc
