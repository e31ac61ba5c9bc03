#include "qcalc/covariant.hpp"

#include <algorithm>

#include "qcalc/error.hpp"
#include "qcalc/nilpotency.hpp"

namespace qcalc {

namespace {

constexpr int kN = 3;

CycScalar q(long k = 1) { return CycScalar::q_power(kN, k); }
const CycScalar& third() {
  static const CycScalar t(Rational(1, 3));
  return t;
}

std::string index_str(const std::vector<int>& idx) {
  std::string s;
  for (std::size_t i = 0; i < idx.size(); ++i) s += (i ? "," : "") + std::to_string(idx[i]);
  return s;
}

bool poly_is_real(const CoeffPoly& p) {
  for (const auto& [e, c] : p.terms())
    if (!c.is_real()) return false;
  return true;
}

}  // namespace

// ---- Tensor ----

Tensor::Tensor(int dim, int lower, int nvars) : dim_(dim), lower_(lower), nvars_(nvars) {
  if (dim < 1) throw InvalidArgument("tensor dimension must be >= 1");
  std::size_t sz = 1;
  for (int i = 0; i <= lower; ++i) sz *= static_cast<std::size_t>(dim);
  data_.assign(sz, CoeffPoly(nvars));
}

std::size_t Tensor::offset(const std::vector<int>& idx) const {
  if (static_cast<int>(idx.size()) != lower_ + 1)
    throw BadIndexCount("tensor takes " + std::to_string(lower_ + 1) + " indices");
  std::size_t off = 0;
  for (int i : idx) {
    if (i < 1 || i > dim_) throw IndexOutOfRange("tensor index " + std::to_string(i));
    off = off * static_cast<std::size_t>(dim_) + static_cast<std::size_t>(i - 1);
  }
  return off;
}

CoeffPoly& Tensor::operator()(std::initializer_list<int> idx) { return data_[offset(idx)]; }
const CoeffPoly& Tensor::operator()(std::initializer_list<int> idx) const { return data_[offset(idx)]; }
CoeffPoly& Tensor::at(const std::vector<int>& idx) { return data_[offset(idx)]; }
const CoeffPoly& Tensor::at(const std::vector<int>& idx) const { return data_[offset(idx)]; }

std::vector<int> Tensor::unflatten(std::size_t i) const {
  std::vector<int> idx(static_cast<std::size_t>(lower_) + 1);
  for (auto it = idx.rbegin(); it != idx.rend(); ++it) {
    *it = static_cast<int>(i % static_cast<std::size_t>(dim_)) + 1;
    i /= static_cast<std::size_t>(dim_);
  }
  return idx;
}

bool Tensor::is_zero() const {
  return std::all_of(data_.begin(), data_.end(), [](const CoeffPoly& p) { return p.is_zero(); });
}

void Tensor::check_shape(const Tensor& o) const {
  if (o.dim_ != dim_ || o.lower_ != lower_ || o.nvars_ != nvars_) throw MismatchedArity("tensor shapes differ");
}

Tensor Tensor::operator-() const {
  Tensor r = *this;
  for (auto& p : r.data_) p = -p;
  return r;
}

Tensor& Tensor::operator+=(const Tensor& o) {
  check_shape(o);
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
  return *this;
}

Tensor& Tensor::operator-=(const Tensor& o) {
  check_shape(o);
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
  return *this;
}

Tensor operator*(const CycScalar& c, const Tensor& t) {
  Tensor r = t;
  for (auto& p : r.data_) p *= c;
  return r;
}

bool operator==(const Tensor& a, const Tensor& b) {
  return a.dim_ == b.dim_ && a.lower_ == b.lower_ && a.nvars_ == b.nvars_ && a.data_ == b.data_;
}

Json Tensor::to_json(const std::vector<std::string>& names) const {
  Json j = Json::object();
  for (std::size_t i = 0; i < data_.size(); ++i)
    if (!data_[i].is_zero()) j[index_str(unflatten(i))] = data_[i].str(names);
  return j;
}

// ---- bundles ----

ConnectionBundle ConnectionBundle::zero(int n) { return {n, Tensor(n, 2, n), Tensor(n, 2, n), Tensor(n, 3, n)}; }

void ConnectionBundle::validate() const {
  auto ok = [&](const Tensor& t, int lower) { return t.dim() == n && t.lower() == lower && t.nvars() == n; };
  if (n < 1) throw InvalidArgument("chart dimension must be >= 1");
  if (!ok(gamma, 2) || !ok(bcoef, 2) || !ok(ccoef, 3)) throw MismatchedArity("bundle shapes disagree with n");
}

ConnectionBundle random_bundle(int n, std::uint64_t seed, int maxdeg, bool symmetric_gamma) {
  ConnectionBundle b = ConnectionBundle::zero(n);
  std::uint64_t counter = 0;
  for (std::size_t i = 0; i < b.gamma.size(); ++i) {
    auto idx = b.gamma.unflatten(i);
    if (symmetric_gamma && idx[1] > idx[2]) continue;
    b.gamma.flat(i) = random_poly(trial_seed(seed, counter++), n, maxdeg);
    if (symmetric_gamma) b.gamma({idx[0], idx[2], idx[1]}) = b.gamma.flat(i);
  }
  for (std::size_t i = 0; i < b.bcoef.size(); ++i) b.bcoef.flat(i) = random_poly(trial_seed(seed, counter++), n, maxdeg);
  for (std::size_t i = 0; i < b.ccoef.size(); ++i) b.ccoef.flat(i) = random_poly(trial_seed(seed, counter++), n, maxdeg);
  return b;
}

Tensor k_tensor(const Tensor& G) {
  const int n = G.dim();
  Tensor K(n, 3, G.nvars());
  for (std::size_t i = 0; i < K.size(); ++i) {
    const auto idx = K.unflatten(i);
    const int k = idx[0], l = idx[1], m = idx[2], s = idx[3];
    CoeffPoly v = G({k, m, s}).partial(l - 1);
    for (int r = 1; r <= n; ++r) {
      v -= G({r, l, m}) * G({k, r, s});
      v -= q() * (G({r, m, s}) * G({k, l, r}));
    }
    K.flat(i) = std::move(v);
  }
  return K;
}

TildeCoefficients tilde_closed_form(const ConnectionBundle& b) {
  b.validate();
  Tensor bt(b.n, 2, b.n);
  for (std::size_t i = 0; i < bt.size(); ++i) {
    const auto idx = bt.unflatten(i);
    bt.flat(i) = b.bcoef.flat(i) + q() * b.gamma.flat(i) + q(2) * b.gamma({idx[0], idx[2], idx[1]});
  }
  return {std::move(bt), b.ccoef + k_tensor(b.gamma)};
}

// ---- forms ----

Algebra chart_algebra(int n) { return Algebra{kN, n, Mode::truncated}; }

Form covariant_d1(int n, int k) { return Form::differential(chart_algebra(n), 1, k); }

Form covariant_d2(const ConnectionBundle& b, int k) {
  b.validate();
  const Algebra alg = chart_algebra(b.n);
  Form f = Form::differential(alg, 2, k);
  for (int l = 1; l <= b.n; ++l)
    for (int m = 1; m <= b.n; ++m) {
      const CoeffPoly& g = b.gamma({k, l, m});
      if (!g.is_zero()) f += Form::word(alg, {{1, l}, {1, m}}, g);
    }
  return f;
}

D3Expansion covariant_d3(const ConnectionBundle& b, int k) {
  b.validate();
  const int n = b.n;
  if (k < 1 || k > n) throw IndexOutOfRange("coordinate index " + std::to_string(k));
  const Algebra alg = chart_algebra(n);
  std::vector<Form> D2;
  for (int m = 1; m <= n; ++m) D2.push_back(covariant_d2(b, m));

  Form f = exterior_d(covariant_d2(b, k));
  for (int l = 1; l <= n; ++l)
    for (int m = 1; m <= n; ++m) {
      const CoeffPoly& c = b.bcoef({k, l, m});
      if (!c.is_zero()) f += c * form_mul(covariant_d1(n, l), D2[m - 1]);
    }
  for (int l = 1; l <= n; ++l)
    for (int m = 1; m <= n; ++m)
      for (int s = 1; s <= n; ++s) {
        const CoeffPoly& c = b.ccoef({k, l, m, s});
        if (!c.is_zero()) f += Form::word(alg, {{1, l}, {1, m}, {1, s}}, c);
      }

  D3Expansion out{f, Tensor(n, 2, n), Tensor(n, 3, n)};
  Form rest = f;
  for (int l = 1; l <= n; ++l)
    for (int m = 1; m <= n; ++m) {
      CoeffPoly c = f.coefficient(DiffMonomial{{{1, l}, {2, m}}});
      if (c.is_zero()) continue;
      out.btilde({k, l, m}) = c;
      rest -= c * form_mul(covariant_d1(n, l), D2[m - 1]);
    }
  for (const auto& [mono, c] : rest.terms()) {
    if (mono.factors.size() != 3 || !mono.first_order_only())
      throw BasisRewriteFailure("left over " + mono.str() + " in D3 x^" + std::to_string(k));
    // on the rotation orbit of a canonical word w_lmn: w_nlm = q w_lmn and
    // w_mnl = q^2 w_lmn, so an anti tensor contributes 3 X_lmn
    const int l = mono.factors[0].index, m = mono.factors[1].index, s = mono.factors[2].index;
    const CoeffPoly x = c * third();
    out.ctilde_anti({k, l, m, s}) += x;
    out.ctilde_anti({k, s, l, m}) += q(2) * x;
    out.ctilde_anti({k, m, s, l}) += q() * x;
  }
  return out;
}

TildeCoefficients extract_tilde(const ConnectionBundle& b, Execution exec) {
  b.validate();
  auto parts = map_indices<D3Expansion>(
      static_cast<std::size_t>(b.n), [&](std::size_t k) { return covariant_d3(b, static_cast<int>(k) + 1); }, exec);
  TildeCoefficients t{Tensor(b.n, 2, b.n), Tensor(b.n, 3, b.n)};
  for (const auto& p : parts) {
    t.btilde += p.btilde;
    t.ctilde += p.ctilde_anti;
  }
  return t;
}

// ---- Z_3 split ----

Tensor rotate_lower(const Tensor& t) {
  if (t.lower() != 3) throw BadIndexCount("the Z_3 split needs three lower indices");
  Tensor r(t.dim(), 3, t.nvars());
  for (std::size_t i = 0; i < r.size(); ++i) {
    const auto idx = r.unflatten(i);
    r.flat(i) = t({idx[0], idx[3], idx[1], idx[2]});
  }
  return r;
}

Z3Parts z3_split(const Tensor& t) {
  const Tensor r1 = rotate_lower(t);
  const Tensor r2 = rotate_lower(r1);
  return {third() * (t + r1 + r2), third() * (t + q(2) * r1 + q() * r2), third() * (t + q() * r1 + q(2) * r2)};
}

// ---- chart changes ----

namespace {

struct ChartData {
  int n;
  std::vector<std::vector<CoeffPoly>> V;  // dy^{k'}/dx^k at x = g(y)
  std::vector<std::vector<CoeffPoly>> U;  // dx^l/dy^{l'}
  Tensor H;                               // d2 x^k / dy^{l'} dy^{m'}
};

ChartData chart_data(const PolyMap& chart) {
  const int n = chart.dim();
  ChartData d{n, {}, {}, Tensor(n, 2, n)};
  d.V.assign(n, std::vector<CoeffPoly>(n, CoeffPoly(n)));
  d.U.assign(n, std::vector<CoeffPoly>(n, CoeffPoly(n)));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      d.V[a][b] = compose(chart.forward()[a].partial(b), chart, Direction::inverse);
      d.U[a][b] = chart.inverse()[a].partial(b);
    }
  for (std::size_t i = 0; i < d.H.size(); ++i) {
    const auto idx = d.H.unflatten(i);
    d.H.flat(i) = chart.inverse()[idx[0] - 1].partial(idx[1] - 1).partial(idx[2] - 1);
  }
  return d;
}

// new[.., a', ..] = sum_a W[a'][a] t[.., a, ..] in one slot
Tensor contract_slot(const Tensor& t, int slot, const std::vector<std::vector<CoeffPoly>>& W) {
  Tensor r(t.dim(), t.lower(), t.nvars());
  for (std::size_t i = 0; i < r.size(); ++i) {
    auto idx = r.unflatten(i);
    const int a2 = idx[slot];
    CoeffPoly v(t.nvars());
    for (int a = 1; a <= t.dim(); ++a) {
      const CoeffPoly& w = W[a2 - 1][a - 1];
      if (w.is_zero()) continue;
      idx[slot] = a;
      const CoeffPoly& x = t.at(idx);
      if (!x.is_zero()) v += w * x;
    }
    r.flat(i) = std::move(v);
  }
  return r;
}

Tensor transform_with(const Tensor& t, const PolyMap& chart, const ChartData& d) {
  Tensor r(t.dim(), t.lower(), t.nvars());
  for (std::size_t i = 0; i < t.size(); ++i) r.flat(i) = compose(t.flat(i), chart, Direction::inverse);
  r = contract_slot(r, 0, d.V);
  std::vector<std::vector<CoeffPoly>> Ut(d.n, std::vector<CoeffPoly>(d.n, CoeffPoly(d.n)));
  for (int a = 0; a < d.n; ++a)
    for (int b = 0; b < d.n; ++b) Ut[b][a] = d.U[a][b];
  for (int s = 1; s <= t.lower(); ++s) r = contract_slot(r, s, Ut);
  return r;
}

void check_chart(const Tensor& t, const PolyMap& chart) {
  if (t.dim() != chart.dim() || t.nvars() != chart.dim()) throw MismatchedArity("tensor and chart dimensions differ");
}

}  // namespace

Tensor transform_tensor(const Tensor& t, const PolyMap& chart) {
  check_chart(t, chart);
  return transform_with(t, chart, chart_data(chart));
}

ConnectionBundle transform_bundle(const ConnectionBundle& b, const PolyMap& chart) {
  b.validate();
  check_chart(b.gamma, chart);
  const ChartData d = chart_data(chart);
  const Tensor inhom = contract_slot(d.H, 0, d.V);
  ConnectionBundle out{b.n, transform_with(b.gamma, chart, d) + inhom, transform_with(b.bcoef, chart, d) + inhom,
                       Tensor()};
  out.ccoef = transform_with(b.ccoef + k_tensor(b.gamma), chart, d) - k_tensor(out.gamma);
  return out;
}

PolyMap standard_chart(const std::string& name, int n) {
  if (n < 1) throw InvalidArgument("chart dimension must be >= 1");
  if (name == "identity") return PolyMap::identity(n);
  if (name != "affine" && name != "shear") throw InvalidArgument("unknown chart '" + name + "'");
  const bool affine = name == "affine";
  auto var = [&](int i) { return CoeffPoly::variable(n, i); };
  // y_i = d_i x_i + h_i(x_1..x_{i-1}), solved for x by forward substitution
  std::vector<CoeffPoly> fwd, inv;
  for (int i = 0; i < n; ++i) {
    CoeffPoly h(n);
    CycScalar d(1L);
    if (i == 0 && affine) {
      d = CycScalar(2L);
      h = CoeffPoly::constant(n, CycScalar(1L));
    } else if (i > 0) {
      h = affine ? var(i - 1) : var(i - 1).pow(2);
    }
    std::vector<CoeffPoly> subs = inv;
    for (int j = i; j < n; ++j) subs.push_back(var(j));
    fwd.push_back(d * var(i) + h);
    inv.push_back(d.inverse() * (var(i) - h.substitute(subs)));
  }
  return PolyMap(std::move(fwd), std::move(inv));
}

Report verify_tilde(const ConnectionBundle& b, Execution exec) {
  b.validate();
  Report rep;
  rep.command = "covariant tilde";
  rep.params = {{"n", b.n}};
  const auto closed = tilde_closed_form(b);
  const Tensor closed_anti = z3_split(closed.ctilde).anti;
  auto parts = map_indices<D3Expansion>(
      static_cast<std::size_t>(b.n), [&](std::size_t k) { return covariant_d3(b, static_cast<int>(k) + 1); }, exec);
  for (int k = 1; k <= b.n; ++k) {
    const auto& p = parts[k - 1];
    bool bt_ok = true, ct_ok = true;
    std::optional<std::string> bt_w, ct_w;
    for (std::size_t i = 0; i < p.btilde.size(); ++i) {
      const auto idx = p.btilde.unflatten(i);
      if (idx[0] != k || p.btilde.flat(i) == closed.btilde.flat(i)) continue;
      bt_ok = false;
      bt_w = "entry " + index_str(idx) + ": " + p.btilde.flat(i).str() + " vs " + closed.btilde.flat(i).str();
      break;
    }
    for (std::size_t i = 0; i < p.ctilde_anti.size(); ++i) {
      const auto idx = p.ctilde_anti.unflatten(i);
      if (idx[0] != k || p.ctilde_anti.flat(i) == closed_anti.flat(i)) continue;
      ct_ok = false;
      ct_w = "entry " + index_str(idx) + ": " + p.ctilde_anti.flat(i).str() + " vs " + closed_anti.flat(i).str();
      break;
    }
    const std::string kk = std::to_string(k);
    rep.add("Bt^" + kk + " from D3 x^" + kk + " = B + q G_lm + q^2 G_ml", bt_ok, bt_w);
    rep.add("anti part of Ct^" + kk + " from D3 x^" + kk + " = anti(C + K(G))", ct_ok, ct_w);
  }
  return rep;
}

Report verify_tensoriality(const ConnectionBundle& b, const PolyMap& chart, Execution exec) {
  b.validate();
  check_chart(b.gamma, chart);
  const int n = b.n;
  Report rep;
  rep.command = "covariant tensoriality";
  rep.params = {{"n", n}};
  const ConnectionBundle nb = transform_bundle(b, chart);

  const auto old_t = extract_tilde(b, exec);
  const auto new_t = extract_tilde(nb, exec);
  const Tensor bt_moved = transform_tensor(old_t.btilde, chart);
  const Tensor ct_moved = transform_tensor(old_t.ctilde, chart);
  rep.add("Bt transforms as a tensor", new_t.btilde == bt_moved);
  rep.add("anti part of Ct transforms as a tensor", new_t.ctilde == ct_moved);

  // forms: everything of the new chart written in the old chart's algebra
  const Algebra alg = chart_algebra(n);
  const auto& f = chart.forward();
  std::vector<Form> dy, d2y;
  std::vector<std::vector<CoeffPoly>> J(n, std::vector<CoeffPoly>(n, CoeffPoly(n)));
  for (int a = 0; a < n; ++a) {
    dy.push_back(exterior_d(Form::function(alg, f[a])));
    d2y.push_back(exterior_d(dy.back()));
    for (int c = 0; c < n; ++c) J[a][c] = f[a].partial(c);
  }
  auto at_x = [&](const CoeffPoly& p) { return compose(p, chart, Direction::forward); };
  std::vector<std::vector<Form>> dydy(n, std::vector<Form>(n, Form(alg)));
  for (int a = 0; a < n; ++a)
    for (int c = 0; c < n; ++c) dydy[a][c] = form_mul(dy[a], dy[c]);

  std::vector<Form> D2y(n, Form(alg)), D2x(n, Form(alg));
  for_each_index(
      static_cast<std::size_t>(n),
      [&](std::size_t kk) {
        const int k = static_cast<int>(kk) + 1;
        Form v = d2y[kk];
        for (int l = 1; l <= n; ++l)
          for (int m = 1; m <= n; ++m) {
            const CoeffPoly& g = nb.gamma({k, l, m});
            if (!g.is_zero()) v += at_x(g) * dydy[l - 1][m - 1];
          }
        D2y[kk] = std::move(v);
        D2x[kk] = covariant_d2(b, k);
      },
      exec);

  auto moved = [&](const std::vector<Form>& xs, int a) {
    Form s(alg);
    for (int c = 0; c < n; ++c)
      if (!J[a][c].is_zero()) s += J[a][c] * xs[c];
    return s;
  };

  bool d2_ok = true;
  std::optional<std::string> d2_w;
  for (int a = 0; a < n && d2_ok; ++a) {
    Form diff = D2y[a] - moved(D2x, a);
    if (!diff.is_zero()) {
      d2_ok = false;
      d2_w = "k = " + std::to_string(a + 1) + ": " + diff.str();
    }
  }
  rep.add("D2 y = (dy/dx) D2 x as forms", d2_ok, d2_w);

  std::vector<Form> D3x = map_indices<Form>(
      static_cast<std::size_t>(n), [&](std::size_t k) { return covariant_d3(b, static_cast<int>(k) + 1).form; }, exec);
  auto D3y = map_indices<Form>(
      static_cast<std::size_t>(n),
      [&](std::size_t kk) {
        const int k = static_cast<int>(kk) + 1;
        Form v = exterior_d(D2y[kk]);
        for (int l = 1; l <= n; ++l)
          for (int m = 1; m <= n; ++m) {
            const CoeffPoly& c = nb.bcoef({k, l, m});
            if (!c.is_zero()) v += at_x(c) * form_mul(dy[l - 1], D2y[m - 1]);
          }
        for (int l = 1; l <= n; ++l)
          for (int m = 1; m <= n; ++m)
            for (int s = 1; s <= n; ++s) {
              const CoeffPoly& c = nb.ccoef({k, l, m, s});
              if (!c.is_zero()) v += at_x(c) * form_mul(dydy[l - 1][m - 1], dy[s - 1]);
            }
        return v;
      },
      exec);
  bool d3_ok = true;
  std::optional<std::string> d3_w;
  for (int a = 0; a < n && d3_ok; ++a) {
    Form diff = D3y[a] - moved(D3x, a);
    if (!diff.is_zero()) {
      d3_ok = false;
      d3_w = "k = " + std::to_string(a + 1) + ": " + diff.str();
    }
  }
  rep.add("D3 y = (dy/dx) D3 x as forms", d3_ok, d3_w);
  return rep;
}

Report torsion_and_reality(const ConnectionBundle& b) {
  b.validate();
  Report rep;
  rep.command = "covariant torsion";
  rep.params = {{"n", b.n}};
  const Tensor bt = tilde_closed_form(b).btilde;
  Tensor S(b.n, 2, b.n), re(b.n, 2, b.n);
  const CycScalar half(Rational(1, 2));
  for (std::size_t i = 0; i < S.size(); ++i) {
    const auto idx = S.unflatten(i);
    const CoeffPoly& glm = b.gamma.flat(i);
    const CoeffPoly& gml = b.gamma({idx[0], idx[2], idx[1]});
    S.flat(i) = half * (glm - gml);
    re.flat(i) = b.bcoef.flat(i) - half * (glm + gml);
  }
  const CycScalar i_sqrt3 = q() - q(2);
  rep.add("Bt = (B - G_(lm)) + (q - q^2) S", bt == re + i_sqrt3 * S);

  bool real_inputs = true;
  for (std::size_t i = 0; i < b.gamma.size(); ++i)
    real_inputs = real_inputs && poly_is_real(b.gamma.flat(i)) && poly_is_real(b.bcoef.flat(i));
  bool bt_real = true;
  for (std::size_t i = 0; i < bt.size(); ++i) bt_real = bt_real && poly_is_real(bt.flat(i));
  if (real_inputs) {
    rep.add("Bt real <=> torsion vanishes", bt_real == S.is_zero(), std::nullopt,
            {{"bt_real", bt_real}, {"torsion_zero", S.is_zero()}});
  }
  rep.results["torsion"] = S.to_json();
  rep.results["bt_real"] = bt_real;
  return rep;
}

Tensor riemann(const Tensor& G) {
  const int n = G.dim();
  Tensor R(n, 3, G.nvars());
  for (std::size_t i = 0; i < R.size(); ++i) {
    const auto idx = R.unflatten(i);
    const int k = idx[0], l = idx[1], m = idx[2], s = idx[3];
    CoeffPoly v = G({k, m, s}).partial(l - 1) - G({k, l, s}).partial(m - 1);
    for (int r = 1; r <= n; ++r) v += G({k, l, r}) * G({r, m, s}) - G({k, m, r}) * G({r, l, s});
    R.flat(i) = std::move(v);
  }
  return R;
}

Tensor riemann_combination(const Tensor& G) {
  const Tensor R = riemann(G);
  Tensor X(G.dim(), 3, G.nvars());
  for (std::size_t i = 0; i < X.size(); ++i) {
    const auto idx = X.unflatten(i);
    const int k = idx[0], l = idx[1], m = idx[2], s = idx[3];
    X.flat(i) = third() * (R({k, s, l, m}) + R({k, m, l, s})) + (q() * third()) * (R({k, m, s, l}) + R({k, l, s, m})) +
                (q(2) * third()) * (R({k, l, m, s}) + R({k, s, m, l}));
  }
  return X;
}

namespace {

void check_symmetric(const Tensor& G) {
  if (G.lower() != 2) throw BadIndexCount("connection coefficients have two lower indices");
  for (std::size_t i = 0; i < G.size(); ++i) {
    const auto idx = G.unflatten(i);
    if (!(G.flat(i) == G({idx[0], idx[2], idx[1]})))
      throw NonSymmetricGamma("G^" + std::to_string(idx[0]) + "_" + std::to_string(idx[1]) + std::to_string(idx[2]) +
                              " != G^" + std::to_string(idx[0]) + "_" + std::to_string(idx[2]) +
                              std::to_string(idx[1]));
  }
}

// c with a == c * b, if one scalar does it
std::optional<CycScalar> scalar_ratio(const Tensor& a, const Tensor& b) {
  std::optional<CycScalar> c;
  for (std::size_t i = 0; i < b.size() && !c; ++i) {
    if (b.flat(i).is_zero()) continue;
    const auto& [e, bc] = *b.flat(i).terms().begin();
    auto it = a.flat(i).terms().find(e);
    c = it == a.flat(i).terms().end() ? CycScalar(0L) : it->second * bc.inverse();
  }
  if (!c) return a.is_zero() ? std::optional<CycScalar>(CycScalar(1L)) : std::nullopt;
  if (!(a == *c * b)) return std::nullopt;
  return c;
}

}  // namespace

Report riemann_identification(const Tensor& G) {
  check_symmetric(G);
  Report rep;
  rep.command = "covariant riemann";
  rep.params = {{"n", G.dim()}};
  const Tensor anti = z3_split(k_tensor(G)).anti;
  const Tensor X = riemann_combination(G);
  rep.add("anti part of K(G) = Riemann combination", anti == X);
  rep.add("anti part of K(G) = Riemann combination, opposite Riemann sign", anti == -X);
  const auto c = scalar_ratio(anti, X);
  rep.add("anti part of K(G) is one scalar multiple of the combination", c.has_value(),
          c ? std::nullopt : std::optional<std::string>("no single scalar relates the two"));
  rep.results["anti_over_combination"] = c ? Json(c->str()) : Json(nullptr);
  rep.results["combination_is_anti"] = z3_split(X).anti == X;
  return rep;
}

bool conjugate_constraint_holds(const Tensor& c) {
  const auto parts = z3_split(c);
  for (std::size_t i = 0; i < c.size(); ++i) {
    const auto idx = c.unflatten(i);  // k, l, m, n
    const int k = idx[0], l = idx[1], m = idx[2], s = idx[3];
    if (!(parts.conj({k, m, s, l}) == parts.anti({k, l, s, m}))) return false;
  }
  return true;
}

Report verify_contraction_blindness(const ConnectionBundle& b, std::uint64_t seed) {
  b.validate();
  Report rep;
  rep.command = "covariant blindness";
  rep.params = {{"n", b.n}, {"seed", seed}};
  const ConnectionBundle noise = random_bundle(b.n, seed, 2);
  const auto parts = z3_split(noise.ccoef);
  ConnectionBundle shifted = b;
  shifted.ccoef += parts.sym + parts.conj;
  bool same = true;
  for (int k = 1; k <= b.n && same; ++k) same = covariant_d3(b, k).form == covariant_d3(shifted, k).form;
  rep.add("adding sym + conj parts to C leaves D3 x unchanged", same);
  const ConnectionBundle anti_shift = [&] {
    ConnectionBundle s = b;
    s.ccoef += parts.anti;
    return s;
  }();
  bool moved = parts.anti.is_zero();
  for (int k = 1; k <= b.n && !moved; ++k) moved = !(covariant_d3(b, k).form == covariant_d3(anti_shift, k).form);
  rep.add("adding a nonzero anti part to C changes D3 x", moved);
  return rep;
}

}  // namespace qcalc
