#include "qcalc/nilpotency.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <numeric>

#include "qcalc/error.hpp"

namespace qcalc {

std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t t) {
  // splitmix64 step; keeps neighbouring trials uncorrelated
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (t + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

namespace {

Rational factorial(int m) {
  Rational r = 1;
  for (int i = 2; i <= m; ++i) r *= i;
  return r;
}

struct LKey {
  int N, n, k;
  std::vector<int> idx;
  auto operator<=>(const LKey&) const = default;
};

std::mutex l_mu;
std::map<LKey, Form> l_cache;

Form compute_l(int N, int n, int k, std::vector<int> idx) {
  const Algebra raw{N, n, Mode::raw};
  const int m = static_cast<int>(idx.size());
  if (m == 1) {
    if (k >= N) return Form(raw);
    return Form::differential(raw, k, idx[0]);
  }
  if (m == k) {
    // dx^{(i1} ... dx^{ik)}: average over all orderings
    Form sym(raw);
    std::vector<int> perm(m);
    std::iota(perm.begin(), perm.end(), 0);
    do {
      std::vector<DiffFactor> w;
      for (int p : perm) w.push_back({1, idx[p]});
      sym += Form::word(raw, w);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return sym * CycScalar(Rational(1) / factorial(m));
  }
  Form out = exterior_d(l_poly(N, n, k - 1, idx));
  Form tail(raw);
  for (int l = 0; l < m; ++l) {
    std::vector<int> rest = idx;
    rest.erase(rest.begin() + l);
    tail += form_mul(Form::differential(raw, 1, idx[l]), l_poly(N, n, k - 1, rest));
  }
  out += tail * CycScalar(Rational(1, m));
  return out;
}

}  // namespace

Form l_poly(int N, int n, int k, const std::vector<int>& indices) {
  const int m = static_cast<int>(indices.size());
  if (m < 1 || m > k)
    throw BadIndexCount(std::to_string(m) + " indices for k = " + std::to_string(k));
  for (int i : indices)
    if (i < 1 || i > n) throw IndexOutOfRange("index " + std::to_string(i));
  LKey key{N, n, k, indices};
  std::sort(key.idx.begin(), key.idx.end());
  {
    std::lock_guard lock(l_mu);
    auto it = l_cache.find(key);
    if (it != l_cache.end()) return it->second;
  }
  Form value = compute_l(N, n, k, key.idx);
  std::lock_guard lock(l_mu);
  return l_cache.emplace(key, std::move(value)).first->second;
}

std::vector<std::vector<int>> multisets(int n, int m) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur(m, 1);
  if (m == 0) return {{}};
  for (;;) {
    out.push_back(cur);
    int pos = m - 1;
    while (pos >= 0 && cur[pos] == n) --pos;
    if (pos < 0) break;
    ++cur[pos];
    for (int j = pos + 1; j < m; ++j) cur[j] = cur[pos];
  }
  return out;
}

Form dk_expand(const CoeffPoly& f, int N, int k, Mode target) {
  if (k < 1) throw InvalidArgument("k must be >= 1");
  const int n = f.nvars();
  const Algebra raw{N, n, Mode::raw};
  Form out(raw);
  for (int m = 1; m <= k; ++m) {
    for (const auto& I : multisets(n, m)) {
      CoeffPoly deriv = f;
      for (int i : I) deriv = deriv.partial(i - 1);
      if (deriv.is_zero()) continue;
      // number of ordered tuples giving this multiset
      Rational weight = factorial(m);
      for (int i = 1; i <= n; ++i) weight /= factorial(static_cast<int>(std::count(I.begin(), I.end(), i)));
      out += (deriv * CycScalar(weight)) * l_poly(N, n, k, I);
    }
  }
  if (target == Mode::raw) return out;
  return reduce_in(out, Algebra{N, n, target});
}

Report verify_dN_zero(int N, int n, int trials, std::uint64_t seed, int maxdeg, Execution exec) {
  if (N < 2) throw InvalidArgument("N must be >= 2");
  if (n < 1) throw InvalidArgument("n must be >= 1");
  Report rep;
  rep.command = "verify nilpotency";
  rep.params = {{"N", N}, {"n", n}, {"trials", trials}, {"seed", seed}, {"maxdeg", maxdeg}};
  const Algebra trunc{N, n, Mode::truncated};
  const Algebra raw{N, n, Mode::raw};
  struct Outcome {
    std::string poly;
    Form dN{Algebra{}};
    bool expansion_ok = false;
    std::string expansion_witness;
  };
  auto outcomes = map_indices<Outcome>(
      static_cast<std::size_t>(trials),
      [&](std::size_t t) {
        CoeffPoly f = random_poly(trial_seed(seed, t), n, maxdeg);
        Outcome o;
        o.poly = f.str();
        o.dN = exterior_d_pow(Form::function(trunc, f), N);
        Form iterated = exterior_d_pow(Form::function(raw, f), N);
        Form expanded = dk_expand(f, N, N);
        o.expansion_ok = iterated == expanded;
        if (!o.expansion_ok) o.expansion_witness = (iterated - expanded).str();
        return o;
      },
      exec);
  for (int t = 0; t < trials; ++t) {
    const auto& o = outcomes[t];
    const std::string cond = "d^" + std::to_string(N) + " f = 0";
    rep.add("trial " + std::to_string(t), o.dN.is_zero(),
            o.dN.is_zero() ? std::nullopt : std::optional<std::string>(o.dN.str()),
            {{"condition", cond}, {"N", N}, {"n", n}, {"f", o.poly}});
    rep.add("trial " + std::to_string(t) + " expansion", o.expansion_ok,
            o.expansion_ok ? std::nullopt : std::optional<std::string>(o.expansion_witness),
            {{"condition", "dk_expand(f, N) = d^N f (raw)"}, {"N", N}, {"n", n}});
  }
  return rep;
}

Report verify_l_conditions(int N, int n, Execution exec) {
  if (N < 2) throw InvalidArgument("N must be >= 2");
  if (n < 1) throw InvalidArgument("n must be >= 1");
  Report rep;
  rep.command = "verify conditions";
  rep.params = {{"N", N}, {"n", n}};
  std::vector<std::vector<int>> conditions;
  for (int m = N; m >= 1; --m)
    for (auto& I : multisets(n, m)) conditions.push_back(I);
  const Algebra trunc{N, n, Mode::truncated};
  auto reduced = map_indices<Form>(
      conditions.size(),
      [&](std::size_t c) { return reduce_in(l_poly(N, n, N, conditions[c]), trunc); }, exec);
  for (std::size_t c = 0; c < conditions.size(); ++c) {
    std::string label = "L^{";
    for (std::size_t j = 0; j < conditions[c].size(); ++j)
      label += (j ? "," : "") + std::to_string(conditions[c][j]);
    label += "}_(" + std::to_string(N) + ")";
    const bool ok = reduced[c].is_zero();
    Json info = {{"condition", label}, {"N", N}, {"n", n}};
    if (conditions[c].size() == 1) info["note"] = "d^N x vanishes by construction";
    rep.add(label, ok, ok ? std::nullopt : std::optional<std::string>(reduced[c].str()),
            std::move(info));
  }
  return rep;
}

}  // namespace qcalc
