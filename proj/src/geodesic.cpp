#include "qcalc/geodesic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

#include "qcalc/error.hpp"

namespace qcalc {

GeodesicCoefficients GeodesicCoefficients::zero(int n) { return {n, Tensor(n, 2, n), Tensor(n, 2, n), Tensor(n, 3, n)}; }

Tensor symmetrize_lower(const Tensor& t) {
  std::vector<int> perm(static_cast<std::size_t>(t.lower()));
  std::iota(perm.begin(), perm.end(), 0);
  Tensor r(t.dim(), t.lower(), t.nvars());
  long count = 0;
  do {
    ++count;
    for (std::size_t i = 0; i < r.size(); ++i) {
      const auto idx = r.unflatten(i);
      auto src = idx;
      for (std::size_t j = 0; j < perm.size(); ++j) src[j + 1] = idx[static_cast<std::size_t>(perm[j]) + 1];
      r.flat(i) += t.at(src);
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return CycScalar(Rational(1, count)) * r;
}

GeodesicCoefficients GeodesicCoefficients::make(Tensor gamma, Tensor ef, Tensor g3) {
  const int n = gamma.dim();
  auto ok = [&](const Tensor& t, int lower) { return t.dim() == n && t.lower() == lower && t.nvars() == n; };
  if (!ok(gamma, 2) || !ok(ef, 2) || !ok(g3, 3)) throw MismatchedArity("geodesic coefficient shapes disagree");
  for (const Tensor* t : {&gamma, &ef, &g3})
    for (std::size_t i = 0; i < t->size(); ++i)
      for (const auto& [e, c] : t->flat(i).terms())
        if (!c.is_rational()) throw InvalidArgument("geodesic coefficients must be rational");
  return {n, std::move(gamma), std::move(ef), symmetrize_lower(g3)};
}

namespace {

// polynomial entries compiled to doubles
struct DPoly {
  std::vector<std::pair<double, std::vector<int>>> terms;

  explicit DPoly(const CoeffPoly& p) {
    for (const auto& [e, c] : p.terms()) terms.emplace_back(c.to_double(), e);
  }
  double operator()(const double* x) const {
    double acc = 0.0;
    for (const auto& [c, e] : terms) {
      double t = c;
      for (std::size_t i = 0; i < e.size(); ++i)
        for (int k = 0; k < e[i]; ++k) t *= x[i];
      acc += t;
    }
    return acc;
  }
};

struct System {
  int n;
  std::vector<DPoly> gamma, ef, g3;

  explicit System(const GeodesicCoefficients& c) : n(c.n) {
    for (std::size_t i = 0; i < c.gamma.size(); ++i) gamma.emplace_back(c.gamma.flat(i));
    for (std::size_t i = 0; i < c.ef.size(); ++i) ef.emplace_back(c.ef.flat(i));
    for (std::size_t i = 0; i < c.g3.size(); ++i) g3.emplace_back(c.g3.flat(i));
  }

  // state = (x, v, a); returns (v, a, a')
  std::vector<double> rhs(const std::vector<double>& s) const {
    const std::size_t un = static_cast<std::size_t>(n);
    const double* x = s.data();
    const double* v = s.data() + un;
    const double* a = s.data() + 2 * un;
    std::vector<double> d2(un), out(3 * un);
    for (std::size_t m = 0; m < un; ++m) {
      double acc = a[m];
      for (std::size_t r = 0; r < un; ++r)
        for (std::size_t t = 0; t < un; ++t) acc += gamma[(m * un + r) * un + t](x) * v[r] * v[t];
      d2[m] = acc;
    }
    for (std::size_t k = 0; k < un; ++k) {
      out[k] = v[k];
      out[un + k] = a[k];
      double acc = 0.0;
      for (std::size_t l = 0; l < un; ++l)
        for (std::size_t m = 0; m < un; ++m) acc += ef[(k * un + l) * un + m](x) * v[l] * d2[m];
      for (std::size_t l = 0; l < un; ++l)
        for (std::size_t m = 0; m < un; ++m)
          for (std::size_t t = 0; t < un; ++t) acc += g3[((k * un + l) * un + m) * un + t](x) * v[l] * v[m] * v[t];
      out[2 * un + k] = -acc;
    }
    return out;
  }
};

std::vector<double> axpy(const std::vector<double>& s, double h, const std::vector<double>& k) {
  std::vector<double> r(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) r[i] = s[i] + h * k[i];
  return r;
}

TrajectoryPoint point(double lambda, const std::vector<double>& s, int n) {
  const auto un = static_cast<std::ptrdiff_t>(n);
  return {lambda, {s.begin(), s.begin() + un}, {s.begin() + un, s.begin() + 2 * un}, {s.begin() + 2 * un, s.end()}};
}

}  // namespace

Trajectory geodesic3_integrate(const GeodesicCoefficients& c, const InitialState& st, double lambda0, double lambda1,
                               double step) {
  const int n = c.n;
  if (!(step > 0.0) || !std::isfinite(step)) throw InvalidArgument("step must be positive");
  if (!(lambda1 >= lambda0)) throw InvalidArgument("lambda span must be increasing");
  const auto un = static_cast<std::size_t>(n);
  if (st.x0.size() != un || st.v0.size() != un || st.a0.size() != un)
    throw InvalidArgument("initial vectors must have length n = " + std::to_string(n));
  const System sys(c);
  std::vector<double> s = st.x0;
  s.insert(s.end(), st.v0.begin(), st.v0.end());
  s.insert(s.end(), st.a0.begin(), st.a0.end());

  Trajectory tr{n, {point(lambda0, s, n)}};
  const auto steps = static_cast<long>(std::ceil((lambda1 - lambda0) / step - 1e-9));
  for (long i = 1; i <= steps; ++i) {
    const double t0 = lambda0 + static_cast<double>(i - 1) * step;
    const double t1 = i == steps ? lambda1 : lambda0 + static_cast<double>(i) * step;
    const double h = t1 - t0;
    const auto k1 = sys.rhs(s);
    const auto k2 = sys.rhs(axpy(s, h / 2, k1));
    const auto k3 = sys.rhs(axpy(s, h / 2, k2));
    const auto k4 = sys.rhs(axpy(s, h, k3));
    for (std::size_t j = 0; j < s.size(); ++j) s[j] += h / 6 * (k1[j] + 2 * k2[j] + 2 * k3[j] + k4[j]);
    if (!std::all_of(s.begin(), s.end(), [](double x) { return std::isfinite(x); }))
      throw NonFiniteState("state left the representable range at lambda = " + std::to_string(t1));
    tr.points.push_back(point(t1, s, n));
  }
  return tr;
}

std::vector<Trajectory> geodesic3_integrate_many(const GeodesicCoefficients& c, const std::vector<InitialState>& s,
                                                 double lambda0, double lambda1, double step, Execution exec) {
  return map_indices<Trajectory>(
      s.size(), [&](std::size_t i) { return geodesic3_integrate(c, s[i], lambda0, lambda1, step); }, exec);
}

RichardsonResult richardson(const GeodesicCoefficients& c, const InitialState& s, double lambda0, double lambda1,
                            double h, Execution exec) {
  const std::vector<double> steps{h, h / 2, h / 64};
  auto runs = map_indices<Trajectory>(
      steps.size(), [&](std::size_t i) { return geodesic3_integrate(c, s, lambda0, lambda1, steps[i]); }, exec);
  const auto& ref = runs[2].points;
  auto error = [&](const Trajectory& t, std::size_t stride) {
    double e = 0.0;
    for (std::size_t i = 0; i < t.points.size(); ++i) {
      const std::size_t j = std::min(i * stride, ref.size() - 1);
      for (int k = 0; k < c.n; ++k) e = std::max(e, std::abs(t.points[i].x[k] - ref[j].x[k]));
    }
    return e;
  };
  RichardsonResult r;
  r.error_h = error(runs[0], 64);
  r.error_half = error(runs[1], 32);
  r.ratio = r.error_half > 0.0 ? r.error_h / r.error_half : 0.0;
  return r;
}

std::string Trajectory::csv() const {
  std::string out = "lambda";
  for (const char* p : {"x", "v", "a"})
    for (int k = 1; k <= n; ++k) out += "," + std::string(p) + std::to_string(k);
  out += "\n";
  char buf[64];
  auto put = [&](double d) {
    std::snprintf(buf, sizeof buf, "%.17g", d);
    out += buf;
  };
  for (const auto& p : points) {
    put(p.lambda);
    for (const auto* vec : {&p.x, &p.v, &p.a})
      for (double d : *vec) {
        out += ",";
        put(d);
      }
    out += "\n";
  }
  return out;
}

Json Trajectory::to_json() const {
  Json pts = Json::array();
  for (const auto& p : points) pts.push_back({{"lambda", p.lambda}, {"x", p.x}, {"v", p.v}, {"a", p.a}});
  return {{"n", n}, {"points", pts}};
}

}  // namespace qcalc
