#include "qcalc/cli.hpp"

#include <chrono>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "qcalc/clifford.hpp"
#include "qcalc/config.hpp"
#include "qcalc/covariant.hpp"
#include "qcalc/dim1.hpp"
#include "qcalc/error.hpp"
#include "qcalc/geodesic.hpp"
#include "qcalc/nilpotency.hpp"
#include "qcalc/parse.hpp"

namespace qcalc {

namespace {

struct Options {
  int N = 3;
  int n = 2;
  int p = 2;
  int trials = 10;
  int maxdeg = 4;
  int degree = 1;
  std::optional<std::uint64_t> seed;
  std::string config;
  std::string chart = "shear";
  std::string out;
  std::string format = "json";
  std::optional<double> richardson;
  bool serial = false;
  bool list = false;
  bool conjugate = false;
};

Execution exec_of(const Options& o) { return o.serial ? Execution::serial : Execution::parallel; }

std::uint64_t need_seed(const Options& o) {
  if (!o.seed) throw UsageError("--seed is required for randomized suites");
  return *o.seed;
}

struct Outcome {
  Report report;
  std::optional<std::string> csv;
};

// ---- commands ----

Outcome cmd_nilpotency(const Options& o) {
  auto rep = verify_dN_zero(o.N, o.n, o.trials, need_seed(o), o.maxdeg, exec_of(o));
  rep.command = "verify nilpotency";
  rep.params = {{"N", o.N}, {"n", o.n}, {"trials", o.trials}, {"seed", *o.seed}, {"maxdeg", o.maxdeg}};
  return {rep, {}};
}

Outcome cmd_conditions(const Options& o) {
  auto rep = verify_l_conditions(o.N, o.n, exec_of(o));
  rep.command = "verify conditions";
  rep.params = {{"N", o.N}, {"n", o.n}};
  return {rep, {}};
}

Outcome cmd_dims(const Options& o) {
  Report rep;
  rep.command = "dims";
  rep.params = {{"n", o.n}};
  const auto basis = basis_enumerate(o.n);
  const long formula = module_dimension(o.n);
  rep.add("enumerated basis count = (n^3 + 6n^2 + 5n)/3", static_cast<long>(basis.size()) == formula,
          std::nullopt, {{"enumerated", basis.size()}, {"formula", formula}});
  rep.results["dimension"] = basis.size();
  if (o.list) {
    Json names = Json::array();
    for (const auto& m : basis) names.push_back(m.str());
    rep.results["basis"] = names;
  }
  return {rep, {}};
}

double eval_const(const std::string& s) {
  try {
    return NumExpr::parse(s, {}).eval({});
  } catch (const Error& e) {
    throw ConfigParseError(std::string("expression '") + s + "': " + e.what());
  }
}

std::optional<Rational> exact_const(const std::string& s) {
  try {
    auto v = parse_scalar(s, 3);
    if (v.is_rational()) return v.rational_value();
  } catch (const Error&) {
  }
  return std::nullopt;
}

Outcome cmd_length(const Options& o) {
  if (o.config.empty()) throw UsageError("dim1 length needs --config");
  const Json j = load_config(o.config);
  const auto s = length_from_config(j);
  const double check_tol = j.contains("check_tolerance") ? j.at("check_tolerance").get<double>() : 1e-8;
  std::vector<NumExpr> curve;
  for (const auto& c : s.curve) {
    try {
      curve.push_back(NumExpr::parse(c, {"t"}));
    } catch (const Error& e) {
      throw ConfigParseError("curve '" + c + "': " + e.what());
    }
  }
  const double a = eval_const(s.a), b = eval_const(s.b);
  Report rep;
  rep.command = "dim1 length";
  rep.params = {{"config", o.config}, {"a", s.a}, {"b", s.b}, {"tolerance", s.tolerance}};
  try {
    const auto r = curve_length(s.metric, curve, a, b, s.tolerance);
    rep.add("metric positive definite along the curve", true);
    rep.results["length"] = r.length;
    rep.results["evaluations"] = r.evaluations;
    if (s.expected) {
      const double e = eval_const(*s.expected);
      const double diff = std::abs(r.length - e);
      rep.add("length matches expected", diff <= check_tol, std::nullopt,
              {{"expected", e}, {"difference", diff}, {"check_tolerance", check_tol}});
    }
  } catch (const NonPositiveMetric& e) {
    rep.add("metric positive definite along the curve", false, std::string(e.what()));
  }
  // exact value when the curve is polynomial with a perfect-square speed
  const auto ea = exact_const(s.a), eb = exact_const(s.b);
  if (ea && eb) {
    std::vector<CoeffPoly> pc;
    try {
      for (const auto& c : s.curve) pc.push_back(parse_poly(c, 3, 1, {"t"}));
    } catch (const Error&) {
      pc.clear();
    }
    if (pc.size() == s.curve.size() && *ea < *eb) {
      if (auto ex = length_exact(s.metric, pc, *ea, *eb)) rep.results["exact"] = ex->get_str();
    }
  }
  return {rep, {}};
}

Outcome cmd_clifford_verify(const Options& o) {
  auto rep = verify_clifford(o.p, o.N, exec_of(o));
  rep.command = "clifford verify";
  rep.params = {{"p", o.p}, {"N", o.N}};
  return {rep, {}};
}

// a config connection, or `trials` seeded random ones
Outcome clifford_suite(const Options& o, const std::string& command,
                       const std::function<Report(const CliffordConnection&, Execution)>& suite) {
  Report rep;
  rep.command = command;
  if (!o.config.empty()) {
    const auto A = connection_from_config(load_config(o.config));
    rep = suite(A, exec_of(o));
    rep.command = command;
    rep.params = {{"config", o.config}, {"p", A.p()}, {"N", A.components.front().N()}};
    return {rep, {}};
  }
  const auto seed = need_seed(o);
  rep.params = {{"p", o.p}, {"N", o.N}, {"trials", o.trials}, {"seed", seed}};
  auto parts = map_indices<Report>(
      static_cast<std::size_t>(o.trials),
      [&](std::size_t t) { return suite(random_connection(o.p, o.N, trial_seed(seed, t)), Execution::serial); },
      exec_of(o));
  for (std::size_t t = 0; t < parts.size(); ++t) rep.merge(parts[t], "trial " + std::to_string(t) + ": ");
  return {rep, {}};
}

Outcome cmd_covariant_tensoriality(const Options& o) {
  Report rep;
  rep.command = "covariant tensoriality";
  auto one = [&](const ConnectionBundle& b, const PolyMap& chart, Execution ex) {
    Report r;
    r.merge(verify_tilde(b, ex), "tilde: ");
    r.merge(verify_tensoriality(b, chart, ex), "chart: ");
    r.merge(torsion_and_reality(b), "torsion: ");
    if (o.conjugate) r.add("C satisfies the conjugate constraint", conjugate_constraint_holds(b.ccoef));
    return r;
  };
  if (!o.config.empty()) {
    const Json j = load_config(o.config);
    const auto b = bundle_from_config(j);
    const PolyMap chart = j.contains("chart") ? chart_from_config(j, b.n) : standard_chart(o.chart, b.n);
    rep.merge(one(b, chart, exec_of(o)));
    rep.params = {{"config", o.config}, {"n", b.n}};
    rep.results["btilde"] = tilde_closed_form(b).btilde.to_json();
    rep.results["ctilde_anti"] = z3_split(tilde_closed_form(b).ctilde).anti.to_json();
    return {rep, {}};
  }
  const auto seed = need_seed(o);
  const PolyMap chart = standard_chart(o.chart, o.n);
  rep.params = {{"n", o.n}, {"chart", o.chart}, {"trials", o.trials}, {"seed", seed}, {"degree", o.degree}};
  auto parts = map_indices<Report>(
      static_cast<std::size_t>(o.trials),
      [&](std::size_t t) { return one(random_bundle(o.n, trial_seed(seed, t), o.degree), chart, Execution::serial); },
      exec_of(o));
  for (std::size_t t = 0; t < parts.size(); ++t) rep.merge(parts[t], "trial " + std::to_string(t) + ": ");
  return {rep, {}};
}

Outcome cmd_covariant_riemann(const Options& o) {
  Report rep;
  rep.command = "covariant riemann";
  if (!o.config.empty()) {
    const Json j = load_config(o.config);
    const auto b = bundle_from_config(j);
    Report r;
    try {
      r = riemann_identification(b.gamma);
    } catch (const NonSymmetricGamma& e) {
      throw ConfigParseError(std::string("gamma: ") + e.what());
    }
    rep.merge(r);
    rep.results = r.results;
    rep.params = {{"config", o.config}, {"n", b.n}};
    return {rep, {}};
  }
  const auto seed = need_seed(o);
  rep.params = {{"n", o.n}, {"trials", o.trials}, {"seed", seed}, {"degree", o.degree}};
  auto parts = map_indices<Report>(
      static_cast<std::size_t>(o.trials),
      [&](std::size_t t) {
        return riemann_identification(random_bundle(o.n, trial_seed(seed, t), o.degree, true).gamma);
      },
      exec_of(o));
  Json ratios = Json::array();
  for (std::size_t t = 0; t < parts.size(); ++t) {
    rep.merge(parts[t], "trial " + std::to_string(t) + ": ");
    ratios.push_back(parts[t].results["anti_over_combination"]);
  }
  rep.results["anti_over_combination"] = ratios;
  return {rep, {}};
}

Outcome cmd_geodesic(const Options& o) {
  if (o.config.empty()) throw UsageError("geodesic integrate needs --config");
  const auto s = geodesic_from_config(load_config(o.config));
  Report rep;
  rep.command = "geodesic integrate";
  rep.params = {{"config", o.config}, {"lambda", {s.lambda0, s.lambda1}}, {"step", s.step}};
  std::optional<Trajectory> tr;
  try {
    tr = geodesic3_integrate(s.coefficients, s.initial, s.lambda0, s.lambda1, s.step);
    rep.add("state finite over the whole span", true);
  } catch (const NonFiniteState& e) {
    rep.add("state finite over the whole span", false, std::string(e.what()));
  } catch (const InvalidArgument& e) {
    throw ConfigParseError(e.what());
  }
  if (o.richardson && tr) {
    const auto r = richardson(s.coefficients, s.initial, s.lambda0, s.lambda1, *o.richardson, exec_of(o));
    rep.add("step-halving error ratio in [12, 20]", r.ratio >= 12.0 && r.ratio <= 20.0, std::nullopt,
            {{"h", *o.richardson}, {"error_h", r.error_h}, {"error_half", r.error_half}, {"ratio", r.ratio}});
  }
  Outcome out{rep, {}};
  if (tr) {
    if (o.format == "csv") {
      out.csv = tr->csv();
    } else {
      out.report.results["final"] = tr->to_json()["points"].back();
      out.report.results["trajectory"] = tr->to_json();
    }
  }
  return out;
}

void emit(const std::string& text, const Options& o, std::ostream& out) {
  if (o.out.empty()) {
    out << text;
    return;
  }
  std::ofstream f(o.out);
  if (!f) throw UsageError("cannot write " + o.out);
  f << text;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Exact calculus with d^N = 0: verification suites and geodesics", "qcalc"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--out", o.out, "write the report (or CSV) here instead of stdout");
  app.add_flag("--serial", o.serial, "use the serial reference path");

  auto seed_opt = [&](CLI::App* s) { s->add_option("--seed", o.seed, "seed for the randomized suite"); };
  auto trials_opt = [&](CLI::App* s) { s->add_option("--trials", o.trials, "number of random instances")->check(CLI::Range(1, 100000)); };
  auto config_opt = [&](CLI::App* s, bool required) {
    auto* opt = s->add_option("--config", o.config, "TOML or JSON config");
    if (required) opt->required();
  };
  auto N_opt = [&](CLI::App* s) { s->add_option("--N", o.N, "order of the root of unity")->check(CLI::Range(2, 8)); };
  auto n_opt = [&](CLI::App* s) { s->add_option("--n", o.n, "chart dimension")->check(CLI::Range(1, 8)); };
  auto p_opt = [&](CLI::App* s) { s->add_option("--p", o.p, "number of generators")->check(CLI::Range(1, 6)); };

  std::vector<std::pair<CLI::App*, std::function<Outcome(const Options&)>>> leaves;

  auto* verify = app.add_subcommand("verify", "nilpotency of d and the L-conditions");
  verify->require_subcommand(1);
  verify->fallthrough();
  auto* nil = verify->add_subcommand("nilpotency", "d^N f = 0 on random polynomials");
  N_opt(nil);
  n_opt(nil);
  seed_opt(nil);
  nil->add_option("--trials", o.trials, "number of random polynomials")->check(CLI::Range(1, 100000));
  nil->add_option("--maxdeg", o.maxdeg, "maximal degree")->check(CLI::Range(0, 12));
  leaves.emplace_back(nil, cmd_nilpotency);
  auto* cond = verify->add_subcommand("conditions", "each L-condition reduces to zero");
  N_opt(cond);
  n_opt(cond);
  leaves.emplace_back(cond, cmd_conditions);

  auto* dims = app.add_subcommand("dims", "dimension of the degree 1..3 module for N = 3");
  n_opt(dims);
  dims->add_flag("--list", o.list, "include the basis monomials");
  leaves.emplace_back(dims, cmd_dims);

  auto* dim1 = app.add_subcommand("dim1", "one-variable calculus");
  dim1->require_subcommand(1);
  dim1->fallthrough();
  auto* len = dim1->add_subcommand("length", "curve length from a metric");
  config_opt(len, true);
  leaves.emplace_back(len, cmd_length);

  auto* cl = app.add_subcommand("clifford", "generalized Clifford algebras");
  cl->require_subcommand(1);
  cl->fallthrough();
  auto* clv = cl->add_subcommand("verify", "relations, matrices, q-differentials");
  p_opt(clv);
  N_opt(clv);
  leaves.emplace_back(clv, cmd_clifford_verify);
  for (const char* name : {"curvature", "bianchi"}) {
    const bool curv = std::string(name) == "curvature";
    auto* s = cl->add_subcommand(name, curv ? "direct and combinatorial curvature" : "Bianchi identity");
    p_opt(s);
    N_opt(s);
    seed_opt(s);
    trials_opt(s);
    config_opt(s, false);
    leaves.emplace_back(s, [curv](const Options& opt) {
      return clifford_suite(opt, curv ? "clifford curvature" : "clifford bianchi",
                            curv ? [](const CliffordConnection& A, Execution e) { return verify_curvature(A, e); }
                                 : [](const CliffordConnection& A, Execution e) { return verify_bianchi(A, e); });
    });
  }

  auto* cov = app.add_subcommand("covariant", "covariant differentials in the N = 3 algebra");
  cov->require_subcommand(1);
  cov->fallthrough();
  auto* ten = cov->add_subcommand("tensoriality", "tilde coefficients, chart changes, torsion");
  n_opt(ten);
  seed_opt(ten);
  trials_opt(ten);
  config_opt(ten, false);
  ten->add_option("--chart", o.chart, "identity | affine | shear")
      ->check(CLI::IsMember({"identity", "affine", "shear"}));
  ten->add_option("--degree", o.degree, "degree of random entries")->check(CLI::Range(0, 3));
  ten->add_flag("--conjugate-constraint", o.conjugate, "also check C^k_{mnl} (conj) = C^k_{lnm} (anti)");
  leaves.emplace_back(ten, cmd_covariant_tensoriality);
  auto* rie = cov->add_subcommand("riemann", "anti part of the curvature term versus Riemann");
  n_opt(rie);
  seed_opt(rie);
  trials_opt(rie);
  config_opt(rie, false);
  rie->add_option("--degree", o.degree, "degree of random entries")->check(CLI::Range(0, 3));
  leaves.emplace_back(rie, cmd_covariant_riemann);

  auto* geo = app.add_subcommand("geodesic", "third-order geodesics");
  geo->require_subcommand(1);
  geo->fallthrough();
  auto* integ = geo->add_subcommand("integrate", "RK4 integration");
  config_opt(integ, true);
  integ->add_option("--format", o.format, "json | csv")->check(CLI::IsMember({"json", "csv"}));
  integ->add_option("--richardson", o.richardson, "also run the step-halving check with this h")
      ->check(CLI::PositiveNumber);
  leaves.emplace_back(integ, cmd_geodesic);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "UsageError: " << e.what() << "\n";
    return 2;
  }

  try {
    for (const auto& [sub, fn] : leaves) {
      if (!sub->parsed()) continue;
      const auto start = std::chrono::steady_clock::now();
      Outcome res = fn(o);
      res.report.timing_ms =
          std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
      emit(res.csv ? *res.csv : res.report.dump() + "\n", o, out);
      return res.report.all_pass() ? 0 : 1;
    }
    throw UsageError("no command given");
  } catch (const UsageError& e) {
    err << e.what() << "\n";
    return 2;
  } catch (const ConfigParseError& e) {
    err << e.what() << "\n";
    return 3;
  } catch (const Error& e) {
    err << e.what() << "\n";
    return 1;
  }
}

}  // namespace qcalc
