#include "qcalc/config.hpp"

#include <fstream>
#include <sstream>

#include "qcalc/error.hpp"
#include "qcalc/parse.hpp"
#include "toml.hpp"

namespace qcalc {

namespace {

Json from_toml(const toml::node& node) {
  if (const auto* t = node.as_table()) {
    Json j = Json::object();
    for (const auto& [k, v] : *t) j[std::string(k.str())] = from_toml(v);
    return j;
  }
  if (const auto* a = node.as_array()) {
    Json j = Json::array();
    for (const auto& v : *a) j.push_back(from_toml(v));
    return j;
  }
  if (const auto* s = node.as_string()) return s->get();
  if (const auto* i = node.as_integer()) return i->get();
  if (const auto* f = node.as_floating_point()) return f->get();
  if (const auto* b = node.as_boolean()) return b->get();
  throw ConfigParseError("unsupported TOML value (dates are not accepted)");
}

const Json& require(const Json& j, const std::string& key) {
  if (!j.is_object() || !j.contains(key)) throw ConfigParseError("missing key '" + key + "'");
  return j.at(key);
}

int int_field(const Json& j, const std::string& key, int lo, int hi) {
  const Json& v = require(j, key);
  if (!v.is_number_integer()) throw ConfigParseError("'" + key + "' must be an integer");
  const auto x = v.get<long long>();
  if (x < lo || x > hi)
    throw ConfigParseError("'" + key + "' must lie in " + std::to_string(lo) + ".." + std::to_string(hi));
  return static_cast<int>(x);
}

double number(const Json& v, const std::string& what) {
  if (!v.is_number()) throw ConfigParseError(what + " must be a number");
  return v.get<double>();
}

std::string text(const Json& v, const std::string& what) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  throw ConfigParseError(what + " must be a string or an integer");
}

std::vector<std::string> var_names(const Json& j, int n) {
  if (!j.contains("vars")) return default_var_names(n);
  const Json& v = j.at("vars");
  if (!v.is_array() || static_cast<int>(v.size()) != n) throw ConfigParseError("'vars' must list n names");
  std::vector<std::string> out;
  for (const auto& s : v) out.push_back(text(s, "variable name"));
  return out;
}

CoeffPoly poly(const Json& v, int N, int n, const std::vector<std::string>& names, const std::string& where) {
  const std::string s = text(v, where);
  try {
    return parse_poly(s, N, n, names);
  } catch (const Error& e) {
    throw ConfigParseError(where + ": " + e.what());
  }
}

std::vector<int> index_list(const std::string& key, std::size_t count, int hi, const std::string& where) {
  std::vector<int> idx;
  std::stringstream ss(key);
  std::string part;
  while (std::getline(ss, part, ',')) {
    try {
      std::size_t used = 0;
      const int v = std::stoi(part, &used);
      if (part.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(part);
      idx.push_back(v);
    } catch (const std::exception&) {
      throw ConfigParseError(where + ": bad index key '" + key + "'");
    }
  }
  if (idx.size() != count) throw ConfigParseError(where + ": key '" + key + "' needs " + std::to_string(count) + " indices");
  for (int i : idx)
    if (i < 0 || i > hi) throw ConfigParseError(where + ": index out of range in '" + key + "'");
  return idx;
}

std::vector<double> vec(const Json& j, const std::string& key, int n) {
  const Json& v = require(j, key);
  if (!v.is_array() || static_cast<int>(v.size()) != n)
    throw ConfigParseError("'" + key + "' must be an array of " + std::to_string(n) + " numbers");
  std::vector<double> out;
  for (const auto& x : v) out.push_back(number(x, "'" + key + "' entry"));
  return out;
}

Tensor tensor_in(const Json& j, const std::string& key, int n, int lower, const std::vector<std::string>& names) {
  Tensor t(n, lower, n);
  if (!j.contains(key)) return t;
  const Json& tab = j.at(key);
  if (!tab.is_object()) throw ConfigParseError("'" + key + "' must be a table of index keys");
  for (const auto& [k, v] : tab.items()) {
    auto idx = index_list(k, static_cast<std::size_t>(lower) + 1, n, key);
    for (int i : idx)
      if (i < 1) throw ConfigParseError(key + ": indices start at 1 in '" + k + "'");
    t.at(idx) = poly(v, 3, n, names, key + "[" + k + "]");
  }
  return t;
}

}  // namespace

Json parse_config_text(std::string_view text, ConfigFormat format) {
  if (format == ConfigFormat::json) {
    try {
      return Json::parse(text);
    } catch (const nlohmann::json::exception& e) {
      throw ConfigParseError(std::string("JSON: ") + e.what());
    }
  }
  try {
    return from_toml(toml::parse(text));
  } catch (const toml::parse_error& e) {
    std::ostringstream os;
    os << "TOML: " << e.description() << " at line " << e.source().begin.line;
    throw ConfigParseError(os.str());
  }
}

Json load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigParseError("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  const bool json = path.size() >= 5 && path.compare(path.size() - 5, 5, ".json") == 0;
  return parse_config_text(ss.str(), json ? ConfigFormat::json : ConfigFormat::toml);
}

Tensor tensor_from_config(const Json& j, const std::string& key, int n, int lower) {
  return tensor_in(j, key, n, lower, var_names(j, n));
}

ConnectionBundle bundle_from_config(const Json& j) {
  const int n = int_field(j, "n", 1, 8);
  const auto names = var_names(j, n);
  return {n, tensor_in(j, "gamma", n, 2, names), tensor_in(j, "bcoef", n, 2, names), tensor_in(j, "ccoef", n, 3, names)};
}

PolyMap chart_from_config(const Json& j, int n) {
  const auto names = var_names(j, n);
  const Json& c = require(j, "chart");
  auto side = [&](const char* key) {
    const Json& a = require(c, key);
    if (!a.is_array() || static_cast<int>(a.size()) != n)
      throw ConfigParseError(std::string("chart.") + key + " must list n polynomials");
    std::vector<CoeffPoly> out;
    for (std::size_t i = 0; i < a.size(); ++i)
      out.push_back(poly(a[i], 3, n, names, std::string("chart.") + key + "[" + std::to_string(i) + "]"));
    return out;
  };
  try {
    return PolyMap(side("forward"), side("inverse"));
  } catch (const ConfigParseError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigParseError(std::string("chart: ") + e.what());
  }
}

CliffordConnection connection_from_config(const Json& j) {
  const int p = int_field(j, "p", 1, 6);
  const int N = int_field(j, "N", 2, 6);
  CliffordConnection A;
  for (int k = 1; k <= p; ++k) A.components.emplace_back(p, N);
  const Json& tab = require(j, "A");
  if (!tab.is_object()) throw ConfigParseError("'A' must be a table keyed by component");
  for (const auto& [k, terms] : tab.items()) {
    const int comp = index_list(k, 1, p, "A")[0];
    if (comp < 1) throw ConfigParseError("A: components start at 1");
    if (!terms.is_object()) throw ConfigParseError("A." + k + " must map exponents to scalars");
    for (const auto& [e, c] : terms.items()) {
      auto ex = index_list(e, static_cast<std::size_t>(p), N - 1, "A." + k);
      try {
        A.components[comp - 1].add_term(Exponents(ex.begin(), ex.end()), parse_scalar(text(c, "coefficient"), N));
      } catch (const ConfigParseError&) {
        throw;
      } catch (const Error& err) {
        throw ConfigParseError("A." + k + "[" + e + "]: " + err.what());
      }
    }
  }
  try {
    A.validate();
  } catch (const Error& err) {
    throw ConfigParseError(std::string("connection: ") + err.what());
  }
  return A;
}

GeodesicSetup geodesic_from_config(const Json& j) {
  const int n = int_field(j, "n", 1, 8);
  const auto names = var_names(j, n);
  GeodesicSetup s;
  try {
    s.coefficients = GeodesicCoefficients::make(tensor_in(j, "gamma", n, 2, names), tensor_in(j, "ef", n, 2, names),
                                                tensor_in(j, "g3", n, 3, names));
  } catch (const ConfigParseError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigParseError(std::string("geodesic coefficients: ") + e.what());
  }
  s.initial = {vec(j, "x0", n), vec(j, "v0", n), vec(j, "a0", n)};
  const auto span = vec(j, "lambda", 2);
  s.lambda0 = span[0];
  s.lambda1 = span[1];
  s.step = number(require(j, "step"), "'step'");
  return s;
}

LengthSetup length_from_config(const Json& j) {
  const int n = int_field(j, "n", 1, 8);
  const auto names = var_names(j, n);
  LengthSetup s;
  const Json& g = require(j, "metric");
  if (!g.is_array() || static_cast<int>(g.size()) != n) throw ConfigParseError("'metric' must be an n x n array");
  for (std::size_t r = 0; r < g.size(); ++r) {
    if (!g[r].is_array() || static_cast<int>(g[r].size()) != n)
      throw ConfigParseError("'metric' must be an n x n array");
    std::vector<CoeffPoly> row;
    for (std::size_t c = 0; c < g[r].size(); ++c)
      row.push_back(poly(g[r][c], 3, n, names, "metric[" + std::to_string(r) + "][" + std::to_string(c) + "]"));
    s.metric.push_back(std::move(row));
  }
  const Json& c = require(j, "curve");
  if (!c.is_array() || static_cast<int>(c.size()) != n) throw ConfigParseError("'curve' must list n expressions");
  for (const auto& e : c) s.curve.push_back(text(e, "curve component"));
  s.a = text(require(j, "a"), "'a'");
  s.b = text(require(j, "b"), "'b'");
  if (j.contains("tolerance")) s.tolerance = number(j.at("tolerance"), "'tolerance'");
  if (j.contains("expected")) s.expected = text(j.at("expected"), "'expected'");
  return s;
}

}  // namespace qcalc
