#pragma once

// Config files for the CLI. TOML (default) or JSON (".json"), both loaded into
// one JSON tree and then read by the per-command loaders below. Every failure,
// including a malformed polynomial, surfaces as ConfigParseError.
//
// Tensors are tables keyed by comma-separated 1-based indices:
//   [gamma]
//   "2,1,1" = "x1 - q*x2"

#include <string>
#include <string_view>
#include <vector>

#include "qcalc/clifford.hpp"
#include "qcalc/covariant.hpp"
#include "qcalc/geodesic.hpp"
#include "qcalc/report.hpp"

namespace qcalc {

enum class ConfigFormat { toml, json };

Json parse_config_text(std::string_view text, ConfigFormat format);
/// Format chosen by extension.
Json load_config(const std::string& path);

/// {n, vars?, gamma?, bcoef?, ccoef?}; missing tensors are zero.
ConnectionBundle bundle_from_config(const Json& j);
/// chart = {forward = [...], inverse = [...]}, polynomials in the same vars.
PolyMap chart_from_config(const Json& j, int n);
/// Tensor with `lower` lower indices from table `key` (zero if absent).
Tensor tensor_from_config(const Json& j, const std::string& key, int n, int lower);

/// {p, N, A = {"k" = {"e1,...,ep" = "scalar"}}}.
CliffordConnection connection_from_config(const Json& j);

struct GeodesicSetup {
  GeodesicCoefficients coefficients;
  InitialState initial;
  double lambda0 = 0.0;
  double lambda1 = 1.0;
  double step = 0.1;
};

/// {n, vars?, gamma?, ef?, g3?, x0, v0, a0, lambda = [start, end], step}.
GeodesicSetup geodesic_from_config(const Json& j);

struct LengthSetup {
  std::vector<std::vector<CoeffPoly>> metric;
  std::vector<std::string> curve;  // expressions in t
  std::string a, b;                // expressions (may use pi)
  double tolerance = 1e-9;
  std::optional<std::string> expected;
};

/// {n, vars?, metric = [[...]], curve = [...], a, b, tolerance?, expected?}.
LengthSetup length_from_config(const Json& j);

}  // namespace qcalc
