#pragma once

// Verification reports: {command, params, checks:[{name,status,witness?}], timing}.
// Everything except `timing` is a pure function of the inputs.

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace qcalc {

using Json = nlohmann::ordered_json;

struct Check {
  std::string name;
  bool pass = false;
  /// Printed evidence for a failure (or an informational value).
  std::optional<std::string> witness;
  /// Extra structured fields merged into the check object.
  Json info;
};

struct Report {
  std::string command;
  Json params = Json::object();
  std::vector<Check> checks;
  /// Command-specific results (dimension, length, ...).
  Json results;
  double timing_ms = 0.0;

  void add(std::string name, bool pass, std::optional<std::string> witness = std::nullopt,
           Json info = {});
  /// Appends another report's checks, prefixing names.
  void merge(const Report& other, const std::string& prefix = "");
  bool all_pass() const;
  std::size_t failures() const;

  Json to_json() const;
  std::string dump() const;
};

}  // namespace qcalc
