#include "qcalc/report.hpp"

#include <algorithm>

namespace qcalc {

void Report::add(std::string name, bool pass, std::optional<std::string> witness, Json info) {
  checks.push_back({std::move(name), pass, std::move(witness), std::move(info)});
}

void Report::merge(const Report& other, const std::string& prefix) {
  for (const auto& c : other.checks) {
    Check copy = c;
    copy.name = prefix + c.name;
    checks.push_back(std::move(copy));
  }
}

bool Report::all_pass() const { return failures() == 0; }

std::size_t Report::failures() const {
  return static_cast<std::size_t>(
      std::count_if(checks.begin(), checks.end(), [](const Check& c) { return !c.pass; }));
}

Json Report::to_json() const {
  Json j;
  j["command"] = command;
  j["params"] = params;
  Json arr = Json::array();
  for (const auto& c : checks) {
    Json e;
    e["name"] = c.name;
    e["status"] = c.pass ? "pass" : "fail";
    if (c.witness) e["witness"] = *c.witness;
    if (c.info.is_object())
      for (auto it = c.info.begin(); it != c.info.end(); ++it) e[it.key()] = it.value();
    arr.push_back(std::move(e));
  }
  j["checks"] = std::move(arr);
  if (!results.is_null()) j["results"] = results;
  j["timing"] = {{"ms", timing_ms}};
  return j;
}

std::string Report::dump() const { return to_json().dump(2); }

}  // namespace qcalc
