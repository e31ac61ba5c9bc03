#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <regex>
#include <string>

#include "doctest.h"
#include "json.hpp"

namespace {

struct Run {
  int code = -1;
  std::string out;
};

std::string bin() {
  const char* b = std::getenv("QCALC_BIN");
  REQUIRE_MESSAGE(b != nullptr, "QCALC_BIN must point at the qcalc binary");
  return b;
}

std::string configs() {
  const char* c = std::getenv("QCALC_CONFIGS");
  REQUIRE_MESSAGE(c != nullptr, "QCALC_CONFIGS must point at tools/configs");
  return c;
}

Run run(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + " " + bin() + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  Run r;
  char buf[4096];
  std::size_t got;
  while ((got = std::fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, got);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string without_timing(const std::string& s) {
  return std::regex_replace(s, std::regex("\"ms\": [0-9.e+-]+"), "\"ms\": 0");
}

std::string temp_file(const std::string& name, const std::string& content) {
  auto p = std::filesystem::temp_directory_path() / name;
  std::ofstream(p) << content;
  return p.string();
}

int count_status(const nlohmann::json& j, const char* status) {
  int c = 0;
  for (const auto& chk : j["checks"]) c += chk["status"] == status;
  return c;
}

}  // namespace

TEST_CASE("dims reports the dimension") {
  auto r = run("dims --n 2");
  CHECK(r.code == 0);
  auto j = nlohmann::json::parse(r.out);
  CHECK(j["command"] == "dims");
  CHECK(j["results"]["dimension"] == 14);
  CHECK(j.contains("timing"));
  CHECK(nlohmann::json::parse(run("dims --n 1").out)["results"]["dimension"] == 4);
}

TEST_CASE("verify nilpotency example") {
  auto r = run("verify nilpotency --N 3 --n 2 --trials 20 --seed 1");
  CHECK(r.code == 0);
  auto j = nlohmann::json::parse(r.out);
  CHECK(count_status(j, "pass") >= 20);
  CHECK(count_status(j, "fail") == 0);
}

TEST_CASE("clifford verify example") {
  CHECK(run("clifford verify --p 2 --N 2").code == 0);
  CHECK(run("verify conditions --N 4 --n 2").code == 0);
}

TEST_CASE("usage errors exit with 2") {
  CHECK(run("").code == 2);
  CHECK(run("verify nilpotency --N 3 --n 2").code == 2);  // no seed
  CHECK(run("dims --n 0").code == 2);
  CHECK(run("dims --bogus").code == 2);
  CHECK(run("covariant tensoriality --seed 1 --chart polar").code == 2);
  CHECK(run("geodesic integrate").code == 2);
  CHECK(run("geodesic integrate --config x.toml --format xml").code == 2);
}

TEST_CASE("config errors exit with 3") {
  CHECK(run("dim1 length --config /nonexistent/q.toml").code == 3);
  CHECK(run("covariant riemann --config " + temp_file("qcalc_bad.toml", "n = 2\n[gamma\n")).code == 3);
  CHECK(run("covariant riemann --config " + temp_file("qcalc_badpoly.toml", "n = 2\n[gamma]\n\"1,1,1\" = \"x1 +\"\n")).code == 3);
  CHECK(run("covariant riemann --config " + temp_file("qcalc_badidx.toml", "n = 2\n[gamma]\n\"1,3,1\" = \"1\"\n")).code == 3);
  CHECK(run("covariant riemann --config " + temp_file("qcalc_torsion.toml", "n = 2\n[gamma]\n\"1,1,2\" = \"1\"\n")).code == 3);
  CHECK(run("geodesic integrate --config " + temp_file("qcalc_geo.json", "{\"n\": 1, \"x0\": [0]}")).code == 3);
  CHECK(run("clifford curvature --config " + temp_file("qcalc_cl.toml", "p = 2\nN = 2\n[A.1]\n\"1,1\" = \"1\"\n")).code == 3);
}

TEST_CASE("reports are deterministic apart from timing") {
  const std::string args = "clifford bianchi --p 2 --N 3 --seed 7 --trials 3";
  auto a = run(args), b = run(args), s = run("--serial " + args), t = run(args, "QCALC_THREADS=1");
  CHECK(a.code == 0);
  CHECK(without_timing(a.out) == without_timing(b.out));
  CHECK(without_timing(a.out) == without_timing(s.out));
  CHECK(without_timing(a.out) == without_timing(t.out));
  CHECK_FALSE(without_timing(a.out) == without_timing(run("clifford bianchi --p 2 --N 3 --seed 8 --trials 3").out));
}

TEST_CASE("--out writes the report to a file") {
  auto path = std::filesystem::temp_directory_path() / "qcalc_out.json";
  std::filesystem::remove(path);
  auto r = run("dims --n 3 --out " + path.string());
  CHECK(r.code == 0);
  CHECK(r.out.empty());
  std::ifstream in(path);
  auto j = nlohmann::json::parse(in);
  CHECK(j["results"]["dimension"] == 32);
}

TEST_CASE("curve lengths from configs") {
  for (const char* c : {"circle", "ellipse", "ph_curve"}) {
    auto r = run("dim1 length --config " + configs() + "/" + c + ".toml");
    INFO(c);
    CHECK(r.code == 0);
  }
  auto j = nlohmann::json::parse(run("dim1 length --config " + configs() + "/ph_curve.toml").out);
  CHECK(j["results"]["exact"] == "12");
}

TEST_CASE("TOML and JSON bundle configs give the same report") {
  auto a = run("covariant tensoriality --config " + configs() + "/bundle.toml");
  auto b = run("covariant tensoriality --config " + configs() + "/bundle.json");
  CHECK(a.code == 0);
  auto ja = nlohmann::json::parse(a.out), jb = nlohmann::json::parse(b.out);
  ja["params"].erase("config");
  jb["params"].erase("config");
  ja.erase("timing");
  jb.erase("timing");
  CHECK(ja == jb);
}

TEST_CASE("covariant riemann reports the failing identity with exit 1") {
  auto r = run("covariant riemann --n 2 --seed 3 --trials 2");
  CHECK(r.code == 1);
  auto j = nlohmann::json::parse(r.out);
  CHECK(j["results"]["anti_over_combination"][0] == "-1/3");
}

TEST_CASE("geodesic trajectories") {
  auto csv = run("geodesic integrate --config " + configs() + "/line.toml --format csv");
  CHECK(csv.code == 0);
  CHECK(csv.out.rfind("lambda,x1,x2,x3,v1,v2,v3,a1,a2,a3\n", 0) == 0);
  CHECK(std::count(csv.out.begin(), csv.out.end(), '\n') == 52);
  auto r = run("geodesic integrate --config " + configs() + "/geodesic.toml --richardson 0.1");
  CHECK(r.code == 0);
  auto j = nlohmann::json::parse(r.out);
  const double ratio = j["checks"][1]["ratio"];
  CHECK(ratio >= 12.0);
  CHECK(ratio <= 20.0);
}
