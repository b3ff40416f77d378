#include <doctest.h>

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "sparsepde/commands.hpp"

using namespace sparsepde;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::vector<std::string>> csv_rows(const std::string& text, std::string* trailer = nullptr) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line[0] == '#') {
      if (trailer) *trailer = line.substr(2);
      continue;
    }
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    rows.push_back(cells);
  }
  return rows;
}

// strtod accepts subnormals, which std::stod rejects.
double num(const std::string& s) { return std::strtod(s.c_str(), nullptr); }

double normal_pdf_r(double y, double r) { return std::exp(-y * y / (2.0 * r)) / std::sqrt(2.0 * M_PI * r); }

}  // namespace

TEST_CASE("risk-curve output") {
  Run r = run({"risk-curve", "--estimator", "point", "--eta", "0.1", "--r", "1", "--theta-max", "2"});
  REQUIRE(r.code == 0);
  auto rows = csv_rows(r.out);
  REQUIRE(rows.size() == 2049);
  CHECK(rows[0] == std::vector<std::string>{"theta", "rho", "quad_term", "e_log_N", "e_log_D"});
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const double t = num(rows[i][0]);
    CHECK(std::abs(num(rows[i][1]) - t * t / 2.0) < 1e-10);
  }

  r = run({"risk-curve", "--estimator", "ss", "--slab-l", "7.5", "--eta", "0.1", "--r", "1", "--points", "256"});
  REQUIRE(r.code == 0);
  rows = csv_rows(r.out);
  REQUIRE(rows.size() == 257);
  for (std::size_t i = 1; i < rows.size(); ++i) CHECK(num(rows[i][1]) >= 0.0);

  r = run({"risk-curve", "--estimator", "plugin", "--eta", "0.1", "--r", "1", "--points", "64"});
  REQUIRE(r.code == 0);
  rows = csv_rows(r.out);
  CHECK(rows[5].size() == 5);
  CHECK(rows[5][3].empty());
  CHECK(rows[5][4].empty());

  r = run({"risk-curve", "--estimator", "bigrid", "--eta", "0.1", "--r", "1", "--points", "64", "--format", "json"});
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["points"].size() == 64);
}

TEST_CASE("max-risk JSON") {
  const Run r = run({"max-risk", "--estimator", "point", "--eta", "0.1", "--r", "1", "--points", "64"});
  REQUIRE(r.code == 0);
  const auto j = nlohmann::ordered_json::parse(r.out);
  std::vector<std::string> keys;
  for (auto it = j.begin(); it != j.end(); ++it) keys.push_back(it.key());
  CHECK(keys == std::vector<std::string>{"eta", "r", "estimator", "benchmark", "max_rho", "ratio", "argmax_theta",
                                         "quad_order", "points"});
  CHECK(j["ratio"].get<double>() == doctest::Approx(25.0).epsilon(1e-13));
  CHECK(j["estimator"] == "point");
  CHECK(j["quad_order"] == 256);
  CHECK(j["points"] == 64);
  // Round-trip formatting keeps full precision.
  const std::string text = r.out;
  CHECK(text.find("1.1512925464970") != std::string::npos);
}

TEST_CASE("table1 output") {
  const Run r = run({"table1", "--etas", "0.1", "--rs", "1,0.25", "--points", "128"});
  REQUIRE(r.code == 0);
  const auto rows = csv_rows(r.out);
  REQUIRE(rows.size() == 3);
  CHECK(rows[0] == std::vector<std::string>{"eta", "r", "benchmark", "plugin_ratio", "bigrid_ratio", "ss_ratio",
                                            "grid_ratio", "plugin_argmax", "bigrid_argmax", "ss_argmax",
                                            "grid_argmax"});
  CHECK(rows[1][4] == rows[1][6]);
  CHECK(num(rows[2][6]) >= num(rows[2][4]) - 1e-9);
}

TEST_CASE("sigma output") {
  auto summary = [](const std::vector<std::string>& args) {
    const Run r = run(args);
    REQUIRE(r.code == 0);
    std::string trailer;
    const auto rows = csv_rows(r.out, &trailer);
    CHECK(rows[0] == std::vector<std::string>{"l", "omega", "theta", "n", "n_check", "d", "sigma"});
    return nlohmann::json::parse(trailer);
  };
  CHECK(std::abs(summary({"sigma", "--estimator", "grid", "--r", "1"})["max_sigma"].get<double>() - 1.0) < 1e-6);
  CHECK(std::abs(summary({"sigma", "--estimator", "grid", "--r", "0.25"})["max_sigma"].get<double>() - 1.06) < 1e-6);
  CHECK(summary({"sigma", "--estimator", "bigrid", "--r", "0.1"})["max_sigma"].get<double>() <= 1.0 + 1e-9);
}

TEST_CASE("density output") {
  Run r = run({"density", "--estimator", "point", "--eta", "0.1", "--r", "1", "--x", "3"});
  REQUIRE(r.code == 0);
  std::string trailer;
  auto rows = csv_rows(r.out, &trailer);
  REQUIRE(rows.size() == 4097);
  CHECK(rows[0] == std::vector<std::string>{"y", "phat"});
  for (std::size_t i = 1; i < rows.size(); i += 97) {
    const double y = num(rows[i][0]);
    CHECK(num(rows[i][1]) == doctest::Approx(normal_pdf_r(y, 1.0)).epsilon(1e-13));
  }
  CHECK(std::abs(nlohmann::json::parse(trailer)["integral"].get<double>() - 1.0) < 1e-4);

  for (const char* est : {"grid", "bigrid", "ss"}) {
    r = run({"density", "--estimator", est, "--eta", "0.001", "--r", "0.25", "--x", "-2.5"});
    REQUIRE(r.code == 0);
    csv_rows(r.out, &trailer);
    CHECK(std::abs(nlohmann::json::parse(trailer)["integral"].get<double>() - 1.0) < 1e-4);
  }

  r = run({"density", "--estimator", "grid", "--eta", "1e-10", "--r", "1", "--x", "0"});
  REQUIRE(r.code == 0);
  rows = csv_rows(r.out);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const double y = num(rows[i][0]);
    CHECK(std::abs(num(rows[i][1]) - normal_pdf_r(y, 1.0)) < 1e-6);
  }
}

TEST_CASE("prior dump schema") {
  Run r = run({"prior", "dump", "--estimator", "bigrid", "--eta", "0.1", "--r", "0.1"});
  REQUIRE(r.code == 0);
  auto j = nlohmann::json::parse(r.out);
  CHECK(j["weight_at_zero"].get<double>() == doctest::Approx(0.9));
  CHECK(j["atoms"][0].contains("mu"));
  CHECK(j["atoms"][0].contains("mass"));
  CHECK(j["slab"].is_null());
  CHECK(j["spec"]["K"] == 11);
  r = run({"prior", "dump", "--estimator", "ss", "--eta", "0.1", "--r", "1", "--slab-l", "5"});
  REQUIRE(r.code == 0);
  j = nlohmann::json::parse(r.out);
  CHECK(j["atoms"].empty());
  CHECK(j["slab"]["l"] == 5.0);
  CHECK(j["slab"]["mass"] == 0.1);
  CHECK(j["spec"].is_null());
}

TEST_CASE("exit codes") {
  CHECK(run({}).code == 2);
  CHECK(run({"bogus"}).code == 2);
  CHECK(run({"max-risk", "--estimator", "grid", "--eta", "0.1"}).code == 2);
  CHECK(run({"max-risk", "--estimator", "grid", "--eta", "1.5", "--r", "1"}).code == 2);
  CHECK(run({"max-risk", "--estimator", "grid", "--eta", "0.6", "--r", "1"}).code == 2);
  CHECK(run({"max-risk", "--estimator", "cthresh", "--eta", "0.1", "--r", "1"}).code == 2);
  CHECK(run({"max-risk", "--estimator", "ss", "--slab-l", "-1", "--eta", "0.1", "--r", "1"}).code == 2);
  CHECK(run({"risk-curve", "--estimator", "grid", "--eta", "0.1", "--r", "1", "--points", "10"}).code == 2);
  CHECK(run({"density", "--estimator", "plugin", "--eta", "0.1", "--r", "1"}).code == 2);
  const Run bad = run({"max-risk", "--estimator", "grid", "--eta", "0.1", "--r", "-1"});
  CHECK(bad.code == 2);
  CHECK(bad.err.find('\n') == bad.err.size() - 1);
  CHECK(run({"--help"}).code == 0);
  CHECK(run({"max-risk", "--help"}).code == 0);
}

TEST_CASE("deterministic output and --out") {
  const std::vector<std::string> args{"max-risk", "--estimator", "ss", "--eta", "0.001", "--r", "0.5", "--points", "128"};
  const Run a = run(args), b = run(args);
  CHECK(a.out == b.out);
  const std::string path = "cli_out_test.json";
  auto with_out = args;
  with_out.insert(with_out.end(), {"--out", path});
  const Run c = run(with_out);
  REQUIRE(c.code == 0);
  CHECK(c.out.empty());
  std::ifstream f(path);
  std::stringstream ss;
  ss << f.rdbuf();
  CHECK(ss.str() == a.out);
  std::remove(path.c_str());
}
