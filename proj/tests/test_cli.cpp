// Copyright (c) 2026 the ewps authors
// Distributed under the MIT License (see LICENSE).
//
// End-to-end checks of the command-line binary: determinism, exit codes,
// format round-trips. The binary path and data directory come from CMake.

#include <catch2/catch_amalgamated.hpp>
#include <json.hpp>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>
#include <vector>

namespace {

struct RunResult {
  int exit_code;
  std::string out;
};

RunResult run(const std::string& args) {
  const std::string cmd = std::string(EWPS_CLI_PATH) + " " + args + " 2>/dev/null";
  std::array<char, 4096> buf{};
  std::string out;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::size_t got;
  while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), got);
  const int status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string data_file(const char* name) { return std::string(EWPS_DATA_DIR) + "/" + name; }

}  // namespace

TEST_CASE("sample is bit-identical across equal seeds") {
  const std::string args =
      "sample --family geometric --alpha 2 --beta 1 --gamma 1.5 --theta 0.5 --n 5 --seed 7";
  const auto a = run(args);
  const auto b = run(args);
  REQUIRE(a.exit_code == 0);
  REQUIRE(a.out == b.out);
  REQUIRE(!a.out.empty());
}

TEST_CASE("sample rejects bad parameters before emitting output") {
  const auto r = run("sample --family poisson --alpha 1 --beta 1 --gamma 1 --theta -1 --n 2 --seed 1");
  REQUIRE(r.exit_code == 3);
  REQUIRE(r.out.empty());
}

TEST_CASE("sample mean approaches the model mean") {
  const auto r = run(
      "sample --family geometric --alpha 1 --beta 1 --gamma 1 --theta 0.5 --n 100000 --seed 11");
  REQUIRE(r.exit_code == 0);
  double sum = 0;
  long count = 0;
  std::size_t pos = 0;
  while (pos < r.out.size()) {
    const auto nl = r.out.find('\n', pos);
    if (nl == std::string::npos) break;
    sum += std::stod(r.out.substr(pos, nl - pos));
    ++count;
    pos = nl + 1;
  }
  REQUIRE(count == 100000);
  // model mean 2·log 2; sd is about 1.2, so 3 SE ≈ 0.0114
  REQUIRE_THAT(sum / count, Catch::Matchers::WithinAbs(2.0 * std::log(2.0), 0.012));
}

TEST_CASE("unreadable data path exits 1") {
  const auto r = run("fit --data /nonexistent/file.csv");
  REQUIRE(r.exit_code == 1);
}

TEST_CASE("weibull fit row has two parameters") {
  const auto r = run("fit --data " + data_file("kevlar49_90stress.csv") +
                     " --model weibull --format json-lines");
  REQUIRE(r.exit_code == 0);
  const auto obj = nlohmann::json::parse(r.out);
  REQUIRE(obj["model"] == "weibull");
  REQUIRE(obj["converged"] == true);
  REQUIRE(obj.contains("beta"));
  REQUIRE(obj.contains("gamma"));
  REQUIRE(!obj.contains("alpha"));
  REQUIRE_THAT(obj["beta"].get<double>(), Catch::Matchers::WithinAbs(1.0101, 0.002));
  REQUIRE_THAT(obj["gamma"].get<double>(), Catch::Matchers::WithinAbs(0.9259, 0.002));
}

TEST_CASE("json-lines output re-parses to full precision") {
  const auto r = run("fit --data " + data_file("kevlar49_90stress.csv") +
                     " --model ew --format json-lines");
  REQUIRE(r.exit_code == 0);
  const auto obj = nlohmann::json::parse(r.out);
  // serialize-parse round trip preserves every numeric field bit-for-bit
  const auto reparsed = nlohmann::json::parse(obj.dump());
  for (auto& [k, v] : obj.items()) {
    if (v.is_number_float())
      REQUIRE(reparsed[k].get<double>() == v.get<double>());
  }
  REQUIRE_THAT(obj["neg2loglik"].get<double>(), Catch::Matchers::WithinAbs(205.5743, 0.01));
}

TEST_CASE("csv fit output re-parses to full precision") {
  const auto r = run("fit --data " + data_file("kevlar49_90stress.csv") + " --model weibull");
  REQUIRE(r.exit_code == 0);
  const auto nl = r.out.find('\n');
  const std::string header = r.out.substr(0, nl);
  REQUIRE(header.find("neg2loglik") != std::string::npos);
  // value line reparses to the same double that a fresh fit prints
  const auto r2 = run("fit --data " + data_file("kevlar49_90stress.csv") + " --model weibull");
  REQUIRE(r.out == r2.out);
}

TEST_CASE("compare emits all six rows on a toy dataset") {
  char tmpl[] = "/tmp/ewps_toy_XXXXXX";
  const int fd = mkstemp(tmpl);
  REQUIRE(fd >= 0);
  {
    std::ofstream f(tmpl);
    f << "lifetime\n1.1\n2.3\n0.7\n1.9\n3.1\n";
  }
  const auto r = run(std::string("compare --data ") + tmpl + " --format json-lines");
  std::vector<nlohmann::json> rows;
  std::size_t pos = 0;
  while (pos < r.out.size()) {
    const auto nl = r.out.find('\n', pos);
    if (nl == std::string::npos) break;
    rows.push_back(nlohmann::json::parse(r.out.substr(pos, nl - pos)));
    pos = nl + 1;
  }
  REQUIRE(rows.size() == 6);
  // AIC identity on every successful row
  for (const auto& row : rows) {
    if (row["ok"] == true) {
      const double n2 = row["neg2loglik"].get<double>();
      const int k = row["k"].get<int>();
      REQUIRE_THAT(row["aic"].get<double>(), Catch::Matchers::WithinAbs(n2 + 2.0 * k, 1e-12));
    }
  }
  std::remove(tmpl);
}

TEST_CASE("table grid: exponential column and hazard identity") {
  const auto r = run(
      "table --family geometric --alpha 1 --beta 1 --gamma 1 --theta 1e-9 --points 20 "
      "--ymin 0.1 --ymax 3 --format json-lines");
  REQUIRE(r.exit_code == 0);
  std::size_t pos = 0;
  int rows = 0;
  while (pos < r.out.size()) {
    const auto nl = r.out.find('\n', pos);
    if (nl == std::string::npos) break;
    const auto row = nlohmann::json::parse(r.out.substr(pos, nl - pos));
    const double y = row["y"].get<double>();
    REQUIRE_THAT(row["pdf"].get<double>(), Catch::Matchers::WithinRel(std::exp(-y), 1e-6));
    REQUIRE_THAT(row["hazard"].get<double>(),
                 Catch::Matchers::WithinRel(
                     row["pdf"].get<double>() / row["survival"].get<double>(), 1e-12));
    ++rows;
    pos = nl + 1;
  }
  REQUIRE(rows == 20);
}

TEST_CASE("table supports the literal-coefficients demonstration family") {
  const auto r = run(
      "table --family polynomial --coeffs 1:1,20:1 --alpha 2 --beta 1 --gamma 3 --theta 1 "
      "--points 50 --format json-lines");
  REQUIRE(r.exit_code == 0);
  int rows = 0;
  std::size_t pos = 0;
  double prev_cdf = -1.0;
  while (pos < r.out.size()) {
    const auto nl = r.out.find('\n', pos);
    if (nl == std::string::npos) break;
    const auto row = nlohmann::json::parse(r.out.substr(pos, nl - pos));
    REQUIRE(row["cdf"].get<double>() >= prev_cdf);
    prev_cdf = row["cdf"].get<double>();
    ++rows;
    pos = nl + 1;
  }
  REQUIRE(rows == 50);
}

TEST_CASE("ttt command endpoints") {
  const auto r = run("ttt --data " + data_file("alloy_t7987.csv") + " --format json-lines");
  REQUIRE(r.exit_code == 0);
  std::vector<nlohmann::json> ttt_rows, surv_rows;
  std::size_t pos = 0;
  while (pos < r.out.size()) {
    const auto nl = r.out.find('\n', pos);
    if (nl == std::string::npos) break;
    const auto row = nlohmann::json::parse(r.out.substr(pos, nl - pos));
    (row["kind"] == "ttt" ? ttt_rows : surv_rows).push_back(row);
    pos = nl + 1;
  }
  REQUIRE(ttt_rows.size() == 68);
  REQUIRE(ttt_rows.front()["x"] == 0.0);
  REQUIRE(ttt_rows.front()["y"] == 0.0);
  REQUIRE_THAT(ttt_rows.back()["x"].get<double>(), Catch::Matchers::WithinAbs(1.0, 1e-14));
  REQUIRE_THAT(ttt_rows.back()["y"].get<double>(), Catch::Matchers::WithinAbs(1.0, 1e-12));
  REQUIRE(!surv_rows.empty());
}

TEST_CASE("gof with explicit parameters reproduces the reported K-S") {
  const auto r = run("gof --data " + data_file("alloy_t7987.csv") +
                     " --model ewps --family geometric --alpha 15.3396 --beta 0.0154 "
                     "--gamma 1.3155 --theta 0.1860 --format json-lines");
  REQUIRE(r.exit_code == 0);
  const auto row = nlohmann::json::parse(r.out);
  REQUIRE_THAT(row["ks"].get<double>(), Catch::Matchers::WithinAbs(0.0486, 0.005));
  REQUIRE_THAT(row["ks_pvalue"].get<double>(), Catch::Matchers::WithinAbs(0.9974, 0.02));
  REQUIRE_THAT(row["neg2loglik"].get<double>(), Catch::Matchers::WithinAbs(695.9917, 0.01));
}

TEST_CASE("header lines and malformed rows are handled") {
  char tmpl[] = "/tmp/ewps_bad_XXXXXX";
  const int fd = mkstemp(tmpl);
  REQUIRE(fd >= 0);
  {
    std::ofstream f(tmpl);
    f << "lifetime\n1.0\n-1.0\n";
  }
  const auto r = run(std::string("ttt --data ") + tmpl);
  REQUIRE(r.exit_code == 1);
  std::remove(tmpl);
}
