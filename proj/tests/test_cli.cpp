#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "doctest.h"
#include "usd/json_io.hpp"

namespace {

using usd::io::json;

struct CliResult {
  int exit_code = -1;
  json output;
  std::string raw;
};

CliResult run_cli(const std::string& args) {
  const std::string cmd = std::string(USD_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  CliResult result;
  char buf[4096];
  while (std::size_t got = std::fread(buf, 1, sizeof buf, pipe))
    result.raw.append(buf, got);
  const int status = pclose(pipe);
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  if (!result.raw.empty())
    result.output = json::parse(result.raw, nullptr, false);
  return result;
}

std::filesystem::path write_fixture(const std::string& name, const json& j) {
  const auto dir = std::filesystem::temp_directory_path() / "usd_cli_fixtures";
  std::filesystem::create_directories(dir);
  const auto path = dir / name;
  std::ofstream(path) << j.dump(2);
  return path;
}

json state_json(const std::vector<usd::cxd>& amp) {
  json arr = json::array();
  for (const auto& v : amp)
    arr.push_back(json{{"re", v.real()}, {"im", v.imag()}});
  return arr;
}

std::string theta_pair_file(double theta, double eta_plus) {
  const json j = {
      {"states",
       {state_json({std::cos(theta), std::sin(theta)}),
        state_json({std::cos(theta), -std::sin(theta)})}},
      {"priors", {eta_plus, 1.0 - eta_plus}}};
  return write_fixture("theta_pair.json", j).string();
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("check reports independence and uses the exit code as verdict") {
  const json ortho = {{"states",
                       {state_json({1.0, 0.0}), state_json({0.0, 1.0})}},
                      {"priors", {0.5, 0.5}}};
  const auto good = run_cli("check " + write_fixture("ortho.json", ortho).string());
  CHECK(good.exit_code == 0);
  CHECK(good.output["independent"] == true);
  CHECK(good.output["smallest_gram_eigenvalue"].get<double>() ==
        doctest::Approx(1.0));

  const double r = 1.0 / std::sqrt(2.0);
  const json dep = {{"states",
                     {state_json({1.0, 0.0, 0.0}), state_json({0.0, 1.0, 0.0}),
                      state_json({r, r, 0.0})}},
                    {"priors", {0.3, 0.3, 0.4}}};
  const auto bad = run_cli("check " + write_fixture("dep.json", dep).string());
  CHECK(bad.exit_code == 1);
  CHECK(bad.output["independent"] == false);
}

TEST_CASE("optimize picks the closed form for two states") {
  const double theta = 3.14159265358979323846 / 8.0;
  const auto result = run_cli("optimize " + theta_pair_file(theta, 0.5));
  CHECK(result.exit_code == 0);
  CHECK(result.output["method"] == "two-state-closed-form");
  CHECK(result.output["P_D"].get<double>() == doctest::Approx(0.29289).epsilon(1e-4));
  CHECK(result.output["P_I"].get<double>() == doctest::Approx(0.70711).epsilon(1e-4));
}

TEST_CASE("optimize flags select equal-p and oracle methods") {
  const json triple = {
      {"states",
       {state_json({1.0, 0.0, 0.0}), state_json({0.4, std::sqrt(0.84), 0.0}),
        state_json({0.2, 0.3, std::sqrt(0.87)})}},
      {"priors", {0.2, 0.5, 0.3}}};
  const std::string path = write_fixture("triple.json", triple).string();

  const auto equal = run_cli("optimize --equal-p " + path);
  CHECK(equal.exit_code == 0);
  CHECK(equal.output["method"] == "equal-p");
  const double lambda = equal.output["boundary_eigenvalue"].get<double>();
  CHECK(lambda == doctest::Approx(1.0).epsilon(1e-6));

  const auto oracle = run_cli("optimize --oracle --resolution 0.02 " + path);
  CHECK(oracle.exit_code == 0);
  CHECK(oracle.output["method"] == "grid-oracle");

  const auto general = run_cli("optimize " + path);
  CHECK(general.exit_code == 0);
  CHECK(general.output["method"] == "general-iterative");
  CHECK(general.output["P_D"].get<double>() + 1e-9 >=
        equal.output["P_D"].get<double>());
  CHECK(general.output["P_D"].get<double>() + 0.05 >=
        oracle.output["P_D"].get<double>());
}

TEST_CASE("measure emits a reproducible zero-error report") {
  const double theta = 3.14159265358979323846 / 8.0;
  const std::string path = theta_pair_file(theta, 0.5);
  const auto a = run_cli("measure --shots 20000 --seed 9 " + path);
  CHECK(a.exit_code == 0);
  CHECK(a.output["error_count"] == 0);
  CHECK(a.output["seed"] == 9);
  CHECK(a.output["generator"] == "splitmix64");
  std::uint64_t total = 0;
  for (const auto& row : a.output["tallies"])
    for (const auto& c : row) total += c.get<std::uint64_t>();
  CHECK(total == 20000);

  const auto b = run_cli("measure --shots 20000 --seed 9 " + path);
  CHECK(a.raw == b.raw);
}

TEST_CASE("concentrate reports P_C and optionally simulates") {
  const json schmidt = {{"coeffs", state_json({std::sqrt(0.5), std::sqrt(0.3),
                                               std::sqrt(0.2)})}};
  const std::string path = write_fixture("schmidt.json", schmidt).string();

  const auto plain = run_cli("concentrate " + path);
  CHECK(plain.exit_code == 0);
  CHECK(plain.output["P_C"].get<double>() == doctest::Approx(0.6).epsilon(1e-9));
  CHECK(plain.output["seed"] == 42);
  CHECK_FALSE(plain.output.contains("simulation"));
  CHECK(plain.output["failure_schmidt_rank"] == 2);

  const auto sim = run_cli("concentrate --shots 5000 --seed 5 " + path);
  CHECK(sim.exit_code == 0);
  CHECK(sim.output.contains("simulation"));
  CHECK(sim.output["simulation"]["shots"] == 5000);
}

TEST_CASE("bounds curve endpoints") {
  const double theta = 3.14159265358979323846 / 8.0;
  const auto result =
      run_cli("bounds --tradeoff-samples 11 " + theta_pair_file(theta, 0.5));
  CHECK(result.exit_code == 0);
  CHECK(result.output["P_IDP"].get<double>() ==
        doctest::Approx(0.70711).epsilon(1e-4));
  CHECK(result.output["helstrom"].get<double>() ==
        doctest::Approx(0.14645).epsilon(1e-4));
  const auto& curve = result.output["tradeoff"];
  CHECK(curve.size() == 11);
  CHECK(curve.front()["P_E"].get<double>() ==
        doctest::Approx(result.output["helstrom"].get<double>()).epsilon(1e-9));
  CHECK(curve.back()["P_E"].get<double>() == doctest::Approx(0.0));
}

TEST_CASE("error objects and exit codes") {
  // malformed JSON -> 2
  const auto dir = std::filesystem::temp_directory_path() / "usd_cli_fixtures";
  std::filesystem::create_directories(dir);
  const auto broken = dir / "broken.json";
  std::ofstream(broken) << "{ not json";
  const auto parse = run_cli("check " + broken.string());
  CHECK(parse.exit_code == 2);
  CHECK(parse.output["error"]["kind"] == "ParseError");

  // missing file -> 2
  CHECK(run_cli("check /nonexistent/ensemble.json").exit_code == 2);

  // schema violation (unnormalized state) -> 2
  const json unnormalized = {{"states", {state_json({0.5, 0.0})}},
                             {"priors", {1.0}}};
  const auto schema =
      run_cli("check " + write_fixture("unnorm.json", unnormalized).string());
  CHECK(schema.exit_code == 2);
  CHECK(schema.output["error"]["kind"] == "ParseError");

  // dependent input to optimize -> 1
  const double r = 1.0 / std::sqrt(2.0);
  const json dep = {{"states",
                     {state_json({1.0, 0.0, 0.0}), state_json({0.0, 1.0, 0.0}),
                      state_json({r, r, 0.0})}},
                    {"priors", {0.3, 0.3, 0.4}}};
  const auto dependent =
      run_cli("optimize " + write_fixture("dep2.json", dep).string());
  CHECK(dependent.exit_code == 1);
  CHECK(dependent.output["error"]["kind"] == "DependentStates");

  // bounds needs exactly two states -> 1
  const auto arity =
      run_cli("bounds " + write_fixture("dep2.json", dep).string());
  CHECK(arity.exit_code == 1);
  CHECK(arity.output["error"]["kind"] == "WrongArity");

  // oracle on five states -> 1
  const json five = [] {
    json j;
    j["priors"] = {0.2, 0.2, 0.2, 0.2, 0.2};
    j["states"] = json::array();
    for (int k = 0; k < 5; ++k) {
      std::vector<usd::cxd> amp(5, 0.0);
      amp[k] = 1.0;
      j["states"].push_back(state_json(amp));
    }
    return j;
  }();
  const auto too_large =
      run_cli("optimize --oracle " + write_fixture("five.json", five).string());
  CHECK(too_large.exit_code == 1);
  CHECK(too_large.output["error"]["kind"] == "TooLarge");
}

}  // TEST_SUITE
