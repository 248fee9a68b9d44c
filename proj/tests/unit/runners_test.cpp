#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>
#include <json.hpp>

#include "dicke/app/config.hpp"
#include "dicke/app/runners.hpp"
#include "dicke/error.hpp"

namespace dicke::app {
namespace {

using json = nlohmann::json;

RunConfig small() {
  RunConfig c;
  c.model.n_ph = 8;
  c.model.n_fourier = 12;
  c.model.n_steps = 48;
  c.model.g = 0.4;
  c.model.T = 0.1;
  c.sweep.T = {0.05, 0.2, 2};
  c.sweep.g = {0.2, 0.5, 2};
  return c;
}

TEST(Runners, CouplingConventions) {
  ModelParams p;
  p.g = 0.4;
  p.Omega = 0.1;
  p.g_prime = 0.2;
  const ModelParams rwa = with_coupling(p, SweepCoupling::rwa);
  EXPECT_EQ(rwa.g_prime, 0.0);
  EXPECT_EQ(rwa.Omega_prime, 0.0);
  const ModelParams full = with_coupling(p, SweepCoupling::full);
  EXPECT_EQ(full.g_prime, 0.4);
  EXPECT_EQ(full.Omega_prime, 0.1);
  EXPECT_EQ(with_coupling(p, SweepCoupling::fixed), p);
}

TEST(Runners, SweepIsDeterministicAcrossWorkerCounts) {
  RunConfig c = small();
  const Artifacts one = run_sweep(c, 1);
  const Artifacts three = run_sweep(c, 3);
  EXPECT_EQ(one.main, three.main);
}

TEST(Runners, SweepCellEqualsSinglePoint) {
  RunConfig c = small();
  c.output.format = OutputFormat::json;
  const json doc = json::parse(run_sweep(c, 2).main);
  ASSERT_EQ(doc["rows"].size(), 4u);
  const json& row = doc["rows"][3];
  ModelParams p = with_coupling(c.model, c.sweep.coupling);
  p.T = row["T"].get<double>();
  p.g = row["g"].get<double>();
  EXPECT_EQ(row["status"], "ok");
  EXPECT_EQ(row["value"].get<double>(), sweep_point(p, SweepObservable::g2));
  EXPECT_EQ(doc["metadata"]["command"], "sweep");
}

TEST(Runners, SweepRecordsPointErrors) {
  RunConfig c = small();
  c.sweep.T = {0.0, 0.1, 2};  // T = 0: dark stationary state, g2 undefined
  c.output.format = OutputFormat::json;
  const json doc = json::parse(run_sweep(c, 1).main);
  EXPECT_EQ(doc["rows"][0]["status"], "numerical_error");
  EXPECT_TRUE(doc["rows"][0]["value"].is_null());
  EXPECT_FALSE(doc["rows"][0]["message"].get<std::string>().empty());
  EXPECT_EQ(doc["rows"][3]["status"], "ok");
}

TEST(Runners, SpectrumCsvAndPeaks) {
  RunConfig c = small();
  c.spectrum.omega = {0.1, 2.0, 20};
  const Artifacts a = run_spectrum(c);
  std::istringstream in(a.main);
  std::string header;
  std::getline(in, header);
  EXPECT_EQ(header, "omega,S");
  int lines = 0;
  for (std::string l; std::getline(in, l);) ++lines;
  EXPECT_EQ(lines, 20);
  ASSERT_EQ(a.sidecars.size(), 2u);
  EXPECT_EQ(a.sidecars[0].first, ".peaks.json");
  EXPECT_TRUE(json::parse(a.sidecars[0].second).contains("peaks"));
  EXPECT_EQ(a.sidecars[1].first, ".meta.json");
  EXPECT_EQ(json::parse(a.sidecars[1].second)["metadata"]["command"], "spectrum");
}

TEST(Runners, EofRequiresTwoEmitters) {
  EXPECT_THROW(run_eof(small()), ConfigError);
  RunConfig c = small();
  c.model.emitters = 2;
  c.model.T = 0.05;
  c.output.format = OutputFormat::json;
  const json doc = json::parse(run_eof(c).main);
  const double eof = doc["rows"][0]["eof"].get<double>();
  EXPECT_GE(eof, 0.0);
  EXPECT_LE(eof, 1.0);
}

TEST(Runners, QuasienergiesTable) {
  RunConfig c = small();
  c.quasienergies.g = {0.0, 0.4, 3};
  c.output.format = OutputFormat::json;
  const Artifacts a = run_quasienergies(c);
  const json doc = json::parse(a.main);
  EXPECT_EQ(doc["rows"].size(), 3u * 18u);
  for (const auto& row : doc["rows"]) {
    EXPECT_GE(row["eps"].get<double>(), -0.5);
    EXPECT_LT(row["eps"].get<double>(), 0.5);
  }
}

std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "dicke_cli_tests";
  std::filesystem::create_directories(dir);
  return dir / name;
}

int run(const std::string& args) {
  const std::string cmd = std::string(DICKE_BINARY) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

TEST(Cli, ExitCodes) {
  const auto good = scratch("good.toml");
  std::ofstream(good) << "[model]\ng = 0.4\nn_ph = 6\n[numerics]\nn_fourier = 8\nn_steps = 32\n[bath]\nT = 0.1\n";
  const auto bad = scratch("bad.toml");
  std::ofstream(bad) << "[model]\ng = oops\n";
  const auto out = scratch("g2.csv");

  EXPECT_EQ(run("g2 --config " + good.string() + " --out " + out.string()), 0);
  EXPECT_TRUE(std::filesystem::exists(out));
  EXPECT_EQ(run("g2 --config " + bad.string()), 1);
  EXPECT_EQ(run("nonsense"), 1);
  EXPECT_EQ(run("g2 --config " + good.string() + " --override bath.T=-1"), 1);
  EXPECT_EQ(run("g2 --config " + good.string() + " --override bath.T=0"), 2);
  EXPECT_EQ(run("--help"), 0);
}

}  // namespace
}  // namespace dicke::app
