#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "haantjes/commands.hpp"
#include "haantjes/manifest.hpp"
#include "haantjes/pipeline.hpp"
#include "haantjes/report.hpp"

namespace haantjes {
namespace {

std::string data(const std::string& name) { return std::string(HAANTJES_TEST_DATA) + "/" + name; }

TEST(Report, Fnv1aReferenceValues) {
  EXPECT_EQ(fnv1a64(""), 0xcbf29ce484222325ULL);
  EXPECT_EQ(fnv1a64("a"), 0xaf63dc4c8601ec8cULL);
  EXPECT_EQ(hex64(0xaf63dc4c8601ec8cULL), "af63dc4c8601ec8c");
}

TEST(Report, ResidualFormatting) {
  EXPECT_EQ(format_residual(0.0), "0.0000000000000000e+00");
  EXPECT_EQ(format_residual(0.5), "5.0000000000000000e-01");
  EXPECT_EQ(format_residual(std::numeric_limits<double>::infinity()), "inf");
}

TEST(Report, OverallVerdict) {
  std::vector<CheckRecord> recs(2);
  recs[0].verdict = Verdict::Pass;
  recs[1].verdict = Verdict::Info;
  recs[1].gating = false;
  EXPECT_EQ(overall_verdict(recs), Verdict::Pass);
  recs[1].verdict = Verdict::Fail;
  EXPECT_EQ(overall_verdict(recs), Verdict::Pass);  // non-gating
  recs[0].verdict = Verdict::HypothesesUnmet;
  EXPECT_EQ(overall_verdict(recs), Verdict::Fail);
}

TEST(Report, JsonIsByteIdenticalAcrossRuns) {
  const Manifest m = load_manifest("a3-frobenius");
  CheckOptions o;
  o.points = 10;
  const auto a = report_to_json(run_checks(m, o));
  const auto b = report_to_json(run_checks(m, o));
  EXPECT_EQ(a, b);
  EXPECT_NE(a.find("\"schema_version\": 1"), std::string::npos);
  EXPECT_NE(a.find(hex64(fnv1a64(m.text))), std::string::npos);
  EXPECT_EQ(a.find("millis"), std::string::npos);
}

TEST(Report, SeedChangesThePoints) {
  const Manifest m = load_manifest("perturbed-a3");
  CheckOptions o;
  o.points = 10;
  o.only = {"commute"};
  const auto a = run_checks(m, o);
  o.seed = 7;
  const auto b = run_checks(m, o);
  ASSERT_EQ(a.records.size(), 1u);
  EXPECT_NE(a.records[0].max_residual, b.records[0].max_residual);
}

TEST(Commands, OnlySelectsByPrefix) {
  EXPECT_TRUE(check_selected("weak-haantjes.torsion@K", {"weak-haantjes"}));
  EXPECT_FALSE(check_selected("commute", {"weak-haantjes"}));
  EXPECT_TRUE(check_selected("commute", {}));

  std::ostringstream out, err;
  CheckCommand cmd;
  cmd.manifest = "companion-3d";
  cmd.options.only = {"weak-haantjes"};
  EXPECT_EQ(cmd_check(cmd, out, err), kExitFail);
  EXPECT_NE(out.str().find("weak-haantjes.torsion@K"), std::string::npos);
  EXPECT_EQ(out.str().find("compatibility"), std::string::npos);

  cmd.options.only = {"weak-haantjes.closed", "weak-haantjes.dk2"};
  std::ostringstream out2;
  EXPECT_EQ(cmd_check(cmd, out2, err), kExitPass);
}

TEST(Commands, ExitCodes) {
  std::ostringstream out, err;
  CheckCommand pass;
  pass.manifest = "a3-frobenius";
  pass.options.points = 10;
  EXPECT_EQ(cmd_check(pass, out, err), kExitPass);
  CheckCommand fail = pass;
  fail.manifest = "perturbed-a3";
  EXPECT_EQ(cmd_check(fail, out, err), kExitFail);
  for (const char* bad : {"bad_arity.toml", "bad_expr.toml", "unknown_variable.toml"}) {
    CheckCommand c;
    c.manifest = data(bad);
    std::ostringstream e;
    EXPECT_EQ(cmd_check(c, out, e), kExitManifest) << bad;
    EXPECT_FALSE(e.str().empty());
  }
}

TEST(Commands, ReportFileWritten) {
  const auto path = std::filesystem::temp_directory_path() / "haantjes_report_test.json";
  std::ostringstream out, err;
  CheckCommand c;
  c.manifest = "weak-2d";
  c.report_path = path.string();
  EXPECT_EQ(cmd_check(c, out, err), kExitPass);
  std::ifstream in(path);
  std::stringstream text;
  text << in.rdbuf();
  EXPECT_NE(text.str().find("\"overall\": \"PASS\""), std::string::npos);
  std::filesystem::remove(path);
}

TEST(Commands, TorsionOutput) {
  std::ostringstream out, err;
  TorsionCommand t;
  t.manifest = "diag-2d";
  t.field = "K2";
  t.at = std::vector<double>{0.0, 1.0};
  EXPECT_EQ(cmd_torsion(t, out, err), kExitPass);
  EXPECT_NE(out.str().find("T^1_12 = 1"), std::string::npos) << out.str();
  EXPECT_NE(out.str().find("T^2_12 = 1"), std::string::npos);

  std::ostringstream o2;
  t.kind = "haantjes";
  EXPECT_EQ(cmd_torsion(t, o2, err), kExitPass);
  EXPECT_EQ(o2.str().find(" = 1"), std::string::npos);
}

TEST(Commands, TorsionPrecondition) {
  TorsionCommand t;
  t.manifest = data("nonassociative_c.toml");
  t.field = "C";
  t.kind = "yano-ako";
  std::ostringstream out, err;
  EXPECT_EQ(cmd_torsion(t, out, err), kExitPass);
  EXPECT_NE(err.str().find("warning"), std::string::npos);
  t.enforce_pre = true;
  std::ostringstream e2;
  EXPECT_EQ(cmd_torsion(t, out, e2), kExitFail);
  EXPECT_NE(e2.str().find("precondition"), std::string::npos);
}

TEST(Commands, SimulateCsvAndCfl) {
  std::ostringstream out, err;
  SimulateCommand s;
  s.manifest = "advection";
  s.flow = 1;
  s.grid = 64;
  s.dt = 1e-3;
  s.steps = 50;
  s.every = 10;
  EXPECT_EQ(cmd_simulate(s, out, err), kExitPass) << err.str();
  std::istringstream lines(out.str());
  std::string header;
  std::getline(lines, header);
  EXPECT_EQ(header, "t,drift_A1,translation_error");
  int rows = 0;
  for (std::string line; std::getline(lines, line);) ++rows;
  EXPECT_EQ(rows, 6);

  s.dt = 1.0;
  std::ostringstream e2;
  EXPECT_EQ(cmd_simulate(s, out, e2), kExitManifest);
  EXPECT_NE(e2.str().find("exceeds 0.5"), std::string::npos);
}

TEST(Commands, ScenarioListing) {
  std::ostringstream out;
  EXPECT_EQ(cmd_scenarios(out), kExitPass);
  EXPECT_NE(out.str().find("a3-frobenius"), std::string::npos);
  EXPECT_NE(out.str().find("weak-2d"), std::string::npos);
}

}  // namespace
}  // namespace haantjes
