// Copyright 2026 The rcar Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "rcar/study.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "gtest/gtest.h"

namespace {

using namespace rcar;
namespace fs = std::filesystem;

StudyConfig small_config() {
  StudyConfig cfg;
  cfg.reps = 12;
  cfg.N = 60;
  cfg.n = 200;
  cfg.alternatives = {{2.0, 1.4}, {2.0, 1.2}};
  cfg.seed = 3;
  return cfg;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

TEST(StudyConfigTest, ParsesAllKeys) {
  std::istringstream in(
      "# design\n"
      "reps = 40\nN=100\nn=400\nalpha0=2\nbeta0=1.4\n"
      "alt=2,1.2\nalt = 2, 1.6  # last\n"
      "shock_b=0.25\nkappa=0.02\nmc_reps=200\n"
      "level=0.10\nlevel=0.01\nlevel=0.10\n"
      "seed=77\nout_dir=/tmp/x\nestimator=zero_mean\n");
  const StudyConfig cfg = parse_study_config(in);
  EXPECT_EQ(cfg.reps, 40u);
  EXPECT_EQ(cfg.N, 100u);
  EXPECT_EQ(cfg.n, 400u);
  EXPECT_EQ(cfg.theta0, (BetaParams{2.0, 1.4}));
  ASSERT_EQ(cfg.alternatives.size(), 2u);
  EXPECT_EQ(cfg.alternatives[1], (BetaParams{2.0, 1.6}));
  EXPECT_EQ(cfg.shock_b, 0.25);
  EXPECT_EQ(cfg.effective_kappa(), 0.02);
  EXPECT_EQ(cfg.mc_reps, 200u);
  EXPECT_EQ(cfg.levels, (std::vector<double>{0.01, 0.10}));
  EXPECT_EQ(cfg.seed, 77u);
  EXPECT_EQ(cfg.out_dir, "/tmp/x");
  EXPECT_EQ(cfg.estimator, AutocorrEstimator::ZeroMean);
  EXPECT_NO_THROW(validate(cfg));
}

TEST(StudyConfigTest, Defaults) {
  std::istringstream in("alt=2,1.3\nkappa=auto\n");
  const StudyConfig cfg = parse_study_config(in);
  EXPECT_EQ(cfg.reps, 500u);
  EXPECT_EQ(cfg.N, 250u);
  EXPECT_EQ(cfg.n, 817u);
  EXPECT_EQ(cfg.levels, (std::vector<double>{0.05, 0.10}));
  EXPECT_DOUBLE_EQ(cfg.effective_kappa(), 0.5 / std::sqrt(817.0));
  EXPECT_EQ(cfg.estimator, AutocorrEstimator::Centered);
  StudyConfig full = cfg;
  apply_full_preset(full);
  EXPECT_EQ(full.reps, 5000u);
  EXPECT_EQ(full.alternatives.size(), 5u);
}

TEST(StudyConfigTest, RejectsBadInput) {
  auto parse = [](const char* text) {
    std::istringstream in(text);
    return parse_study_config(in);
  };
  EXPECT_THROW(validate(parse("reps=0\nalt=2,1.4\n")), ConfigError);
  EXPECT_THROW(validate(parse("reps=10\n")), ConfigError);  // no alternatives
  EXPECT_THROW(validate(parse("alt=2,0.8\n")), DomainError);
  EXPECT_THROW(validate(parse("alt=2,1.4\nlevel=1.5\n")), ConfigError);
  EXPECT_THROW(validate(parse("alt=2,1.4\nkappa=0.7\n")), ConfigError);
  EXPECT_THROW(parse("reps=ten\n"), ConfigError);
  EXPECT_THROW(parse("colour=blue\n"), ConfigError);
  EXPECT_THROW(parse("alt=2\n"), ConfigError);
  EXPECT_THROW(parse("just text\n"), ConfigError);
  EXPECT_THROW(parse("estimator=raw\n"), ConfigError);
}

TEST(PvalueEcdfTest, StepHeightsWithTies) {
  std::vector<StudyRow> rows(5);
  rows[0].p1 = 0.3;
  rows[1].p1 = 0.1;
  rows[2].p1 = 0.3;
  rows[3].p1 = 0.9;
  // rows[4] failed.
  const auto curve = pvalue_ecdf(rows, Statistic::T1);
  const std::vector<std::pair<double, double>> expected = {{0.1, 0.25}, {0.3, 0.75}, {0.9, 1.0}};
  EXPECT_EQ(curve, expected);
  EXPECT_THROW(pvalue_ecdf(rows, Statistic::T2), DomainError);
}

TEST(SummarizeTest, RatesUsePerStatisticDenominators) {
  StudyConfig cfg = small_config();
  cfg.alternatives = {{2.0, 1.4}};
  cfg.levels = {0.05, 0.5};
  std::vector<StudyRow> rows(4);
  rows[0].p1 = 0.01; rows[0].t1 = 2; rows[0].p2 = 0.2; rows[0].t2 = 1;
  rows[1].p1 = 0.30; rows[1].t1 = 1; rows[1].p2 = 0.04; rows[1].t2 = 5;
  rows[2].p1 = 0.70; rows[2].t1 = 0.5;  // T2 failed
  rows[3].error = "panel failed";
  const auto s = summarize(cfg, rows);
  ASSERT_EQ(s.size(), 2u);
  EXPECT_DOUBLE_EQ(s[0].rate_t1, 1.0 / 3.0);
  EXPECT_DOUBLE_EQ(s[0].rate_t2, 0.5);
  EXPECT_DOUBLE_EQ(s[1].rate_t1, 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(s[1].rate_t2, 1.0);
  EXPECT_EQ(s[0].reps_ok, 2u);
  EXPECT_EQ(s[0].reps_failed, 2u);
}

TEST(RunStudyTest, DeterministicAndIndependentOfWorkers) {
  const StudyConfig cfg = small_config();
  const StudyResult a = run_study(cfg, 1);
  const StudyResult b = run_study(cfg, 1);
  const StudyResult c = run_study(cfg, 4);
  ASSERT_EQ(a.rows.size(), 24u);
  std::ostringstream sa, sb, sc;
  write_rows_csv(sa, a.rows);
  write_rows_csv(sb, b.rows);
  write_rows_csv(sc, c.rows);
  EXPECT_EQ(sa.str(), sb.str());
  EXPECT_EQ(sa.str(), sc.str());
  for (const auto& r : a.rows) {
    EXPECT_TRUE(r.ok()) << r.error;
    EXPECT_GE(*r.p1, 0.0);
    EXPECT_LE(*r.p1, 1.0);
  }
  EXPECT_EQ(a.rows[13].alt_index, 1u);
  EXPECT_EQ(a.rows[13].rep, 1u);
  EXPECT_EQ(a.rows[13].beta_alt, 1.2);
}

TEST(RunStudyTest, CellDependsOnlyOnSeedAlternativeAndRep) {
  StudyConfig cfg = small_config();
  const StudyRow direct = run_study_cell(cfg, 1, 5);
  cfg.reps = 30;
  const StudyResult r = run_study(cfg, 2);
  EXPECT_EQ(r.rows[30 + 5].t1, direct.t1);
  EXPECT_EQ(r.rows[30 + 5].t2, direct.t2);
  EXPECT_NE(study_cell_seed(1, 0, 1), study_cell_seed(1, 1, 0));
}

TEST(RunStudyTest, WritesArtifacts) {
  StudyConfig cfg = small_config();
  const fs::path dir = fs::temp_directory_path() / "rcar_study_test";
  fs::remove_all(dir);
  cfg.out_dir = (dir / "nested").string();
  const StudyResult result = run_study(cfg, 2);
  write_study_artifacts(cfg, result);
  const std::string rows = slurp(dir / "nested" / "rows.csv");
  const std::string summary = slurp(dir / "nested" / "summary.csv");
  const std::string curve = slurp(dir / "nested" / "pvalue_ecdf.csv");
  EXPECT_EQ(rows.substr(0, rows.find('\n')), "beta_alt,rep,t1,p1,t2,p2");
  EXPECT_EQ(std::ranges::count(rows, '\n'), 25);
  EXPECT_EQ(summary.substr(0, summary.find('\n')),
            "beta_alt,level,size_or_power_t1,size_or_power_t2,reps_ok,reps_failed");
  EXPECT_EQ(std::ranges::count(summary, '\n'), 5);
  EXPECT_EQ(curve.substr(0, curve.find('\n')), "beta_alt,statistic,p,ecdf");
  EXPECT_NE(curve.find("1.2,T2,"), std::string::npos);
  fs::remove_all(dir);
}

TEST(DefaultWorkersTest, ReadsEnvironment) {
  ::setenv("RCAR_WORKERS", "3", 1);
  EXPECT_EQ(default_workers(), 3u);
  ::setenv("RCAR_WORKERS", "zero", 1);
  EXPECT_THROW(default_workers(), ConfigError);
  ::unsetenv("RCAR_WORKERS");
  EXPECT_GE(default_workers(), 1u);
}

}  // namespace
