// SPDX-License-Identifier: Apache-2.0
//
// dfrc-hbf: hybrid beamforming design for mmWave dual-function
// radar-communication transmitters.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "dfrc/experiments.hpp"

#include <gtest/gtest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

namespace dfrc::exp {
namespace {

namespace fs = std::filesystem;

ExperimentConfig parse(const std::string& text) {
  std::istringstream is(text);
  return ExperimentConfig::from_map(parse_config_text(is));
}

// Small system shared by the runner tests.
const char* kTiny =
    "dims.n_tx_antennas = 8\n"
    "dims.n_rx_antennas = 2\n"
    "dims.n_tx_rf = 4\n"
    "dims.n_rx_rf = 1\n"
    "dims.n_streams = 2\n"
    "dims.n_users = 2\n"
    "dims.n_subcarriers = 2\n"
    "dims.n_radar_rx_rf = 4\n"
    "scene.grid_points = 61\n"
    "architecture.kinds = full\n"
    "solver.max_iterations = 60\n"
    "sweep.seeds = 1..2\n";

// kTiny with the given "key = value" lines replacing or extending it.
std::string tiny(const std::string& overrides = "") {
  std::istringstream base(kTiny), extra(overrides);
  std::map<std::string, std::string> kv = parse_config_text(base);
  for (const auto& [k, v] : parse_config_text(extra)) kv[k] = v;
  std::string out;
  for (const auto& [k, v] : kv) out += k + " = " + v + "\n";
  return out;
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

fs::path fresh_dir(const std::string& name) {
  const fs::path d = fs::temp_directory_path() / ("dfrc_test_" + name);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

// ---- Configuration ---------------------------------------------------------------

TEST(Config, ParsesCommentsRangesAndLists) {
  const ExperimentConfig c = parse(
      "# comment line\n"
      "dims.n_tx_antennas = 16   # trailing comment\n"
      "sweep.seeds = 1..3, 7\n"
      "sweep.weights = 0, 0.25, 1\n"
      "scene.mainlobe = -0.5:-0.2, 0.1:0.4\n"
      "architecture.kinds = dynamic, partial\n"
      "output.dir = somewhere\n");
  EXPECT_EQ(c.dims.n_tx_antennas, 16);
  EXPECT_EQ(c.seeds, (std::vector<std::uint64_t>{1, 2, 3, 7}));
  EXPECT_EQ(c.weights, (std::vector<double>{0, 0.25, 1}));
  ASSERT_EQ(c.mainlobe.size(), 2u);
  EXPECT_DOUBLE_EQ(c.mainlobe[1].hi, 0.4);
  EXPECT_EQ(c.architectures, (std::vector<ConnectionKind>{ConnectionKind::Dynamic, ConnectionKind::Partial}));
  EXPECT_EQ(c.out_dir, "somewhere");
}

TEST(Config, RejectsMalformedInput) {
  EXPECT_THROW(parse("no.such.key = 1\n"), ConfigError);
  EXPECT_THROW(parse("dims.n_users = 2\ndims.n_users = 3\n"), ConfigError);
  EXPECT_THROW(parse("dims.n_users 2\n"), ConfigError);
  EXPECT_THROW(parse("dims.n_users = two\n"), ConfigError);
  EXPECT_THROW(parse("sweep.seeds = 5..2\n"), ConfigError);
  EXPECT_THROW(parse("sweep.weights = 0, 1.5\n"), ConfigError);
  EXPECT_THROW(parse("architecture.kinds = star\n"), ConfigError);
  EXPECT_THROW(parse("objective.radar = snr\n"), ConfigError);
  EXPECT_THROW(parse("scalarization.kind = lexicographic\n"), ConfigError);
  EXPECT_THROW(parse("scene.mainlobe = 0.1\n"), ConfigError);
  EXPECT_THROW(parse("dims.n_tx_rf = 3\narchitecture.kinds = partial\n"), ConfigError);
  EXPECT_THROW(parse("scene.targets = 0.1, 0.2\nscene.gains = 1\n"), ConfigError);
  EXPECT_THROW(ExperimentConfig::load("/nonexistent/dfrc.cfg"), ConfigError);
}

TEST(Config, ResolvedRoundTripKeepsHash) {
  const ExperimentConfig a = parse(tiny("scalarization.kind = minmax\nsolver.penalty = 12.5\n"));
  const ExperimentConfig b = parse(a.resolved());
  EXPECT_EQ(a.resolved(), b.resolved());
  EXPECT_EQ(a.hash(), b.hash());
  EXPECT_EQ(a.hash(), fnv1a(a.resolved()));
}

TEST(Config, EveryFieldAppearsOnceInResolved) {
  const std::string r = ExperimentConfig{}.resolved();
  for (const auto& f : ExperimentConfig::fields()) {
    const std::string key = "\n" + f.key + " = ";
    EXPECT_NE(("\n" + r).find(key), std::string::npos) << f.key;
  }
  EXPECT_EQ(std::count(r.begin(), r.end(), '\n'), static_cast<long>(ExperimentConfig::fields().size()));
}

TEST(Config, HashTracksResultFieldsOnly) {
  const ExperimentConfig base = parse(tiny());
  const std::vector<std::string> edits{
      "channel.clusters = 3",       "channel.rays = 4",          "architecture.phase_shifters = 8",
      "scene.targets = -0.5, 0.3", "scene.mainlobe = -0.6:0.6", "radar.pfa = 1e-5",
      "system.snr_db = 3",         "objective.comm = neg_se",   "scalarization.w_radar = 0.3",
      "solver.method = two_stage", "solver.ridge = 1e-9",       "solver.constraint_penalties = 10, 100",
      "sweep.weights = 0, 1",      "sweep.snr_db = 0",          "sweep.seeds = 1..3",
      "doa.k_values = 1, 2",       "doa.snr_reference = per_carrier"};
  for (const auto& e : edits) {
    const std::string key = e.substr(0, e.find(' '));
    EXPECT_NE(parse(tiny(e + "\n")).hash(), base.hash()) << e;
  }
  EXPECT_EQ(parse(tiny("output.dir = elsewhere\n")).hash(), base.hash());
}

TEST(Config, DerivedSettings) {
  const ExperimentConfig c = parse(tiny("system.snr_db = 10\nsystem.total_power = 2\n"));
  EXPECT_NEAR(c.comm_noise(10.0), 2.0 / 2 / 10.0, 1e-15);
  EXPECT_EQ(c.architecture(ConnectionKind::Dynamic).n_phase_shifters, 16);
  const DoaStudyConfig d = doa_settings(c);
  EXPECT_EQ(d.n_tx_antennas, 8);
  EXPECT_EQ(d.n_radar_rx, 4);
  EXPECT_EQ(d.total_power, 2.0);
  EXPECT_EQ(d.seeds, c.seeds);
  EXPECT_TRUE(std::holds_alternative<WeightedSum>(c.scalarization()));
}

// ---- Pareto helpers -----------------------------------------------------------------

TEST(Pareto, ViolationMeasuresRadarIncrease) {
  const auto f = ConnectionKind::Full;
  std::vector<ParetoMedian> m{{f, 0.0, 1.0, 5.0}, {f, 0.5, 2.0, 4.0}, {f, 1.0, 3.0, 3.0}};
  EXPECT_EQ(pareto_violation(m, f), 0.0);
  m[1].mi_radar = 0.5;  // radar rises from 0.5 to 1.0 as comm goes 4 -> 5
  EXPECT_DOUBLE_EQ(pareto_violation(m, f), 0.5);
  std::vector<ParetoMedian> ties{{f, 0.0, 1.0, 2.0}, {f, 1.0, 3.0, 2.0}};
  EXPECT_EQ(pareto_violation(ties, f), 0.0);
  EXPECT_EQ(pareto_violation(m, ConnectionKind::Partial), 0.0);
}

TEST(Pareto, CandidateOrderBreaksTiesOnOtherObjective) {
  detail::SweepCandidate a, b;
  a.normalized = {0.0, 0.4};
  b.normalized = {0.0, 0.2};
  EXPECT_TRUE(detail::better_for(1.0, b, a));
  EXPECT_FALSE(detail::better_for(1.0, a, b));
  EXPECT_TRUE(detail::better_for(0.5, b, a));
  a.normalized = {0.1, 0.0};
  b.normalized = {0.3, 0.0};
  EXPECT_TRUE(detail::better_for(0.0, a, b));
}

// ---- Runners --------------------------------------------------------------------------

TEST(Runners, ParetoEndpoints) {
  const ExperimentConfig c =
      parse(tiny("objective.radar = neg_radar_mi\nobjective.comm = neg_se\nsweep.weights = 1, 0\n"));
  const ParetoResult r = run_pareto(c, 1);
  ASSERT_EQ(r.rows.size(), 4u);
  ASSERT_EQ(r.medians.size(), 2u);
  EXPECT_EQ(r.medians[0].weight, 0.0);
  EXPECT_EQ(r.medians[1].weight, 1.0);
  for (const auto& row : r.rows) {
    EXPECT_NE(row.status, "error");
    EXPECT_TRUE(std::isfinite(row.mi_radar) && std::isfinite(row.mi_comm));
  }
  EXPECT_GE(r.medians[1].mi_radar, r.medians[0].mi_radar);
  EXPECT_GE(r.medians[0].mi_comm, r.medians[1].mi_comm);
  EXPECT_EQ(pareto_violation(r.medians, ConnectionKind::Full), 0.0);
  EXPECT_THROW(run_pareto(parse(tiny("sweep.weights = 0.5\n")), 1), ConfigError);
}

TEST(Runners, SeVersusSnrIncreasesWithSnr) {
  const ExperimentConfig c = parse(tiny("sweep.snr_db = 10, -10\nsweep.seeds = 3\n"));
  const SnrResult r = run_se_vs_snr(c, 1);
  ASSERT_EQ(r.rows.size(), 2u);
  ASSERT_EQ(r.medians.size(), 2u);
  EXPECT_EQ(r.medians[0].snr_db, -10.0);
  EXPECT_GT(r.medians[1].se_fd, r.medians[0].se_fd);
  EXPECT_GT(r.medians[1].se_admm, r.medians[0].se_admm);
  for (const auto& row : r.rows) EXPECT_EQ(row.status.find("error"), std::string::npos);
}

TEST(Runners, BeampatternConcentratesInMainlobe) {
  const ExperimentConfig c = parse(tiny("scalarization.w_radar = 1\n"));
  const auto runs = run_beampattern(c, 1);
  ASSERT_EQ(runs.size(), 6u);
  std::vector<double> fd;
  for (const auto& r : runs) {
    EXPECT_NE(r.status, "error");
    EXPECT_EQ(r.per_carrier.rows(), 2);
    EXPECT_EQ(r.total.size(), 61u);
    if (r.method == "fully_digital") fd.push_back(r.mainlobe_fraction);
  }
  EXPECT_GE(median(fd), 0.7);
}

TEST(Runners, DoaRowsCoverGrid) {
  const ExperimentConfig c = parse(
      "dims.n_tx_antennas = 8\ndims.n_radar_rx_rf = 4\ndoa.n_streams = 2\ndoa.k_values = 2, 1\n"
      "doa.snr_db = 20\ndoa.trials_per_seed = 3\ndoa.grid_points = 201\nsweep.seeds = 1\n");
  const auto rows = run_doa(c, 1);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0].k, 1);
  EXPECT_EQ(rows[1].k, 2);
  for (const auto& r : rows) EXPECT_GT(r.crlb, 0.0);
}

TEST(Runners, DesignWritesArtifacts) {
  const ExperimentConfig c = parse(tiny("architecture.kinds = dynamic\n"));
  const DesignRun d = run_design(c);
  const fs::path dir = fresh_dir("design");
  const auto files = write_design_result(d.result, dir);
  for (const auto& f : files) EXPECT_TRUE(fs::exists(dir / f)) << f;
  EXPECT_NE(slurp(dir / "summary.txt").find("architecture = dynamic"), std::string::npos);
  EXPECT_NE(slurp(dir / "precoder.csv").find("analog,0,"), std::string::npos);
}

// ---- Reproducibility -------------------------------------------------------------------

TEST(Reproducibility, ParetoFilesByteIdentical) {
  const ExperimentConfig c = parse(tiny("sweep.weights = 0, 0.5, 1\n"));
  const fs::path a = fresh_dir("rep_a"), b = fresh_dir("rep_b");
  const auto files = write_pareto(run_pareto(c, 1), a);
  write_pareto(run_pareto(c, 2), b);
  write_manifest(a, "pareto", c, files);
  write_manifest(b, "pareto", c, files);
  for (const auto& f : files) EXPECT_EQ(slurp(a / f), slurp(b / f)) << f;
  EXPECT_EQ(slurp(a / "manifest.txt"), slurp(b / "manifest.txt"));
}

TEST(Reproducibility, ManifestRecordsHashAndConfig) {
  const ExperimentConfig c = parse(tiny());
  const fs::path d = fresh_dir("manifest");
  write_manifest(d, "design", c, {"x.csv"});
  const std::string m = slurp(d / "manifest.txt");
  char hash[24];
  std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(c.hash()));
  EXPECT_NE(m.find(std::string("config_hash = ") + hash), std::string::npos);
  EXPECT_NE(m.find("seeds = 1, 2"), std::string::npos);
  EXPECT_NE(m.find(c.resolved()), std::string::npos);
}

TEST(Reproducibility, ParallelForCoversEveryIndexOnce) {
  std::vector<int> hits(1000, 0);
  parallel_for(hits.size(), 4, [&](std::size_t i) { ++hits[i]; });
  for (int h : hits) EXPECT_EQ(h, 1);
}

// ---- Command line ---------------------------------------------------------------------------

#ifdef DFRC_CLI_PATH
int run_cli(const std::string& args) {
  const int rc = std::system((std::string(DFRC_CLI_PATH) + " " + args + " > /dev/null 2>&1").c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

TEST(Cli, ExitCodes) {
  const fs::path d = fresh_dir("cli");
  std::ofstream(d / "bad.cfg") << "no.such.key = 1\n";
  std::ofstream(d / "tiny.cfg") << tiny("sweep.seeds = 4\n");
  EXPECT_EQ(run_cli("design --config " + (d / "bad.cfg").string()), 2);
  EXPECT_EQ(run_cli("frobnicate"), 2);
  EXPECT_EQ(run_cli("design --config " + (d / "tiny.cfg").string() + " --jobs 0"), 2);
  EXPECT_EQ(run_cli("design --config " + (d / "tiny.cfg").string() + " --out " + (d / "out").string()), 0);
  for (const char* f : {"precoder.csv", "combiner.csv", "residuals.csv", "trace.csv", "summary.txt", "metrics.csv",
                        "manifest.txt"})
    EXPECT_TRUE(fs::exists(d / "out" / f)) << f;
}

TEST(Cli, SeedOverrideAndRerunIdentical) {
  const fs::path d = fresh_dir("cli_rerun");
  std::ofstream(d / "tiny.cfg") << tiny("sweep.snr_db = 0\n");
  const std::string base = "se-vs-snr --config " + (d / "tiny.cfg").string() + " --seed 5 --out ";
  ASSERT_EQ(run_cli(base + (d / "a").string()), 0);
  ASSERT_EQ(run_cli(base + (d / "b").string() + " --jobs 2"), 0);
  EXPECT_EQ(slurp(d / "a" / "se_vs_snr_seeds.csv"), slurp(d / "b" / "se_vs_snr_seeds.csv"));
  EXPECT_NE(slurp(d / "a" / "manifest.txt").find("seeds = 5\n"), std::string::npos);
}
#endif

}  // namespace
}  // namespace dfrc::exp
