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

// Command-line front end for the experiment runners.
//
// Exit codes: 0 success, 2 configuration error, 3 solver failure (design).

#include "dfrc/experiments.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>

namespace {

using namespace dfrc;
using namespace dfrc::exp;

struct Options {
  std::string config_path;
  long long seed = -1;
  int jobs = 1;
  std::string out;
};

ExperimentConfig load_config(const Options& o) {
  ExperimentConfig c = o.config_path.empty() ? ExperimentConfig{} : ExperimentConfig::load(o.config_path);
  if (o.seed >= 0) c.seeds = {static_cast<std::uint64_t>(o.seed)};
  if (!o.out.empty()) c.out_dir = o.out;
  if (o.jobs < 1) throw ConfigError("--jobs must be >= 1");
  c.validate();
  return c;
}

std::filesystem::path prepare_dir(const ExperimentConfig& c) {
  const std::filesystem::path dir(c.out_dir);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw ConfigError("cannot create output directory " + dir.string() + ": " + ec.message());
  return dir;
}

int run(const std::string& name, const Options& o) {
  const ExperimentConfig c = load_config(o);
  const auto dir = prepare_dir(c);
  std::vector<std::string> files;
  if (name == "pareto") {
    const auto r = run_pareto(c, o.jobs);
    files = write_pareto(r, dir);
    for (auto k : c.architectures)
      std::printf("%-8s frontier violation %.3g\n", to_string(k), pareto_violation(r.medians, k));
  } else if (name == "se-vs-snr") {
    const auto r = run_se_vs_snr(c, o.jobs);
    files = write_se_vs_snr(r, dir);
    for (const auto& m : r.medians)
      std::printf("snr %6.1f dB  fd %.4f  admm %.4f  two-stage %.4f\n", m.snr_db, m.se_fd, m.se_admm, m.se_twostage);
  } else if (name == "beampattern") {
    files = write_beampattern(run_beampattern(c, o.jobs), c.scene(), dir);
  } else if (name == "doa") {
    const auto rows = run_doa(c, o.jobs);
    files = write_doa(rows, dir);
    for (const auto& r : rows)
      std::printf("K %d  snr %5.1f dB  threshold %.4g  rmse %.4g  crlb %.4g\n", r.k, r.snr_db, r.delta_u_threshold,
                  r.rmse, r.crlb);
  } else {
    DesignRun d = run_design(c);
    files = write_design_result(d.result, dir);
    write_text(dir / "metrics.csv", MetricReport::csv_header() + "\n" + d.metrics.csv_row() + "\n");
    files.push_back("metrics.csv");
    write_manifest(dir, name, c, files);
    std::printf("%s: status %s, objective %.6g\n", d.result.method.c_str(), to_string(d.result.status),
                d.result.objective);
    return d.result.status == SolverStatus::Infeasible ? 3 : 0;
  }
  write_manifest(dir, name, c, files);
  std::printf("wrote %s\n", dir.string().c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hybrid beamforming design and experiments for dual-function radar-communication transmitters"};
  app.require_subcommand(1, 1);
  Options opt;
  const std::vector<std::pair<std::string, std::string>> commands{
      {"pareto", "radar/communication trade-off sweep over weights and architectures"},
      {"se-vs-snr", "spectral efficiency of fully digital, ADMM and two-stage designs versus SNR"},
      {"beampattern", "space-frequency beampatterns of the three design methods"},
      {"doa", "virtual-array DOA study over the number of subcarriers"},
      {"design", "one design; writes precoder, combiner, traces and metrics"}};
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", opt.config_path, "experiment configuration file");
    sub->add_option("--seed", opt.seed, "run a single seed instead of the configured list");
    sub->add_option("--jobs", opt.jobs, "concurrent sweep cells");
    sub->add_option("--out", opt.out, "output directory");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }
  const std::string name = app.get_subcommands().front()->get_name();
  try {
    return run(name, opt);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const DomainError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "solver failure: " << e.what() << "\n";
    return 3;
  }
}
