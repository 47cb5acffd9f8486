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

#ifndef DFRC_EXPERIMENTS_HPP
#define DFRC_EXPERIMENTS_HPP

#include "dfrc/solvers.hpp"
#include "dfrc/virtualarray.hpp"

#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <mutex>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

namespace dfrc::exp {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// ---- Text helpers ---------------------------------------------------------

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep)) {
    cur = trim(cur);
    if (!cur.empty()) out.push_back(cur);
  }
  return out;
}

/// CSV number: 9 significant digits.
inline std::string num(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

// Round-trip representation used in the resolved config and its hash.
inline std::string exact(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline double parse_double(const std::string& key, const std::string& s) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ConfigError(key + ": not a number: '" + s + "'");
  }
}

inline long long parse_int(const std::string& key, const std::string& s) {
  try {
    std::size_t pos = 0;
    const long long v = std::stoll(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ConfigError(key + ": not an integer: '" + s + "'");
  }
}

inline std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

// ---- Raw "dotted.key = value" files ---------------------------------------

inline std::map<std::string, std::string> parse_config_text(std::istream& is) {
  std::map<std::string, std::string> kv;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError("line " + std::to_string(lineno) + ": empty key");
    if (kv.count(key)) throw ConfigError("line " + std::to_string(lineno) + ": duplicate key " + key);
    kv[key] = value;
  }
  return kv;
}

// ---- Experiment configuration ---------------------------------------------

struct ExperimentConfig {
  SystemDims dims;
  ClusterParams channel;
  std::vector<ConnectionKind> architectures{ConnectionKind::Full, ConnectionKind::Partial, ConnectionKind::Dynamic};
  int phase_shifters = 0;  // Dynamic L; 0 means 2 * N_t
  std::vector<double> target_u{-0.5, 0.35};
  std::vector<double> target_gain{1.0, 1.0};
  std::vector<Interval> mainlobe{{-0.7891, -0.337}, {0.0939, 0.657}};
  int grid_points = 181;
  double radar_noise = 1.0;
  double pfa = 1e-6;
  double snr_db = 10.0;  // per-carrier transmit power over user noise
  double total_power = 1.0;
  RadarMetric radar_metric = RadarMetric::Ssme;
  CommMetric comm_metric = CommMetric::Mmse;
  std::string scalarization_kind = "weighted_sum";
  double w_radar = 0.5;
  std::string epsilon_primary = "radar";
  double epsilon = 1e18;
  bool minmax_radar = true;
  bool minmax_comm = true;
  Method method = Method::Admm;
  SolverConfig solver;
  std::vector<double> weights{0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0};
  std::vector<double> snrs{-10.0, -5.0, 0.0, 5.0, 10.0};
  std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5};
  DoaStudyConfig doa;
  std::string out_dir = "out";  // not part of the hash

  struct Field {
    std::string key;
    std::function<std::string(const ExperimentConfig&)> get;
    std::function<void(ExperimentConfig&, const std::string&)> set;
  };

  static const std::vector<Field>& fields();

  static ExperimentConfig from_map(const std::map<std::string, std::string>& kv) {
    ExperimentConfig c;
    for (const auto& [key, value] : kv) {
      if (key == "output.dir") {
        c.out_dir = value;
        continue;
      }
      const auto& fs = fields();
      const auto it = std::find_if(fs.begin(), fs.end(), [&](const Field& f) { return f.key == key; });
      if (it == fs.end()) throw ConfigError("unknown key: " + key);
      it->set(c, value);
    }
    c.validate();
    return c;
  }

  static ExperimentConfig load(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) throw ConfigError("cannot open config file: " + path.string());
    return from_map(parse_config_text(is));
  }

  /// Every result-affecting field as canonical key = value lines.
  std::string resolved() const {
    std::string s;
    for (const auto& f : fields()) s += f.key + " = " + f.get(*this) + "\n";
    return s;
  }

  std::uint64_t hash() const { return fnv1a(resolved()); }

  ScalarizationSpec scalarization() const {
    if (scalarization_kind == "weighted_sum") return WeightedSum{w_radar, 1.0 - w_radar};
    if (scalarization_kind == "epsilon")
      return EpsilonConstraint{epsilon_primary == "radar" ? ObjectiveId::Radar : ObjectiveId::Comm, epsilon};
    return MinMax{minmax_radar, minmax_comm};
  }

  ArchitectureSpec architecture(ConnectionKind kind) const {
    const int nt = dims.n_tx_antennas, nrf = dims.n_tx_rf;
    switch (kind) {
      case ConnectionKind::Full: return ArchitectureSpec::full(nt, nrf);
      case ConnectionKind::Partial: return ArchitectureSpec::partial(nt, nrf);
      case ConnectionKind::Dynamic: return ArchitectureSpec::dynamic(nt, nrf, phase_shifters > 0 ? phase_shifters : 2 * nt);
    }
    throw ConfigError("unknown architecture");
  }

  RadarScene scene() const {
    std::vector<cplx> gains(target_gain.begin(), target_gain.end());
    return make_scene(target_u, gains, mainlobe, make_grid(grid_points));
  }

  // Per-carrier power over user noise.
  double comm_noise(double snr) const { return total_power / dims.n_subcarriers / db_to_linear(snr); }

  void validate() const {
    auto wrap = [](auto&& f) {
      try {
        f();
      } catch (const ConfigError&) {
        throw;
      } catch (const std::exception& e) {
        throw ConfigError(e.what());
      }
    };
    wrap([&] { dims.validate(); });
    wrap([&] { solver.validate(); });
    wrap([&] { doa.validate(); });
    wrap([&] { validate_dfrc(scalarization()); });
    wrap([&] { (void)scene(); });
    for (auto k : architectures) wrap([&] { architecture(k).validate(); });
    if (architectures.empty() || weights.empty() || snrs.empty() || seeds.empty())
      throw ConfigError("sweep lists must be nonempty");
    for (double w : weights)
      if (!(w >= 0 && w <= 1)) throw ConfigError("sweep.weights must lie in [0, 1]");
    if (target_u.size() != target_gain.size()) throw ConfigError("scene.targets and scene.gains differ in length");
    if (channel.n_clusters < 1 || channel.n_rays < 1) throw ConfigError("channel needs >= 1 cluster and ray");
    if (!(total_power > 0) || !(radar_noise > 0)) throw ConfigError("power and noise must be > 0");
    if (!(pfa > 0 && pfa <= 1)) throw ConfigError("radar.pfa must be in (0, 1]");
    if (scalarization_kind != "weighted_sum" && scalarization_kind != "epsilon" && scalarization_kind != "minmax")
      throw ConfigError("scalarization.kind must be weighted_sum, epsilon or minmax");
    if (epsilon_primary != "radar" && epsilon_primary != "comm")
      throw ConfigError("scalarization.primary must be radar or comm");
  }

 private:
  static void validate_dfrc(const ScalarizationSpec& s) { dfrc::validate(s); }
};

namespace detail {

template <class T>
std::string join(const std::vector<T>& v, const std::function<std::string(const T&)>& f) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + f(v[i]);
  return s;
}

inline std::vector<double> doubles(const std::string& key, const std::string& v) {
  std::vector<double> out;
  for (const auto& p : split(v, ',')) out.push_back(parse_double(key, p));
  return out;
}

inline std::vector<std::uint64_t> seed_list(const std::string& key, const std::string& v) {
  std::vector<std::uint64_t> out;
  for (const auto& p : split(v, ',')) {
    const auto dots = p.find("..");
    if (dots != std::string::npos) {
      const long long a = parse_int(key, trim(p.substr(0, dots)));
      const long long b = parse_int(key, trim(p.substr(dots + 2)));
      if (a < 0 || b < a) throw ConfigError(key + ": bad range " + p);
      for (long long s = a; s <= b; ++s) out.push_back(static_cast<std::uint64_t>(s));
    } else {
      const long long s = parse_int(key, p);
      if (s < 0) throw ConfigError(key + ": seeds must be >= 0");
      out.push_back(static_cast<std::uint64_t>(s));
    }
  }
  return out;
}

inline bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw ConfigError(key + ": expected true or false");
}

inline Method method_from_string(const std::string& key, const std::string& v) {
  if (v == "admm") return Method::Admm;
  if (v == "two_stage") return Method::TwoStage;
  if (v == "fully_digital") return Method::FullyDigital;
  throw ConfigError(key + ": expected admm, two_stage or fully_digital");
}

template <class T>
ExperimentConfig::Field int_field(std::string key, T ExperimentConfig::*outer, int T::*member, int lo = 1) {
  return {key, [=](const ExperimentConfig& c) { return std::to_string(c.*outer.*member); },
          [=](ExperimentConfig& c, const std::string& v) {
            const long long x = parse_int(key, v);
            if (x < lo || x > 1000000) throw ConfigError(key + ": out of range");
            c.*outer.*member = static_cast<int>(x);
          }};
}

template <class T>
ExperimentConfig::Field double_field(std::string key, T ExperimentConfig::*outer, double T::*member) {
  return {key, [=](const ExperimentConfig& c) { return exact(c.*outer.*member); },
          [=](ExperimentConfig& c, const std::string& v) { c.*outer.*member = parse_double(key, v); }};
}

template <class M>
ExperimentConfig::Field top_double(std::string key, M member) {
  return {key, [=](const ExperimentConfig& c) { return exact(c.*member); },
          [=](ExperimentConfig& c, const std::string& v) { c.*member = parse_double(key, v); }};
}

template <class M>
ExperimentConfig::Field top_doubles(std::string key, M member) {
  return {key,
          [=](const ExperimentConfig& c) { return join<double>(c.*member, [](const double& d) { return exact(d); }); },
          [=](ExperimentConfig& c, const std::string& v) { c.*member = doubles(key, v); }};
}

}  // namespace detail

inline const std::vector<ExperimentConfig::Field>& ExperimentConfig::fields() {
  using C = ExperimentConfig;
  using detail::double_field;
  using detail::int_field;
  static const std::vector<Field> f = [] {
    std::vector<Field> v = {
        int_field("dims.n_tx_antennas", &C::dims, &SystemDims::n_tx_antennas),
        int_field("dims.n_rx_antennas", &C::dims, &SystemDims::n_rx_antennas),
        int_field("dims.n_tx_rf", &C::dims, &SystemDims::n_tx_rf),
        int_field("dims.n_rx_rf", &C::dims, &SystemDims::n_rx_rf),
        int_field("dims.n_streams", &C::dims, &SystemDims::n_streams),
        int_field("dims.n_users", &C::dims, &SystemDims::n_users),
        int_field("dims.n_subcarriers", &C::dims, &SystemDims::n_subcarriers),
        int_field("dims.n_radar_rx_rf", &C::dims, &SystemDims::n_radar_rx_rf),
        int_field("channel.clusters", &C::channel, &ClusterParams::n_clusters),
        int_field("channel.rays", &C::channel, &ClusterParams::n_rays),
        double_field("channel.angle_spread_deg", &C::channel, &ClusterParams::angle_spread_deg),
        double_field("channel.max_delay", &C::channel, &ClusterParams::max_delay_samples),
        {"architecture.kinds",
         [](const C& c) { return detail::join<ConnectionKind>(c.architectures, [](const ConnectionKind& k) { return std::string(to_string(k)); }); },
         [](C& c, const std::string& v) {
           c.architectures.clear();
           for (const auto& p : split(v, ',')) {
             try {
               c.architectures.push_back(connection_from_string(p));
             } catch (const DomainError& e) {
               throw ConfigError(std::string("architecture.kinds: ") + e.what());
             }
           }
         }},
        {"architecture.phase_shifters", [](const C& c) { return std::to_string(c.phase_shifters); },
         [](C& c, const std::string& v) { c.phase_shifters = static_cast<int>(parse_int("architecture.phase_shifters", v)); }},
        detail::top_doubles("scene.targets", &C::target_u),
        detail::top_doubles("scene.gains", &C::target_gain),
        {"scene.mainlobe",
         [](const C& c) { return detail::join<Interval>(c.mainlobe, [](const Interval& i) { return exact(i.lo) + ":" + exact(i.hi); }); },
         [](C& c, const std::string& v) {
           c.mainlobe.clear();
           for (const auto& p : split(v, ',')) {
             const auto colon = p.find(':');
             if (colon == std::string::npos) throw ConfigError("scene.mainlobe: expected lo:hi");
             c.mainlobe.push_back({parse_double("scene.mainlobe", trim(p.substr(0, colon))),
                                   parse_double("scene.mainlobe", trim(p.substr(colon + 1)))});
           }
         }},
        {"scene.grid_points", [](const C& c) { return std::to_string(c.grid_points); },
         [](C& c, const std::string& v) { c.grid_points = static_cast<int>(parse_int("scene.grid_points", v)); }},
        detail::top_double("radar.noise_variance", &C::radar_noise),
        detail::top_double("radar.pfa", &C::pfa),
        detail::top_double("system.snr_db", &C::snr_db),
        detail::top_double("system.total_power", &C::total_power),
        {"objective.radar", [](const C& c) { return std::string(to_string(c.radar_metric)); },
         [](C& c, const std::string& v) {
           try {
             c.radar_metric = radar_metric_from_string(v);
           } catch (const DomainError& e) {
             throw ConfigError(e.what());
           }
         }},
        {"objective.comm", [](const C& c) { return std::string(to_string(c.comm_metric)); },
         [](C& c, const std::string& v) {
           try {
             c.comm_metric = comm_metric_from_string(v);
           } catch (const DomainError& e) {
             throw ConfigError(e.what());
           }
         }},
        {"scalarization.kind", [](const C& c) { return c.scalarization_kind; },
         [](C& c, const std::string& v) { c.scalarization_kind = v; }},
        detail::top_double("scalarization.w_radar", &C::w_radar),
        {"scalarization.primary", [](const C& c) { return c.epsilon_primary; },
         [](C& c, const std::string& v) { c.epsilon_primary = v; }},
        detail::top_double("scalarization.epsilon", &C::epsilon),
        {"scalarization.minmax_radar", [](const C& c) { return std::string(c.minmax_radar ? "true" : "false"); },
         [](C& c, const std::string& v) { c.minmax_radar = detail::parse_bool("scalarization.minmax_radar", v); }},
        {"scalarization.minmax_comm", [](const C& c) { return std::string(c.minmax_comm ? "true" : "false"); },
         [](C& c, const std::string& v) { c.minmax_comm = detail::parse_bool("scalarization.minmax_comm", v); }},
        {"solver.method", [](const C& c) { return std::string(to_string(c.method)); },
         [](C& c, const std::string& v) { c.method = detail::method_from_string("solver.method", v); }},
        int_field("solver.max_iterations", &C::solver, &SolverConfig::max_iterations),
        double_field("solver.primal_tolerance", &C::solver, &SolverConfig::primal_tolerance),
        double_field("solver.dual_tolerance", &C::solver, &SolverConfig::dual_tolerance),
        double_field("solver.penalty", &C::solver, &SolverConfig::admm_penalty),
        double_field("solver.penalty_growth", &C::solver, &SolverConfig::penalty_growth),
        double_field("solver.penalty_cap", &C::solver, &SolverConfig::penalty_cap),
        double_field("solver.ridge", &C::solver, &SolverConfig::ridge),
        int_field("solver.inner_iterations", &C::solver, &SolverConfig::inner_iterations),
        int_field("solver.analog_mm_steps", &C::solver, &SolverConfig::analog_mm_steps),
        int_field("solver.factorization_iterations", &C::solver, &SolverConfig::factorization_iterations),
        int_field("solver.refine_rounds", &C::solver, &SolverConfig::refine_rounds, 0),
        double_field("solver.refine_tolerance", &C::solver, &SolverConfig::refine_tolerance),
        int_field("solver.refine_iterations", &C::solver, &SolverConfig::refine_iterations),
        double_field("solver.objective_tolerance", &C::solver, &SolverConfig::objective_tolerance),
        {"solver.constraint_penalties",
         [](const C& c) { return detail::join<double>(c.solver.constraint_penalties, [](const double& d) { return exact(d); }); },
         [](C& c, const std::string& v) { c.solver.constraint_penalties = detail::doubles("solver.constraint_penalties", v); }},
        double_field("solver.constraint_tolerance", &C::solver, &SolverConfig::constraint_tolerance),
        detail::top_doubles("sweep.weights", &C::weights),
        detail::top_doubles("sweep.snr_db", &C::snrs),
        {"sweep.seeds",
         [](const C& c) { return detail::join<std::uint64_t>(c.seeds, [](const std::uint64_t& s) { return std::to_string(s); }); },
         [](C& c, const std::string& v) { c.seeds = detail::seed_list("sweep.seeds", v); }},
        {"doa.k_values",
         [](const C& c) { return detail::join<int>(c.doa.k_values, [](const int& k) { return std::to_string(k); }); },
         [](C& c, const std::string& v) {
           c.doa.k_values.clear();
           for (const auto& p : split(v, ',')) c.doa.k_values.push_back(static_cast<int>(parse_int("doa.k_values", p)));
         }},
        {"doa.snr_db",
         [](const C& c) { return detail::join<double>(c.doa.snr_db, [](const double& d) { return exact(d); }); },
         [](C& c, const std::string& v) { c.doa.snr_db = detail::doubles("doa.snr_db", v); }},
        int_field("doa.n_streams", &C::doa, &DoaStudyConfig::n_streams),
        {"doa.snr_reference",
         [](const C& c) { return std::string(c.doa.snr_reference == SnrReference::TotalPower ? "total" : "per_carrier"); },
         [](C& c, const std::string& v) {
           if (v == "total") c.doa.snr_reference = SnrReference::TotalPower;
           else if (v == "per_carrier") c.doa.snr_reference = SnrReference::PerCarrier;
           else throw ConfigError("doa.snr_reference must be total or per_carrier");
         }},
        int_field("doa.snapshot_factor", &C::doa, &DoaStudyConfig::snapshot_factor),
        int_field("doa.trials_per_seed", &C::doa, &DoaStudyConfig::trials_per_seed),
        double_field("doa.source_u", &C::doa, &DoaStudyConfig::source_u),
        double_field("doa.pair_center", &C::doa, &DoaStudyConfig::pair_center),
        double_field("doa.delta_lo", &C::doa, &DoaStudyConfig::delta_lo),
        double_field("doa.delta_hi", &C::doa, &DoaStudyConfig::delta_hi),
        int_field("doa.bisection_steps", &C::doa, &DoaStudyConfig::bisection_steps),
        int_field("doa.grid_points", &C::doa, &DoaStudyConfig::grid_points, 2),
    };
    return v;
  }();
  return f;
}

/// DOA settings that follow the shared system fields.
inline DoaStudyConfig doa_settings(const ExperimentConfig& c) {
  DoaStudyConfig d = c.doa;
  d.n_tx_antennas = c.dims.n_tx_antennas;
  d.n_radar_rx = c.dims.n_radar_rx_rf;
  d.total_power = c.total_power;
  d.seeds = c.seeds;
  return d;
}

// ---- Execution helpers ----------------------------------------------------

/// Runs f(0..n-1) on up to `jobs` threads. Cells own their results, so the
/// output order never depends on scheduling.
inline void parallel_for(std::size_t n, int jobs, const std::function<void(std::size_t)>& f) {
  const std::size_t workers = std::min<std::size_t>(n, static_cast<std::size_t>(std::max(1, jobs)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) f(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) f(i);
    });
  for (auto& t : pool) t.join();
}

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  void write(const std::filesystem::path& path) const {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot write " + path.string());
    for (std::size_t i = 0; i < header.size(); ++i) os << (i ? "," : "") << header[i];
    os << '\n';
    for (const auto& r : rows) {
      for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << r[i];
      os << '\n';
    }
  }
};

inline void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  os << text;
}

inline void write_manifest(const std::filesystem::path& dir, const std::string& experiment, const ExperimentConfig& c,
                           const std::vector<std::string>& files) {
  std::ostringstream os;
  char hash[24];
  std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(c.hash()));
  os << "experiment = " << experiment << "\n";
  os << "config_hash = " << hash << "\n";
  os << "seeds = " << detail::join<std::uint64_t>(c.seeds, [](const std::uint64_t& s) { return std::to_string(s); }) << "\n";
  os << "files = " << detail::join<std::string>(files, [](const std::string& s) { return s; }) << "\n";
  os << "\n# resolved configuration\n" << c.resolved();
  write_text(dir / "manifest.txt", os.str());
}

struct SeedContext {
  ChannelSet channel;
  ObjectiveSpec objective;  // calibrated normalizers
  std::string error;
};

/// Channel draw and utopia/nadir normalizers for one seed; shared by every
/// architecture and weight of that seed.
inline SeedContext seed_context(const ExperimentConfig& c, const RadarScene& scene, std::uint64_t seed, double snr) {
  SeedContext ctx;
  ctx.channel = gen_channel(c.dims, c.channel, seed, c.comm_noise(snr));
  DesignProblem pb{&ctx.channel, &scene, c.radar_noise, c.total_power, {}, WeightedSum{}, c.dims.n_rx_rf};
  pb.objective.radar_metric = c.radar_metric;
  pb.objective.comm_metric = c.comm_metric;
  SolverConfig cfg = c.solver;
  cfg.seed = seed;
  try {
    ctx.objective = calibrate_normalizers(pb, cfg, c.dims.n_streams).spec;
  } catch (const std::exception& e) {
    ctx.error = e.what();
    ctx.objective = pb.objective;
  }
  return ctx;
}

inline DesignProblem make_problem(const ExperimentConfig& c, const SeedContext& ctx, const RadarScene& scene,
                                  ScalarizationSpec s) {
  return DesignProblem{&ctx.channel, &scene, c.radar_noise, c.total_power, ctx.objective, std::move(s), c.dims.n_rx_rf};
}

inline SolverConfig seeded(const ExperimentConfig& c, std::uint64_t seed) {
  SolverConfig cfg = c.solver;
  cfg.seed = seed;
  return cfg;
}

inline double median_of(const std::vector<double>& v) {
  std::vector<double> f;
  for (double x : v)
    if (std::isfinite(x)) f.push_back(x);
  return f.empty() ? std::nan("") : median(f);
}

// ---- Pareto sweep -----------------------------------------------------------

struct ParetoRow {
  ConnectionKind arch;
  double weight;
  std::uint64_t seed;
  double mi_radar = std::nan(""), mi_comm = std::nan(""), se_bits = std::nan("");
  double radar_norm = std::nan(""), comm_norm = std::nan(""), objective = std::nan("");
  std::string status;
  int iterations = 0;
  double source_weight = std::nan("");  // weight whose ADMM run produced the kept precoder
};

struct ParetoMedian {
  ConnectionKind arch;
  double weight;
  double mi_radar;
  double mi_comm;
};

struct ParetoResult {
  std::vector<ParetoRow> rows;        // ordered by architecture, weight, seed
  std::vector<ParetoMedian> medians;  // ordered by architecture, then weight
};

namespace detail {

struct SweepCandidate {
  std::optional<HybridPrecoder> hybrid;
  MetricPair normalized;
  double source_weight = 0;
};

// Strict weak order of candidates under weight w: weighted value, then the
// other objective for exact ties (endpoint weights).
inline bool better_for(double w, const SweepCandidate& a, const SweepCandidate& b) {
  const double fa = w * a.normalized.radar + (1 - w) * a.normalized.comm;
  const double fb = w * b.normalized.radar + (1 - w) * b.normalized.comm;
  if (fa != fb) return fa < fb;
  const double ta = w >= 0.5 ? a.normalized.comm : a.normalized.radar;
  const double tb = w >= 0.5 ? b.normalized.comm : b.normalized.radar;
  return ta < tb;
}

inline std::size_t best_index(double w, const std::vector<SweepCandidate>& pool) {
  std::size_t best = pool.size();
  for (std::size_t i = 0; i < pool.size(); ++i)
    if (pool[i].hybrid && (best == pool.size() || better_for(w, pool[i], pool[best]))) best = i;
  return best;
}

}  // namespace detail

/// Weighted-sum sweep with ADMM per (architecture, weight, seed). The
/// per-weight solutions of one (architecture, seed) form a shared pool: each
/// weight keeps the pool member that is best under its own weights, after a
/// refinement round from that member. Every kept point is then optimal over
/// a common candidate set, so the achieved objectives move monotonically
/// with the weight.
inline ParetoResult run_pareto(const ExperimentConfig& c, int jobs) {
  c.validate();
  if (c.weights.size() < 2) throw ConfigError("pareto: need at least two weights");
  const RadarScene scene = c.scene();
  std::vector<SeedContext> ctx(c.seeds.size());
  parallel_for(c.seeds.size(), jobs, [&](std::size_t i) { ctx[i] = seed_context(c, scene, c.seeds[i], c.snr_db); });
  const std::vector<ConnectionKind> archs = c.architectures;
  std::vector<double> weights = c.weights;
  std::sort(weights.begin(), weights.end());
  weights.erase(std::unique(weights.begin(), weights.end()), weights.end());
  const std::size_t ns = c.seeds.size(), nw = weights.size();
  auto cell = [&](std::size_t a, std::size_t w, std::size_t s) { return (a * nw + w) * ns + s; };

  ParetoResult res;
  res.rows.resize(archs.size() * nw * ns);
  std::vector<detail::SweepCandidate> pool(res.rows.size());
  parallel_for(res.rows.size(), jobs, [&](std::size_t idx) {
    const std::size_t s = idx % ns, w = (idx / ns) % nw, a = idx / (ns * nw);
    ParetoRow& row = res.rows[idx];
    row.arch = archs[a];
    row.weight = weights[w];
    row.seed = c.seeds[s];
    if (!ctx[s].error.empty()) {
      row.status = "error";
      return;
    }
    try {
      const DesignProblem pb = make_problem(c, ctx[s], scene, WeightedSum{weights[w], 1.0 - weights[w]});
      const DesignResult r = solve(pb, Method::Admm, c.architecture(archs[a]), seeded(c, row.seed), c.dims.n_streams);
      row.status = to_string(r.status);
      row.iterations = static_cast<int>(r.residuals.size());
      pool[idx] = {r.hybrid, r.normalized, weights[w]};
    } catch (const std::exception&) {
      row.status = "error";
    }
  });

  // Pool sharing, one task per (architecture, seed).
  parallel_for(archs.size() * ns, jobs, [&](std::size_t task) {
    const std::size_t s = task % ns, a = task / ns;
    if (!ctx[s].error.empty()) return;
    const ObjectiveModel model(ctx[s].channel, scene, c.radar_noise, c.radar_metric, c.comm_metric);
    std::vector<detail::SweepCandidate> own(nw), refined(nw);
    for (std::size_t w = 0; w < nw; ++w) own[w] = pool[cell(a, w, s)];
    for (std::size_t w = 0; w < nw; ++w) {
      const std::size_t b = detail::best_index(weights[w], own);
      if (b == nw) continue;
      refined[w] = own[b];
      if (b == w || c.solver.refine_rounds == 0) continue;
      const ScalarizedObjective obj(model, ctx[s].objective, WeightedSum{weights[w], 1.0 - weights[w]});
      HybridPrecoder hp = *own[b].hybrid;
      refine_digital(obj, 1.0, hp, c.solver.refine_iterations, c.solver.objective_tolerance, nullptr);
      refine_analog(obj, 1.0, hp, c.solver.refine_iterations, c.solver.objective_tolerance, nullptr);
      refine_digital(obj, 1.0, hp, c.solver.refine_iterations, c.solver.objective_tolerance, nullptr);
      const auto ev = obj.evaluate(hp.transmit_matrices(), 1.0);
      const detail::SweepCandidate cand{hp, ev.normalized, own[b].source_weight};
      if (detail::better_for(weights[w], cand, refined[w])) refined[w] = cand;
    }
    for (std::size_t w = 0; w < nw; ++w) {
      const std::size_t b = detail::best_index(weights[w], refined);
      if (b == nw) continue;
      ParetoRow& row = res.rows[cell(a, w, s)];
      const TransmitSet x = refined[b].hybrid->transmit_matrices();
      const HybridCombiner comb = design_combiners(ctx[s].channel, x, c.dims.n_rx_rf);
      row.mi_radar = radar_mi(x, scene, c.radar_noise);
      row.mi_comm = comm_mutual_information(ctx[s].channel, x);
      row.se_bits = spectral_efficiency(ctx[s].channel, x, comb).bits;
      row.radar_norm = refined[b].normalized.radar;
      row.comm_norm = refined[b].normalized.comm;
      row.objective = weights[w] * row.radar_norm + (1 - weights[w]) * row.comm_norm;
      row.source_weight = refined[b].source_weight;
    }
  });

  for (std::size_t a = 0; a < archs.size(); ++a)
    for (std::size_t w = 0; w < nw; ++w) {
      std::vector<double> mr, mc;
      for (std::size_t s = 0; s < ns; ++s) {
        mr.push_back(res.rows[cell(a, w, s)].mi_radar);
        mc.push_back(res.rows[cell(a, w, s)].mi_comm);
      }
      res.medians.push_back({archs[a], weights[w], median_of(mr), median_of(mc)});
    }
  return res;
}

/// Largest increase of median mi_radar along the frontier ordered by
/// increasing median mi_comm (zero when mi_radar never increases).
inline double pareto_violation(const std::vector<ParetoMedian>& medians, ConnectionKind arch) {
  std::vector<std::pair<double, double>> pts;
  for (const auto& m : medians)
    if (m.arch == arch) pts.emplace_back(m.mi_comm, m.mi_radar);
  // equal mi_comm imposes no order on mi_radar
  std::sort(pts.begin(), pts.end(), [](const auto& a, const auto& b) {
    return a.first != b.first ? a.first < b.first : a.second > b.second;
  });
  double worst = 0;
  for (std::size_t i = 1; i < pts.size(); ++i) worst = std::max(worst, pts[i].second - pts[i - 1].second);
  return worst;
}

inline std::vector<std::string> write_pareto(const ParetoResult& r, const std::filesystem::path& dir) {
  CsvTable t{{"architecture", "weight", "seed", "mi_radar", "mi_comm", "se_bits", "radar_norm", "comm_norm",
              "objective", "status", "iterations", "source_weight"}, {}};
  for (const auto& row : r.rows)
    t.rows.push_back({to_string(row.arch), num(row.weight), std::to_string(row.seed), num(row.mi_radar),
                      num(row.mi_comm), num(row.se_bits), num(row.radar_norm), num(row.comm_norm),
                      num(row.objective), row.status, std::to_string(row.iterations),
                      num(row.source_weight)});
  t.write(dir / "pareto.csv");
  CsvTable m{{"architecture", "weight", "mi_radar_median", "mi_comm_median"}, {}};
  for (const auto& p : r.medians)
    m.rows.push_back({to_string(p.arch), num(p.weight), num(p.mi_radar), num(p.mi_comm)});
  m.write(dir / "pareto_median.csv");
  write_text(dir / "pareto.gp",
             "set datafile separator ','\n"
             "set xlabel 'communication MI (bit/s/Hz)'\n"
             "set ylabel 'radar MI (bit)'\n"
             "set key bottom left\n"
             "plot for [a in 'full partial dynamic'] 'pareto_median.csv' "
             "using (strcol(1) eq a ? $4 : 1/0):(strcol(1) eq a ? $3 : 1/0) with linespoints title a\n");
  return {"pareto.csv", "pareto_median.csv", "pareto.gp"};
}

// ---- SE versus SNR ------------------------------------------------------------

struct SnrRow {
  double snr_db;
  std::uint64_t seed;
  double se_fd = std::nan(""), se_admm = std::nan(""), se_twostage = std::nan("");
  std::string status;
};

struct SnrMedian {
  double snr_db, se_fd, se_admm, se_twostage;
};

struct SnrResult {
  std::vector<SnrRow> rows;
  std::vector<SnrMedian> medians;
};

inline SnrResult run_se_vs_snr(const ExperimentConfig& c, int jobs) {
  c.validate();
  const RadarScene scene = c.scene();
  std::vector<double> snrs = c.snrs;
  std::sort(snrs.begin(), snrs.end());
  const ArchitectureSpec arch = c.architecture(c.architectures.front());
  const ScalarizationSpec scal = is_weighted_sum(c.scalarization()) ? c.scalarization() : ScalarizationSpec{WeightedSum{}};
  SnrResult res;
  res.rows.resize(snrs.size() * c.seeds.size());
  parallel_for(res.rows.size(), jobs, [&](std::size_t idx) {
    const std::size_t s = idx % c.seeds.size();
    const std::size_t i = idx / c.seeds.size();
    SnrRow& row = res.rows[idx];
    row.snr_db = snrs[i];
    row.seed = c.seeds[s];
    const SeedContext ctx = seed_context(c, scene, row.seed, row.snr_db);
    if (!ctx.error.empty()) {
      row.status = "error";
      return;
    }
    const DesignProblem pb = make_problem(c, ctx, scene, scal);
    const SolverConfig cfg = seeded(c, row.seed);
    std::string status;
    auto se = [&](Method m) {
      try {
        const DesignResult r = solve(pb, m, arch, cfg, c.dims.n_streams);
        status += std::string(status.empty() ? "" : "/") + to_string(r.status);
        return spectral_efficiency(ctx.channel, r.transmit, r.combiners).bits;
      } catch (const std::exception&) {
        status += std::string(status.empty() ? "" : "/") + "error";
        return std::nan("");
      }
    };
    row.se_fd = se(Method::FullyDigital);
    row.se_admm = se(Method::Admm);
    row.se_twostage = se(Method::TwoStage);
    row.status = status;
  });
  for (std::size_t i = 0; i < snrs.size(); ++i) {
    std::vector<double> a, b, d;
    for (std::size_t s = 0; s < c.seeds.size(); ++s) {
      const auto& r = res.rows[i * c.seeds.size() + s];
      a.push_back(r.se_fd);
      b.push_back(r.se_admm);
      d.push_back(r.se_twostage);
    }
    res.medians.push_back({snrs[i], median_of(a), median_of(b), median_of(d)});
  }
  return res;
}

inline std::vector<std::string> write_se_vs_snr(const SnrResult& r, const std::filesystem::path& dir) {
  CsvTable m{{"snr_db", "se_fd", "se_admm", "se_twostage"}, {}};
  for (const auto& p : r.medians) m.rows.push_back({num(p.snr_db), num(p.se_fd), num(p.se_admm), num(p.se_twostage)});
  m.write(dir / "se_vs_snr.csv");
  CsvTable t{{"snr_db", "seed", "se_fd", "se_admm", "se_twostage", "status"}, {}};
  for (const auto& row : r.rows)
    t.rows.push_back({num(row.snr_db), std::to_string(row.seed), num(row.se_fd), num(row.se_admm),
                      num(row.se_twostage), row.status});
  t.write(dir / "se_vs_snr_seeds.csv");
  write_text(dir / "se_vs_snr.gp",
             "set datafile separator ','\n"
             "set xlabel 'SNR (dB)'\n"
             "set ylabel 'spectral efficiency (bit/s/Hz)'\n"
             "set key top left\n"
             "plot 'se_vs_snr.csv' using 1:2 skip 1 with linespoints title 'fully digital', \\\n"
             "     '' using 1:3 skip 1 with linespoints title 'ADMM hybrid', \\\n"
             "     '' using 1:4 skip 1 with linespoints title 'two-stage hybrid'\n");
  return {"se_vs_snr.csv", "se_vs_snr_seeds.csv", "se_vs_snr.gp"};
}

// ---- Beampattern --------------------------------------------------------------

struct PatternRun {
  std::string method;
  std::uint64_t seed;
  Eigen::MatrixXd per_carrier;  // K x G
  std::vector<double> total;
  double mainlobe_fraction = std::nan("");
  double ssme = std::nan("");
  double psl_db = std::nan(""), isl_db = std::nan("");
  double mean_power = std::nan("");
  std::string status;
};

/// Fraction of the trapezoid-integrated power that falls inside the main lobe.
inline double mainlobe_fraction(std::span<const double> pattern, const RadarScene& scene) {
  double in = 0, all = 0;
  const std::size_t n = pattern.size();
  for (std::size_t g = 0; g < n; ++g) {
    const double w = (g == 0 || g + 1 == n) ? 0.5 : 1.0;
    all += w * pattern[g];
    if (scene.in_mainlobe(scene.grid.points[g])) in += w * pattern[g];
  }
  return all > 0 ? in / all : 0.0;
}

inline std::vector<PatternRun> run_beampattern(const ExperimentConfig& c, int jobs) {
  c.validate();
  const RadarScene scene = c.scene();
  const ArchitectureSpec arch = c.architecture(c.architectures.front());
  const ScalarizationSpec scal = is_weighted_sum(c.scalarization()) ? c.scalarization() : ScalarizationSpec{WeightedSum{}};
  const std::vector<Method> methods{Method::FullyDigital, Method::Admm, Method::TwoStage};
  std::vector<PatternRun> runs(methods.size() * c.seeds.size());
  std::vector<SeedContext> ctx(c.seeds.size());
  parallel_for(c.seeds.size(), jobs, [&](std::size_t i) { ctx[i] = seed_context(c, scene, c.seeds[i], c.snr_db); });
  parallel_for(runs.size(), jobs, [&](std::size_t idx) {
    const std::size_t s = idx % c.seeds.size();
    const std::size_t m = idx / c.seeds.size();
    PatternRun& run = runs[idx];
    run.method = to_string(methods[m]);
    run.seed = c.seeds[s];
    try {
      if (!ctx[s].error.empty()) throw std::runtime_error(ctx[s].error);
      const DesignResult r = solve(make_problem(c, ctx[s], scene, scal), methods[m], arch, seeded(c, run.seed), c.dims.n_streams);
      run.per_carrier = beampattern_per_carrier(r.transmit, scene.grid);
      run.total = beampattern(r.transmit, scene.grid);
      run.mainlobe_fraction = mainlobe_fraction(run.total, scene);
      run.ssme = ssme(run.total, scene.desired).value;
      const auto sl = psl_isl(run.total, scene);
      run.psl_db = sl.psl_db;
      run.isl_db = sl.isl_db;
      run.mean_power = grid_mean_power(run.total);
      run.status = to_string(r.status);
    } catch (const std::exception&) {
      run.status = "error";
    }
  });
  return runs;
}

inline std::vector<std::string> write_beampattern(const std::vector<PatternRun>& runs, const RadarScene& scene,
                                                  const std::filesystem::path& dir) {
  auto db = [](double p) { return num(p > 0 ? std::max(kDbFloor, linear_to_db(p)) : kDbFloor); };
  CsvTable t{{"method", "seed", "u", "k", "power_db", "total_db"}, {}};
  for (const auto& r : runs) {
    if (r.total.empty()) continue;
    for (Eigen::Index k = 0; k < r.per_carrier.rows(); ++k)
      for (std::size_t g = 0; g < scene.grid.size(); ++g)
        t.rows.push_back({r.method, std::to_string(r.seed), num(scene.grid.points[g]), std::to_string(k),
                          db(r.per_carrier(k, static_cast<Eigen::Index>(g))), db(r.total[g])});
  }
  t.write(dir / "beampattern.csv");
  CsvTable s{{"method", "seed", "mainlobe_fraction", "ssme", "psl_db", "isl_db", "grid_mean_power", "status"}, {}};
  for (const auto& r : runs)
    s.rows.push_back({r.method, std::to_string(r.seed), num(r.mainlobe_fraction), num(r.ssme), num(r.psl_db),
                      num(r.isl_db), num(r.mean_power), r.status});
  s.write(dir / "beampattern_summary.csv");
  write_text(dir / "beampattern.gp",
             "set datafile separator ','\n"
             "set xlabel 'u = sin(theta)'\n"
             "set ylabel 'subcarrier k'\n"
             "set cblabel 'power (dB)'\n"
             "set view map\n"
             "method = 'admm'\n"
             "splot 'beampattern.csv' using (strcol(1) eq method ? $3 : 1/0):4:5 skip 1 with points pt 5 ps 0.5 palette notitle\n");
  return {"beampattern.csv", "beampattern_summary.csv", "beampattern.gp"};
}

// ---- DOA ----------------------------------------------------------------------

inline std::vector<DoaRow> run_doa(const ExperimentConfig& c, int jobs) {
  c.validate();
  const DoaStudyConfig d = doa_settings(c);
  d.validate();
  std::vector<std::pair<int, double>> cells;
  for (int k : d.k_values)
    for (double s : d.snr_db) cells.emplace_back(k, s);
  std::sort(cells.begin(), cells.end());
  std::vector<DoaRow> rows(cells.size());
  parallel_for(cells.size(), jobs, [&](std::size_t i) { rows[i] = doa_cell(d, cells[i].first, cells[i].second); });
  return rows;
}

inline std::vector<std::string> write_doa(const std::vector<DoaRow>& rows, const std::filesystem::path& dir) {
  CsvTable t{{"k", "snr_db", "delta_u_threshold", "rmse", "crlb"}, {}};
  for (const auto& r : rows)
    t.rows.push_back({std::to_string(r.k), num(r.snr_db), num(r.delta_u_threshold), num(r.rmse), num(r.crlb)});
  t.write(dir / "doa.csv");
  write_text(dir / "doa.gp",
             "set datafile separator ','\n"
             "set logscale y\n"
             "set xlabel 'SNR (dB)'\n"
             "set ylabel 'RMSE / root CRLB (sin-space)'\n"
             "plot for [k in '1 2 4 8'] 'doa.csv' using ($1 == k ? $2 : 1/0):4 skip 1 with linespoints title 'RMSE K='.k, \\\n"
             "     for [k in '1 2 4 8'] 'doa.csv' using ($1 == k ? $2 : 1/0):5 skip 1 with lines dt 2 title 'CRLB K='.k\n");
  return {"doa.csv", "doa.gp"};
}

// ---- Single design --------------------------------------------------------------

inline void write_complex_rows(std::ostream& os, const std::string& part, int index, const MatrixXcd& m) {
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      os << part << ',' << index << ',' << i << ',' << j << ',' << exact(m(i, j).real()) << ','
         << exact(m(i, j).imag()) << '\n';
}

/// DesignResult directory: precoder.csv and combiner.csv (part, index, row,
/// col, re, im), residuals.csv (iter, primal, dual, objective), trace.csv.
inline std::vector<std::string> write_design_result(const DesignResult& r, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  {
    std::ofstream os(dir / "precoder.csv", std::ios::binary);
    os << "part,index,row,col,re,im\n";
    if (r.hybrid) {
      write_complex_rows(os, "analog", 0, r.hybrid->analog.matrix);
      for (int k = 0; k < r.hybrid->n_subcarriers(); ++k)
        write_complex_rows(os, "digital", k, r.hybrid->digital[static_cast<std::size_t>(k)]);
    }
    for (std::size_t k = 0; k < r.transmit.size(); ++k)
      write_complex_rows(os, "transmit", static_cast<int>(k), r.transmit[k]);
  }
  {
    std::ofstream os(dir / "combiner.csv", std::ios::binary);
    os << "part,index,row,col,re,im\n";
    for (std::size_t u = 0; u < r.combiners.analog.size(); ++u)
      write_complex_rows(os, "analog", static_cast<int>(u), r.combiners.analog[u]);
    for (std::size_t i = 0; i < r.combiners.digital.size(); ++i)
      write_complex_rows(os, "digital", static_cast<int>(i), r.combiners.digital[i]);
  }
  CsvTable res{{"iter", "primal", "dual", "objective"}, {}};
  for (const auto& x : r.residuals)
    res.rows.push_back({std::to_string(x.iteration), num(x.primal), num(x.dual), num(x.objective)});
  res.write(dir / "residuals.csv");
  CsvTable tr{{"iter", "objective"}, {}};
  for (std::size_t i = 0; i < r.objective_trace.size(); ++i)
    tr.rows.push_back({std::to_string(i), num(r.objective_trace[i])});
  tr.write(dir / "trace.csv");
  std::ostringstream os;
  os << "method = " << r.method << "\nstatus = " << to_string(r.status) << "\nseed = " << r.seed
     << "\nscalarization = " << r.scalarization << "\nobjective = " << num(r.objective)
     << "\nradar_raw = " << num(r.raw.radar) << "\ncomm_raw = " << num(r.raw.comm)
     << "\nradar_normalized = " << num(r.normalized.radar) << "\ncomm_normalized = " << num(r.normalized.comm)
     << "\nlevel = " << num(r.level) << "\n";
  if (r.hybrid) os << "architecture = " << r.hybrid->analog.spec.describe() << "\n";
  if (!r.diagnostic.empty()) os << "diagnostic = " << r.diagnostic << "\n";
  write_text(dir / "summary.txt", os.str());
  return {"precoder.csv", "combiner.csv", "residuals.csv", "trace.csv", "summary.txt"};
}

struct DesignRun {
  DesignResult result;
  MetricReport metrics;
};

/// One design at the first seed. Solver failures propagate.
inline DesignRun run_design(const ExperimentConfig& c) {
  c.validate();
  const RadarScene scene = c.scene();
  const std::uint64_t seed = c.seeds.front();
  const SeedContext ctx = seed_context(c, scene, seed, c.snr_db);
  if (!ctx.error.empty()) throw SolverError("normalizer pre-solve failed: " + ctx.error, 0);
  const DesignProblem pb = make_problem(c, ctx, scene, c.scalarization());
  DesignRun run{solve(pb, c.method, c.architecture(c.architectures.front()), seeded(c, seed), c.dims.n_streams), {}};
  run.metrics = evaluate_metrics(ctx.channel, run.result.transmit, run.result.combiners, scene,
                                 RadarSettings{c.radar_noise, c.pfa, c.dims.n_radar_rx_rf});
  return run;
}

}  // namespace dfrc::exp

#endif  // DFRC_EXPERIMENTS_HPP
