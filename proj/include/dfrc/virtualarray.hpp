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

#ifndef DFRC_VIRTUALARRAY_HPP
#define DFRC_VIRTUALARRAY_HPP

#include "dfrc/metrics.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include <algorithm>
#include <cmath>
#include <vector>

namespace dfrc {

/// Multi-carrier virtual array seen by an M_r-channel radar receiver after
/// matched filtering each of the K subcarriers. Element (k, m) of the model
/// vector at angle u is (d_k^T a_t(u)) a_r(u)_m, with d_k = X_k s_k.
struct VirtualArrayModel {
  MatrixXcd transmit_factor;  // D, N_t x K
  int n_radar_rx = 1;
  double noise_variance = 1.0;
  VectorXcd snapshot;  // length K * M_r

  int n_subcarriers() const { return static_cast<int>(transmit_factor.cols()); }
  int dimension() const { return n_subcarriers() * n_radar_rx; }

  VectorXcd steering(double u) const {
    const VectorXcd bt = transmit_factor.transpose() * steering_vector(u, static_cast<int>(transmit_factor.rows()));
    return detail::kron(bt, steering_vector(u, n_radar_rx));
  }
};

/// D with columns X_k s_k.
inline MatrixXcd transmit_factor(std::span<const MatrixXcd> x, std::span<const VectorXcd> symbols) {
  if (x.size() != symbols.size()) throw DomainError("transmit_factor: one symbol vector per carrier");
  MatrixXcd d(x.front().rows(), static_cast<Eigen::Index>(x.size()));
  for (std::size_t k = 0; k < x.size(); ++k) {
    if (symbols[k].size() != x[k].cols()) throw DomainError("transmit_factor: symbol length != stream count");
    d.col(static_cast<Eigen::Index>(k)) = x[k] * symbols[k];
  }
  return d;
}

/// Unit-modulus random symbols, one vector of length n_streams per carrier.
inline std::vector<VectorXcd> unit_modulus_symbols(int n_subcarriers, int n_streams, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<VectorXcd> s;
  for (int k = 0; k < n_subcarriers; ++k) {
    VectorXcd v(n_streams);
    for (int i = 0; i < n_streams; ++i) v(i) = std::polar(1.0, uniform_phase(rng));
    s.push_back(std::move(v));
  }
  return s;
}

inline VectorXcd virtual_mean(const MatrixXcd& d, int n_radar_rx, const RadarScene& scene) {
  VectorXcd mu = VectorXcd::Zero(d.cols() * n_radar_rx);
  const int nt = static_cast<int>(d.rows());
  for (int q = 0; q < scene.n_targets(); ++q) {
    const double u = scene.target_u[static_cast<std::size_t>(q)];
    mu += scene.target_gain[static_cast<std::size_t>(q)] *
          detail::kron(d.transpose() * steering_vector(u, nt), steering_vector(u, n_radar_rx));
  }
  return mu;
}

/// One virtual snapshot: noiseless target returns plus CN(0, sigma^2 I).
inline VirtualArrayModel build_virtual_data(std::span<const MatrixXcd> x, std::span<const VectorXcd> symbols,
                                            const RadarScene& scene, int n_radar_rx, double noise_variance,
                                            std::uint64_t seed) {
  if (n_radar_rx < 1) throw DomainError("build_virtual_data: M_r must be >= 1");
  if (!(noise_variance >= 0)) throw DomainError("build_virtual_data: noise variance must be >= 0");
  VirtualArrayModel m{transmit_factor(x, symbols), n_radar_rx, noise_variance, {}};
  m.snapshot = virtual_mean(m.transmit_factor, n_radar_rx, scene);
  if (noise_variance > 0) {
    Rng rng(seed);
    const double s = std::sqrt(noise_variance);
    for (Eigen::Index i = 0; i < m.snapshot.size(); ++i) m.snapshot(i) += s * complex_normal(rng);
  }
  return m;
}

inline VirtualArrayModel build_virtual_data(const HybridPrecoder& p, std::span<const VectorXcd> symbols,
                                            const RadarScene& scene, int n_radar_rx, double noise_variance,
                                            std::uint64_t seed) {
  require_feasible(p);
  const TransmitSet x = p.transmit_matrices();
  return build_virtual_data(x, symbols, scene, n_radar_rx, noise_variance, seed);
}

/// T snapshots (columns). Target gains keep their modulus and get an
/// independent uniform phase in every snapshot.
inline MatrixXcd collect_snapshots(const VirtualArrayModel& model, const RadarScene& scene, int n_snapshots,
                                   std::uint64_t seed) {
  if (n_snapshots < 1) throw DomainError("collect_snapshots: need at least one snapshot");
  const int nt = static_cast<int>(model.transmit_factor.rows());
  MatrixXcd v(model.dimension(), scene.n_targets());
  for (int q = 0; q < scene.n_targets(); ++q) {
    const double u = scene.target_u[static_cast<std::size_t>(q)];
    v.col(q) = detail::kron(model.transmit_factor.transpose() * steering_vector(u, nt),
                            steering_vector(u, model.n_radar_rx));
  }
  Rng rng(seed);
  const double s = std::sqrt(model.noise_variance);
  MatrixXcd y(model.dimension(), n_snapshots);
  VectorXcd g(scene.n_targets());
  for (int t = 0; t < n_snapshots; ++t) {
    for (int q = 0; q < scene.n_targets(); ++q)
      g(q) = std::abs(scene.target_gain[static_cast<std::size_t>(q)]) * std::polar(1.0, uniform_phase(rng));
    y.col(t) = v * g;
    if (s > 0)
      for (Eigen::Index i = 0; i < y.rows(); ++i) y(i, t) += s * complex_normal(rng);
  }
  return y;
}

inline MatrixXcd sample_covariance(const MatrixXcd& snapshots) {
  MatrixXcd r = snapshots * snapshots.adjoint() / static_cast<double>(snapshots.cols());
  return 0.5 * (r + r.adjoint());
}

/// MUSIC pseudo-spectrum 1 / ||E_n^H v(u)||^2 with the unit-norm virtual
/// model vector v(u).
class MusicEstimator {
 public:
  MusicEstimator(const VirtualArrayModel& model, const MatrixXcd& covariance, int n_sources) : model_(&model) {
    const Eigen::Index n = covariance.rows();
    if (covariance.cols() != n || n != model.dimension()) throw DomainError("music: covariance shape mismatch");
    if (n_sources < 1 || n_sources >= n) throw DomainError("music: need 1 <= Q < K * M_r");
    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(covariance);
    noise_ = es.eigenvectors().leftCols(n - n_sources);
  }

  double operator()(double u) const {
    const VectorXcd v = model_->steering(u);
    const double nv = v.squaredNorm();
    if (nv <= 0) return 0.0;
    const double proj = (noise_.adjoint() * v).squaredNorm() / nv;
    return 1.0 / std::max(proj, 1e-300);
  }

  std::vector<double> spectrum(const SinGrid& grid) const {
    std::vector<double> out(grid.size());
    for (std::size_t g = 0; g < grid.size(); ++g) out[g] = (*this)(grid.points[g]);
    return out;
  }

  const MatrixXcd& noise_subspace() const { return noise_; }

 private:
  const VirtualArrayModel* model_;
  MatrixXcd noise_;
};

inline std::vector<double> music_spectrum(const VirtualArrayModel& model, const MatrixXcd& covariance,
                                          const SinGrid& grid, int n_sources) {
  return MusicEstimator(model, covariance, n_sources).spectrum(grid);
}

/// Golden-section maximization of f on [lo, hi].
template <class F>
double golden_max(F&& f, double lo, double hi, int iterations = 60) {
  const double r = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = lo, b = hi;
  double c = b - r * (b - a), d = a + r * (b - a);
  double fc = f(c), fd = f(d);
  for (int i = 0; i < iterations; ++i) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - r * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + r * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

/// The n largest local maxima of the spectrum on the grid, each refined
/// between its grid neighbours; sorted by angle.
inline std::vector<double> find_peaks(const MusicEstimator& est, const SinGrid& grid, int n_peaks) {
  const std::vector<double> s = est.spectrum(grid);
  std::vector<std::size_t> cand;
  for (std::size_t g = 0; g < s.size(); ++g) {
    const bool left = g == 0 || s[g] > s[g - 1];
    const bool right = g + 1 == s.size() || s[g] >= s[g + 1];
    if (left && right) cand.push_back(g);
  }
  std::stable_sort(cand.begin(), cand.end(), [&](std::size_t a, std::size_t b) { return s[a] > s[b]; });
  if (cand.size() > static_cast<std::size_t>(n_peaks)) cand.resize(static_cast<std::size_t>(n_peaks));
  std::vector<double> out;
  for (std::size_t g : cand) {
    const double lo = grid.points[g == 0 ? g : g - 1];
    const double hi = grid.points[g + 1 == s.size() ? g : g + 1];
    out.push_back(golden_max(est, lo, hi));
  }
  std::sort(out.begin(), out.end());
  return out;
}

// ---- DOA study ----------------------------------------------------------

enum class SnrReference { TotalPower, PerCarrier };

struct DoaStudyConfig {
  std::vector<int> k_values{1, 2, 4, 8};
  std::vector<double> snr_db{0.0, 10.0, 20.0, 30.0};
  int n_tx_antennas = 32;
  int n_streams = 4;
  int n_radar_rx = 8;
  double total_power = 1.0;
  SnrReference snr_reference = SnrReference::TotalPower;
  int snapshot_factor = 10;  // T = snapshot_factor * K * M_r
  std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5};
  int trials_per_seed = 20;
  double source_u = 0.2;      // RMSE source
  double pair_center = 0.05;  // resolution pair centre
  double delta_lo = 1e-3;
  double delta_hi = 0.8;
  int bisection_steps = 24;
  int grid_points = 1001;

  void validate() const {
    if (k_values.empty() || snr_db.empty() || seeds.empty()) throw DomainError("doa study: empty sweep list");
    for (int k : k_values)
      if (k < 1) throw DomainError("doa study: K must be >= 1");
    if (n_tx_antennas < 1 || n_streams < 1 || n_radar_rx < 1) throw DomainError("doa study: counts must be >= 1");
    if (!(total_power > 0)) throw DomainError("doa study: power must be > 0");
    if (snapshot_factor < 1 || trials_per_seed < 1 || bisection_steps < 1) throw DomainError("doa study: bad counts");
    if (!(delta_lo > 0 && delta_lo < delta_hi)) throw DomainError("doa study: need 0 < delta_lo < delta_hi");
    if (std::abs(pair_center) + 0.5 * delta_hi > 1.0 || std::abs(source_u) > 1.0)
      throw DomainError("doa study: angles leave [-1, 1]");
    if (grid_points < 2) throw DomainError("doa study: grid needs >= 2 points");
  }

  int max_k() const { return *std::max_element(k_values.begin(), k_values.end()); }

  // Noise variance for unit-modulus target gains.
  double noise_variance(int k, double snr) const {
    const double lin = db_to_linear(snr);
    return snr_reference == SnrReference::TotalPower ? total_power / lin : total_power / k / lin;
  }
};

struct DoaRow {
  int k = 0;
  double snr_db = 0;
  double delta_u_threshold = 0;
  double rmse = 0;
  double crlb = 0;  // square root of the angle CRLB for the full snapshot record
};

/// Random probing precoders with orthonormal columns scaled to P / K,
/// nested across K: the first K carriers of a seed are shared by every
/// smaller configuration up to the power scale.
inline TransmitSet probing_precoder(int n_tx, int n_streams, int k, int k_max, double total_power,
                                    std::uint64_t seed) {
  if (k > k_max) throw DomainError("probing_precoder: K exceeds the nested maximum");
  Rng rng(seed);
  TransmitSet x;
  for (int i = 0; i < k_max; ++i) {
    const MatrixXcd g = complex_normal_matrix(n_tx, n_streams, rng);
    if (i >= k) continue;
    Eigen::HouseholderQR<MatrixXcd> qr(g);
    x.push_back(qr.householderQ() * MatrixXcd::Identity(n_tx, n_streams));
  }
  normalize_power(x, total_power);
  return x;
}

struct ProbingSetup {
  VirtualArrayModel model;
  int n_snapshots = 0;
};

inline ProbingSetup probing_setup(const DoaStudyConfig& cfg, int k, double noise_variance, std::uint64_t seed) {
  const TransmitSet x = probing_precoder(cfg.n_tx_antennas, cfg.n_streams, k, cfg.max_k(), cfg.total_power,
                                         substream_seed(seed, 1));
  auto sym_all = unit_modulus_symbols(cfg.max_k(), cfg.n_streams, substream_seed(seed, 2));
  sym_all.resize(static_cast<std::size_t>(k));
  ProbingSetup s;
  s.model = VirtualArrayModel{transmit_factor(x, sym_all), cfg.n_radar_rx, noise_variance, {}};
  s.n_snapshots = cfg.snapshot_factor * k * cfg.n_radar_rx;
  return s;
}

/// Smallest separation (by bisection) at which MUSIC shows a dip between two
/// equal-power sources: S(mid) < min(S(u1), S(u2)). Noise and source phases
/// are common random numbers across separations.
inline double resolution_threshold(const DoaStudyConfig& cfg, int k, double snr_db, std::uint64_t seed) {
  const ProbingSetup setup = probing_setup(cfg, k, cfg.noise_variance(k, snr_db), seed);
  auto resolved = [&](double delta) {
    const double u1 = cfg.pair_center - 0.5 * delta, u2 = cfg.pair_center + 0.5 * delta;
    const RadarScene scene{{u1, u2}, {cplx(1.0), cplx(1.0)}, {}, {}, {}};
    const MatrixXcd y = collect_snapshots(setup.model, scene, setup.n_snapshots, substream_seed(seed, 3));
    const MusicEstimator est(setup.model, sample_covariance(y), 2);
    return est(cfg.pair_center) < std::min(est(u1), est(u2));
  };
  double lo = cfg.delta_lo, hi = cfg.delta_hi;
  if (resolved(lo)) return lo;
  if (!resolved(hi)) return hi;
  for (int i = 0; i < cfg.bisection_steps; ++i) {
    const double mid = 0.5 * (lo + hi);
    (resolved(mid) ? hi : lo) = mid;
  }
  return hi;
}

inline double median(std::vector<double> v) {
  if (v.empty()) throw DomainError("median of an empty set");
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

/// One (K, SNR) cell: median resolution threshold over seeds, single-source
/// RMSE over seeds x trials, and the root of the seed-averaged CRLB.
inline DoaRow doa_cell(const DoaStudyConfig& cfg, int k, double snr_db) {
  DoaRow row{k, snr_db, 0, 0, 0};
  const double sigma2 = cfg.noise_variance(k, snr_db);
  const SinGrid grid = make_grid(cfg.grid_points);
  const RadarScene single{{cfg.source_u}, {cplx(1.0)}, {}, {}, {}};
  std::vector<double> thresholds;
  double sq = 0, crlb = 0;
  int n = 0;
  for (std::uint64_t seed : cfg.seeds) {
    thresholds.push_back(resolution_threshold(cfg, k, snr_db, seed));
    const ProbingSetup setup = probing_setup(cfg, k, sigma2, seed);
    crlb += crlb_doa(setup.model.transmit_factor, cfg.n_radar_rx, single, sigma2)(0) / setup.n_snapshots;
    for (int t = 0; t < cfg.trials_per_seed; ++t) {
      const MatrixXcd y = collect_snapshots(setup.model, single, setup.n_snapshots,
                                            substream_seed(seed, 1000 + static_cast<std::uint64_t>(t)));
      const MusicEstimator est(setup.model, sample_covariance(y), 1);
      const double err = find_peaks(est, grid, 1).front() - cfg.source_u;
      sq += err * err;
      ++n;
    }
  }
  row.delta_u_threshold = median(thresholds);
  row.rmse = std::sqrt(sq / n);
  row.crlb = std::sqrt(crlb / static_cast<double>(cfg.seeds.size()));
  return row;
}

inline std::vector<DoaRow> doa_study(const DoaStudyConfig& cfg) {
  cfg.validate();
  std::vector<DoaRow> rows;
  for (int k : cfg.k_values)
    for (double snr : cfg.snr_db) rows.push_back(doa_cell(cfg, k, snr));
  std::sort(rows.begin(), rows.end(), [](const DoaRow& a, const DoaRow& b) {
    return a.k != b.k ? a.k < b.k : a.snr_db < b.snr_db;
  });
  return rows;
}

/// Mean signal power per virtual element for one target, noiseless.
inline double per_element_power(const VirtualArrayModel& model, const RadarScene& scene) {
  const VectorXcd mu = virtual_mean(model.transmit_factor, model.n_radar_rx, scene);
  return mu.squaredNorm() / static_cast<double>(mu.size());
}

}  // namespace dfrc

#endif  // DFRC_VIRTUALARRAY_HPP
