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

#ifndef DFRC_METRICS_HPP
#define DFRC_METRICS_HPP

#include "dfrc/architecture.hpp"
#include "dfrc/channel.hpp"
#include "dfrc/common.hpp"

#include <boost/math/distributions/non_central_chi_squared.hpp>

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <array>
#include <cstdio>
#include <limits>
#include <span>
#include <string>
#include <vector>

namespace dfrc {

// Per-subcarrier transmit matrices X_k = F_RF * F_D[k], each N_t x N_s.
using TransmitSet = std::vector<MatrixXcd>;

// Equal split of the budget over carriers: ||X_k||_F^2 = total_power / K.
// All-zero carriers stay zero.
inline void normalize_power(TransmitSet& x, double total_power) {
  const double per_carrier = total_power / static_cast<double>(x.size());
  for (auto& xk : x) {
    const double n = xk.norm();
    if (n > 0) xk *= std::sqrt(per_carrier) / n;
  }
}

struct HybridPrecoder {
  AnalogPrecoder analog;
  std::vector<MatrixXcd> digital;  // N_RF x N_s per carrier
  double total_power = 1.0;

  int n_subcarriers() const { return static_cast<int>(digital.size()); }
  MatrixXcd transmit(int k) const { return analog.matrix * digital[static_cast<std::size_t>(k)]; }
  TransmitSet transmit_matrices() const {
    TransmitSet x;
    x.reserve(digital.size());
    for (const auto& d : digital) x.push_back(analog.matrix * d);
    return x;
  }
};

/// Rescales each digital block so that ||F_RF F_D[k]||_F^2 = P / K.
inline HybridPrecoder make_hybrid(AnalogPrecoder analog, std::vector<MatrixXcd> digital, double total_power) {
  const double per_carrier = total_power / static_cast<double>(digital.size());
  for (auto& d : digital) {
    const double n = (analog.matrix * d).norm();
    if (n > 0) d *= std::sqrt(per_carrier) / n;
  }
  return {std::move(analog), std::move(digital), total_power};
}

inline bool power_constraint_holds(const HybridPrecoder& p, double tol = 1e-8) {
  const double per_carrier = p.total_power / p.n_subcarriers();
  for (int k = 0; k < p.n_subcarriers(); ++k)
    if (std::abs(p.transmit(k).squaredNorm() - per_carrier) > tol * std::max(1.0, per_carrier)) return false;
  return true;
}

inline void require_feasible(const HybridPrecoder& p) {
  const auto rep = feasibility_check(p.analog);
  if (!rep) throw ContractError("infeasible analog precoder: " + rep.violations.front());
}

/// Per-user hybrid combiners. analog[u] is N_r x N_RF^r; digital is indexed
/// k * n_users + u and is N_RF^r x (streams per user).
struct HybridCombiner {
  int n_users = 0;
  std::vector<MatrixXcd> analog;
  std::vector<MatrixXcd> digital;

  MatrixXcd effective(int k, int u) const {
    return analog[static_cast<std::size_t>(u)] * digital[static_cast<std::size_t>(k * n_users + u)];
  }
};

struct Interval {
  double lo = 0;
  double hi = 0;
  bool contains(double u) const { return u >= lo && u <= hi; }
};

struct RadarScene {
  std::vector<double> target_u;
  std::vector<cplx> target_gain;
  std::vector<Interval> mainlobe;
  SinGrid grid;
  std::vector<double> desired;  // d(u_g); indicator of the main lobe by default

  int n_targets() const { return static_cast<int>(target_u.size()); }
  bool in_mainlobe(double u) const {
    return std::any_of(mainlobe.begin(), mainlobe.end(), [u](const Interval& i) { return i.contains(u); });
  }
};

inline RadarScene make_scene(std::vector<double> target_u, std::vector<cplx> gains,
                             std::vector<Interval> mainlobe, SinGrid grid) {
  if (target_u.size() != gains.size()) throw DomainError("make_scene: one gain per target");
  for (double u : target_u)
    if (!(std::abs(u) <= 1.0)) throw DomainError("make_scene: target outside [-1, 1]");
  for (const auto& iv : mainlobe)
    if (!(iv.lo <= iv.hi) || iv.lo < -1.0 || iv.hi > 1.0)
      throw DomainError("make_scene: main-lobe interval must lie in [-1, 1]");
  RadarScene s{std::move(target_u), std::move(gains), std::move(mainlobe), std::move(grid), {}};
  s.desired.resize(s.grid.size());
  for (std::size_t g = 0; g < s.grid.size(); ++g) s.desired[g] = s.in_mainlobe(s.grid.points[g]) ? 1.0 : 0.0;
  return s;
}

// ---- Beampattern -------------------------------------------------------

/// P(u_g) = a_t(u_g)^T F_RF (sum_k F_D[k] F_D[k]^H) F_RF^H a_t(u_g)^*.
inline std::vector<double> beampattern(std::span<const MatrixXcd> x, const SinGrid& grid) {
  if (x.empty()) return std::vector<double>(grid.size(), 0.0);
  const Eigen::Index nt = x.front().rows();
  MatrixXcd r = MatrixXcd::Zero(nt, nt);
  for (const auto& xk : x) r.noalias() += xk * xk.adjoint();
  const double scale = std::max(1e-300, r.trace().real() * static_cast<double>(nt));
  std::vector<double> p(grid.size());
  for (std::size_t g = 0; g < grid.size(); ++g) {
    const VectorXcd a = steering_vector(grid.points[g], static_cast<int>(nt));
    const cplx q = (a.transpose() * r * a.conjugate())(0, 0);
    if (std::abs(q.imag()) > 1e-10 * scale) throw ContractError("beampattern: quadratic form not real");
    p[g] = std::max(0.0, q.real());
  }
  return p;
}

inline std::vector<double> beampattern(const HybridPrecoder& p, const SinGrid& grid) {
  require_feasible(p);
  const auto x = p.transmit_matrices();
  return beampattern(std::span<const MatrixXcd>(x), grid);
}

/// Space-frequency spectrum: row k is carrier k's pattern a^T X_k X_k^H a^*.
inline Eigen::MatrixXd beampattern_per_carrier(std::span<const MatrixXcd> x, const SinGrid& grid) {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(x.size()), static_cast<Eigen::Index>(grid.size()));
  if (x.empty()) return out;
  const MatrixXcd a = grid.steering_matrix(static_cast<int>(x.front().rows()));
  for (std::size_t k = 0; k < x.size(); ++k) {
    const MatrixXcd proj = a.transpose() * x[k];  // G x N_s
    out.row(static_cast<Eigen::Index>(k)) = proj.rowwise().squaredNorm().transpose();
  }
  return out;
}

/// Mean of a pattern over the uniform grid with trapezoidal end weights; for
/// a trigonometric polynomial in u of degree below the interval count this
/// equals the angular average exactly.
inline double grid_mean_power(std::span<const double> pattern) {
  const std::size_t n = pattern.size();
  if (n < 2) throw DomainError("grid_mean_power: need at least 2 points");
  double s = 0.5 * (pattern.front() + pattern.back());
  for (std::size_t i = 1; i + 1 < n; ++i) s += pattern[i];
  return s / static_cast<double>(n - 1);
}

// ---- Radar metrics -------------------------------------------------------

struct SsmeResult {
  double value = 0;
  double beta = 1;
};

/// min_{beta >= 0} mean_g (beta d_g - P_g)^2 with the closed-form beta.
inline SsmeResult ssme(std::span<const double> pattern, std::span<const double> desired) {
  if (pattern.empty() || pattern.size() != desired.size())
    throw DomainError("ssme: pattern and desired must be nonempty and equal length");
  double dd = 0, dp = 0;
  for (std::size_t g = 0; g < pattern.size(); ++g) {
    dd += desired[g] * desired[g];
    dp += desired[g] * pattern[g];
  }
  SsmeResult r;
  r.beta = dd > 0 ? std::max(0.0, dp / dd) : 1.0;
  if (dd == 0) r.beta = 1.0;
  double acc = 0;
  for (std::size_t g = 0; g < pattern.size(); ++g) {
    const double e = r.beta * desired[g] - pattern[g];
    acc += e * e;
  }
  r.value = acc / static_cast<double>(pattern.size());
  return r;
}

inline SsmeResult ssme(std::span<const MatrixXcd> x, const RadarScene& scene) {
  const auto p = beampattern(x, scene.grid);
  return ssme(p, scene.desired);
}

inline constexpr double kDbFloor = -300.0;

struct SidelobeLevels {
  double psl_db = 0;
  double isl_db = 0;
};

inline SidelobeLevels psl_isl(std::span<const double> pattern, const RadarScene& scene) {
  if (pattern.size() != scene.grid.size()) throw DomainError("psl_isl: pattern/grid size mismatch");
  double main_max = 0, main_sum = 0, side_max = 0, side_sum = 0;
  std::size_t n_main = 0, n_side = 0;
  for (std::size_t g = 0; g < pattern.size(); ++g) {
    if (scene.in_mainlobe(scene.grid.points[g])) {
      ++n_main;
      main_max = std::max(main_max, pattern[g]);
      main_sum += pattern[g];
    } else {
      ++n_side;
      side_max = std::max(side_max, pattern[g]);
      side_sum += pattern[g];
    }
  }
  if (n_main == 0) throw DomainError("psl_isl: main lobe does not intersect the grid");
  if (n_side == 0) throw DomainError("psl_isl: main lobe covers the whole grid");
  auto ratio_db = [](double num, double den) {
    if (num <= 0) return kDbFloor;
    if (den <= 0) return -kDbFloor;
    return std::max(kDbFloor, linear_to_db(num / den));
  };
  return {ratio_db(side_max, main_max), ratio_db(side_sum, main_sum)};
}

// Total radiated power toward u, summed over carriers.
inline double pattern_at(std::span<const MatrixXcd> x, double u) {
  if (x.empty()) return 0.0;
  const VectorXcd a = steering_vector(u, static_cast<int>(x.front().rows()));
  double p = 0;
  for (const auto& xk : x) p += (xk.transpose() * a).squaredNorm();
  return p;
}

/// Orthogonal-return SINR: sum_q |alpha_q|^2 P(theta_q) / sigma^2.
inline double radar_sinr(std::span<const MatrixXcd> x, const RadarScene& scene, double noise_variance) {
  if (!(noise_variance > 0)) throw DomainError("radar_sinr: noise variance must be > 0");
  if (scene.n_targets() < 1) throw DomainError("radar_sinr: need at least one target");
  double s = 0;
  for (int q = 0; q < scene.n_targets(); ++q)
    s += std::norm(scene.target_gain[static_cast<std::size_t>(q)]) * pattern_at(x, scene.target_u[static_cast<std::size_t>(q)]);
  return s / noise_variance;
}

/// Nonfluctuating target, square-law detector on a unit-variance complex
/// matched-filter output: P_d = Q_1(sqrt(2 sinr), sqrt(-2 ln pfa)).
inline double detection_probability(double sinr, double pfa) {
  if (!(pfa > 0.0 && pfa <= 1.0)) throw DomainError("detection_probability: pfa must be in (0, 1]");
  if (!(sinr >= 0.0)) throw DomainError("detection_probability: sinr must be >= 0");
  const double threshold = -2.0 * std::log(pfa);  // on 2|z|^2
  if (threshold <= 0.0) return 1.0;
  if (sinr == 0.0) return pfa;
  boost::math::non_central_chi_squared_distribution<double> dist(2.0, 2.0 * sinr);
  return boost::math::cdf(boost::math::complement(dist, threshold));
}

namespace detail {

// log2 det of a Hermitian positive definite matrix.
inline double log2det_hpd(const MatrixXcd& m) {
  Eigen::LLT<MatrixXcd> llt(m);
  if (llt.info() != Eigen::Success) {
    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(m, Eigen::EigenvaluesOnly);
    double s = 0;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) s += std::log2(std::max(es.eigenvalues()(i), 1e-300));
    return s;
  }
  double s = 0;
  const MatrixXcd& l = llt.matrixLLT();
  for (Eigen::Index i = 0; i < l.rows(); ++i) s += 2.0 * std::log2(l(i, i).real());
  return s;
}

// Q x N_t matrix with rows alpha_q a_t(theta_q)^T.
inline MatrixXcd target_response(const RadarScene& scene, int nt) {
  MatrixXcd z(scene.n_targets(), nt);
  for (int q = 0; q < scene.n_targets(); ++q)
    z.row(q) = scene.target_gain[static_cast<std::size_t>(q)] *
               steering_vector(scene.target_u[static_cast<std::size_t>(q)], nt).transpose();
  return z;
}

inline VectorXcd kron(const VectorXcd& a, const VectorXcd& b) {
  VectorXcd out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

}  // namespace detail

/// Radar MI: sum_k log2 det(I + T_k T_k^H / sigma^2), T_k = diag(alpha) A^T X_k,
/// using the same a_t^T convention as the beampattern.
inline double radar_mi(std::span<const MatrixXcd> x, const RadarScene& scene, double noise_variance) {
  if (!(noise_variance > 0)) throw DomainError("radar_mi: noise variance must be > 0");
  if (x.empty() || scene.n_targets() == 0) return 0.0;
  const MatrixXcd z = detail::target_response(scene, static_cast<int>(x.front().rows()));
  double mi = 0;
  for (const auto& xk : x) {
    const MatrixXcd t = z * xk;
    const MatrixXcd m = MatrixXcd::Identity(t.rows(), t.rows()) + t * t.adjoint() / noise_variance;
    mi += detail::log2det_hpd(m);
  }
  return std::max(0.0, mi);
}

// ---- Communication metrics ----------------------------------------------

inline int streams_per_user(const ChannelSet& ch, const MatrixXcd& xk) {
  const int ns = static_cast<int>(xk.cols());
  if (ch.n_users < 1 || ns % ch.n_users != 0) throw DomainError("streams must split evenly across users");
  return ns / ch.n_users;
}

inline void check_comm_dims(const ChannelSet& ch, std::span<const MatrixXcd> x) {
  if (static_cast<int>(x.size()) != ch.n_subcarriers) throw DomainError("precoder/channel carrier count mismatch");
  for (const auto& xk : x)
    if (xk.rows() != ch.at(0, 0).cols()) throw DomainError("precoder/channel antenna count mismatch");
}

struct SpectralEfficiency {
  double bits = 0;           // bits/s/Hz, averaged over carriers, summed over users
  bool regularized = false;  // some interference-plus-noise covariance needed a ridge
};

inline constexpr double kCovarianceRidge = 1e-12;

/// (1/K) sum_{k,u} log2 det(I + R^{-1} G G^H) with G = W^H H X_u and
/// R = sum_{v != u} W^H H X_v X_v^H H^H W + sigma^2 W^H W.
inline SpectralEfficiency spectral_efficiency(const ChannelSet& ch, std::span<const MatrixXcd> x,
                                              const HybridCombiner& c) {
  check_comm_dims(ch, x);
  SpectralEfficiency out;
  const int d = streams_per_user(ch, x.front());
  for (int k = 0; k < ch.n_subcarriers; ++k) {
    const MatrixXcd& xk = x[static_cast<std::size_t>(k)];
    for (int u = 0; u < ch.n_users; ++u) {
      const MatrixXcd w = c.effective(k, u);
      const MatrixXcd eff = w.adjoint() * ch.at(k, u) * xk;  // d x N_s
      const MatrixXcd g = eff.middleCols(u * d, d);
      MatrixXcd r = ch.noise_variance * (w.adjoint() * w);
      for (int v = 0; v < ch.n_users; ++v)
        if (v != u) r.noalias() += eff.middleCols(v * d, d) * eff.middleCols(v * d, d).adjoint();
      Eigen::SelfAdjointEigenSolver<MatrixXcd> es(r, Eigen::EigenvaluesOnly);
      const double lmin = es.eigenvalues().minCoeff();
      if (lmin <= kCovarianceRidge * std::max(1.0, r.trace().real())) {
        r += kCovarianceRidge * MatrixXcd::Identity(d, d);
        out.regularized = true;
      }
      out.bits += detail::log2det_hpd(r + g * g.adjoint()) - detail::log2det_hpd(r);
    }
  }
  out.bits = std::max(0.0, out.bits / ch.n_subcarriers);
  return out;
}

/// Receiver-agnostic communication MI: the same rate with an unconstrained
/// per-user MMSE receiver, log2 det(C_y) - log2 det(C_y without own streams).
inline double comm_mutual_information(const ChannelSet& ch, std::span<const MatrixXcd> x) {
  check_comm_dims(ch, x);
  const int d = streams_per_user(ch, x.front());
  double mi = 0;
  for (int k = 0; k < ch.n_subcarriers; ++k)
    for (int u = 0; u < ch.n_users; ++u) {
      const MatrixXcd hx = ch.at(k, u) * x[static_cast<std::size_t>(k)];
      const Eigen::Index nr = hx.rows();
      MatrixXcd cov = ch.noise_variance * MatrixXcd::Identity(nr, nr) + hx * hx.adjoint();
      const MatrixXcd own = hx.middleCols(u * d, d);
      mi += detail::log2det_hpd(cov) - detail::log2det_hpd(cov - own * own.adjoint());
    }
  return std::max(0.0, mi / ch.n_subcarriers);
}

/// sum_{k,u} E||s_{k,u} - W^H y_{k,u}||^2 for unit-variance independent symbols.
inline double multiuser_mmse(const ChannelSet& ch, std::span<const MatrixXcd> x, const HybridCombiner& c) {
  check_comm_dims(ch, x);
  const int d = streams_per_user(ch, x.front());
  double total = 0;
  for (int k = 0; k < ch.n_subcarriers; ++k)
    for (int u = 0; u < ch.n_users; ++u) {
      const MatrixXcd w = c.effective(k, u);
      const MatrixXcd eff = w.adjoint() * ch.at(k, u) * x[static_cast<std::size_t>(k)];  // d x N_s
      const MatrixXcd g = eff.middleCols(u * d, d);
      const double cross = 2.0 * g.trace().real();
      const double rx = eff.squaredNorm() + ch.noise_variance * w.squaredNorm();
      total += static_cast<double>(d) - cross + rx;
    }
  return std::max(0.0, total);
}

// ---- Direction-finding Cramer-Rao bound ---------------------------------

/// Fisher information of the virtual data model
///   mu = sum_q alpha_q (D^T a_t(u_q)) (x) a_r(u_q)
/// observed in CN(0, sigma^2 I), with D the N_t x K transmit factor.
/// Parameters ordered [u_1..u_Q, Re alpha_1..Q, Im alpha_1..Q].
inline Eigen::MatrixXd fisher_information(const MatrixXcd& transmit_factor, int n_radar_rx,
                                          const RadarScene& scene, double noise_variance) {
  if (!(noise_variance > 0)) throw DomainError("fisher_information: noise variance must be > 0");
  const int q_count = scene.n_targets();
  const int nt = static_cast<int>(transmit_factor.rows());
  const Eigen::Index dim = transmit_factor.cols() * n_radar_rx;
  MatrixXcd jac(dim, 3 * q_count);
  for (int q = 0; q < q_count; ++q) {
    const double u = scene.target_u[static_cast<std::size_t>(q)];
    const cplx alpha = scene.target_gain[static_cast<std::size_t>(q)];
    const VectorXcd bt = transmit_factor.transpose() * steering_vector(u, nt);
    const VectorXcd dbt = transmit_factor.transpose() * steering_derivative(u, nt);
    const VectorXcd ar = steering_vector(u, n_radar_rx);
    const VectorXcd dar = steering_derivative(u, n_radar_rx);
    const VectorXcd base = detail::kron(bt, ar);
    jac.col(q) = alpha * (detail::kron(dbt, ar) + detail::kron(bt, dar));
    jac.col(q_count + q) = base;
    jac.col(2 * q_count + q) = kJ * base;
  }
  return (2.0 / noise_variance) * (jac.adjoint() * jac).real();
}

/// Unit-modulus all-ones probing symbols: column k is X_k 1.
inline MatrixXcd default_transmit_factor(std::span<const MatrixXcd> x) {
  MatrixXcd d(x.front().rows(), static_cast<Eigen::Index>(x.size()));
  for (std::size_t k = 0; k < x.size(); ++k) d.col(static_cast<Eigen::Index>(k)) = x[k].rowwise().sum();
  return d;
}

/// Deterministic CRLB on each target's sin-space angle (theta block of the
/// inverse Fisher matrix). A singular Fisher matrix yields +inf.
inline VectorXd crlb_doa(const MatrixXcd& transmit_factor, int n_radar_rx, const RadarScene& scene,
                         double noise_variance) {
  const int q_count = scene.n_targets();
  if (q_count < 1) throw DomainError("crlb_doa: need at least one target");
  if (q_count >= transmit_factor.cols() * n_radar_rx)
    throw DomainError("crlb_doa: targets not identifiable (Q >= K * M_r)");
  const Eigen::MatrixXd j = fisher_information(transmit_factor, n_radar_rx, scene, noise_variance);
  VectorXd out(q_count);
  Eigen::FullPivLU<Eigen::MatrixXd> lu(j);
  lu.setThreshold(1e-12);
  if (!lu.isInvertible() || !j.allFinite()) {
    out.setConstant(std::numeric_limits<double>::infinity());
    return out;
  }
  const Eigen::MatrixXd inv = lu.inverse();
  for (int q = 0; q < q_count; ++q) out(q) = inv(q, q) > 0 ? inv(q, q) : std::numeric_limits<double>::infinity();
  return out;
}

inline VectorXd crlb_doa(std::span<const MatrixXcd> x, const RadarScene& scene, double noise_variance,
                         int n_radar_rx, const MatrixXcd* transmit_factor = nullptr) {
  if (transmit_factor) return crlb_doa(*transmit_factor, n_radar_rx, scene, noise_variance);
  return crlb_doa(default_transmit_factor(x), n_radar_rx, scene, noise_variance);
}

// ---- Report -------------------------------------------------------------

struct MetricEntry {
  std::string name;
  double value = 0;
  std::string unit;
};

/// Fixed column order for CSV export.
inline constexpr std::array<const char*, 10> kMetricColumns = {
    "se_bits", "mmse", "mi_comm", "mi_radar", "ssme", "psl_db", "isl_db", "sinr_db", "pd", "crlb"};

struct MetricReport {
  std::vector<MetricEntry> entries;
  bool se_regularized = false;

  double get(const std::string& name) const {
    for (const auto& e : entries)
      if (e.name == name) return e.value;
    throw DomainError("MetricReport: no entry " + name);
  }

  static std::string csv_header() {
    std::string s;
    for (std::size_t i = 0; i < kMetricColumns.size(); ++i) s += (i ? "," : "") + std::string(kMetricColumns[i]);
    return s;
  }

  std::string csv_row() const {
    std::string s;
    char buf[40];
    for (std::size_t i = 0; i < kMetricColumns.size(); ++i) {
      std::snprintf(buf, sizeof buf, "%.9g", get(kMetricColumns[i]));
      s += (i ? "," : "") + std::string(buf);
    }
    return s;
  }
};

struct RadarSettings {
  double noise_variance = 1.0;
  double pfa = 1e-6;
  int n_radar_rx = 8;
};

inline MetricReport evaluate_metrics(const ChannelSet& ch, std::span<const MatrixXcd> x, const HybridCombiner& c,
                                     const RadarScene& scene, const RadarSettings& radar) {
  auto finite_or = [](double v, double cap) { return std::isfinite(v) ? std::min(v, cap) : cap; };
  MetricReport rep;
  const auto se = spectral_efficiency(ch, x, c);
  rep.se_regularized = se.regularized;
  const auto pattern = beampattern(x, scene.grid);
  const auto sl = psl_isl(pattern, scene);
  const double sinr = radar_sinr(x, scene, radar.noise_variance);
  const VectorXd crlb = crlb_doa(x, scene, radar.noise_variance, radar.n_radar_rx);
  rep.entries = {
      {"se_bits", se.bits, "bit/s/Hz"},
      {"mmse", multiuser_mmse(ch, x, c), "symbol energy"},
      {"mi_comm", comm_mutual_information(ch, x), "bit/s/Hz"},
      {"mi_radar", radar_mi(x, scene, radar.noise_variance), "bit"},
      {"ssme", ssme(pattern, scene.desired).value, "power^2"},
      {"psl_db", sl.psl_db, "dB"},
      {"isl_db", sl.isl_db, "dB"},
      {"sinr_db", sinr > 0 ? std::max(kDbFloor, linear_to_db(sinr)) : kDbFloor, "dB"},
      {"pd", detection_probability(sinr, radar.pfa), "probability"},
      {"crlb", finite_or(crlb.mean(), 1e300), "sin-space^2"},
  };
  return rep;
}

}  // namespace dfrc

#endif  // DFRC_METRICS_HPP
