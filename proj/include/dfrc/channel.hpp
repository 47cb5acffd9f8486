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

#ifndef DFRC_CHANNEL_HPP
#define DFRC_CHANNEL_HPP

#include "dfrc/common.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <span>
#include <sstream>
#include <string>
#include <vector>

namespace dfrc {

// Half-wavelength ULA response in sin-space: element m is exp(j*pi*m*u).
inline VectorXcd steering_vector(double u, int n) {
  if (!(std::abs(u) <= 1.0)) throw DomainError("steering_vector: |u| must be <= 1");
  if (n < 1) throw DomainError("steering_vector: n must be >= 1");
  VectorXcd a(n);
  for (int m = 0; m < n; ++m) a(m) = std::polar(1.0, kPi * m * u);
  return a;
}

// d/du of steering_vector(u, n). No range check, used for Fisher information.
inline VectorXcd steering_derivative(double u, int n) {
  VectorXcd d(n);
  for (int m = 0; m < n; ++m) d(m) = kJ * (kPi * m) * std::polar(1.0, kPi * m * u);
  return d;
}

/// Uniform sin-space grid over [-1, 1], endpoints included.
struct SinGrid {
  std::vector<double> points;

  std::size_t size() const { return points.size(); }
  double spacing() const { return points.size() < 2 ? 0.0 : points[1] - points[0]; }

  /// N_t x G matrix whose columns are the steering vectors at the grid points.
  MatrixXcd steering_matrix(int n) const {
    MatrixXcd a(n, static_cast<Eigen::Index>(points.size()));
    for (std::size_t g = 0; g < points.size(); ++g)
      a.col(static_cast<Eigen::Index>(g)) = steering_vector(points[g], n);
    return a;
  }
};

inline SinGrid make_grid(int n_points) {
  if (n_points < 2) throw DomainError("make_grid: n_points must be >= 2");
  SinGrid g;
  g.points.resize(static_cast<std::size_t>(n_points));
  for (int i = 0; i < n_points; ++i)
    g.points[static_cast<std::size_t>(i)] = -1.0 + 2.0 * i / (n_points - 1);
  g.points.back() = 1.0;
  return g;
}

// Clustered (Saleh-Valenzuela style) mmWave channel parameters.
struct ClusterParams {
  int n_clusters = 5;
  int n_rays = 10;
  double angle_spread_deg = 7.5;   // Laplacian ray spread around each cluster angle
  double max_delay_samples = 4.0;  // ray delays uniform in [0, max_delay_samples)
};

// H[k][u], stored flat as k * n_users + u.
struct ChannelSet {
  int n_subcarriers = 0;
  int n_users = 0;
  std::vector<MatrixXcd> h;
  double noise_variance = 1.0;
  std::uint64_t seed = 0;

  const MatrixXcd& at(int k, int u) const {
    return h[static_cast<std::size_t>(k * n_users + u)];
  }
  MatrixXcd& at(int k, int u) { return h[static_cast<std::size_t>(k * n_users + u)]; }
};

namespace detail {

inline double laplacian(Rng& rng, double scale) {
  std::uniform_real_distribution<double> uni(-0.5, 0.5);
  const double x = uni(rng);
  return -scale * (x < 0 ? -1.0 : 1.0) * std::log(1.0 - 2.0 * std::abs(x));
}

// Angle in radians -> sin-space, clamped to the visible region.
inline double to_sin_space(double theta) {
  return std::clamp(std::sin(theta), -1.0, 1.0);
}

// One user's K channel matrices from its own RNG substream.
inline std::vector<MatrixXcd> gen_user_channels(const SystemDims& dims, const ClusterParams& model,
                                                std::uint64_t user_seed) {
  Rng rng(user_seed);
  const int nt = dims.n_tx_antennas;
  const int nr = dims.n_rx_antennas;
  const int k_count = dims.n_subcarriers;
  const double spread = model.angle_spread_deg * kPi / 180.0;
  const double norm = 1.0 / std::sqrt(static_cast<double>(model.n_clusters * model.n_rays));
  std::uniform_real_distribution<double> angle(-kPi / 2, kPi / 2);
  std::uniform_real_distribution<double> delay(0.0, model.max_delay_samples);

  std::vector<MatrixXcd> out(static_cast<std::size_t>(k_count), MatrixXcd::Zero(nr, nt));
  for (int c = 0; c < model.n_clusters; ++c) {
    const double tx_center = angle(rng);
    const double rx_center = angle(rng);
    for (int r = 0; r < model.n_rays; ++r) {
      const double tx_u = to_sin_space(tx_center + laplacian(rng, spread / std::sqrt(2.0)));
      const double rx_u = to_sin_space(rx_center + laplacian(rng, spread / std::sqrt(2.0)));
      const cplx gain = complex_normal(rng) * norm;
      const double tau = delay(rng);
      const MatrixXcd outer = steering_vector(rx_u, nr) * steering_vector(tx_u, nt).transpose();
      for (int k = 0; k < k_count; ++k)
        out[static_cast<std::size_t>(k)] += gain * std::polar(1.0, -2.0 * kPi * tau * k / k_count) * outer;
    }
  }
  return out;
}

}  // namespace detail

/// Multi-user, multi-carrier clustered channel. Each user draws from its own
/// substream seeded by `user_seeds[u]`, so permuting the seeds permutes users.
inline ChannelSet gen_channel(const SystemDims& dims, const ClusterParams& model,
                              std::span<const std::uint64_t> user_seeds,
                              double noise_variance = 1.0) {
  dims.validate();
  if (model.n_clusters < 1 || model.n_rays < 1)
    throw DomainError("gen_channel: cluster and ray counts must be >= 1");
  if (static_cast<int>(user_seeds.size()) != dims.n_users)
    throw DomainError("gen_channel: one seed per user required");
  if (!(noise_variance > 0)) throw DomainError("gen_channel: noise variance must be > 0");
  ChannelSet ch;
  ch.n_subcarriers = dims.n_subcarriers;
  ch.n_users = dims.n_users;
  ch.noise_variance = noise_variance;
  ch.h.resize(static_cast<std::size_t>(dims.n_subcarriers * dims.n_users));
  for (int u = 0; u < dims.n_users; ++u) {
    auto per_user = detail::gen_user_channels(dims, model, user_seeds[static_cast<std::size_t>(u)]);
    for (int k = 0; k < dims.n_subcarriers; ++k) ch.at(k, u) = std::move(per_user[static_cast<std::size_t>(k)]);
  }
  return ch;
}

inline std::vector<std::uint64_t> user_substreams(std::uint64_t seed, int n_users) {
  std::vector<std::uint64_t> seeds(static_cast<std::size_t>(n_users));
  for (int u = 0; u < n_users; ++u) seeds[static_cast<std::size_t>(u)] = substream_seed(seed, 1000 + static_cast<std::uint64_t>(u));
  return seeds;
}

inline ChannelSet gen_channel(const SystemDims& dims, const ClusterParams& model, std::uint64_t seed,
                              double noise_variance = 1.0) {
  const auto seeds = user_substreams(seed, dims.n_users);
  ChannelSet ch = gen_channel(dims, model, std::span<const std::uint64_t>(seeds), noise_variance);
  ch.seed = seed;
  return ch;
}

// ---- Columnar file: k,u,row,col,re,im ------------------------------------

inline void write_channel_columnar(const ChannelSet& ch, std::ostream& os) {
  os << "k,u,row,col,re,im\n";
  char buf[64];
  for (int k = 0; k < ch.n_subcarriers; ++k)
    for (int u = 0; u < ch.n_users; ++u) {
      const MatrixXcd& h = ch.at(k, u);
      for (Eigen::Index i = 0; i < h.rows(); ++i)
        for (Eigen::Index j = 0; j < h.cols(); ++j) {
          os << k << ',' << u << ',' << i << ',' << j << ',';
          std::snprintf(buf, sizeof buf, "%.17g,%.17g", h(i, j).real(), h(i, j).imag());
          os << buf << '\n';
        }
    }
}

inline ChannelSet read_channel_columnar(std::istream& is, double noise_variance = 1.0) {
  std::string line;
  if (!std::getline(is, line) || line != "k,u,row,col,re,im")
    throw DomainError("read_channel_columnar: bad header");
  struct Entry { int k, u, r, c; double re, im; };
  std::vector<Entry> entries;
  int kmax = -1, umax = -1, rmax = -1, cmax = -1;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    Entry e{};
    if (std::sscanf(line.c_str(), "%d,%d,%d,%d,%lf,%lf", &e.k, &e.u, &e.r, &e.c, &e.re, &e.im) != 6)
      throw DomainError("read_channel_columnar: malformed row: " + line);
    kmax = std::max(kmax, e.k); umax = std::max(umax, e.u);
    rmax = std::max(rmax, e.r); cmax = std::max(cmax, e.c);
    entries.push_back(e);
  }
  ChannelSet ch;
  ch.n_subcarriers = kmax + 1;
  ch.n_users = umax + 1;
  ch.noise_variance = noise_variance;
  ch.h.assign(static_cast<std::size_t>(ch.n_subcarriers * ch.n_users), MatrixXcd::Zero(rmax + 1, cmax + 1));
  for (const auto& e : entries) ch.at(e.k, e.u)(e.r, e.c) = cplx(e.re, e.im);
  return ch;
}

}  // namespace dfrc

#endif  // DFRC_CHANNEL_HPP
