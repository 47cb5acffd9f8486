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

#ifndef DFRC_COMMON_HPP
#define DFRC_COMMON_HPP

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace dfrc {

using cplx = std::complex<double>;
using Eigen::MatrixXcd;
using Eigen::VectorXcd;
using Eigen::VectorXd;

inline constexpr double kPi = std::numbers::pi;
inline constexpr cplx kJ{0.0, 1.0};

// Precondition violated by the caller (bad shape, out-of-range argument).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// An object handed to an operation does not satisfy its own invariants.
class ContractError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// An iterative method produced a non-finite value.
class SolverError : public std::runtime_error {
 public:
  SolverError(const std::string& what, int iteration)
      : std::runtime_error(what + " (iteration " + std::to_string(iteration) + ")"),
        iteration_(iteration) {}
  int iteration() const noexcept { return iteration_; }

 private:
  int iteration_;
};

// A constrained formulation has no feasible point; `gap` is by how much the
// constraint level misses the best achievable value.
class InfeasibleError : public std::runtime_error {
 public:
  InfeasibleError(const std::string& what, double gap)
      : std::runtime_error(what), gap_(gap) {}
  double gap() const noexcept { return gap_; }

 private:
  double gap_;
};

// Method/formulation pairing that the method cannot honor.
class UnsupportedError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Antenna, RF-chain, stream, user, carrier and radar-receiver counts.
struct SystemDims {
  int n_tx_antennas = 32;
  int n_rx_antennas = 4;
  int n_tx_rf = 4;
  int n_rx_rf = 2;
  int n_streams = 4;
  int n_users = 4;
  int n_subcarriers = 8;
  int n_radar_rx_rf = 8;

  // Streams are split evenly across users; user u owns columns
  // [u * streams_per_user(), (u + 1) * streams_per_user()).
  int streams_per_user() const { return n_streams / n_users; }

  void validate() const {
    auto positive = [](int v, const char* name) {
      if (v < 1) throw DomainError(std::string(name) + " must be >= 1");
    };
    positive(n_tx_antennas, "n_tx_antennas");
    positive(n_rx_antennas, "n_rx_antennas");
    positive(n_tx_rf, "n_tx_rf");
    positive(n_rx_rf, "n_rx_rf");
    positive(n_streams, "n_streams");
    positive(n_users, "n_users");
    positive(n_subcarriers, "n_subcarriers");
    positive(n_radar_rx_rf, "n_radar_rx_rf");
    if (n_streams > n_tx_rf || n_tx_rf > n_tx_antennas)
      throw DomainError("require n_streams <= n_tx_rf <= n_tx_antennas");
    if (n_rx_rf > n_rx_antennas) throw DomainError("require n_rx_rf <= n_rx_antennas");
    if (n_streams % n_users != 0)
      throw DomainError("n_streams must be a multiple of n_users");
    if (streams_per_user() > n_rx_rf)
      throw DomainError("streams per user exceed n_rx_rf");
  }
};

// ---- Seeded randomness ---------------------------------------------------

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Independent substream seed derived from a parent seed and a stream label.
inline std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t stream) {
  return splitmix64(splitmix64(seed) ^ splitmix64(stream + 0x632be59bd9b4e019ULL));
}

using Rng = std::mt19937_64;

// Circularly-symmetric complex Gaussian with unit variance.
inline cplx complex_normal(Rng& rng) {
  std::normal_distribution<double> n(0.0, std::sqrt(0.5));
  const double re = n(rng);
  const double im = n(rng);
  return {re, im};
}

inline double uniform_phase(Rng& rng) {
  std::uniform_real_distribution<double> u(0.0, 2.0 * kPi);
  return u(rng);
}

inline MatrixXcd complex_normal_matrix(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  MatrixXcd m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = complex_normal(rng);
  return m;
}

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double lin) { return 10.0 * std::log10(lin); }

inline bool all_finite(const MatrixXcd& m) { return m.allFinite(); }

}  // namespace dfrc

#endif  // DFRC_COMMON_HPP
