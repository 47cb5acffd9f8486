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

#ifndef DFRC_TEST_FIXTURES_HPP
#define DFRC_TEST_FIXTURES_HPP

#include "dfrc/channel.hpp"
#include "dfrc/metrics.hpp"

namespace dfrc::test {

// Two-interval main lobe used across the tests.
inline std::vector<Interval> default_mainlobe() { return {{-0.7891, -0.337}, {0.0939, 0.657}}; }

inline RadarScene default_scene(int grid_points = 181) {
  return make_scene({-0.5, 0.35}, {cplx(1.0, 0.0), cplx(0.0, 1.0)}, default_mainlobe(), make_grid(grid_points));
}

inline SystemDims small_dims() {
  SystemDims d;
  d.n_tx_antennas = 8;
  d.n_rx_antennas = 2;
  d.n_tx_rf = 4;
  d.n_rx_rf = 1;
  d.n_streams = 2;
  d.n_users = 2;
  d.n_subcarriers = 2;
  d.n_radar_rx_rf = 4;
  return d;
}

inline TransmitSet random_transmit(int k, int nt, int ns, double power, std::uint64_t seed) {
  Rng rng(seed);
  TransmitSet x;
  for (int i = 0; i < k; ++i) x.push_back(complex_normal_matrix(nt, ns, rng));
  normalize_power(x, power);
  return x;
}

// Re-sum of entrywise |a - b|, relative to |b|.
inline double rel_diff(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace dfrc::test

#endif  // DFRC_TEST_FIXTURES_HPP
