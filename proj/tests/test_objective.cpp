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

#include "dfrc/objective.hpp"
#include "fixtures.hpp"

#include <gtest/gtest.h>

namespace dfrc {
namespace {

// Central difference of f along E and jE gives 2 Re / 2 Im of <G, E>.
template <class F>
void check_gradient(F&& f, const TransmitSet& x, const TransmitSet& grad, std::uint64_t seed, double tol) {
  Rng rng(seed);
  for (int trial = 0; trial < 3; ++trial) {
    TransmitSet dir;
    for (const auto& xk : x) dir.push_back(complex_normal_matrix(xk.rows(), xk.cols(), rng));
    const double h = 1e-6;
    TransmitSet xp = x, xm = x;
    for (std::size_t k = 0; k < x.size(); ++k) {
      xp[k] += h * dir[k];
      xm[k] -= h * dir[k];
    }
    const double numeric = (f(xp) - f(xm)) / (2 * h);
    double analytic = 0;
    for (std::size_t k = 0; k < x.size(); ++k)
      analytic += 2.0 * (grad[k].array().conjugate() * dir[k].array()).real().sum();
    EXPECT_NEAR(numeric, analytic, tol * std::max(1.0, std::abs(analytic)));
  }
}

struct Case {
  RadarMetric radar;
  CommMetric comm;
};

class ObjectiveGradient : public ::testing::TestWithParam<Case> {};

TEST_P(ObjectiveGradient, RadarAndCommMatchFiniteDifferences) {
  const auto dims = test::small_dims();
  const auto ch = gen_channel(dims, ClusterParams{}, 11, 0.1);
  const auto scene = test::default_scene(61);
  const ObjectiveModel model(ch, scene, 0.5, GetParam().radar, GetParam().comm);
  const auto x = test::random_transmit(dims.n_subcarriers, dims.n_tx_antennas, dims.n_streams, 1.0, 3);
  TransmitSet gr, gc;
  model.evaluate(x, &gr, &gc);
  check_gradient([&](const TransmitSet& v) { return model.raw(v).radar; }, x, gr, 5, 1e-5);
  check_gradient([&](const TransmitSet& v) { return model.raw(v).comm; }, x, gc, 6, 1e-5);
}

INSTANTIATE_TEST_SUITE_P(AllMetricPairs, ObjectiveGradient,
                         ::testing::Values(Case{RadarMetric::Ssme, CommMetric::Mmse},
                                           Case{RadarMetric::Ssme, CommMetric::NegSe},
                                           Case{RadarMetric::NegRadarMi, CommMetric::Mmse},
                                           Case{RadarMetric::NegRadarMi, CommMetric::NegSe}));

TEST(ScalarizedObjective, PenalizedGradientsMatchFiniteDifferences) {
  const auto dims = test::small_dims();
  const auto ch = gen_channel(dims, ClusterParams{}, 12, 0.1);
  const auto scene = test::default_scene(61);
  const ObjectiveModel model(ch, scene, 1.0, RadarMetric::Ssme, CommMetric::Mmse);
  ObjectiveSpec spec;
  spec.comm = {0.5, 2.0};
  spec.radar = {0.0, 0.25};
  const auto x = test::random_transmit(dims.n_subcarriers, dims.n_tx_antennas, dims.n_streams, 1.0, 4);
  for (const ScalarizationSpec s : {ScalarizationSpec{WeightedSum{0.3, 0.7}}, ScalarizationSpec{EpsilonConstraint{ObjectiveId::Radar, 0.1}},
                                    ScalarizationSpec{MinMax{}}}) {
    const ScalarizedObjective obj(model, spec, s);
    TransmitSet g;
    obj.evaluate(x, 10.0, &g);
    check_gradient([&](const TransmitSet& v) { return obj.evaluate(v, 10.0).scalar.value; }, x, g, 8, 1e-5);
  }
}

TEST(ScalarizedObjective, BlocksSumToTheWholeObjective) {
  const auto dims = test::small_dims();
  const auto ch = gen_channel(dims, ClusterParams{}, 13, 0.1);
  const auto scene = test::default_scene(61);
  const ObjectiveModel model(ch, scene, 1.0, RadarMetric::Ssme, CommMetric::NegSe);
  const ScalarizedObjective obj(model, ObjectiveSpec{RadarMetric::Ssme, CommMetric::NegSe, {}, {}}, WeightedSum{0.4, 0.6});
  const auto x = test::random_transmit(dims.n_subcarriers, dims.n_tx_antennas, dims.n_streams, 1.0, 4);
  double total = 0;
  for (int k = 0; k < dims.n_subcarriers; ++k)
    for (int u = 0; u < dims.n_users; ++u) total += obj.block(k, u, x[static_cast<std::size_t>(k)], 0.4, 0.6, nullptr);
  EXPECT_NEAR(total, obj.evaluate(x, 1.0).scalar.value, 1e-12);
}

TEST(ObjectiveModel, StackedCarrierTermMatchesUserBlocks) {
  const auto dims = test::small_dims();
  const auto ch = gen_channel(dims, ClusterParams{}, 14, 0.1);
  const auto scene = test::default_scene(61);
  const auto x = test::random_transmit(dims.n_subcarriers, dims.n_tx_antennas, dims.n_streams, 1.0, 5);
  for (const CommMetric metric : {CommMetric::Mmse, CommMetric::NegSe}) {
    const ObjectiveModel model(ch, scene, 1.0, RadarMetric::Ssme, metric);
    for (int k = 0; k < dims.n_subcarriers; ++k) {
      const MatrixXcd& xk = x[static_cast<std::size_t>(k)];
      MatrixXcd g_all, g;
      const double v_all = model.comm_carrier(k, xk, &g_all);
      double v = 0;
      MatrixXcd g_sum = MatrixXcd::Zero(xk.rows(), xk.cols());
      for (int u = 0; u < dims.n_users; ++u) {
        v += model.comm_block(k, u, xk, &g);
        g_sum += g;
      }
      EXPECT_NEAR(v_all, v, 1e-12 * std::max(1.0, std::abs(v)));
      EXPECT_LE((g_all - g_sum).norm(), 1e-12 * std::max(1.0, g_sum.norm()));
    }
  }
}

TEST(ObjectiveModel, RawValuesAgreeWithMetricModule) {
  const auto dims = test::small_dims();
  const auto ch = gen_channel(dims, ClusterParams{}, 14, 0.2);
  const auto scene = test::default_scene(61);
  const auto x = test::random_transmit(dims.n_subcarriers, dims.n_tx_antennas, dims.n_streams, 1.0, 9);
  const ObjectiveModel mi(ch, scene, 0.7, RadarMetric::NegRadarMi, CommMetric::NegSe);
  EXPECT_NEAR(mi.raw(x).radar, -radar_mi(x, scene, 0.7), 1e-10);
  EXPECT_NEAR(mi.raw(x).comm, -comm_mutual_information(ch, x), 1e-10);
}

}  // namespace
}  // namespace dfrc
