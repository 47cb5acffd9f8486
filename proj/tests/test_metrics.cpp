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

#include "dfrc/metrics.hpp"
#include "fixtures.hpp"

#include <gtest/gtest.h>

namespace dfrc {
namespace {

using test::default_scene;
using test::rel_diff;

ChannelSet manual_channel(int k, int u, std::vector<MatrixXcd> h, double noise) {
  ChannelSet ch;
  ch.n_subcarriers = k;
  ch.n_users = u;
  ch.h = std::move(h);
  ch.noise_variance = noise;
  return ch;
}

HybridCombiner identity_combiner(int n_users, int n_carriers, int nr, int d) {
  HybridCombiner c;
  c.n_users = n_users;
  for (int u = 0; u < n_users; ++u) c.analog.push_back(MatrixXcd::Identity(nr, nr));
  for (int i = 0; i < n_users * n_carriers; ++i) c.digital.push_back(MatrixXcd::Identity(nr, d));
  return c;
}

HybridPrecoder random_hybrid(const ArchitectureSpec& spec, int k, int ns, double power, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<MatrixXcd> digital;
  for (int i = 0; i < k; ++i) digital.push_back(complex_normal_matrix(spec.n_rf, ns, rng));
  return make_hybrid(random_feasible(spec, seed + 1), digital, power);
}

// ---- Beampattern ------------------------------------------------------------

TEST(Beampattern, SingleAntennaIsOmnidirectional) {
  const TransmitSet x = test::random_transmit(3, 1, 1, 2.5, 1);
  for (double p : beampattern(x, make_grid(11))) EXPECT_NEAR(p, 2.5, 1e-12);
}

TEST(Beampattern, CoherentGainOfSteeredBeam) {
  const int nt = 16;
  const double u0 = 0.3;
  const TransmitSet x{steering_vector(u0, nt).conjugate() / std::sqrt(static_cast<double>(nt))};
  EXPECT_NEAR(pattern_at(x, u0), nt, 1e-10);
}

TEST(Beampattern, GridMeanEqualsBudgetForHybrids) {
  const SinGrid grid = make_grid(2001);
  const std::vector<ArchitectureSpec> specs{ArchitectureSpec::full(16, 4), ArchitectureSpec::partial(16, 4),
                                            ArchitectureSpec::dynamic(16, 4, 32)};
  for (std::uint64_t s = 0; s < 30; ++s) {
    const HybridPrecoder p = random_hybrid(specs[s % 3], 4, 2, 1.7, s);
    EXPECT_LT(rel_diff(grid_mean_power(beampattern(p, grid)), 1.7), 1e-3);
  }
}

TEST(Beampattern, MatchesDirectTraceAndIsNonnegative) {
  const TransmitSet x = test::random_transmit(3, 8, 2, 1.0, 2);
  const SinGrid grid = make_grid(31);
  const auto p = beampattern(x, grid);
  MatrixXcd r = MatrixXcd::Zero(8, 8);
  for (const auto& xk : x) r += xk * xk.adjoint();
  for (std::size_t g = 0; g < grid.size(); ++g) {
    const VectorXcd a = steering_vector(grid.points[g], 8);
    const cplx q = a.transpose() * r * a.conjugate();
    EXPECT_LT(std::abs(q.imag()), 1e-10);
    EXPECT_NEAR(p[g], q.real(), 1e-12);
    EXPECT_GE(p[g], 0.0);
  }
}

TEST(Beampattern, InfeasibleAnalogIsContractError) {
  HybridPrecoder p = random_hybrid(ArchitectureSpec::full(4, 2), 1, 1, 1.0, 3);
  p.analog.matrix(0, 0) = 0.3;
  EXPECT_THROW(beampattern(p, make_grid(5)), ContractError);
}

TEST(Beampattern, PerCarrierRowsSumToTotal) {
  const TransmitSet x = test::random_transmit(4, 8, 2, 1.0, 4);
  const SinGrid grid = make_grid(21);
  const Eigen::MatrixXd pk = beampattern_per_carrier(x, grid);
  const auto total = beampattern(x, grid);
  for (std::size_t g = 0; g < grid.size(); ++g) EXPECT_NEAR(pk.col(static_cast<Eigen::Index>(g)).sum(), total[g], 1e-12);
}

// ---- SSME --------------------------------------------------------------------

TEST(Ssme, PerfectMatch) {
  const std::vector<double> p{0.5, 2.0, 0.0, 1.5};
  const auto r = ssme(p, p);
  EXPECT_NEAR(r.value, 0.0, 1e-15);
  EXPECT_NEAR(r.beta, 1.0, 1e-15);
}

TEST(Ssme, InvariantToDesiredScale) {
  const std::vector<double> p{0.5, 2.0, 0.1, 1.5}, d{1, 1, 0, 1}, d3{3, 3, 0, 3};
  EXPECT_NEAR(ssme(p, d).value, ssme(p, d3).value, 1e-14);
  EXPECT_NEAR(ssme(p, d).beta, 3 * ssme(p, d3).beta, 1e-14);
}

TEST(Ssme, TwoPointHandExample) {
  const std::vector<double> p{1, 3}, d{1, 1};
  const auto r = ssme(p, d);
  EXPECT_NEAR(r.beta, 2.0, 1e-15);
  EXPECT_NEAR(r.value, 1.0, 1e-15);
}

TEST(Ssme, AllZeroCase) {
  const std::vector<double> z{0, 0, 0};
  const auto r = ssme(z, z);
  EXPECT_EQ(r.value, 0.0);
  EXPECT_EQ(r.beta, 1.0);
}

TEST(Ssme, NonnegativeAndZeroOnlyOnMatch) {
  const RadarScene scene = default_scene();
  for (std::uint64_t s = 0; s < 20; ++s) EXPECT_GT(ssme(test::random_transmit(2, 8, 2, 1.0, s), scene).value, 0.0);
}

// ---- Sidelobes ---------------------------------------------------------------

TEST(Sidelobes, ZeroOutsideMainlobeHitsFloor) {
  const RadarScene scene = default_scene(101);
  std::vector<double> p(scene.grid.size());
  for (std::size_t g = 0; g < p.size(); ++g) p[g] = scene.desired[g];
  const auto sl = psl_isl(p, scene);
  EXPECT_EQ(sl.psl_db, kDbFloor);
  EXPECT_EQ(sl.isl_db, kDbFloor);
}

TEST(Sidelobes, FlatPatternIsZeroDb) {
  const RadarScene scene = default_scene(101);
  const std::vector<double> p(scene.grid.size(), 2.0);
  EXPECT_NEAR(psl_isl(p, scene).psl_db, 0.0, 1e-12);
}

TEST(Sidelobes, SteeredBeamMatchesBruteForce) {
  const RadarScene scene = make_scene({}, {}, {{0.1, 0.4}}, make_grid(401));
  const TransmitSet x{steering_vector(0.25, 8).conjugate() / std::sqrt(8.0)};
  const auto p = beampattern(x, scene.grid);
  double mm = 0, sm = 0, ms = 0, ss = 0;
  for (std::size_t g = 0; g < p.size(); ++g) {
    const bool in = scene.grid.points[g] >= 0.1 && scene.grid.points[g] <= 0.4;
    (in ? mm : sm) = std::max(in ? mm : sm, p[g]);
    (in ? ms : ss) += p[g];
  }
  const auto sl = psl_isl(p, scene);
  EXPECT_NEAR(sl.psl_db, 10 * std::log10(sm / mm), 1e-12);
  EXPECT_NEAR(sl.isl_db, 10 * std::log10(ss / ms), 1e-12);
}

TEST(Sidelobes, MainlobeCoveringGridIsError) {
  const RadarScene scene = make_scene({}, {}, {{-1.0, 1.0}}, make_grid(11));
  EXPECT_THROW(psl_isl(std::vector<double>(11, 1.0), scene), DomainError);
}

// ---- SINR and detection --------------------------------------------------------

TEST(RadarSinr, ZeroPowerIsZero) {
  const TransmitSet x{MatrixXcd::Zero(8, 2)};
  EXPECT_EQ(radar_sinr(x, default_scene(), 1.0), 0.0);
}

TEST(RadarSinr, LinearInPower) {
  TransmitSet x = test::random_transmit(2, 8, 2, 1.0, 5);
  const double s1 = radar_sinr(x, default_scene(), 0.5);
  normalize_power(x, 2.0);
  EXPECT_LT(rel_diff(radar_sinr(x, default_scene(), 0.5), 2 * s1), 1e-12);
}

TEST(RadarSinr, SteeredBeam) {
  const int nt = 16;
  const double p = 3.0, sigma2 = 0.7;
  const cplx alpha(0.6, -0.8);
  const RadarScene scene = make_scene({0.2}, {alpha}, {}, make_grid(3));
  const TransmitSet x{std::sqrt(p / nt) * steering_vector(0.2, nt).conjugate()};
  EXPECT_LT(rel_diff(radar_sinr(x, scene, sigma2), std::norm(alpha) * nt * p / sigma2), 1e-9);
}

TEST(RadarSinr, RejectsNonpositiveNoise) {
  EXPECT_THROW(radar_sinr(test::random_transmit(1, 4, 1, 1.0, 1), default_scene(), 0.0), DomainError);
}

TEST(Detection, NoSignalGivesPfa) { EXPECT_NEAR(detection_probability(0.0, 1e-3), 1e-3, 1e-15); }

TEST(Detection, UnitPfaAlwaysDetects) { EXPECT_EQ(detection_probability(3.0, 1.0), 1.0); }

TEST(Detection, RejectsZeroPfa) { EXPECT_THROW(detection_probability(1.0, 0.0), DomainError); }

TEST(Detection, MatchesMonteCarlo) {
  const double sinr = 10.0, pfa = 1e-3;
  const double thr = -std::log(pfa);  // on |z|^2 for unit-variance complex noise
  Rng rng(17);
  const int n = 200000;
  int hits = 0;
  for (int i = 0; i < n; ++i) hits += std::norm(std::sqrt(sinr) + complex_normal(rng)) > thr;
  EXPECT_NEAR(detection_probability(sinr, pfa), static_cast<double>(hits) / n, 1e-2);
}

TEST(Detection, MonotoneInSinrAndPfa) {
  for (int i = 0; i < 20; ++i)
    for (int j = 0; j < 20; ++j) {
      const double s = 0.1 * i * i, f = std::pow(10.0, -8.0 + 0.4 * j);
      EXPECT_LE(detection_probability(s, f), detection_probability(s + 0.05, f) + 1e-15);
      EXPECT_LE(detection_probability(s, f), detection_probability(s, std::min(1.0, 1.2 * f)) + 1e-15);
    }
}

// ---- CRLB ------------------------------------------------------------------------

TEST(Crlb, ScalesInverselyWithGainPower) {
  const TransmitSet x = test::random_transmit(2, 8, 2, 1.0, 6);
  RadarScene scene = make_scene({-0.3, 0.4}, {cplx(1.0), cplx(0.5, 0.5)}, {}, make_grid(3));
  const VectorXd c1 = crlb_doa(x, scene, 0.1, 4);
  for (auto& g : scene.target_gain) g *= std::sqrt(2.0);
  const VectorXd c2 = crlb_doa(x, scene, 0.1, 4);
  for (Eigen::Index q = 0; q < 2; ++q) EXPECT_LT(rel_diff(c2(q), 0.5 * c1(q)), 1e-9);
}

TEST(Crlb, FisherMatchesFiniteDifferences) {
  const TransmitSet x = test::random_transmit(3, 8, 2, 1.0, 7);
  const MatrixXcd d = default_transmit_factor(x);
  const int mr = 4;
  const double sigma2 = 0.3, h = 1e-5;
  const RadarScene scene = make_scene({-0.3, 0.4}, {cplx(1.0, 0.2), cplx(-0.5, 0.5)}, {}, make_grid(3));
  const Eigen::MatrixXd j = fisher_information(d, mr, scene, sigma2);
  auto mean_at = [&](int p, double step) {
    RadarScene s = scene;
    const int q = p % 2;
    if (p < 2) s.target_u[static_cast<std::size_t>(q)] += step;
    else if (p < 4) s.target_gain[static_cast<std::size_t>(q)] += step;
    else s.target_gain[static_cast<std::size_t>(q)] += cplx(0, step);
    VectorXcd mu = VectorXcd::Zero(d.cols() * mr);
    for (int t = 0; t < 2; ++t)
      mu += s.target_gain[static_cast<std::size_t>(t)] *
            detail::kron(d.transpose() * steering_vector(s.target_u[static_cast<std::size_t>(t)], 8),
                         steering_vector(s.target_u[static_cast<std::size_t>(t)], mr));
    return mu;
  };
  MatrixXcd jac(d.cols() * mr, 6);
  for (int p = 0; p < 6; ++p) jac.col(p) = (mean_at(p, h) - mean_at(p, -h)) / (2 * h);
  const Eigen::MatrixXd jfd = (2.0 / sigma2) * (jac.adjoint() * jac).real();
  EXPECT_LT((j - jfd).norm() / j.norm(), 1e-4);
}

TEST(Crlb, LargerReceiveApertureHelps) {
  const TransmitSet x = test::random_transmit(2, 8, 2, 1.0, 8);
  const RadarScene scene = make_scene({0.25}, {cplx(1.0)}, {}, make_grid(3));
  EXPECT_LT(crlb_doa(x, scene, 0.1, 16)(0), crlb_doa(x, scene, 0.1, 8)(0));
}

TEST(Crlb, SingularFisherIsInfinite) {
  const TransmitSet x{MatrixXcd::Zero(4, 1)};
  const RadarScene scene = make_scene({0.25}, {cplx(1.0)}, {}, make_grid(3));
  EXPECT_TRUE(std::isinf(crlb_doa(x, scene, 0.1, 4)(0)));
}

TEST(Crlb, UnidentifiableIsDomainError) {
  const TransmitSet x = test::random_transmit(1, 4, 1, 1.0, 9);
  const RadarScene scene = make_scene({-0.2, 0.3}, {cplx(1.0), cplx(1.0)}, {}, make_grid(3));
  EXPECT_THROW(crlb_doa(x, scene, 0.1, 2), DomainError);
}

// ---- Radar MI --------------------------------------------------------------------

TEST(RadarMi, ZeroGains) {
  const RadarScene scene = make_scene({-0.2, 0.3}, {cplx(0.0), cplx(0.0)}, {}, make_grid(3));
  EXPECT_EQ(radar_mi(test::random_transmit(2, 8, 2, 1.0, 10), scene, 1.0), 0.0);
}

TEST(RadarMi, RankOneScalarDeterminant) {
  const cplx alpha(0.3, 0.4);
  const RadarScene scene = make_scene({0.1}, {alpha}, {}, make_grid(3));
  const TransmitSet x = test::random_transmit(1, 8, 1, 2.0, 11);
  const double expected = std::log2(1 + std::norm(alpha) * pattern_at(x, 0.1) / 0.5);
  EXPECT_NEAR(radar_mi(x, scene, 0.5), expected, 1e-12);
}

TEST(RadarMi, NondecreasingInPower) {
  const RadarScene scene = default_scene();
  TransmitSet x = test::random_transmit(2, 8, 2, 1.0, 12);
  double prev = -1;
  for (int i = 1; i <= 10; ++i) {
    normalize_power(x, 0.5 * i);
    const double mi = radar_mi(x, scene, 1.0);
    EXPECT_GE(mi, prev);
    prev = mi;
  }
}

// ---- Communication -------------------------------------------------------------

TEST(SpectralEfficiency, ZeroPrecoder) {
  const ChannelSet ch = gen_channel(test::small_dims(), ClusterParams{}, 1);
  const TransmitSet x(2, MatrixXcd::Zero(8, 2));
  HybridCombiner c = identity_combiner(2, 2, 2, 1);
  EXPECT_EQ(spectral_efficiency(ch, x, c).bits, 0.0);
}

TEST(SpectralEfficiency, Siso) {
  const cplx h(0.7, -1.1);
  const double p = 2.0, sigma2 = 0.3;
  const ChannelSet ch = manual_channel(1, 1, {MatrixXcd::Constant(1, 1, h)}, sigma2);
  const TransmitSet x{MatrixXcd::Constant(1, 1, std::sqrt(p))};
  EXPECT_NEAR(spectral_efficiency(ch, x, identity_combiner(1, 1, 1, 1)).bits,
              std::log2(1 + p * std::norm(h) / sigma2), 1e-12);
}

TEST(SpectralEfficiency, OrthogonalUsersAdd) {
  MatrixXcd h0(1, 2), h1(1, 2);
  h0 << cplx(1.2, 0.1), 0;
  h1 << 0, cplx(-0.4, 0.9);
  const ChannelSet ch = manual_channel(1, 2, {h0, h1}, 0.2);
  MatrixXcd x(2, 2);
  x << cplx(0.8, 0), 0, 0, cplx(0, 0.6);
  const double se = spectral_efficiency(ch, TransmitSet{x}, identity_combiner(2, 1, 1, 1)).bits;
  const double ref = std::log2(1 + std::norm(h0(0, 0) * x(0, 0)) / 0.2) + std::log2(1 + std::norm(h1(0, 1) * x(1, 1)) / 0.2);
  EXPECT_NEAR(se, ref, 1e-9);
}

TEST(SpectralEfficiency, WienerCombinerAttainsCommMi) {
  const ChannelSet ch = gen_channel(test::small_dims(), ClusterParams{}, 2, 0.1);
  const TransmitSet x = test::random_transmit(2, 8, 2, 1.0, 13);
  HybridCombiner c{2, {MatrixXcd::Identity(2, 2), MatrixXcd::Identity(2, 2)}, {}};
  for (int k = 0; k < 2; ++k)
    for (int u = 0; u < 2; ++u) {
      const MatrixXcd hx = ch.at(k, u) * x[static_cast<std::size_t>(k)];
      const MatrixXcd cov = ch.noise_variance * MatrixXcd::Identity(2, 2) + hx * hx.adjoint();
      c.digital.push_back(cov.ldlt().solve(hx.col(u)));
    }
  EXPECT_NEAR(spectral_efficiency(ch, x, c).bits, comm_mutual_information(ch, x), 1e-9);
}

TEST(Mmse, ZeroPrecoderAndCombinerLosesAllSymbols) {
  const ChannelSet ch = gen_channel(test::small_dims(), ClusterParams{}, 1);
  const TransmitSet x(2, MatrixXcd::Zero(8, 2));
  HybridCombiner c = identity_combiner(2, 2, 2, 1);
  for (auto& w : c.digital) w.setZero();
  // every stream of every carrier is lost: (total streams) x K
  EXPECT_NEAR(multiuser_mmse(ch, x, c), 2.0 * 2.0, 1e-15);
}

TEST(Mmse, NoiselessZeroForcingIsExact) {
  MatrixXcd h(2, 2), x(2, 2);
  h << cplx(1, 0.5), cplx(0.2, 0), cplx(-0.3, 0.1), cplx(0.9, -0.4);
  x << cplx(0.6, 0), cplx(0.1, 0.2), cplx(0, -0.3), cplx(0.7, 0.1);
  const ChannelSet ch = manual_channel(1, 1, {h}, 0.0);
  HybridCombiner c{1, {MatrixXcd::Identity(2, 2)}, {(h * x).inverse().adjoint()}};
  EXPECT_NEAR(multiuser_mmse(ch, TransmitSet{x}, c), 0.0, 1e-12);
}

TEST(Mmse, MatchesMonteCarlo) {
  const SystemDims d = test::small_dims();
  const ChannelSet ch = gen_channel(d, ClusterParams{}, 3, 0.5);
  const TransmitSet x = test::random_transmit(2, 8, 2, 1.0, 14);
  Rng rng(15);
  HybridCombiner c{2, {complex_normal_matrix(2, 1, rng), complex_normal_matrix(2, 1, rng)}, {}};
  for (int i = 0; i < 4; ++i) c.digital.push_back(complex_normal_matrix(1, 1, rng));
  const int n = 100000;
  double acc = 0;
  for (int t = 0; t < n; ++t)
    for (int k = 0; k < 2; ++k) {
      const VectorXcd s = complex_normal_matrix(2, 1, rng);
      for (int u = 0; u < 2; ++u) {
        const VectorXcd y = ch.at(k, u) * x[static_cast<std::size_t>(k)] * s +
                            std::sqrt(ch.noise_variance) * complex_normal_matrix(2, 1, rng);
        acc += std::norm(s(u) - (c.effective(k, u).adjoint() * y)(0));
      }
    }
  EXPECT_LT(rel_diff(acc / n, multiuser_mmse(ch, x, c)), 0.01);
}

// ---- Report ------------------------------------------------------------------------

TEST(MetricReport, FixedColumnsAndFiniteValues) {
  EXPECT_EQ(MetricReport::csv_header(), "se_bits,mmse,mi_comm,mi_radar,ssme,psl_db,isl_db,sinr_db,pd,crlb");
  const ChannelSet ch = gen_channel(test::small_dims(), ClusterParams{}, 4, 0.1);
  const TransmitSet x = test::random_transmit(2, 8, 2, 1.0, 16);
  const auto rep = evaluate_metrics(ch, x, identity_combiner(2, 2, 2, 1), default_scene(), RadarSettings{1.0, 1e-6, 4});
  ASSERT_EQ(rep.entries.size(), kMetricColumns.size());
  for (const auto& e : rep.entries) {
    EXPECT_TRUE(std::isfinite(e.value)) << e.name;
    EXPECT_FALSE(e.unit.empty());
  }
  const std::string row = rep.csv_row();
  EXPECT_EQ(std::count(row.begin(), row.end(), ','), 9);
}

TEST(HybridPrecoder, PowerSplitEqually) {
  const HybridPrecoder p = random_hybrid(ArchitectureSpec::partial(8, 4), 4, 2, 2.0, 17);
  EXPECT_TRUE(power_constraint_holds(p));
  for (int k = 0; k < 4; ++k) EXPECT_NEAR(p.transmit(k).squaredNorm(), 0.5, 1e-12);
}

}  // namespace
}  // namespace dfrc
