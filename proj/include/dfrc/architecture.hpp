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

#ifndef DFRC_ARCHITECTURE_HPP
#define DFRC_ARCHITECTURE_HPP

#include "dfrc/common.hpp"

#include <algorithm>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace dfrc {

enum class ConnectionKind { Full, Partial, Dynamic };

inline const char* to_string(ConnectionKind k) {
  switch (k) {
    case ConnectionKind::Full: return "full";
    case ConnectionKind::Partial: return "partial";
    case ConnectionKind::Dynamic: return "dynamic";
  }
  return "?";
}

inline ConnectionKind connection_from_string(const std::string& s) {
  if (s == "full") return ConnectionKind::Full;
  if (s == "partial") return ConnectionKind::Partial;
  if (s == "dynamic") return ConnectionKind::Dynamic;
  throw DomainError("unknown architecture kind: " + s);
}

/// Feasible set of the analog precoder.
///
/// Full: every RF chain drives every antenna through its own phase shifter.
/// Partial: RF chain j drives the contiguous block of N_t / N_RF antennas
/// starting at j * N_t / N_RF.
/// Dynamic: L phase shifters split evenly across chains (L / N_RF each); each
/// phase shifter is switched onto one antenna, chosen per projection.
struct ArchitectureSpec {
  ConnectionKind kind = ConnectionKind::Full;
  int n_antennas = 1;
  int n_rf = 1;
  int n_phase_shifters = 0;  // Dynamic only

  static ArchitectureSpec full(int n_antennas, int n_rf) {
    return {ConnectionKind::Full, n_antennas, n_rf, n_antennas * n_rf};
  }
  static ArchitectureSpec partial(int n_antennas, int n_rf) {
    return {ConnectionKind::Partial, n_antennas, n_rf, n_antennas};
  }
  static ArchitectureSpec dynamic(int n_antennas, int n_rf, int n_phase_shifters) {
    return {ConnectionKind::Dynamic, n_antennas, n_rf, n_phase_shifters};
  }

  void validate() const {
    if (n_antennas < 1 || n_rf < 1) throw DomainError("architecture: counts must be >= 1");
    if (n_rf > n_antennas) throw DomainError("architecture: n_rf must be <= n_antennas");
    if (kind == ConnectionKind::Partial && n_antennas % n_rf != 0)
      throw DomainError("partial connection requires n_rf to divide n_antennas");
    if (kind == ConnectionKind::Dynamic) {
      if (n_phase_shifters < n_rf) throw DomainError("dynamic connection requires L >= n_rf");
      if (n_phase_shifters % n_rf != 0)
        throw DomainError("dynamic connection requires n_rf to divide L");
      if (n_phase_shifters / n_rf > n_antennas)
        throw DomainError("dynamic connection: per-chain budget exceeds n_antennas");
    }
  }

  int budget_per_chain() const {
    switch (kind) {
      case ConnectionKind::Full: return n_antennas;
      case ConnectionKind::Partial: return n_antennas / n_rf;
      case ConnectionKind::Dynamic: return n_phase_shifters / n_rf;
    }
    return 0;
  }

  int phase_shifter_count() const {
    switch (kind) {
      case ConnectionKind::Full: return n_antennas * n_rf;
      case ConnectionKind::Partial: return n_antennas;
      case ConnectionKind::Dynamic: return n_phase_shifters;
    }
    return 0;
  }

  // Fixed support for Full and Partial. Dynamic has no fixed support.
  bool on_fixed_support(int antenna, int chain) const {
    if (kind == ConnectionKind::Partial) return antenna / budget_per_chain() == chain;
    return true;
  }

  std::string describe() const {
    std::ostringstream os;
    os << to_string(kind) << "(nt=" << n_antennas << ",nrf=" << n_rf;
    if (kind == ConnectionKind::Dynamic) os << ",L=" << n_phase_shifters;
    os << ")";
    return os.str();
  }
};

struct AnalogPrecoder {
  MatrixXcd matrix;
  ArchitectureSpec spec;
};

namespace detail {
inline cplx unit_phase(cplx z) {
  const double m = std::abs(z);
  return m == 0.0 ? cplx(1.0, 0.0) : z / m;
}
}  // namespace detail

/// Nearest feasible analog precoder to X.
///
/// Full and Partial keep only the phase of X on the allowed support
/// (angle(0) := 0). Dynamic re-selects each chain's support as the
/// budget_per_chain() antennas with the largest |X| (ties to the lower
/// index) and phase-projects on it. For all three kinds this maximizes
/// Re tr(F^H X) over the feasible set, whose Frobenius norm is constant.
inline AnalogPrecoder project_analog(const MatrixXcd& x, const ArchitectureSpec& spec) {
  spec.validate();
  if (x.rows() != spec.n_antennas || x.cols() != spec.n_rf)
    throw DomainError("project_analog: shape mismatch");
  MatrixXcd f = MatrixXcd::Zero(x.rows(), x.cols());
  if (spec.kind != ConnectionKind::Dynamic) {
    for (int j = 0; j < spec.n_rf; ++j)
      for (int i = 0; i < spec.n_antennas; ++i)
        if (spec.on_fixed_support(i, j)) f(i, j) = detail::unit_phase(x(i, j));
  } else {
    const int budget = spec.budget_per_chain();
    std::vector<int> order(static_cast<std::size_t>(spec.n_antennas));
    for (int j = 0; j < spec.n_rf; ++j) {
      std::iota(order.begin(), order.end(), 0);
      std::stable_sort(order.begin(), order.end(),
                       [&](int a, int b) { return std::abs(x(a, j)) > std::abs(x(b, j)); });
      for (int t = 0; t < budget; ++t) {
        const int i = order[static_cast<std::size_t>(t)];
        f(i, j) = detail::unit_phase(x(i, j));
      }
    }
  }
  return {std::move(f), spec};
}

struct FeasibilityReport {
  bool feasible = true;
  std::vector<std::string> violations;
  std::optional<std::pair<int, int>> first_bad_entry;

  explicit operator bool() const { return feasible; }
};

inline FeasibilityReport feasibility_check(const AnalogPrecoder& p, double tol = 1e-9) {
  FeasibilityReport rep;
  auto fail = [&](const std::string& msg, int i, int j) {
    rep.feasible = false;
    std::ostringstream os;
    os << msg << " at (" << i << "," << j << ")";
    rep.violations.push_back(os.str());
    if (!rep.first_bad_entry) rep.first_bad_entry = std::make_pair(i, j);
  };
  try {
    p.spec.validate();
  } catch (const DomainError& e) {
    rep.feasible = false;
    rep.violations.emplace_back(e.what());
    return rep;
  }
  const MatrixXcd& f = p.matrix;
  if (f.rows() != p.spec.n_antennas || f.cols() != p.spec.n_rf) {
    rep.feasible = false;
    rep.violations.emplace_back("shape mismatch");
    return rep;
  }
  for (int j = 0; j < f.cols(); ++j) {
    int support = 0;
    for (int i = 0; i < f.rows(); ++i) {
      const double m = std::abs(f(i, j));
      if (!std::isfinite(m)) {
        fail("non-finite entry", i, j);
        continue;
      }
      const bool allowed = p.spec.kind == ConnectionKind::Dynamic || p.spec.on_fixed_support(i, j);
      if (p.spec.kind == ConnectionKind::Full || (allowed && p.spec.kind == ConnectionKind::Partial)) {
        if (std::abs(m - 1.0) > tol) fail("entry modulus " + std::to_string(m) + " != 1", i, j);
      } else if (!allowed) {
        if (m > tol) fail("nonzero entry off the connection support", i, j);
      } else {  // dynamic
        if (m > tol) {
          ++support;
          if (std::abs(m - 1.0) > tol) fail("entry modulus " + std::to_string(m) + " != 1", i, j);
        }
      }
    }
    if (p.spec.kind == ConnectionKind::Dynamic && support != p.spec.budget_per_chain()) {
      rep.feasible = false;
      rep.violations.push_back("chain " + std::to_string(j) + " uses " + std::to_string(support) +
                               " phase shifters, budget " + std::to_string(p.spec.budget_per_chain()));
    }
  }
  return rep;
}

/// Uniform random phases on an allowed support. For Dynamic the support of
/// each chain is a uniformly random subset of budget_per_chain() antennas.
inline AnalogPrecoder random_feasible(const ArchitectureSpec& spec, std::uint64_t seed) {
  spec.validate();
  Rng rng(seed);
  MatrixXcd x(spec.n_antennas, spec.n_rf);
  std::uniform_real_distribution<double> mag(0.5, 1.5);
  for (int j = 0; j < spec.n_rf; ++j)
    for (int i = 0; i < spec.n_antennas; ++i) {
      const double phase = uniform_phase(rng);
      // random magnitudes only steer the Dynamic support selection
      x(i, j) = std::polar(spec.kind == ConnectionKind::Dynamic ? mag(rng) : 1.0, phase);
    }
  return project_analog(x, spec);
}

/// Switch network G (N_t x L) of a Dynamic precoder: column l is the antenna
/// indicator of phase shifter l, shifters numbered chain by chain.
inline Eigen::MatrixXi switch_map(const AnalogPrecoder& p) {
  if (p.spec.kind != ConnectionKind::Dynamic) throw DomainError("switch_map: dynamic connection only");
  Eigen::MatrixXi g = Eigen::MatrixXi::Zero(p.spec.n_antennas, p.spec.n_phase_shifters);
  int l = 0;
  for (int j = 0; j < p.spec.n_rf; ++j)
    for (int i = 0; i < p.spec.n_antennas; ++i)
      if (std::abs(p.matrix(i, j)) > 0.5 && l < p.spec.n_phase_shifters) g(i, l++) = 1;
  return g;
}

}  // namespace dfrc

#endif  // DFRC_ARCHITECTURE_HPP
