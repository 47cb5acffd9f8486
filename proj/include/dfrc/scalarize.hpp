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

#ifndef DFRC_SCALARIZE_HPP
#define DFRC_SCALARIZE_HPP

#include "dfrc/common.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>
#include <variant>

namespace dfrc {

// Both objectives are minimized; maximized metrics enter negated.
enum class RadarMetric { Ssme, NegRadarMi };
enum class CommMetric { Mmse, NegSe };

inline const char* to_string(RadarMetric m) { return m == RadarMetric::Ssme ? "ssme" : "neg_radar_mi"; }
inline const char* to_string(CommMetric m) { return m == CommMetric::Mmse ? "mmse" : "neg_se"; }

inline RadarMetric radar_metric_from_string(const std::string& s) {
  if (s == "ssme") return RadarMetric::Ssme;
  if (s == "neg_radar_mi") return RadarMetric::NegRadarMi;
  throw DomainError("unknown radar metric: " + s);
}
inline CommMetric comm_metric_from_string(const std::string& s) {
  if (s == "mmse") return CommMetric::Mmse;
  if (s == "neg_se") return CommMetric::NegSe;
  throw DomainError("unknown communication metric: " + s);
}

// v_norm = (v - offset) / scale
struct Normalizer {
  double offset = 0.0;
  double scale = 1.0;

  double apply(double v) const { return (v - offset) / scale; }
};

struct ObjectiveSpec {
  RadarMetric radar_metric = RadarMetric::Ssme;
  CommMetric comm_metric = CommMetric::Mmse;
  Normalizer radar{};
  Normalizer comm{};

  void validate() const {
    if (!(radar.scale > 0) || !(comm.scale > 0)) throw DomainError("normalizer scale must be > 0");
  }
};

struct MetricPair {
  double radar = 0.0;
  double comm = 0.0;
};

inline MetricPair normalize_metrics(MetricPair raw, const ObjectiveSpec& spec) {
  spec.validate();
  return {spec.radar.apply(raw.radar), spec.comm.apply(raw.comm)};
}

enum class ObjectiveId { Radar, Comm };

struct WeightedSum {
  double w_radar = 0.5;
  double w_comm = 0.5;
};

/// min primary s.t. the other objective <= epsilon (normalized units).
struct EpsilonConstraint {
  ObjectiveId primary = ObjectiveId::Radar;
  double epsilon = 1e18;
};

/// min eta s.t. f_i <= eta over the included objectives.
struct MinMax {
  bool radar = true;
  bool comm = true;
};

using ScalarizationSpec = std::variant<WeightedSum, EpsilonConstraint, MinMax>;

inline void validate(const WeightedSum& w) {
  if (w.w_radar < 0 || w.w_comm < 0) throw DomainError("weighted sum: weights must be non-negative");
  if (std::abs(w.w_radar + w.w_comm - 1.0) > 1e-9) throw DomainError("weighted sum: weights must add up to 1");
}

inline void validate(const ScalarizationSpec& s) {
  std::visit(
      [](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, WeightedSum>) {
          validate(v);
        } else if constexpr (std::is_same_v<T, EpsilonConstraint>) {
          if (!std::isfinite(v.epsilon)) throw DomainError("epsilon constraint: epsilon must be finite");
        } else {
          if (!v.radar && !v.comm) throw DomainError("min-max: no objective selected");
        }
      },
      s);
}

inline std::string describe(const ScalarizationSpec& s) {
  std::ostringstream os;
  os.precision(9);
  std::visit(
      [&os](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, WeightedSum>)
          os << "weighted_sum(w_radar=" << v.w_radar << ",w_comm=" << v.w_comm << ")";
        else if constexpr (std::is_same_v<T, EpsilonConstraint>)
          os << "epsilon(primary=" << (v.primary == ObjectiveId::Radar ? "radar" : "comm") << ",eps=" << v.epsilon << ")";
        else
          os << "minmax(radar=" << v.radar << ",comm=" << v.comm << ")";
      },
      s);
  return os.str();
}

inline double weighted_sum(MetricPair normalized, const WeightedSum& w) {
  validate(w);
  return w.w_radar * normalized.radar + w.w_comm * normalized.comm;
}

/// Builds an epsilon-constrained problem. `secondary_minimum` is the best
/// normalized value the constrained objective can reach on its own; a level
/// below it cannot be met.
inline EpsilonConstraint epsilon_wrap(ObjectiveId primary, double epsilon, double secondary_minimum,
                                      double tol = 1e-9) {
  if (!std::isfinite(epsilon)) throw DomainError("epsilon_wrap: epsilon must be finite");
  if (secondary_minimum > epsilon + tol)
    throw InfeasibleError("epsilon_wrap: constraint level below the objective's own minimum",
                          secondary_minimum - epsilon);
  return {primary, epsilon};
}

inline MinMax minmax_wrap(bool radar, bool comm) {
  MinMax m{radar, comm};
  validate(ScalarizationSpec{m});
  return m;
}

/// Penalized scalar objective and the coefficients of each normalized
/// objective in its gradient. `level` is eta for min-max, otherwise 0.
struct ScalarValue {
  double value = 0.0;
  double weight_radar = 0.0;
  double weight_comm = 0.0;
  double level = 0.0;
};

namespace detail {

// min_eta eta + mu * sum_i (f_i - eta)_+^2 for one or two levels.
inline ScalarValue minmax_penalty(double f1, double f2, bool two, double mu) {
  ScalarValue out;
  double eta;
  if (!two) {
    eta = f1 - 1.0 / (2.0 * mu);
  } else {
    const double hi = std::max(f1, f2);
    const double lo = std::min(f1, f2);
    eta = hi - 1.0 / (2.0 * mu);
    if (eta < lo) eta = 0.5 * (f1 + f2) - 1.0 / (4.0 * mu);
  }
  const double e1 = std::max(0.0, f1 - eta);
  const double e2 = two ? std::max(0.0, f2 - eta) : 0.0;
  out.value = eta + mu * (e1 * e1 + e2 * e2);
  out.weight_radar = 2.0 * mu * e1;
  out.weight_comm = 2.0 * mu * e2;
  out.level = eta;
  return out;
}

}  // namespace detail

/// Scalar objective for normalized values. Weighted sums are exact; the
/// epsilon constraint and min-max enter as quadratic penalties of weight mu.
inline ScalarValue scalarize(const ScalarizationSpec& spec, MetricPair f, double mu) {
  return std::visit(
      [&](const auto& v) -> ScalarValue {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, WeightedSum>) {
          return {v.w_radar * f.radar + v.w_comm * f.comm, v.w_radar, v.w_comm, 0.0};
        } else if constexpr (std::is_same_v<T, EpsilonConstraint>) {
          const bool radar_primary = v.primary == ObjectiveId::Radar;
          const double primary = radar_primary ? f.radar : f.comm;
          const double secondary = radar_primary ? f.comm : f.radar;
          const double viol = std::max(0.0, secondary - v.epsilon);
          ScalarValue out{primary + mu * viol * viol, 0.0, 0.0, 0.0};
          (radar_primary ? out.weight_radar : out.weight_comm) = 1.0;
          (radar_primary ? out.weight_comm : out.weight_radar) = 2.0 * mu * viol;
          return out;
        } else {
          if (v.radar && v.comm) return detail::minmax_penalty(f.radar, f.comm, true, mu);
          if (v.radar) return detail::minmax_penalty(f.radar, 0.0, false, mu);
          ScalarValue s = detail::minmax_penalty(f.comm, 0.0, false, mu);
          std::swap(s.weight_radar, s.weight_comm);
          return s;
        }
      },
      spec);
}

/// Unpenalized value of the formulation at f: weighted sum, primary
/// objective, or max over the included objectives.
inline double formulation_value(const ScalarizationSpec& spec, MetricPair f) {
  return std::visit(
      [&](const auto& v) -> double {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, WeightedSum>)
          return v.w_radar * f.radar + v.w_comm * f.comm;
        else if constexpr (std::is_same_v<T, EpsilonConstraint>)
          return v.primary == ObjectiveId::Radar ? f.radar : f.comm;
        else if (v.radar && v.comm)
          return std::max(f.radar, f.comm);
        else
          return v.radar ? f.radar : f.comm;
      },
      spec);
}

inline bool is_weighted_sum(const ScalarizationSpec& s) { return std::holds_alternative<WeightedSum>(s); }

}  // namespace dfrc

#endif  // DFRC_SCALARIZE_HPP
