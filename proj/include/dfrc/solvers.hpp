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

#ifndef DFRC_SOLVERS_HPP
#define DFRC_SOLVERS_HPP

#include "dfrc/architecture.hpp"
#include "dfrc/metrics.hpp"
#include "dfrc/objective.hpp"
#include "dfrc/scalarize.hpp"

#include <Eigen/QR>
#include <Eigen/SVD>

#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace dfrc {

struct SolverConfig {
  int max_iterations = 300;
  double primal_tolerance = 1e-3;  // relative to sqrt(P/K)
  double dual_tolerance = 1e-3;
  double admm_penalty = 50.0;      // rho_0, dimensionless
  double penalty_growth = 1.05;
  double penalty_cap = 1e3;        // rho never exceeds penalty_cap * rho_0
  double ridge = 1e-12;
  std::uint64_t seed = 1;
  int inner_iterations = 4;        // descent steps per auxiliary block update
  int analog_mm_steps = 2;         // majorize-minimize steps per analog update
  int factorization_iterations = 500;
  int refine_rounds = 30;          // cap on post-consensus digital/analog refinement rounds
  double refine_tolerance = 1e-4;  // stop refining once a round gains less, relative
  int refine_iterations = 30;      // descent steps per refinement block
  double objective_tolerance = 1e-8;
  // Penalty weights for epsilon-constraint and min-max continuation.
  std::vector<double> constraint_penalties = {1e1, 1e2, 1e3, 1e4};
  double constraint_tolerance = 1e-3;  // normalized units, final feasibility check

  void validate() const {
    if (max_iterations < 1) throw DomainError("max_iterations must be >= 1");
    if (!(primal_tolerance > 0) || !(dual_tolerance > 0)) throw DomainError("tolerances must be > 0");
    if (!(admm_penalty > 0)) throw DomainError("ADMM penalty must be > 0");
    if (!(penalty_growth >= 1)) throw DomainError("penalty growth must be >= 1");
    if (constraint_penalties.empty()) throw DomainError("need at least one constraint penalty");
    if (refine_rounds < 0 || !(refine_tolerance >= 0)) throw DomainError("refinement settings must be >= 0");
  }
};

enum class SolverStatus { Converged, MaxIter, Infeasible };

inline const char* to_string(SolverStatus s) {
  switch (s) {
    case SolverStatus::Converged: return "converged";
    case SolverStatus::MaxIter: return "max_iter";
    case SolverStatus::Infeasible: return "infeasible";
  }
  return "?";
}

enum class Method { FullyDigital, TwoStage, Admm };

inline const char* to_string(Method m) {
  switch (m) {
    case Method::FullyDigital: return "fully_digital";
    case Method::TwoStage: return "two_stage";
    case Method::Admm: return "admm";
  }
  return "?";
}

struct ResidualRecord {
  int iteration = 0;
  double primal = 0;
  double dual = 0;
  double objective = 0;
};

/// Everything a design run needs besides the method and architecture.
struct DesignProblem {
  const ChannelSet* channel = nullptr;
  const RadarScene* scene = nullptr;
  double radar_noise = 1.0;
  double total_power = 1.0;
  ObjectiveSpec objective{};
  ScalarizationSpec scalarization = WeightedSum{};
  int n_rx_rf = 1;
};

struct DesignResult {
  std::string method;
  TransmitSet transmit;                 // X_k, always populated
  std::optional<HybridPrecoder> hybrid;  // absent for fully digital designs
  HybridCombiner combiners;
  std::vector<double> objective_trace;
  std::vector<ResidualRecord> residuals;   // ADMM only
  std::vector<double> factorization_trace;  // two-stage only
  SolverStatus status = SolverStatus::MaxIter;
  std::uint64_t seed = 0;
  SolverConfig config;
  std::string scalarization;
  MetricPair raw;         // raw objectives at the returned point
  MetricPair normalized;
  double objective = 0;   // unpenalized formulation value
  double level = 0;       // min-max eta (max of included normalized objectives)
  std::string diagnostic;
};

// ---- Small building blocks ------------------------------------------------

/// Per-user top right singular vectors, stacked and power-normalized.
inline TransmitSet matched_precoder(const ChannelSet& ch, int n_streams, double total_power) {
  const int d = n_streams / ch.n_users;
  TransmitSet x;
  for (int k = 0; k < ch.n_subcarriers; ++k) {
    const Eigen::Index nt = ch.at(k, 0).cols();
    MatrixXcd xk(nt, n_streams);
    for (int u = 0; u < ch.n_users; ++u) {
      Eigen::JacobiSVD<MatrixXcd> svd(ch.at(k, u), Eigen::ComputeFullV);
      xk.middleCols(u * d, d) = svd.matrixV().leftCols(d);
    }
    x.push_back(std::move(xk));
  }
  normalize_power(x, total_power);
  return x;
}

/// argmin_D ||V - F D||^2 + ridge ||D||^2
inline MatrixXcd ls_digital(const MatrixXcd& f, const MatrixXcd& v, double ridge) {
  const MatrixXcd gram = f.adjoint() * f + ridge * MatrixXcd::Identity(f.cols(), f.cols());
  return gram.ldlt().solve(f.adjoint() * v);
}

/// One majorize-minimize step on sum_k ||V_k - F D_k||^2 over the feasible
/// set; the surrogate uses lambda_max(sum_k D_k D_k^H) so the objective
/// cannot increase.
inline AnalogPrecoder analog_mm_step(const AnalogPrecoder& f, std::span<const MatrixXcd> v,
                                     std::span<const MatrixXcd> d) {
  const Eigen::Index nrf = f.matrix.cols();
  MatrixXcd cross = MatrixXcd::Zero(f.matrix.rows(), nrf);
  MatrixXcd b = MatrixXcd::Zero(nrf, nrf);
  for (std::size_t k = 0; k < v.size(); ++k) {
    cross.noalias() += v[k] * d[k].adjoint();
    b.noalias() += d[k] * d[k].adjoint();
  }
  Eigen::SelfAdjointEigenSolver<MatrixXcd> es(b, Eigen::EigenvaluesOnly);
  const double lambda = es.eigenvalues().maxCoeff();
  const MatrixXcd m = cross + f.matrix * (lambda * MatrixXcd::Identity(nrf, nrf) - b);
  return project_analog(m, f.spec);
}

inline double factorization_residual(std::span<const MatrixXcd> target, const MatrixXcd& f,
                                     std::span<const MatrixXcd> d) {
  double r = 0;
  for (std::size_t k = 0; k < target.size(); ++k) r += (target[k] - f * d[k]).squaredNorm();
  return r;
}

namespace detail {

inline double real_inner(std::span<const MatrixXcd> a, std::span<const MatrixXcd> b) {
  double s = 0;
  for (std::size_t k = 0; k < a.size(); ++k) s += (a[k].array().conjugate() * b[k].array()).real().sum();
  return s;
}

struct DescentOutcome {
  int iterations = 0;
  bool converged = false;
  double value = 0;
};

/// Riemannian gradient descent on a product of spheres ||x_k||^2 = radius2
/// with Armijo backtracking. `eval(x, grad*)` returns the objective and its
/// Wirtinger gradient. Accepted steps never increase the objective.
template <class Eval>
DescentOutcome sphere_descent(Eval&& eval, TransmitSet& x, double radius2, int max_iterations, double rel_tol,
                              double& step, std::vector<double>* trace, int iteration_offset = 0) {
  DescentOutcome out;
  TransmitSet grad;
  double value = eval(x, &grad);
  if (!std::isfinite(value)) throw SolverError("non-finite objective", iteration_offset);
  if (trace) trace->push_back(value);
  const double radius = std::sqrt(radius2);
  int stalls = 0;
  TransmitSet trial(x.size());
  for (int it = 0; it < max_iterations; ++it) {
    // tangent projection
    for (std::size_t k = 0; k < x.size(); ++k) {
      const double n2 = x[k].squaredNorm();
      if (n2 > 0) grad[k] -= ((x[k].array().conjugate() * grad[k].array()).real().sum() / n2) * x[k];
    }
    double g2 = 0;
    for (const auto& g : grad) g2 += g.squaredNorm();
    if (g2 <= 1e-30) {
      out.converged = true;
      break;
    }
    if (!(step > 0)) step = 0.1 * radius * std::sqrt(static_cast<double>(x.size())) / std::sqrt(g2);
    bool accepted = false;
    double new_value = value;
    for (int bt = 0; bt < 40; ++bt) {
      for (std::size_t k = 0; k < x.size(); ++k) {
        trial[k] = x[k] - step * grad[k];
        const double n = trial[k].norm();
        if (n > 0) trial[k] *= radius / n;
      }
      new_value = eval(trial, nullptr);
      if (std::isfinite(new_value) && new_value <= value - 1e-4 * step * 2.0 * g2) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    ++out.iterations;
    if (!accepted) {
      out.converged = true;
      break;
    }
    const double decrease = value - new_value;
    std::swap(x, trial);
    value = eval(x, &grad);
    if (!std::isfinite(value)) throw SolverError("non-finite objective", iteration_offset + it);
    if (trace) trace->push_back(value);
    step *= 2.0;
    stalls = decrease <= rel_tol * std::max(std::abs(value), 1e-6) ? stalls + 1 : 0;
    if (stalls >= 3) {
      out.converged = true;
      break;
    }
  }
  out.value = value;
  return out;
}

inline void finalize_result(DesignResult& res, const ScalarizedObjective& obj, const DesignProblem& pb,
                            double mu) {
  const auto ev = obj.evaluate(res.transmit, mu);
  res.raw = ev.raw;
  res.normalized = ev.normalized;
  res.objective = formulation_value(pb.scalarization, ev.normalized);
  res.level = 0;
  if (const auto* mm = std::get_if<MinMax>(&pb.scalarization)) {
    double lvl = -std::numeric_limits<double>::infinity();
    if (mm->radar) lvl = std::max(lvl, ev.normalized.radar);
    if (mm->comm) lvl = std::max(lvl, ev.normalized.comm);
    res.level = std::max(lvl, ev.scalar.level);
  }
  if (const auto* eps = std::get_if<EpsilonConstraint>(&pb.scalarization)) {
    const double secondary = eps->primary == ObjectiveId::Radar ? ev.normalized.comm : ev.normalized.radar;
    if (secondary > eps->epsilon + res.config.constraint_tolerance) {
      res.status = SolverStatus::Infeasible;
      res.diagnostic = "constraint violated by " + std::to_string(secondary - eps->epsilon);
    }
  }
  res.scalarization = describe(pb.scalarization);
}

inline std::vector<double> penalty_schedule(const DesignProblem& pb, const SolverConfig& cfg) {
  if (is_weighted_sum(pb.scalarization)) return {1.0};
  return cfg.constraint_penalties;
}

inline void check_problem(const DesignProblem& pb) {
  if (!pb.channel || !pb.scene) throw DomainError("design problem needs a channel and a scene");
  if (!(pb.total_power > 0)) throw DomainError("total power must be > 0");
  validate(pb.scalarization);
  pb.objective.validate();
}

}  // namespace detail

/// Descent on the digital blocks for a fixed analog precoder, keeping
/// ||F_RF F_D[k]||^2 = P / K. With F_RF = Q R the constraint is a sphere in
/// Z_k = R F_D[k].
inline void refine_digital(const ScalarizedObjective& obj, double mu, HybridPrecoder& hp, int iterations,
                           double rel_tol, std::vector<double>* trace) {
  const Eigen::HouseholderQR<MatrixXcd> qr(hp.analog.matrix);
  const Eigen::Index nrf = hp.analog.matrix.cols();
  const MatrixXcd q = qr.householderQ() * MatrixXcd::Identity(hp.analog.matrix.rows(), nrf);
  const MatrixXcd r = q.adjoint() * hp.analog.matrix;
  if (r.diagonal().cwiseAbs().minCoeff() <= 1e-10 * r.diagonal().cwiseAbs().maxCoeff()) return;
  TransmitSet z;
  for (const auto& d : hp.digital) z.push_back(r * d);
  TransmitSet x(z.size());
  auto eval = [&](const TransmitSet& zz, TransmitSet* g) {
    for (std::size_t k = 0; k < zz.size(); ++k) x[k] = q * zz[k];
    const double v = obj.evaluate(x, mu, g).scalar.value;
    if (g)
      for (auto& gk : *g) gk = q.adjoint() * gk;
    return v;
  };
  double step = 0;
  detail::sphere_descent(eval, z, hp.total_power / static_cast<double>(z.size()), iterations, rel_tol, step, trace);
  const auto tri = r.triangularView<Eigen::Upper>();
  for (std::size_t k = 0; k < z.size(); ++k) hp.digital[k] = tri.solve(z[k]);
  hp = make_hybrid(hp.analog, hp.digital, hp.total_power);
}

/// Phase descent on the analog precoder over its current support with the
/// digital blocks fixed; each carrier is rescaled to P / K.
inline void refine_analog(const ScalarizedObjective& obj, double mu, HybridPrecoder& hp, int iterations,
                          double rel_tol, std::vector<double>* trace) {
  const double per_carrier = hp.total_power / static_cast<double>(hp.digital.size());
  const Eigen::MatrixXd support = hp.analog.matrix.cwiseAbs().unaryExpr([](double m) { return m > 0.5 ? 1.0 : 0.0; });
  auto build = [&](const MatrixXcd& f, TransmitSet& x, std::vector<double>& norms) {
    x.resize(hp.digital.size());
    norms.resize(hp.digital.size());
    for (std::size_t k = 0; k < hp.digital.size(); ++k) {
      x[k] = f * hp.digital[k];
      norms[k] = x[k].norm();
      if (norms[k] > 0) x[k] *= std::sqrt(per_carrier) / norms[k];
    }
  };
  TransmitSet x, g;
  std::vector<double> norms;
  auto eval = [&](const MatrixXcd& f, MatrixXcd* grad) {
    build(f, x, norms);
    const double v = obj.evaluate(x, mu, grad ? &g : nullptr).scalar.value;
    if (grad) {
      *grad = MatrixXcd::Zero(f.rows(), f.cols());
      for (std::size_t k = 0; k < x.size(); ++k) {
        if (norms[k] <= 0) continue;
        const double n2 = x[k].squaredNorm();
        MatrixXcd gt = g[k] - ((x[k].array().conjugate() * g[k].array()).real().sum() / n2) * x[k];
        *grad += (std::sqrt(per_carrier) / norms[k]) * gt * hp.digital[k].adjoint();
      }
      // tangent space of the unit circle at each active entry
      for (Eigen::Index j = 0; j < f.cols(); ++j)
        for (Eigen::Index i = 0; i < f.rows(); ++i) {
          const cplx fi = f(i, j);
          (*grad)(i, j) = support(i, j) > 0 ? (*grad)(i, j) - (std::conj(fi) * (*grad)(i, j)).real() * fi : cplx(0.0);
        }
    }
    return v;
  };
  MatrixXcd f = hp.analog.matrix;
  MatrixXcd grad, trial;
  double value = eval(f, &grad);
  double step = 0;
  int stalls = 0;
  for (int it = 0; it < iterations; ++it) {
    const double g2 = grad.squaredNorm();
    if (g2 <= 1e-30) break;
    if (!(step > 0)) step = 0.1 / std::sqrt(g2 / static_cast<double>(support.sum()));
    bool accepted = false;
    double nv = value;
    for (int bt = 0; bt < 40; ++bt) {
      trial = f - step * grad;
      for (Eigen::Index j = 0; j < f.cols(); ++j)
        for (Eigen::Index i = 0; i < f.rows(); ++i) trial(i, j) = support(i, j) > 0 ? detail::unit_phase(trial(i, j)) : cplx(0.0);
      nv = eval(trial, nullptr);
      if (std::isfinite(nv) && nv <= value - 1e-4 * step * 2.0 * g2) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;
    const double decrease = value - nv;
    f = trial;
    value = eval(f, &grad);
    if (trace) trace->push_back(value);
    step *= 2.0;
    stalls = decrease <= rel_tol * std::max(std::abs(value), 1e-6) ? stalls + 1 : 0;
    if (stalls >= 3) break;
  }
  hp = make_hybrid(AnalogPrecoder{f, hp.analog.spec}, hp.digital, hp.total_power);
}

/// Per-user hybrid combiners: the analog part phase-projects the dominant
/// left subspace of the user's stacked own-stream effective channels, the
/// digital part is the per-carrier Wiener solution given the analog part.
inline HybridCombiner design_combiners(const ChannelSet& ch, std::span<const MatrixXcd> x, int n_rx_rf,
                                       double ridge = 1e-12) {
  check_comm_dims(ch, x);
  const int d = streams_per_user(ch, x.front());
  const int nr = static_cast<int>(ch.at(0, 0).rows());
  if (n_rx_rf < d || n_rx_rf > nr) throw DomainError("design_combiners: need streams <= n_rx_rf <= n_rx");
  HybridCombiner c;
  c.n_users = ch.n_users;
  c.analog.resize(static_cast<std::size_t>(ch.n_users));
  c.digital.resize(static_cast<std::size_t>(ch.n_users * ch.n_subcarriers));
  const auto rx_spec = ArchitectureSpec::full(nr, n_rx_rf);
  for (int u = 0; u < ch.n_users; ++u) {
    MatrixXcd stacked(nr, d * ch.n_subcarriers);
    for (int k = 0; k < ch.n_subcarriers; ++k)
      stacked.middleCols(k * d, d) = ch.at(k, u) * x[static_cast<std::size_t>(k)].middleCols(u * d, d);
    Eigen::JacobiSVD<MatrixXcd> svd(stacked, Eigen::ComputeFullU);
    c.analog[static_cast<std::size_t>(u)] = project_analog(svd.matrixU().leftCols(n_rx_rf), rx_spec).matrix;
  }
  for (int k = 0; k < ch.n_subcarriers; ++k)
    for (int u = 0; u < ch.n_users; ++u) {
      const MatrixXcd& w_rf = c.analog[static_cast<std::size_t>(u)];
      const MatrixXcd hx = ch.at(k, u) * x[static_cast<std::size_t>(k)];
      const MatrixXcd cov = hx * hx.adjoint() + ch.noise_variance * MatrixXcd::Identity(nr, nr);
      const MatrixXcd a = w_rf.adjoint() * cov * w_rf + ridge * MatrixXcd::Identity(n_rx_rf, n_rx_rf);
      c.digital[static_cast<std::size_t>(k * ch.n_users + u)] = a.ldlt().solve(w_rf.adjoint() * hx.middleCols(u * d, d));
    }
  return c;
}

/// Fully digital design: block-coordinate descent where the combiner block
/// is the closed-form MMSE receiver (folded into the objective) and the
/// precoder block takes Armijo projected-gradient steps on the per-carrier
/// power spheres.
inline DesignResult design_fully_digital(const DesignProblem& pb, const SolverConfig& cfg,
                                         const TransmitSet* init) {
  detail::check_problem(pb);
  cfg.validate();
  const ChannelSet& ch = *pb.channel;
  const ObjectiveModel model(ch, *pb.scene, pb.radar_noise, pb.objective.radar_metric, pb.objective.comm_metric);
  const ScalarizedObjective obj(model, pb.objective, pb.scalarization);
  if (!init || init->size() != static_cast<std::size_t>(ch.n_subcarriers))
    throw DomainError("design_fully_digital: need one initial matrix per carrier");
  DesignResult res;
  res.method = to_string(Method::FullyDigital);
  res.config = cfg;
  res.seed = cfg.seed;
  res.transmit = *init;
  normalize_power(res.transmit, pb.total_power);
  const double radius2 = pb.total_power / ch.n_subcarriers;
  bool converged = true;
  double mu = 1.0;
  for (double m : detail::penalty_schedule(pb, cfg)) {
    mu = m;
    double step = 0;
    auto eval = [&](const TransmitSet& x, TransmitSet* g) { return obj.evaluate(x, mu, g).scalar.value; };
    const auto outcome = detail::sphere_descent(eval, res.transmit, radius2, cfg.max_iterations,
                                                cfg.objective_tolerance, step, &res.objective_trace);
    converged = outcome.converged;
  }
  res.status = converged ? SolverStatus::Converged : SolverStatus::MaxIter;
  res.combiners = design_combiners(ch, res.transmit, pb.n_rx_rf);
  detail::finalize_result(res, obj, pb, mu);
  return res;
}

/// Overload for callers that know the stream count but have no warm start.
inline DesignResult design_fully_digital(const DesignProblem& pb, const SolverConfig& cfg, int n_streams) {
  const TransmitSet init = matched_precoder(*pb.channel, n_streams, pb.total_power);
  return design_fully_digital(pb, cfg, &init);
}

struct Factorization {
  HybridPrecoder precoder;
  std::vector<double> residual_trace;  // sum_k ||F*_k - F_RF F_D[k]||^2 per iteration
  double residual = 0;                 // before the final power renormalization
  bool constructive = false;
};

/// Exact split for Full connection when 2 * rank([F*_1 .. F*_K]) <= N_RF:
/// each basis entry b is written as c (e^{j phi1} + e^{j phi2}) with c equal
/// to half the column's peak modulus.
inline std::optional<Factorization> constructive_split(std::span<const MatrixXcd> fstar,
                                                       const ArchitectureSpec& spec, double total_power) {
  if (spec.kind != ConnectionKind::Full) return std::nullopt;
  const Eigen::Index nt = fstar.front().rows();
  const Eigen::Index ns = fstar.front().cols();
  MatrixXcd stacked(nt, ns * static_cast<Eigen::Index>(fstar.size()));
  for (std::size_t k = 0; k < fstar.size(); ++k) stacked.middleCols(static_cast<Eigen::Index>(k) * ns, ns) = fstar[k];
  // Screen with the Gram eigenvalues, accurate to eps * sigma_1^2: a
  // singular value above 1e-6 * sigma_1 at position n_rf / 2 + 1 rules out
  // the rank test below, which uses 1e-10.
  const Eigen::Index keep = spec.n_rf / 2;
  if (keep < std::min(stacked.rows(), stacked.cols())) {
    const MatrixXcd gram =
        stacked.cols() <= stacked.rows() ? MatrixXcd(stacked.adjoint() * stacked) : MatrixXcd(stacked * stacked.adjoint());
    const Eigen::SelfAdjointEigenSolver<MatrixXcd> es(gram, Eigen::EigenvaluesOnly);
    const VectorXd& ev = es.eigenvalues();  // ascending
    if (ev(ev.size() - 1 - keep) > 1e-12 * ev(ev.size() - 1)) return std::nullopt;
  }
  Eigen::JacobiSVD<MatrixXcd> svd(stacked, Eigen::ComputeThinU);
  const VectorXd& sv = svd.singularValues();
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > 1e-10 * std::max(sv(0), 1e-300)) ++rank;
  if (2 * rank > spec.n_rf) return std::nullopt;
  const MatrixXcd basis = svd.matrixU().leftCols(rank);
  MatrixXcd f = MatrixXcd::Ones(nt, spec.n_rf);
  MatrixXcd t = MatrixXcd::Zero(spec.n_rf, rank);
  for (Eigen::Index j = 0; j < rank; ++j) {
    const double c = 0.5 * basis.col(j).cwiseAbs().maxCoeff();
    for (Eigen::Index i = 0; i < nt; ++i) {
      const cplx b = basis(i, j);
      const double ratio = c > 0 ? std::clamp(std::abs(b) / (2.0 * c), 0.0, 1.0) : 0.0;
      const double spread = std::acos(ratio);
      const double phase = std::arg(b);
      f(i, 2 * j) = std::polar(1.0, phase + spread);
      f(i, 2 * j + 1) = std::polar(1.0, phase - spread);
    }
    t(2 * j, j) = c;
    t(2 * j + 1, j) = c;
  }
  Factorization out;
  out.constructive = true;
  std::vector<MatrixXcd> digital;
  for (const auto& fk : fstar) digital.push_back(t * (basis.adjoint() * fk));
  out.residual = factorization_residual(fstar, f, digital);
  out.residual_trace.push_back(out.residual);
  out.precoder = HybridPrecoder{AnalogPrecoder{f, spec}, std::move(digital), total_power};
  return out;
}

/// Two-stage factorization of a fully digital design: alternate ridge
/// least squares for the digital blocks and a majorize-minimize analog step.
/// The residual trace is nonincreasing; an iterate that would increase it
/// is discarded and the loop stops.
inline Factorization factorize_two_stage(std::span<const MatrixXcd> fstar, const ArchitectureSpec& spec,
                                         const SolverConfig& cfg, double total_power) {
  spec.validate();
  for (const auto& fk : fstar)
    if (!fk.allFinite()) throw DomainError("factorize_two_stage: non-finite target");
  Factorization out;
  AnalogPrecoder f;
  std::vector<MatrixXcd> d(fstar.size());
  if (auto exact = constructive_split(fstar, spec, total_power)) {
    out = std::move(*exact);
    f = out.precoder.analog;
    d = out.precoder.digital;
  } else {
    f = random_feasible(spec, cfg.seed);
    for (std::size_t k = 0; k < fstar.size(); ++k) d[k] = ls_digital(f.matrix, fstar[k], cfg.ridge);
    out.residual_trace.push_back(factorization_residual(fstar, f.matrix, d));
  }
  double current = out.residual_trace.back();
  std::vector<MatrixXcd> d_next(fstar.size());
  for (int it = 0; it < cfg.factorization_iterations; ++it) {
    const AnalogPrecoder f_next = analog_mm_step(f, fstar, d);
    for (std::size_t k = 0; k < fstar.size(); ++k) d_next[k] = ls_digital(f_next.matrix, fstar[k], cfg.ridge);
    const double r = factorization_residual(fstar, f_next.matrix, d_next);
    if (!(r <= current)) break;
    const bool stalled = current - r <= 1e-10 * std::max(current, 1e-300);
    f = f_next;
    std::swap(d, d_next);
    current = r;
    out.residual_trace.push_back(r);
    if (stalled) break;
  }
  out.residual = current;
  out.precoder = make_hybrid(f, d, total_power);
  return out;
}

/// Direct hybrid design by consensus ADMM. One auxiliary copy
/// Y_{k,u} ~ F_RF F_D[k] per (carrier, user) carries that pair's share of
/// the objective; the shared analog and digital blocks are fitted to the
/// dual-adjusted average of the copies.
inline DesignResult design_consensus_admm(const DesignProblem& pb, const ArchitectureSpec& spec,
                                          const SolverConfig& cfg, int n_streams) {
  detail::check_problem(pb);
  cfg.validate();
  spec.validate();
  const ChannelSet& ch = *pb.channel;
  const int k_count = ch.n_subcarriers;
  const int u_count = ch.n_users;
  const ObjectiveModel model(ch, *pb.scene, pb.radar_noise, pb.objective.radar_metric, pb.objective.comm_metric);
  const ScalarizedObjective obj(model, pb.objective, pb.scalarization);

  DesignResult res;
  res.method = to_string(Method::Admm);
  res.config = cfg;
  res.seed = cfg.seed;

  const double per_carrier = pb.total_power / k_count;
  const double scale = std::sqrt(per_carrier);
  const auto schedule = detail::penalty_schedule(pb, cfg);

  AnalogPrecoder f = random_feasible(spec, cfg.seed);
  const TransmitSet matched = matched_precoder(ch, n_streams, pb.total_power);
  std::vector<MatrixXcd> d(static_cast<std::size_t>(k_count));
  for (int k = 0; k < k_count; ++k) d[static_cast<std::size_t>(k)] = ls_digital(f.matrix, matched[static_cast<std::size_t>(k)], cfg.ridge);
  HybridPrecoder hp = make_hybrid(f, d, pb.total_power);
  d = hp.digital;
  TransmitSet x = hp.transmit_matrices();

  const auto idx = [u_count](int k, int u) { return static_cast<std::size_t>(k * u_count + u); };
  std::vector<MatrixXcd> y(static_cast<std::size_t>(k_count * u_count));
  std::vector<MatrixXcd> lam(y.size());
  std::vector<double> steps(y.size(), 0.0);
  for (int k = 0; k < k_count; ++k)
    for (int u = 0; u < u_count; ++u) {
      y[idx(k, u)] = x[static_cast<std::size_t>(k)];
      lam[idx(k, u)] = MatrixXcd::Zero(x[static_cast<std::size_t>(k)].rows(), n_streams);
    }

  const double rho0 = cfg.admm_penalty;
  double rho = rho0;
  const double rho_cap = cfg.penalty_cap * rho0;
  const bool weighted = is_weighted_sum(pb.scalarization);
  // Penalty continuation for constrained formulations: geometric ramp that
  // reaches the last weight after 60% of the iteration budget.
  const double mu_first = schedule.front();
  const double mu_last = schedule.back();
  const double ramp = std::max(1.0, 0.6 * cfg.max_iterations);
  auto mu_at = [&](int it) {
    if (weighted) return 1.0;
    return std::min(mu_last, mu_first * std::pow(mu_last / mu_first, std::min(1.0, it / ramp)));
  };

  double best_value = std::numeric_limits<double>::infinity();
  HybridPrecoder best = hp;
  res.status = SolverStatus::MaxIter;
  TransmitSet block(1);
  std::optional<ScalarizedObjective::Evaluation> carried;  // previous closing evaluation, same x and mu
  for (int it = 0; it < cfg.max_iterations; ++it) {
    const double mu = mu_at(it);
    const auto ev = carried ? *carried : obj.evaluate(x, mu);
    if (!std::isfinite(ev.scalar.value)) throw SolverError("non-finite objective", it);
    const double cr = ev.scalar.weight_radar / pb.objective.radar.scale;
    const double cc = ev.scalar.weight_comm / pb.objective.comm.scale;
    const double rho_eff = rho / (u_count * pb.total_power);

    // (i) auxiliary blocks
    for (int k = 0; k < k_count; ++k)
      for (int u = 0; u < u_count; ++u) {
        const MatrixXcd target = x[static_cast<std::size_t>(k)] - lam[idx(k, u)];
        auto eval = [&](const TransmitSet& v, TransmitSet* g) {
          MatrixXcd gb;
          double val = obj.block(k, u, v[0], cr, cc, g ? &gb : nullptr);
          const MatrixXcd diff = v[0] - target;
          val += 0.5 * rho_eff * diff.squaredNorm();
          if (g) {
            g->resize(1);
            (*g)[0] = gb + 0.5 * rho_eff * diff;
          }
          return val;
        };
        block[0] = y[idx(k, u)];
        detail::sphere_descent(eval, block, per_carrier, cfg.inner_iterations, 0.0, steps[idx(k, u)], nullptr, it);
        y[idx(k, u)] = block[0];
      }

    // (ii) analog consensus and (iii) digital least squares
    std::vector<MatrixXcd> v(static_cast<std::size_t>(k_count));
    for (int k = 0; k < k_count; ++k) {
      MatrixXcd acc = MatrixXcd::Zero(x[0].rows(), n_streams);
      for (int u = 0; u < u_count; ++u) acc += y[idx(k, u)] + lam[idx(k, u)];
      v[static_cast<std::size_t>(k)] = acc / u_count;
    }
    // An exactly representable target has a zero-residual split; otherwise
    // take majorize-minimize steps on the consensus fit.
    if (auto exact = constructive_split(v, spec, pb.total_power)) {
      f = exact->precoder.analog;
      d = exact->precoder.digital;
    } else {
      for (int s = 0; s < cfg.analog_mm_steps; ++s) {
        f = analog_mm_step(f, v, d);
        for (int k = 0; k < k_count; ++k) d[static_cast<std::size_t>(k)] = ls_digital(f.matrix, v[static_cast<std::size_t>(k)], cfg.ridge);
      }
    }
    hp = make_hybrid(f, d, pb.total_power);
    d = hp.digital;
    TransmitSet x_new = hp.transmit_matrices();

    // (iv) scaled dual update and residuals
    double primal = 0, dual = 0;
    for (int k = 0; k < k_count; ++k) {
      const MatrixXcd& xk = x_new[static_cast<std::size_t>(k)];
      for (int u = 0; u < u_count; ++u) {
        const MatrixXcd r = y[idx(k, u)] - xk;
        lam[idx(k, u)] += r;
        primal = std::max(primal, r.norm() / scale);
      }
      dual = std::max(dual, (xk - x[static_cast<std::size_t>(k)]).norm() / scale);
    }
    x = std::move(x_new);

    const auto ev_new = obj.evaluate(x, mu);
    if (weighted) carried = ev_new;
    res.objective_trace.push_back(ev_new.scalar.value);
    res.residuals.push_back({it, primal, dual, ev_new.scalar.value});
    const bool final_penalty = weighted || mu >= mu_last;
    if (final_penalty && ev_new.scalar.value < best_value) {
      best_value = ev_new.scalar.value;
      best = hp;
    }
    if (!final_penalty) best = hp;

    if (primal < cfg.primal_tolerance && dual < cfg.dual_tolerance && final_penalty) {
      res.status = SolverStatus::Converged;
      break;
    }
    if (it >= 100) {
      const double earlier = res.residuals[static_cast<std::size_t>(it - 50)].primal;
      if (primal > 10.0 * earlier && primal > cfg.primal_tolerance) {
        res.diagnostic = "primal residual diverging";
        break;
      }
    }
    // grow the penalty only while consensus lags behind the iterate motion
    if (rho < rho_cap && primal > dual) {
      const double g = std::min(cfg.penalty_growth, rho_cap / rho);
      rho *= g;
      for (auto& l : lam) l /= g;
    }
  }

  const double mu_final = mu_at(cfg.max_iterations);
  double before = obj.evaluate(best.transmit_matrices(), mu_final).scalar.value;
  for (int r = 0; r < cfg.refine_rounds; ++r) {
    refine_digital(obj, mu_final, best, cfg.refine_iterations, cfg.objective_tolerance, &res.objective_trace);
    refine_analog(obj, mu_final, best, cfg.refine_iterations, cfg.objective_tolerance, &res.objective_trace);
    const double after = obj.evaluate(best.transmit_matrices(), mu_final).scalar.value;
    const bool stalled = before - after <= cfg.refine_tolerance * std::max(std::abs(before), 1e-6);
    before = after;
    if (stalled) break;
  }
  if (cfg.refine_rounds > 0)
    refine_digital(obj, mu_final, best, cfg.refine_iterations, cfg.objective_tolerance, &res.objective_trace);
  res.hybrid = best;
  res.transmit = best.transmit_matrices();
  res.combiners = design_combiners(ch, res.transmit, pb.n_rx_rf);
  detail::finalize_result(res, obj, pb, mu_final);
  return res;
}

/// Dispatch. TwoStage runs the fully digital design then factorizes it; it
/// cannot carry an epsilon constraint through the factorization.
inline DesignResult solve(const DesignProblem& pb, Method method, const ArchitectureSpec& spec,
                          const SolverConfig& cfg, int n_streams) {
  detail::check_problem(pb);
  if (method == Method::TwoStage && std::holds_alternative<EpsilonConstraint>(pb.scalarization))
    throw UnsupportedError("two-stage design cannot honor an epsilon constraint");
  switch (method) {
    case Method::FullyDigital:
      return design_fully_digital(pb, cfg, n_streams);
    case Method::Admm:
      return design_consensus_admm(pb, spec, cfg, n_streams);
    case Method::TwoStage: {
      DesignResult fd = design_fully_digital(pb, cfg, n_streams);
      Factorization fac = factorize_two_stage(fd.transmit, spec, cfg, pb.total_power);
      const ObjectiveModel model(*pb.channel, *pb.scene, pb.radar_noise, pb.objective.radar_metric,
                                 pb.objective.comm_metric);
      const ScalarizedObjective obj(model, pb.objective, pb.scalarization);
      DesignResult res;
      res.method = to_string(Method::TwoStage);
      res.config = cfg;
      res.seed = cfg.seed;
      res.status = fd.status;
      res.objective_trace = std::move(fd.objective_trace);
      res.factorization_trace = std::move(fac.residual_trace);
      res.hybrid = std::move(fac.precoder);
      res.transmit = res.hybrid->transmit_matrices();
      res.combiners = design_combiners(*pb.channel, res.transmit, pb.n_rx_rf);
      detail::finalize_result(res, obj, pb, detail::penalty_schedule(pb, cfg).back());
      return res;
    }
  }
  throw DomainError("unknown method");
}

/// Utopia/nadir normalizers from two single-objective fully digital
/// pre-solves (radar only, communication only).
struct Calibration {
  ObjectiveSpec spec;
  DesignResult radar_only;
  DesignResult comm_only;
};

inline Calibration calibrate_normalizers(const DesignProblem& base, const SolverConfig& cfg, int n_streams) {
  DesignProblem pb = base;
  pb.objective.radar = Normalizer{};
  pb.objective.comm = Normalizer{};
  pb.scalarization = WeightedSum{1.0, 0.0};
  Calibration cal{pb.objective, design_fully_digital(pb, cfg, n_streams), {}};
  pb.scalarization = WeightedSum{0.0, 1.0};
  cal.comm_only = design_fully_digital(pb, cfg, n_streams);
  auto make = [](double best, double worst) {
    const double span = worst - best;
    const double floor = 1e-9 * std::max(1.0, std::abs(best));
    return Normalizer{best, span > floor ? span : floor};
  };
  cal.spec.radar = make(cal.radar_only.raw.radar, cal.comm_only.raw.radar);
  cal.spec.comm = make(cal.comm_only.raw.comm, cal.radar_only.raw.comm);
  return cal;
}

}  // namespace dfrc

#endif  // DFRC_SOLVERS_HPP
