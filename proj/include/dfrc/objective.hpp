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

#ifndef DFRC_OBJECTIVE_HPP
#define DFRC_OBJECTIVE_HPP

#include "dfrc/metrics.hpp"
#include "dfrc/scalarize.hpp"

#include <limits>
#include <numbers>

namespace dfrc {

/// Raw design objectives as functions of the per-carrier transmit matrices.
///
/// The radar term decomposes over carriers (space-frequency spectrum
/// matching, or per-carrier radar MI) and the communication term over
/// (carrier, user) pairs with an ideal per-user MMSE receiver, so every
/// term depends on a single X_k. Gradients are Wirtinger derivatives
/// d f / d conj(X): for real f, df = 2 Re tr(G^H dX).
class ObjectiveModel {
 public:
  ObjectiveModel(const ChannelSet& channel, const RadarScene& scene, double radar_noise, RadarMetric radar,
                 CommMetric comm)
      : channel_(&channel), scene_(&scene), radar_noise_(radar_noise), radar_metric_(radar), comm_metric_(comm) {
    if (!(radar_noise > 0)) throw DomainError("radar noise variance must be > 0");
    const int nt = static_cast<int>(channel.at(0, 0).cols());
    grid_steering_ = scene.grid.steering_matrix(nt);
    targets_ = detail::target_response(scene, nt);
    desired_ = Eigen::Map<const VectorXd>(scene.desired.data(), static_cast<Eigen::Index>(scene.desired.size()));
    for (int k = 0; k < channel.n_subcarriers; ++k) {
      Eigen::Index rows = 0;
      for (int u = 0; u < channel.n_users; ++u) rows += channel.at(k, u).rows();
      MatrixXcd hs(rows, nt);
      rows = 0;
      for (int u = 0; u < channel.n_users; ++u) {
        hs.middleRows(rows, channel.at(k, u).rows()) = channel.at(k, u);
        rows += channel.at(k, u).rows();
      }
      stacked_.push_back(std::move(hs));
    }
  }

  const ChannelSet& channel() const { return *channel_; }
  const RadarScene& scene() const { return *scene_; }
  int n_users() const { return channel_->n_users; }
  int n_subcarriers() const { return channel_->n_subcarriers; }
  RadarMetric radar_metric() const { return radar_metric_; }
  CommMetric comm_metric() const { return comm_metric_; }

  /// Radar term of carrier k.
  double radar_carrier(const MatrixXcd& xk, MatrixXcd* grad) const {
    if (radar_metric_ == RadarMetric::Ssme) {
      if (desired_.size() == 0) return 0.0;
      const MatrixXcd proj = grid_steering_.transpose() * xk;  // G x N_s
      const VectorXd p = proj.rowwise().squaredNorm();
      const double dd = desired_.squaredNorm();
      const double beta = dd > 0 ? std::max(0.0, desired_.dot(p) / dd) : 1.0;
      const VectorXd e = p - beta * desired_;
      const double g = static_cast<double>(p.size());
      if (grad) *grad = (2.0 / g) * (grid_steering_.conjugate() * (e.cast<cplx>().asDiagonal() * proj));
      return e.squaredNorm() / g;
    }
    if (targets_.rows() == 0) {
      if (grad) *grad = MatrixXcd::Zero(xk.rows(), xk.cols());
      return 0.0;
    }
    const MatrixXcd t = targets_ * xk;  // Q x N_s
    const MatrixXcd m = MatrixXcd::Identity(t.rows(), t.rows()) + t * t.adjoint() / radar_noise_;
    const Eigen::LDLT<MatrixXcd> ldlt(m);
    if (grad) *grad = -(1.0 / (std::numbers::ln2 * radar_noise_)) * (targets_.adjoint() * ldlt.solve(t));
    return -detail::log2det_hpd(m);
  }

  /// Communication term of user u on carrier k.
  double comm_block(int k, int u, const MatrixXcd& xk, MatrixXcd* grad) const {
    const MatrixXcd& h = channel_->at(k, u);
    MatrixXcd inner;
    const double v = comm_terms(h.lazyProduct(xk), u, grad ? &inner : nullptr);
    if (grad) *grad = h.adjoint().lazyProduct(inner);
    return v;
  }

  /// Communication terms of all users on carrier k; one product with the
  /// stacked user channels replaces the per-user ones.
  double comm_carrier(int k, const MatrixXcd& xk, MatrixXcd* grad) const {
    const MatrixXcd& hs = stacked_[static_cast<std::size_t>(k)];
    const MatrixXcd hx = hs * xk;
    MatrixXcd inner_all, inner;
    if (grad) inner_all.resize(hs.rows(), xk.cols());
    double total = 0;
    Eigen::Index row = 0;
    for (int u = 0; u < n_users(); ++u) {
      const Eigen::Index nr = channel_->at(k, u).rows();
      total += comm_terms(hx.middleRows(row, nr), u, grad ? &inner : nullptr);
      if (grad) inner_all.middleRows(row, nr) = inner;
      row += nr;
    }
    if (grad) *grad = hs.adjoint() * inner_all;
    return total;
  }


  MetricPair raw(std::span<const MatrixXcd> x) const { return evaluate(x, nullptr, nullptr); }

  /// Totals over carriers and users, with optional gradients per carrier.
  MetricPair evaluate(std::span<const MatrixXcd> x, TransmitSet* grad_radar, TransmitSet* grad_comm) const {
    MetricPair out;
    if (grad_radar) grad_radar->assign(x.size(), MatrixXcd());
    if (grad_comm) grad_comm->assign(x.size(), MatrixXcd());
    for (int k = 0; k < n_subcarriers(); ++k) {
      const MatrixXcd& xk = x[static_cast<std::size_t>(k)];
      out.radar += radar_carrier(xk, grad_radar ? &(*grad_radar)[static_cast<std::size_t>(k)] : nullptr);
      out.comm += comm_carrier(k, xk, grad_comm ? &(*grad_comm)[static_cast<std::size_t>(k)] : nullptr);
    }
    return out;
  }

 private:
  // Value of user u's term from HX = H_{k,u} X_k; `inner` receives M with
  // gradient H_{k,u}^H M.
  double comm_terms(const MatrixXcd& hx, int u, MatrixXcd* inner) const {
    const int d = static_cast<int>(hx.cols()) / channel_->n_users;
    const Eigen::Index nr = hx.rows();
    const MatrixXcd cov = channel_->noise_variance * MatrixXcd::Identity(nr, nr) + hx.lazyProduct(hx.adjoint());
    const MatrixXcd b = hx.middleCols(u * d, d);
    if (comm_metric_ == CommMetric::Mmse) {
      const Eigen::LDLT<MatrixXcd> ldlt(cov);
      const MatrixXcd q = ldlt.solve(b);  // C^{-1} B
      const double value = static_cast<double>(d) - (b.adjoint() * q).trace().real();
      if (inner) {
        *inner = q * (q.adjoint() * hx);
        inner->middleCols(u * d, d) -= q;
      }
      return value;
    }
    // One Cholesky per covariance serves both the log-determinant and the
    // gradient solves; both covariances include the noise floor.
    const MatrixXcd cov_other = cov - b * b.adjoint();
    const Eigen::LLT<MatrixXcd> llt(cov), llt_other(cov_other);
    if (llt.info() != Eigen::Success || llt_other.info() != Eigen::Success) {
      if (inner) *inner = MatrixXcd::Zero(nr, hx.cols());
      return std::numeric_limits<double>::quiet_NaN();  // rejected by the callers' finiteness checks
    }
    auto log2det = [](const Eigen::LLT<MatrixXcd>& f) {
      double s = 0;
      for (Eigen::Index i = 0; i < f.matrixLLT().rows(); ++i) s += 2.0 * std::log2(f.matrixLLT()(i, i).real());
      return s;
    };
    const double kf = static_cast<double>(channel_->n_subcarriers);
    const double se = log2det(llt) - log2det(llt_other);
    if (inner) {
      MatrixXcd hx_other = hx;
      hx_other.middleCols(u * d, d).setZero();
      *inner = -(1.0 / (kf * std::numbers::ln2)) * (llt.solve(hx) - llt_other.solve(hx_other));
    }
    return -se / kf;
  }

  const ChannelSet* channel_;
  const RadarScene* scene_;
  double radar_noise_;
  RadarMetric radar_metric_;
  CommMetric comm_metric_;
  std::vector<MatrixXcd> stacked_;  // per carrier, user channels stacked by rows
  MatrixXcd grid_steering_;
  MatrixXcd targets_;
  VectorXd desired_;
};

/// Scalarized, normalized objective J(X) built on an ObjectiveModel.
class ScalarizedObjective {
 public:
  ScalarizedObjective(const ObjectiveModel& model, ObjectiveSpec spec, ScalarizationSpec scalarization)
      : model_(&model), spec_(spec), scalarization_(std::move(scalarization)) {
    spec_.validate();
    validate(scalarization_);
  }

  const ObjectiveModel& model() const { return *model_; }
  const ObjectiveSpec& spec() const { return spec_; }
  const ScalarizationSpec& scalarization() const { return scalarization_; }

  struct Evaluation {
    MetricPair raw;
    MetricPair normalized;
    ScalarValue scalar;
  };

  Evaluation evaluate(std::span<const MatrixXcd> x, double mu, TransmitSet* grad = nullptr) const {
    Evaluation ev;
    TransmitSet gr, gc;
    ev.raw = model_->evaluate(x, grad ? &gr : nullptr, grad ? &gc : nullptr);
    ev.normalized = normalize_metrics(ev.raw, spec_);
    ev.scalar = scalarize(scalarization_, ev.normalized, mu);
    if (grad) {
      grad->resize(x.size());
      const double cr = ev.scalar.weight_radar / spec_.radar.scale;
      const double cc = ev.scalar.weight_comm / spec_.comm.scale;
      for (std::size_t k = 0; k < x.size(); ++k) (*grad)[k] = cr * gr[k] + cc * gc[k];
    }
    return ev;
  }

  // Per-(carrier, user) share of the objective for fixed gradient
  // coefficients: cr * R_k(Y) / U + cc * C_{k,u}(Y).
  double block(int k, int u, const MatrixXcd& y, double cr, double cc, MatrixXcd* grad) const {
    MatrixXcd gr, gc;
    const double inv_u = 1.0 / model_->n_users();
    double v = 0;
    if (cr != 0) v += cr * inv_u * model_->radar_carrier(y, grad ? &gr : nullptr);
    if (cc != 0) v += cc * model_->comm_block(k, u, y, grad ? &gc : nullptr);
    if (grad) {
      *grad = MatrixXcd::Zero(y.rows(), y.cols());
      if (cr != 0) *grad += (cr * inv_u) * gr;
      if (cc != 0) *grad += cc * gc;
    }
    return v;
  }

 private:
  const ObjectiveModel* model_;
  ObjectiveSpec spec_;
  ScalarizationSpec scalarization_;
};

}  // namespace dfrc

#endif  // DFRC_OBJECTIVE_HPP
