// Copyright 2026 The epipano Authors
// SPDX-License-Identifier: Apache-2.0

#include "epipano/attention.hpp"

#include <cmath>
#include <limits>

namespace epipano {

namespace {

void validate_shapes(const AttnTensors& t, const EpipolarMaskTensor& mask) {
  const int64_t hw = mask.pixels();
  const int64_t rows_kv = static_cast<int64_t>(mask.n_frames()) * hw;
  if (t.q.rows() != hw || t.k.rows() != rows_kv || t.v.rows() != rows_kv ||
      t.q.cols() != t.k.cols() || t.k.cols() != t.v.cols() ||
      t.head_dim != t.q.cols())
    throw std::invalid_argument("attention: operand shapes do not match mask");
  if (!t.q.allFinite() || !t.k.allFinite() || !t.v.allFinite())
    throw std::invalid_argument("attention: non-finite input");
}

bool mask_bit(const EpipolarMaskTensor& mask, int64_t row, int64_t col) {
  const int64_t hw = mask.pixels();
  return mask.test(row, static_cast<int>(col / hw), col % hw);
}

}  // namespace

Eigen::MatrixXd spheric_epi_attn_weights(const AttnTensors& t,
                                         const EpipolarMaskTensor& mask,
                                         MaskSemantics mode) {
  validate_shapes(t, mask);
  const double scale = 1.0 / std::sqrt(static_cast<double>(t.head_dim));
  Eigen::MatrixXd logits = (t.q * t.k.transpose()) * scale;
  const int64_t rows = logits.rows(), cols = logits.cols();
  for (int64_t r = 0; r < rows; ++r) {
    double rowmax = -std::numeric_limits<double>::infinity();
    bool any = false;
    for (int64_t c = 0; c < cols; ++c) {
      const bool on = mask_bit(mask, r, c);
      if (mode == MaskSemantics::MultiplicativeLiteral) {
        // The literal product form: a masked logit becomes 0, not excluded.
        if (!on) logits(r, c) = 0.0;
        rowmax = std::max(rowmax, logits(r, c));
        any = true;
      } else {
        if (on) {
          rowmax = std::max(rowmax, logits(r, c));
          any = true;
        }
      }
    }
    if (!any)
      throw std::invalid_argument("attention: all-masked row in AdditiveNegInf");
    double sum = 0.0;
    for (int64_t c = 0; c < cols; ++c) {
      const bool on = mode == MaskSemantics::MultiplicativeLiteral ||
                      mask_bit(mask, r, c);
      const double w = on ? std::exp(logits(r, c) - rowmax) : 0.0;
      logits(r, c) = w;
      sum += w;
    }
    logits.row(r) /= sum;
  }
  return logits;
}

Eigen::MatrixXd spheric_epi_attn(const AttnTensors& t,
                                 const EpipolarMaskTensor& mask,
                                 MaskSemantics mode) {
  return spheric_epi_attn_weights(t, mask, mode) * t.v;
}

double attn_grad_check(const AttnTensors& t, const EpipolarMaskTensor& mask,
                       MaskSemantics mode, double eps_fd) {
  validate_shapes(t, mask);
  const double scale = 1.0 / std::sqrt(static_cast<double>(t.head_dim));

  // Analytic gradients of loss = sum(weights * v).
  const Eigen::MatrixXd w = spheric_epi_attn_weights(t, mask, mode);
  const Eigen::VectorXd v_rowsum = t.v.rowwise().sum();
  // d loss / d weights is v_rowsum broadcast along rows; softmax backward per
  // row gives d loss / d logits.
  Eigen::MatrixXd dlogits(w.rows(), w.cols());
  for (int64_t r = 0; r < w.rows(); ++r) {
    const double inner = w.row(r).dot(v_rowsum);
    for (int64_t c = 0; c < w.cols(); ++c)
      dlogits(r, c) = w(r, c) * (v_rowsum(c) - inner);
  }
  if (mode == MaskSemantics::MultiplicativeLiteral) {
    // logits were multiplied by the mask before softmax.
    for (int64_t r = 0; r < w.rows(); ++r)
      for (int64_t c = 0; c < w.cols(); ++c)
        if (!mask_bit(mask, r, c)) dlogits(r, c) = 0.0;
  }
  const Eigen::MatrixXd dq = dlogits * t.k * scale;
  const Eigen::MatrixXd dk = dlogits.transpose() * t.q * scale;
  Eigen::MatrixXd dv(t.v.rows(), t.v.cols());
  const Eigen::VectorXd w_colsum = w.colwise().sum();
  for (int64_t j = 0; j < t.v.rows(); ++j) dv.row(j).setConstant(w_colsum(j));
  if (!dq.allFinite() || !dk.allFinite() || !dv.allFinite())
    throw std::runtime_error("attention: non-finite gradient");

  auto loss_at = [&](const AttnTensors& probe) {
    return spheric_epi_attn(probe, mask, mode).sum();
  };
  double max_err = 0.0;
  auto check = [&](Eigen::MatrixXd AttnTensors::*field,
                   const Eigen::MatrixXd& analytic) {
    AttnTensors probe = t;
    Eigen::MatrixXd& m = probe.*field;
    for (int64_t i = 0; i < m.size(); ++i) {
      const double saved = m.data()[i];
      m.data()[i] = saved + eps_fd;
      const double hi = loss_at(probe);
      m.data()[i] = saved - eps_fd;
      const double lo = loss_at(probe);
      m.data()[i] = saved;
      const double fd = (hi - lo) / (2.0 * eps_fd);
      const double a = analytic.data()[i];
      const double denom = std::max({std::abs(a), std::abs(fd), 1.0});
      max_err = std::max(max_err, std::abs(a - fd) / denom);
    }
  };
  check(&AttnTensors::q, dq);
  check(&AttnTensors::k, dk);
  check(&AttnTensors::v, dv);
  return max_err;
}

}  // namespace epipano
