// Copyright 2026 The epipano Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "epipano/mask.hpp"

namespace epipano {

/// Single-head attention operands. q holds one query frame's h*w token rows;
/// k and v hold N*h*w key and value rows; all have C columns, and the head
/// dimension equals C.
struct AttnTensors {
  Eigen::MatrixXd q;
  Eigen::MatrixXd k;
  Eigen::MatrixXd v;
  int head_dim = 0;
};

/// How the binary mask meets the logits. MultiplicativeLiteral multiplies
/// the logit matrix elementwise, so a masked logit becomes 0 and still earns
/// exp(0) weight after softmax. AdditiveNegInf replaces masked logits with
/// -infinity, giving masked positions exactly zero weight. AdditiveNegInf is
/// the default for downstream use; the multiplicative form is kept for
/// fidelity to the closed formula.
enum class MaskSemantics { MultiplicativeLiteral, AdditiveNegInf };

/// softmax(mask(q k^T / sqrt(d))) v with rows normalized by a stabilized
/// softmax. Output rows are convex combinations of v rows in both modes.
/// Throws on non-finite inputs or (AdditiveNegInf) an all-masked row.
Eigen::MatrixXd spheric_epi_attn(const AttnTensors& t,
                                 const EpipolarMaskTensor& mask,
                                 MaskSemantics mode);

/// The post-softmax weight matrix (h*w rows, N*h*w columns); test surface
/// for row-sum and zero-weight properties.
Eigen::MatrixXd spheric_epi_attn_weights(const AttnTensors& t,
                                         const EpipolarMaskTensor& mask,
                                         MaskSemantics mode);

/// Max relative error between analytic gradients of sum(output) w.r.t.
/// q, k, v and central finite differences with step eps_fd.
double attn_grad_check(const AttnTensors& t, const EpipolarMaskTensor& mask,
                       MaskSemantics mode, double eps_fd = 1e-6);

}  // namespace epipano
