// Copyright 2026 The LumenForge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <span>
#include <vector>

#include "lumen/imaging.hpp"
#include "lumen/lighting.hpp"

namespace lumen {

/// Weighted-sum coefficients of the training objective.
struct LossWeights {
    double albedo = 1.5;      // alpha_A
    double normal = 1.0;      // alpha_N
    double roughness = 0.5;   // alpha_R
    double depth = 0.5;       // alpha_D
    double lighting = 10.0;   // alpha_L
    double render = 10.0;     // alpha_ren
    double lambda = 5e-4;     // alpha_lambda, per lobe
    double xi = 1.0;          // alpha_xi, per lobe
    double intensity = 0.5;   // alpha_F, per lobe
};

struct ScaleInvariantResult {
    double loss = 0.0;
    double scale = 0.0;  // optimal multiplier on the prediction
};

/// Masked scale-invariant L2: c = <gt,pred>/<pred,pred>, loss is the mean
/// masked squared residual at c. A prediction that vanishes under the
/// mask gives c = 0 and loss = mean gt^2.
ScaleInvariantResult scale_invariant_l2(const HdrImage& pred, const HdrImage& gt,
                                        const BinaryMask& mask);

/// Plain masked mean squared error (normals, roughness).
double masked_l2(const HdrImage& pred, const HdrImage& gt, const BinaryMask& mask);

struct DepthLossResult {
    double loss = 0.0;
    double scale = 1.0;  // c_d
};

/// Scale-invariant log-encoded depth loss; c_d found by golden-section
/// search of log c over [log lo, log hi] (no closed form exists inside
/// the log). Depths must be positive under the mask.
DepthLossResult log_encoded_depth_loss(std::span<const float> gt_depth,
                                       std::span<const float> pred_depth, const BinaryMask& mask,
                                       double search_lo = 1e-3, double search_hi = 1e3);

struct RenderLossResult {
    double loss = 0.0;
    double c_diff = 0.0;
    double c_spec = 0.0;
    bool single_coefficient_fallback = false;
};

/// Scale-invariant rendering loss: nonnegative (c_diff, c_spec) minimizing
/// the masked residual of I - c_diff*I_d - c_spec*I_s via the 2x2 normal
/// equations; singular systems fall back to regressing on I_d alone.
RenderLossResult render_loss(const HdrImage& image, const HdrImage& diffuse,
                             const HdrImage& specular, const BinaryMask& mask);

struct SgParamLosses {
    std::vector<double> lambda;     // log-encoded, shared scale across lobes
    std::vector<double> xi;         // squared axis distance
    std::vector<double> intensity;  // log-encoded, shared scale across lobes
    double lambda_scale = 1.0;
    double intensity_scale = 1.0;
};

/// Per-lobe supervision losses between region-aligned lobe lists.
SgParamLosses sg_param_losses(const SgEnvironment& pred, const SgEnvironment& gt);

struct LossComponents {
    double albedo = 0.0;
    double normal = 0.0;
    double roughness = 0.0;
    double depth = 0.0;
    double lighting = 0.0;
    double render = 0.0;
    std::vector<double> lambda_k;
    std::vector<double> xi_k;
    std::vector<double> intensity_k;
};

double total_loss(const LossComponents& parts, const LossWeights& w);

// ---------------------------------------------------------------------------
// Albedo / lighting scale resolution
// ---------------------------------------------------------------------------

enum class ScaleBranch { Specular, AlbedoMax };

struct ScaleSolution {
    double c_d = 0.0;
    double c_s = 0.0;
    double c_a = 0.0;
    double c_l = 0.0;
    ScaleBranch branch = ScaleBranch::Specular;
    double determinant = 0.0;
    bool warning = false;  // set when the specular branch degenerates
};

/// Regresses (c_d, c_s) on the masked pixels, then picks the branch by the
/// Gram determinant D = ((Id.Id)(Is.Is) - (Id.Is)^2) / K against 1e-7:
/// specular (c_l = c_s, c_a = c_d/c_l) above the threshold, otherwise
/// albedo-max (c_a = 1/max A, c_l = c_d/c_a).
ScaleSolution resolve_scales(const HdrImage& image, const HdrImage& diffuse,
                             const HdrImage& specular, const HdrImage& albedo,
                             const BinaryMask& mask);

}  // namespace lumen
