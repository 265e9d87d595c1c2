// Copyright 2026 The LumenForge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <numbers>

#include "lumen/lbfgs.hpp"
#include "lumen/lighting.hpp"

namespace lumen {

/// Region-constrained 12-lobe fit configuration. The hemisphere is split
/// into region_rows x region_cols cells; lobe k is squashed into its cell
/// by theta = a*tanh(theta_hat) + b_k, phi = c*tanh(phi_hat) + d_k.
struct SgFitConfig {
    int lobe_count = 12;
    int region_rows = 2;
    int region_cols = 6;
    double theta_scale = 3.0 * std::numbers::pi / 8.0;  // a
    double phi_scale = std::numbers::pi / 2.0;          // c
    LbfgsOptions optimizer;
};

/// Unconstrained per-lobe parameters (theta_hat, phi_hat, lambda_hat,
/// intensity_hat per channel); six scalars per lobe in the flat layout.
struct UnconstrainedParams {
    struct Lobe {
        double theta_hat = 0.0;
        double phi_hat = 0.0;
        double lambda_hat = 0.0;
        Rgb intensity_hat;
    };
    std::vector<Lobe> lobes;

    static UnconstrainedParams standard_init(const SgFitConfig& cfg);
    std::vector<double> to_flat() const;
    static UnconstrainedParams from_flat(std::span<const double> flat);
};

/// Region center offsets: b_k = (pi/4)(k mod 2 + 1/2),
/// d_k = (pi/3)(k mod 6 + 1/2) - pi.
struct RegionOffsets {
    double b = 0.0;
    double d = 0.0;
};
RegionOffsets region_offsets(int k, const SgFitConfig& cfg);

/// lambda = exp(lambda_hat), F = exp(F_hat), axis from the squashed
/// spherical coordinates.
SgEnvironment constrain(const UnconstrainedParams& u, const SgFitConfig& cfg);

/// Solid-angle-weighted mean over cells and channels of
/// (log(recon+1) - log(target+1))^2, recon evaluated at cell centers.
double fit_loss(const SgEnvironment& env, const EnvMapGrid& target);

/// fit_loss(constrain(u), target) together with its analytic gradient in
/// the unconstrained parameters (the objective fit_grid minimizes). grad
/// must hold 6 entries per lobe.
double fit_objective(const UnconstrainedParams& u, const SgFitConfig& cfg,
                     const EnvMapGrid& target, std::span<double> grad);

struct FitResult {
    SgEnvironment env;
    UnconstrainedParams params;
    double final_loss = 0.0;
    std::vector<LbfgsTraceEntry> trace;
    bool line_search_warning = false;
};

/// LBFGS fit of the log-encoded loss from the fixed initialization
/// (theta_hat = phi_hat = F_hat = 0, lambda_hat = log(pi/2)). Deterministic.
FitResult fit_grid(const EnvMapGrid& target, const SgFitConfig& cfg = {});

}  // namespace lumen
