// Copyright 2026 The LumenForge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "lumen/renderlayer.hpp"
#include "lumen/sgfit.hpp"

namespace lumen {

/// Lighting-space and image-space errors of the 12-lobe SG fit and the
/// order-4 SH projection of the same environment grid.
struct CompareReport {
    double sg_log_loss = 0.0;
    double sh_log_loss = 0.0;
    double sg_render_mse = 0.0;
    double sh_render_mse = 0.0;
    double sg_fit_final_loss = 0.0;
    bool sg_line_search_warning = false;
};

/// Orthographic glossy sphere probe: gray 0.8 albedo, fixed roughness,
/// view +z, sphere normals inside the disk.
struct ProbeGBuffer {
    int size = 64;
    GBuffer gbuffer;
    BinaryMask mask;
};
ProbeGBuffer make_probe_gbuffer(int size = 64, double roughness = 0.2);

/// Fits the SG mixture, projects SH, reconstructs both on the grid, and
/// renders the probe under target / SG / SH lighting (all clamped to the
/// grid's domain so the three attack the same hemisphere). Log losses use
/// the solid-angle-weighted log-encoded form.
CompareReport compare_sh_sg(const EnvMapGrid& target, const SgFitConfig& fit_cfg = {},
                            int sh_order = 4, int probe_size = 64, double probe_roughness = 0.2);

/// Weighted mean over cells/channels of (log(a+1) - log(b+1))^2.
double grid_log_loss(const EnvMapGrid& recon, const EnvMapGrid& target);

}  // namespace lumen
