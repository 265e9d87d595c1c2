// Copyright 2026 The LumenForge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <vector>

#include "lumen/imaging.hpp"
#include "lumen/vec.hpp"

namespace lumen {

/// One isotropic spherical Gaussian lobe: unit axis xi, bandwidth
/// lambda > 0 and RGB intensity F. Radiance along eta is
/// F * exp(-lambda * (1 - eta.xi)); the published form carries the
/// opposite exponent sign, which grows away from the axis and cannot
/// model an environment map, so the decaying convention is used here.
struct SgLobe {
    Vec3 xi{0.0, 0.0, 1.0};
    double lambda = 1.0;
    Rgb intensity;
};

struct SgEnvironment {
    std::vector<SgLobe> lobes;

    /// Throws std::invalid_argument unless 1 <= K <= 64 and every lobe has
    /// a unit axis, positive bandwidth and finite nonnegative intensity.
    void validate() const;
};

/// Network-style low dynamic range lobe parameters before the HDR mapping:
/// tanh outputs in (-1, 1) plus an unnormalized axis.
struct RawSgParams {
    struct Lobe {
        Vec3 xi_raw;
        double lambda_raw = 0.0;
        Rgb intensity_raw;
    };
    std::vector<Lobe> lobes;
};

enum class GridDomain { Hemisphere, Sphere };

/// Directional radiance discretized on an elevation x azimuth grid.
/// Hemisphere grids span theta in (0, pi/2), sphere grids (0, pi); cell
/// centers are used throughout.
struct EnvMapGrid {
    int rows = 0;
    int cols = 0;
    GridDomain domain = GridDomain::Hemisphere;
    std::vector<float> radiance;  // rows * cols * 3

    static EnvMapGrid zeros(int rows, int cols, GridDomain domain);
    Rgb at(int r, int c) const {
        const std::size_t i = (static_cast<std::size_t>(r) * cols + c) * 3;
        return {radiance[i], radiance[i + 1], radiance[i + 2]};
    }
    void set(int r, int c, const Rgb& v) {
        const std::size_t i = (static_cast<std::size_t>(r) * cols + c) * 3;
        radiance[i] = static_cast<float>(v.r);
        radiance[i + 1] = static_cast<float>(v.g);
        radiance[i + 2] = static_cast<float>(v.b);
    }
    double theta_span() const;
    void validate() const;
};

/// Sum of lobe responses at a unit direction.
Rgb eval_sg(const SgEnvironment& env, const Vec3& dir);

/// HDR mapping of raw parameters: axis normalized to unit length,
/// lambda = tan(pi/4 (raw+1)), intensity likewise per channel. Raw scalars
/// must lie strictly inside (-1, 1).
SgEnvironment raw_to_hdr(const RawSgParams& raw);

/// Cell-center direction: theta = (r+0.5) * span / rows measured from +z,
/// phi = (c+0.5) * 2pi / cols.
Vec3 grid_direction(const EnvMapGrid& grid, int r, int c);

/// Solid angle sin(theta_r) * dtheta * dphi of every cell in row r.
double grid_cell_solid_angle(const EnvMapGrid& grid, int r);

EnvMapGrid sg_to_grid(const SgEnvironment& env, int rows, int cols, GridDomain domain);

/// Nearest-cell lookup; directions outside a hemisphere grid's domain
/// return zero radiance.
Rgb grid_lookup(const EnvMapGrid& grid, const Vec3& dir);

// ---------------------------------------------------------------------------
// Spherical harmonics baseline (real basis, Condon-Shortley phase omitted)
// ---------------------------------------------------------------------------

struct ShCoeffs {
    int order = 4;
    std::vector<Rgb> coeffs;  // (order+1)^2 entries, index l(l+1)+m
};

/// Real SH basis value; dir must be unit length.
double sh_basis(int l, int m, const Vec3& dir);

/// Quadrature projection over the grid's cells: c_lm = sum L * Y_lm * domega.
ShCoeffs sh_project(const EnvMapGrid& grid, int order = 4);

Rgb sh_eval(const ShCoeffs& coeffs, const Vec3& dir);

// ---------------------------------------------------------------------------
// Serialization
// ---------------------------------------------------------------------------

/// Text record set, one lobe per line: "xi_x xi_y xi_z lambda F_r F_g F_b".
void write_sg_text(const SgEnvironment& env, const std::filesystem::path& path);
SgEnvironment read_sg_text(const std::filesystem::path& path);

/// Grids interchange as PFM images (rows x cols); the domain is supplied
/// by the caller on load.
HdrImage grid_to_image(const EnvMapGrid& grid);
EnvMapGrid image_to_grid(const HdrImage& img, GridDomain domain);

}  // namespace lumen
