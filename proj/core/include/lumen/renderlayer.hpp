// Copyright 2026 The LumenForge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "lumen/brdf.hpp"
#include "lumen/imaging.hpp"
#include "lumen/lighting.hpp"

namespace lumen {

/// Midpoint hemisphere sampling: theta_j = (j+0.5)*pi/(2*elevation_bins),
/// phi_i = (i+0.5)*2*pi/azimuth_bins, domega = sin(theta_j) dtheta dphi.
/// Directions live in the local +z shading frame.
struct HemisphereQuadrature {
    int azimuth_bins = 16;
    int elevation_bins = 8;
    std::vector<Vec3> directions;
    std::vector<double> solid_angles;   // domega per sample
    std::vector<double> cosine_weights;  // cos(theta_j) * domega per sample
};

HemisphereQuadrature build_quadrature(int azimuth_bins = 16, int elevation_bins = 8);

/// Right-handed orthonormal frame with n as the third axis. The tangent
/// choice branches on |n.z| (helper axis +z, or +x when n is within 1e-6
/// of -z/+z colinearity); no continuity across that branch.
struct LocalFrame {
    Vec3 tangent, bitangent, normal;
    Vec3 to_world(const Vec3& local) const {
        return tangent * local.x + bitangent * local.y + normal * local.z;
    }
};
LocalFrame local_frame(const Vec3& normal);

/// Incident radiance as a function of world direction. Adapters are
/// provided for SG environments, grids and SH expansions.
using RadianceFn = std::function<Rgb(const Vec3&)>;
RadianceFn sg_radiance(const SgEnvironment& env);
/// Nearest-cell lookup; zero outside a hemisphere grid's domain.
RadianceFn grid_radiance(const EnvMapGrid& grid);
/// SH expansion clamped at zero (truncation can ring negative).
RadianceFn sh_radiance(const ShCoeffs& coeffs);

struct PixelRender {
    Rgb diffuse;
    Rgb specular;
    bool view_below_surface = false;
};

/// Quadrature of f * L * cos(theta) * domega over the normal's hemisphere,
/// split into diffuse and specular parts. Zero with a flag when the view
/// lies below the surface.
PixelRender render_pixel(const SurfaceSample& s, const Vec3& view, const SgEnvironment& env,
                         const HemisphereQuadrature& q, const BrdfConfig& cfg);

/// Same quadrature against an arbitrary radiance function.
PixelRender render_pixel_radiance(const SurfaceSample& s, const Vec3& view, const RadianceFn& L,
                                  const HemisphereQuadrature& q, const BrdfConfig& cfg);

/// Analytic partials of the quadrature sums. Lobe axis partials are given
/// along an orthonormal tangent pair at the lobe axis.
struct LobeGradients {
    Rgb d_diffuse_d_intensity;   // dI_d[ch] / dF_k[ch]
    Rgb d_specular_d_intensity;  // dI_s[ch] / dF_k[ch]
    Rgb d_diffuse_d_lambda;
    Rgb d_specular_d_lambda;
    Vec3 axis_tangent_u, axis_tangent_v;
    Rgb d_diffuse_d_xi_u, d_diffuse_d_xi_v;
    Rgb d_specular_d_xi_u, d_specular_d_xi_v;
};

struct PixelGradients {
    PixelRender value;
    Rgb d_diffuse_d_albedo;  // dI_d[ch] / dA[ch]
    Rgb d_specular_d_roughness;
    std::vector<LobeGradients> lobes;
};

PixelGradients render_pixel_grad(const SurfaceSample& s, const Vec3& view,
                                 const SgEnvironment& env, const HemisphereQuadrature& q,
                                 const BrdfConfig& cfg);

// ---------------------------------------------------------------------------
// Image-level rendering
// ---------------------------------------------------------------------------

/// Per-pixel geometry and material planes. Normals are stored raw (signed)
/// and must be unit length; roughness in [0,1]; depth positive wherever a
/// pixel participates in rendering.
struct GBuffer {
    int height = 0;
    int width = 0;
    HdrImage albedo;
    std::vector<float> normals;   // 3 per pixel
    std::vector<float> roughness; // 1 per pixel
    std::vector<float> depth;     // 1 per pixel

    static GBuffer uniform(int height, int width, const Rgb& albedo, const Vec3& normal,
                           double roughness, double depth);
    Rgb albedo_at(int r, int c) const { return albedo.at(r, c); }
    Vec3 normal_at(int r, int c) const {
        const std::size_t i = (static_cast<std::size_t>(r) * width + c) * 3;
        return {normals[i], normals[i + 1], normals[i + 2]};
    }
    double roughness_at(int r, int c) const {
        return roughness[static_cast<std::size_t>(r) * width + c];
    }
    double depth_at(int r, int c) const {
        return depth[static_cast<std::size_t>(r) * width + c];
    }
    void validate() const;
};

/// Load albedo.pfm / normal.pfm / roughness.pfm / depth.pfm from a
/// directory (roughness and depth may be single-channel Pf files).
GBuffer read_gbuffer(const std::filesystem::path& dir);
void write_gbuffer(const GBuffer& g, const std::filesystem::path& dir);

/// One SG environment per lighting cell; cells map onto image pixels by
/// integer stride (image dims must be cell-count multiples).
struct LightingGrid {
    int rows = 0;
    int cols = 0;
    std::vector<SgEnvironment> cells;

    static LightingGrid single(const SgEnvironment& env);
    const SgEnvironment& cell(int r, int c) const {
        return cells[static_cast<std::size_t>(r) * cols + c];
    }
    const SgEnvironment& cell_for_pixel(int r, int c, int image_height, int image_width) const;
};

void write_lighting_grid(const LightingGrid& grid, const std::filesystem::path& path);
LightingGrid read_lighting_grid(const std::filesystem::path& path);

/// Pinhole camera at the origin looking along -z, x right, y up;
/// fov is the horizontal field of view. Depth is the -z distance.
struct CameraModel {
    double fov_deg = 63.4;

    Vec3 ray_dir(int r, int c, int height, int width) const;
    Vec3 point_at(int r, int c, int height, int width, double depth) const;
};

struct RenderedImage {
    HdrImage diffuse;
    HdrImage specular;
};

/// Per-pixel render with the covering lighting cell; pixels outside the
/// mask (when given) are zero. Parallel over rows.
RenderedImage render_image(const GBuffer& g, const LightingGrid& lights, const CameraModel& cam,
                           const HemisphereQuadrature& q, const BrdfConfig& cfg,
                           const BinaryMask* mask = nullptr);

}  // namespace lumen
