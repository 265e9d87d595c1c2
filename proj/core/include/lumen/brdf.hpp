// Copyright 2026 The LumenForge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "lumen/vec.hpp"

namespace lumen {

/// Per-pixel material sample: diffuse albedo A, shading normal N and
/// scalar roughness R.
struct SurfaceSample {
    Rgb albedo;
    Vec3 normal{0.0, 0.0, 1.0};
    double roughness = 0.5;
};

/// The published Fresnel curve omits the additive F0 of the Schlick
/// approximation it is modeled on. AsWritten reproduces the printed
/// formula; WithF0Offset adds F0 back.
enum class FresnelVariant { AsWritten, WithF0Offset };

struct BrdfConfig {
    double f0 = 0.05;
    FresnelVariant fresnel_variant = FresnelVariant::AsWritten;
};

struct ShadingGeometry {
    Vec3 view;
    Vec3 light;

    /// Half vector; undefined when view == -light.
    Vec3 half() const { return normalized(view + light); }
};

/// Lambertian term A / pi, independent of geometry.
Rgb eval_diffuse(const SurfaceSample& s);

/// GGX normal distribution with alpha = R^2 (alpha floored at 1e-4 so the
/// R = 0, n.h = 1 corner stays finite).
double ndf_term(double n_dot_h, double roughness);

double fresnel_term(double v_dot_h, const BrdfConfig& cfg);

/// Smith-style masking-shadowing with k = (R+1)^2 / 8. Returns 0 for
/// grazing or backfacing cosines.
double geometry_term(double n_dot_l, double n_dot_v, double roughness);

/// Achromatic specular reflectance D*F*G / (4 (N.l)(N.v)); 0 when either
/// cosine is nonpositive.
double eval_specular(const SurfaceSample& s, const ShadingGeometry& g, const BrdfConfig& cfg);

/// Specular reflectance together with its partial derivative in roughness.
struct SpecularEval {
    double value = 0.0;
    double d_roughness = 0.0;
};
SpecularEval eval_specular_with_droughness(const SurfaceSample& s, const ShadingGeometry& g,
                                           const BrdfConfig& cfg);

/// f = f_d + f_s with the achromatic specular added to every channel.
Rgb eval_full(const SurfaceSample& s, const ShadingGeometry& g, const BrdfConfig& cfg);

}  // namespace lumen
