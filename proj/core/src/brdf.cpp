// Copyright 2026 The LumenForge Authors
// SPDX-License-Identifier: Apache-2.0

#include "lumen/brdf.hpp"

#include <cmath>
#include <numbers>

namespace lumen {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kAlphaFloor = 1e-4;

double smith_g1(double cos_x, double k) { return cos_x / (cos_x * (1.0 - k) + k); }

}  // namespace

Rgb eval_diffuse(const SurfaceSample& s) { return s.albedo / kPi; }

double ndf_term(double n_dot_h, double roughness) {
    const double alpha = std::max(roughness * roughness, kAlphaFloor);
    const double a2 = alpha * alpha;
    const double t = n_dot_h * n_dot_h * (a2 - 1.0) + 1.0;
    return a2 / (kPi * t * t);
}

double fresnel_term(double v_dot_h, const BrdfConfig& cfg) {
    const double x = v_dot_h;
    const double tail = (1.0 - cfg.f0) * std::exp2(-(5.55473 * x + 6.8316) * x);
    return cfg.fresnel_variant == FresnelVariant::WithF0Offset ? cfg.f0 + tail : tail;
}

double geometry_term(double n_dot_l, double n_dot_v, double roughness) {
    if (n_dot_l <= 0.0 || n_dot_v <= 0.0) return 0.0;
    const double k = (roughness + 1.0) * (roughness + 1.0) / 8.0;
    return smith_g1(n_dot_l, k) * smith_g1(n_dot_v, k);
}

double eval_specular(const SurfaceSample& s, const ShadingGeometry& g, const BrdfConfig& cfg) {
    const double n_dot_l = dot(s.normal, g.light);
    const double n_dot_v = dot(s.normal, g.view);
    if (n_dot_l <= 0.0 || n_dot_v <= 0.0) return 0.0;
    const Vec3 h = g.half();
    const double d = ndf_term(dot(s.normal, h), s.roughness);
    const double f = fresnel_term(dot(g.view, h), cfg);
    const double geo = geometry_term(n_dot_l, n_dot_v, s.roughness);
    return d * f * geo / (4.0 * n_dot_l * n_dot_v);
}

SpecularEval eval_specular_with_droughness(const SurfaceSample& s, const ShadingGeometry& g,
                                           const BrdfConfig& cfg) {
    const double n_dot_l = dot(s.normal, g.light);
    const double n_dot_v = dot(s.normal, g.view);
    if (n_dot_l <= 0.0 || n_dot_v <= 0.0) return {};

    const Vec3 h = g.half();
    const double n_dot_h = dot(s.normal, h);
    const double rough = s.roughness;

    const double alpha = std::max(rough * rough, kAlphaFloor);
    const double a2 = alpha * alpha;
    const double t = n_dot_h * n_dot_h * (a2 - 1.0) + 1.0;
    const double d = a2 / (kPi * t * t);
    // dD/dalpha; zero slope while the floor clamps.
    const double dd_dalpha = 2.0 * alpha / (kPi * t * t) -
                             4.0 * a2 * alpha * n_dot_h * n_dot_h / (kPi * t * t * t);
    const double dalpha_drough = rough * rough > kAlphaFloor ? 2.0 * rough : 0.0;

    const double f = fresnel_term(dot(g.view, h), cfg);

    const double k = (rough + 1.0) * (rough + 1.0) / 8.0;
    const double g1l = smith_g1(n_dot_l, k);
    const double g1v = smith_g1(n_dot_v, k);
    const double geo = g1l * g1v;
    const double dk_drough = (rough + 1.0) / 4.0;
    const auto dg1_dk = [](double cos_x, double kk) {
        const double den = cos_x * (1.0 - kk) + kk;
        return -cos_x * (1.0 - cos_x) / (den * den);
    };
    const double dgeo_drough = (dg1_dk(n_dot_l, k) * g1v + g1l * dg1_dk(n_dot_v, k)) * dk_drough;

    const double denom = 4.0 * n_dot_l * n_dot_v;
    SpecularEval out;
    out.value = d * f * geo / denom;
    out.d_roughness = (dd_dalpha * dalpha_drough * geo + d * dgeo_drough) * f / denom;
    return out;
}

Rgb eval_full(const SurfaceSample& s, const ShadingGeometry& g, const BrdfConfig& cfg) {
    const Rgb diffuse = eval_diffuse(s);
    const double spec = eval_specular(s, g, cfg);
    return diffuse + Rgb{spec, spec, spec};
}

}  // namespace lumen
