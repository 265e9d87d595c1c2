// Copyright 2026 The LumenForge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <variant>

#include "lumen/renderlayer.hpp"

namespace lumen {

/// Inputs to the ratio (quotient-image) blend: the photograph I, synthetic
/// renders with and without the object, and the object / combined masks.
struct InsertionSetup {
    HdrImage original;     // I
    HdrImage with_object;  // I_all
    HdrImage plane_only;   // I_pl
    BinaryMask object_mask;    // M_obj
    BinaryMask combined_mask;  // M_all, must contain M_obj

    void validate() const;
};

/// Object pixels copy I_all; plane pixels inside M_all take
/// I * I_all / max(I_pl, 1e-4) per channel; everything else is I untouched.
HdrImage ratio_composite(const InsertionSetup& setup);

struct SphereSpec {
    double radius = 0.1;  // world units
};

/// Height field over a square footprint centered at the insertion point:
/// heights[r*resolution + c] in world units above the plane.
struct HeightFieldSpec {
    int resolution = 0;
    double footprint = 0.2;  // world edge length
    std::vector<float> heights;
};

struct ObjectSpec {
    std::variant<SphereSpec, HeightFieldSpec> shape = SphereSpec{};
    Rgb albedo{0.8, 0.8, 0.8};
    double roughness = 0.2;
};

struct PlaneSpec {
    double radius_scale = 4.0;  // plane disk radius as a multiple of the object radius
    std::optional<BinaryMask> mask;  // image-space region; insertion point must lie inside
};

struct InsertionResult {
    HdrImage composite;
    HdrImage with_object;
    HdrImage plane_only;
    BinaryMask object_mask;
    BinaryMask combined_mask;
};

/// Renders a virtual object standing on the plane through the G-buffer
/// point at `at`, lit by that point's SG environment expanded to a
/// 512x1024 sphere grid, with binary shadow rays between object and
/// plane, then ratio-composites into `image`.
InsertionResult insert_object(const GBuffer& g, const LightingGrid& lights,
                              const CameraModel& cam, int at_row, int at_col,
                              const PlaneSpec& plane, const ObjectSpec& object,
                              const HdrImage& image, const HemisphereQuadrature& q,
                              const BrdfConfig& cfg);

/// Re-renders the region with replacement albedo/roughness under the
/// per-pixel lighting; pixels outside the region pass through.
HdrImage edit_material(const GBuffer& g, const LightingGrid& lights, const CameraModel& cam,
                       const BinaryMask& region, const Rgb& new_albedo, double new_roughness,
                       const HdrImage& image, const HemisphereQuadrature& q,
                       const BrdfConfig& cfg);

/// Adds render(new roughness) - render(old roughness) to the image inside
/// the region, clamped at zero.
HdrImage edit_specularity(const GBuffer& g, const LightingGrid& lights, const CameraModel& cam,
                          const BinaryMask& region, double new_roughness, const HdrImage& image,
                          const HemisphereQuadrature& q, const BrdfConfig& cfg);

}  // namespace lumen
