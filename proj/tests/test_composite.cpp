// Copyright 2026 The LumenForge Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <numbers>

#include "lumen/composite.hpp"
#include "support/test_helpers.hpp"

using namespace lumen;

namespace {

HdrImage random_image(SplitMix64& rng, int h, int w, double hi = 1.0) {
    HdrImage img = HdrImage::zeros(h, w);
    for (auto& v : img.data) v = static_cast<float>(rng.uniform(0.01, hi));
    return img;
}

SgEnvironment overhead_lobe(double lambda, double level) {
    SgEnvironment env;
    env.lobes.push_back({Vec3{0.0, 0.0, 1.0}, lambda, Rgb{level, level, level}});
    return env;
}

}  // namespace

TEST_SUITE("composite") {

TEST_CASE("ratio composite reproduces the input under unit ratio") {
    SplitMix64 rng(3);
    const HdrImage image = random_image(rng, 6, 8);
    const HdrImage render = random_image(rng, 6, 8, 2.0);
    BinaryMask obj = BinaryMask::zeros(6, 8);
    BinaryMask all = BinaryMask::zeros(6, 8);
    for (int r = 2; r < 5; ++r)
        for (int c = 1; c < 7; ++c) all.set(r, c, true);
    obj.set(3, 3, true);
    const HdrImage out = ratio_composite({image, render, render, obj, all});
    for (int r = 0; r < 6; ++r)
        for (int c = 0; c < 8; ++c) {
            if (obj.at(r, c)) {
                CHECK(out.at(r, c).r == render.at(r, c).r);  // object copies I_all bitwise
            } else if (all.at(r, c)) {
                CHECK(out.at(r, c).g == doctest::Approx(image.at(r, c).g).epsilon(1e-6));
            } else {
                CHECK(out.at(r, c).b == image.at(r, c).b);  // untouched outside M_all
            }
        }
}

TEST_CASE("ratio composite transfers proportional shadowing") {
    SplitMix64 rng(5);
    const HdrImage image = random_image(rng, 4, 4);
    const HdrImage plane = random_image(rng, 4, 4, 2.0);
    HdrImage shadowed = plane;
    for (auto& v : shadowed.data) v *= 0.5f;
    const BinaryMask all = BinaryMask::ones(4, 4);
    const BinaryMask obj = BinaryMask::zeros(4, 4);
    const HdrImage out = ratio_composite({image, shadowed, plane, obj, all});
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c)
            CHECK(out.at(r, c).r == doctest::Approx(0.5 * image.at(r, c).r).epsilon(1e-6));
}

TEST_CASE("ratio composite is scale equivariant on the blend region") {
    SplitMix64 rng(7);
    const HdrImage image = random_image(rng, 4, 4);
    const HdrImage all_r = random_image(rng, 4, 4, 2.0);
    const HdrImage pl_r = random_image(rng, 4, 4, 2.0);
    const BinaryMask all = BinaryMask::ones(4, 4);
    const BinaryMask obj = BinaryMask::zeros(4, 4);
    const HdrImage base = ratio_composite({image, all_r, pl_r, obj, all});
    HdrImage all2 = all_r, pl2 = pl_r;
    for (auto& v : all2.data) v *= 7.0f;
    for (auto& v : pl2.data) v *= 7.0f;
    const HdrImage scaled = ratio_composite({image, all2, pl2, obj, all});
    for (int r = 0; r < 4; ++r)
        CHECK(scaled.at(r, 2).g == doctest::Approx(base.at(r, 2).g).epsilon(1e-5));
}

TEST_CASE("ratio guards dark denominators") {
    HdrImage image = HdrImage::constant(1, 1, Rgb{0.5, 0.5, 0.5});
    HdrImage bright = HdrImage::constant(1, 1, Rgb{1.0, 1.0, 1.0});
    HdrImage dark = HdrImage::constant(1, 1, Rgb{0.0, 0.0, 0.0});
    const HdrImage out = ratio_composite(
        {image, bright, dark, BinaryMask::zeros(1, 1), BinaryMask::ones(1, 1)});
    CHECK(std::isfinite(out.at(0, 0).r));
    CHECK(out.at(0, 0).r == doctest::Approx(0.5 * 1.0 / 1e-4));
}

TEST_CASE("object mask escaping the combined mask is rejected") {
    const HdrImage img = HdrImage::constant(2, 2, Rgb{0.1, 0.1, 0.1});
    BinaryMask obj = BinaryMask::ones(2, 2);
    BinaryMask all = BinaryMask::zeros(2, 2);
    CHECK_THROWS_AS(ratio_composite({img, img, img, obj, all}), std::invalid_argument);
}

TEST_CASE("insert_object is the identity without an object") {
    // Plane radius scale zero: the combined mask degenerates to nothing.
    SplitMix64 rng(11);
    const int n = 24;
    const GBuffer g = GBuffer::uniform(n, n, Rgb{0.6, 0.6, 0.6}, Vec3{0, 0, 1}, 0.4, 2.0);
    const HdrImage image = random_image(rng, n, n);
    const LightingGrid lights = LightingGrid::single(overhead_lobe(2.0, 1.0));
    PlaneSpec plane;
    plane.radius_scale = 0.0;
    ObjectSpec obj;
    obj.shape = SphereSpec{0.0};  // degenerate: no pixel can hit it
    const InsertionResult out = insert_object(g, lights, {}, n / 2, n / 2, plane, obj, image,
                                              build_quadrature(), {});
    CHECK(out.object_mask.count() == 0);
    // The degenerate plane disk may keep the contact pixel, where the
    // ratio is exactly one; the composite must equal the input bitwise.
    CHECK(out.combined_mask.count() <= 1);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) CHECK(out.composite.at(r, c).r == image.at(r, c).r);
}

TEST_CASE("inserted sphere casts a shadow that darkens plane pixels") {
    const int n = 48;
    // Camera looks along -z; the plane faces the camera with its normal
    // +z, and the single overhead lobe also points +z, so the sphere
    // between light and plane must shadow nearby plane pixels.
    const GBuffer g = GBuffer::uniform(n, n, Rgb{0.7, 0.7, 0.7}, Vec3{0, 0, 1}, 0.6, 2.0);
    SplitMix64 rng(13);
    const HdrImage image = random_image(rng, n, n);
    const LightingGrid lights = LightingGrid::single(overhead_lobe(30.0, 3.0));
    PlaneSpec plane;
    plane.radius_scale = 6.0;
    ObjectSpec obj;
    obj.shape = SphereSpec{0.15};
    const InsertionResult out = insert_object(g, lights, {}, n / 2, n / 2, plane, obj, image,
                                              build_quadrature(), {});
    REQUIRE(out.object_mask.count() > 0);
    REQUIRE(out.combined_mask.count() > out.object_mask.count());

    // Ratio of I_all to I_pl on the plane: <= 1 everywhere (occlusion only
    // removes light), and strictly darker right next to the sphere.
    double min_ratio = 1.0;
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) {
            if (!out.combined_mask.at(r, c) || out.object_mask.at(r, c)) continue;
            const double ratio = out.with_object.at(r, c).r /
                                 std::max(1e-9, static_cast<double>(out.plane_only.at(r, c).r));
            CHECK(ratio <= 1.0 + 1e-9);
            min_ratio = std::min(min_ratio, ratio);
        }
    CHECK(min_ratio < 0.8);
}

TEST_CASE("shadow attenuation matches a dense occlusion oracle on a strip") {
    // Three plane pixels at increasing distance from the sphere contact
    // point: occlusion fraction, and with it the darkening, must decrease
    // monotonically; a dense-ray oracle of the same geometry agrees.
    const int n = 48;
    const GBuffer g = GBuffer::uniform(n, n, Rgb{0.7, 0.7, 0.7}, Vec3{0, 0, 1}, 0.9, 2.0);
    SplitMix64 rng(17);
    const HdrImage image = random_image(rng, n, n);
    const SgEnvironment env = overhead_lobe(8.0, 2.0);
    const LightingGrid lights = LightingGrid::single(env);
    PlaneSpec plane;
    plane.radius_scale = 8.0;
    ObjectSpec obj;
    obj.shape = SphereSpec{0.12};
    const CameraModel cam;
    const InsertionResult out =
        insert_object(g, lights, cam, n / 2, n / 2, plane, obj, image, build_quadrature(), {});

    const Vec3 plane_point = cam.point_at(n / 2, n / 2, n, n, 2.0);
    const Vec3 center = plane_point + Vec3{0, 0, 0.12};

    double prev_ratio = -1.0;
    double prev_oracle = -1.0;
    for (int offset : {5, 8, 12}) {
        const int c = n / 2 + offset;
        const double ratio = out.with_object.at(n / 2, c).r /
                             std::max(1e-12, static_cast<double>(out.plane_only.at(n / 2, c).r));
        // Dense cosine-weighted occlusion oracle at the same plane point.
        const Vec3 p = cam.point_at(n / 2, c, n, n, 2.0);
        double lit = 0.0, total = 0.0;
        const int az = 256, el = 128;
        for (int j = 0; j < el; ++j) {
            const double th = (j + 0.5) * (std::numbers::pi / 2) / el;
            for (int i = 0; i < az; ++i) {
                const double ph = (i + 0.5) * 2.0 * std::numbers::pi / az;
                const Vec3 dir{std::sin(th) * std::cos(ph), std::sin(th) * std::sin(ph),
                               std::cos(th)};
                const double w = std::cos(th) * std::sin(th);
                const double radiance = std::exp(-8.0 * (1.0 - dir.z));
                const Vec3 oc = p - center;
                const double b = dot(oc, dir);
                const double cq = dot(oc, oc) - 0.12 * 0.12;
                const bool hit = b * b - cq >= 0.0 && (-b + std::sqrt(b * b - cq)) > 0.0 &&
                                 (-b - std::sqrt(std::max(0.0, b * b - cq))) > 0.0;
                total += w * radiance;
                if (!hit) lit += w * radiance;
            }
        }
        const double oracle_ratio = lit / total;
        CHECK(ratio > prev_ratio);          // monotone recovery with distance
        CHECK(oracle_ratio > prev_oracle);  // oracle agrees on monotonicity
        CHECK(ratio == doctest::Approx(oracle_ratio).epsilon(0.08));
        prev_ratio = ratio;
        prev_oracle = oracle_ratio;
    }
}

TEST_CASE("doubling lobe intensities leaves the blended plane unchanged") {
    const int n = 32;
    const GBuffer g = GBuffer::uniform(n, n, Rgb{0.5, 0.5, 0.5}, Vec3{0, 0, 1}, 0.5, 2.0);
    SplitMix64 rng(19);
    const HdrImage image = random_image(rng, n, n);
    SgEnvironment env = overhead_lobe(10.0, 1.0);
    PlaneSpec plane;
    plane.radius_scale = 5.0;
    ObjectSpec obj;
    obj.shape = SphereSpec{0.1};
    const InsertionResult a = insert_object(g, LightingGrid::single(env), {}, n / 2, n / 2,
                                            plane, obj, image, build_quadrature(), {});
    for (auto& lobe : env.lobes) lobe.intensity *= 2.0;
    const InsertionResult b = insert_object(g, LightingGrid::single(env), {}, n / 2, n / 2,
                                            plane, obj, image, build_quadrature(), {});
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) {
            if (!a.combined_mask.at(r, c) || a.object_mask.at(r, c)) continue;
            CHECK(b.composite.at(r, c).g ==
                  doctest::Approx(a.composite.at(r, c).g).epsilon(1e-5));
        }
}

TEST_CASE("insertion point outside the plane mask is rejected") {
    const GBuffer g = GBuffer::uniform(8, 8, Rgb{0.5, 0.5, 0.5}, Vec3{0, 0, 1}, 0.5, 2.0);
    PlaneSpec plane;
    plane.mask = BinaryMask::zeros(8, 8);
    CHECK_THROWS_WITH_AS(
        insert_object(g, LightingGrid::single(overhead_lobe(2.0, 1.0)), {}, 4, 4, plane, {},
                      HdrImage::constant(8, 8, Rgb{0.1, 0.1, 0.1}), build_quadrature(), {}),
        doctest::Contains("outside plane mask"), std::invalid_argument);
}

TEST_CASE("height-field object renders and occludes") {
    const int n = 32;
    const GBuffer g = GBuffer::uniform(n, n, Rgb{0.6, 0.6, 0.6}, Vec3{0, 0, 1}, 0.7, 2.0);
    SplitMix64 rng(23);
    const HdrImage image = random_image(rng, n, n);
    HeightFieldSpec hf;
    hf.resolution = 9;
    hf.footprint = 0.3;
    hf.heights.assign(81, 0.0f);
    for (int i = 0; i < 9; ++i)
        for (int j = 0; j < 9; ++j) {
            const double dx = (i - 4) / 4.0, dy = (j - 4) / 4.0;
            hf.heights[static_cast<std::size_t>(i) * 9 + j] =
                static_cast<float>(0.15 * std::max(0.0, 1.0 - dx * dx - dy * dy));
        }
    ObjectSpec obj;
    obj.shape = hf;
    PlaneSpec plane;
    plane.radius_scale = 4.0;
    // Oblique light so the bump throws a lateral shadow.
    SgEnvironment tilted;
    tilted.lobes.push_back({normalized({1.0, 0.0, 1.0}), 20.0, Rgb{2.0, 2.0, 2.0}});
    const InsertionResult out = insert_object(g, LightingGrid::single(tilted),
                                              {}, n / 2, n / 2, plane, obj, image,
                                              build_quadrature(), {});
    CHECK(out.object_mask.count() > 0);
    // Some plane pixel is shadowed.
    double min_ratio = 1.0;
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) {
            if (!out.combined_mask.at(r, c) || out.object_mask.at(r, c)) continue;
            min_ratio = std::min(min_ratio, out.with_object.at(r, c).r /
                                                std::max(1e-9, static_cast<double>(
                                                                   out.plane_only.at(r, c).r)));
        }
    CHECK(min_ratio < 0.95);
}

TEST_CASE("edit_material self-consistency and empty region") {
    const int n = 16;
    GBuffer g = GBuffer::uniform(n, n, Rgb{0.4, 0.5, 0.6}, Vec3{0, 0, 1}, 0.35, 2.0);
    SplitMix64 rng(29);
    const LightingGrid lights = LightingGrid::single(test::random_env(rng, 3, 1.0, 20.0, 2.0));
    const HdrImage image = random_image(rng, n, n);
    const HemisphereQuadrature q = build_quadrature();

    const HdrImage untouched =
        edit_material(g, lights, {}, BinaryMask::zeros(n, n), Rgb{1, 0, 0}, 0.1, image, q, {});
    for (int r = 0; r < n; ++r) CHECK(untouched.at(r, 3).r == image.at(r, 3).r);

    // Same params as the gbuffer: the region equals a fresh render of it.
    BinaryMask region = BinaryMask::zeros(n, n);
    for (int r = 4; r < 12; ++r)
        for (int c = 4; c < 12; ++c) region.set(r, c, true);
    const HdrImage self =
        edit_material(g, lights, {}, region, Rgb{0.4, 0.5, 0.6}, 0.35, image, q, {});
    const RenderedImage direct = render_image(g, lights, {}, q, {}, &region);
    for (int r = 4; r < 12; ++r)
        for (int c = 4; c < 12; ++c) {
            const Rgb expect = direct.diffuse.at(r, c) + direct.specular.at(r, c);
            CHECK(self.at(r, c).g == doctest::Approx(expect.g).epsilon(1e-6));
        }
}

TEST_CASE("halving albedo halves the diffuse component of the edit") {
    const int n = 12;
    const GBuffer g = GBuffer::uniform(n, n, Rgb{0.8, 0.8, 0.8}, Vec3{0, 0, 1}, 1.0, 2.0);
    SplitMix64 rng(31);
    const LightingGrid lights = LightingGrid::single(test::random_env(rng, 2, 1.0, 10.0, 2.0));
    const HdrImage image = random_image(rng, n, n);
    const HemisphereQuadrature q = build_quadrature();
    const BinaryMask region = BinaryMask::ones(n, n);

    const HdrImage full = edit_material(g, lights, {}, region, Rgb{0.8, 0.8, 0.8}, 1.0, image, q, {});
    const HdrImage half = edit_material(g, lights, {}, region, Rgb{0.4, 0.4, 0.4}, 1.0, image, q, {});
    // Difference isolates the diffuse part: (full - spec) halves exactly.
    const RenderedImage parts = render_image(g, lights, {}, q, {});
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) {
            const double spec = parts.specular.at(r, c).r;
            CHECK(half.at(r, c).r - spec ==
                  doctest::Approx(0.5 * (full.at(r, c).r - spec)).epsilon(1e-6));
        }
}

TEST_CASE("edit_specularity identity and clamping") {
    const int n = 12;
    const GBuffer g = GBuffer::uniform(n, n, Rgb{0.5, 0.5, 0.5}, Vec3{0, 0, 1}, 0.6, 2.0);
    SplitMix64 rng(37);
    const LightingGrid lights = LightingGrid::single(test::random_env(rng, 2, 1.0, 25.0, 2.0));
    const HdrImage image = random_image(rng, n, n);
    const HemisphereQuadrature q = build_quadrature();
    const BinaryMask region = BinaryMask::ones(n, n);

    const HdrImage same = edit_specularity(g, lights, {}, region, 0.6, image, q, {});
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) CHECK(same.at(r, c).r == doctest::Approx(image.at(r, c).r));

    const HdrImage shinier = edit_specularity(g, lights, {}, region, 0.1, image, q, {});
    for (float v : shinier.data) CHECK(v >= 0.0f);
}

TEST_CASE("specularity residual is purely specular under any lighting") {
    // The diffuse term does not depend on roughness, so the residual must
    // equal the specular difference exactly.
    const int n = 8;
    const GBuffer g = GBuffer::uniform(n, n, Rgb{0.9, 0.9, 0.9}, Vec3{0, 0, 1}, 0.8, 2.0);
    SgEnvironment ambient;
    ambient.lobes.push_back({Vec3{0, 0, 1}, 0.01, Rgb{1.0, 1.0, 1.0}});
    const LightingGrid lights = LightingGrid::single(ambient);
    const HdrImage image = HdrImage::constant(n, n, Rgb{0.3, 0.3, 0.3});
    const HemisphereQuadrature q = build_quadrature();
    const HdrImage out =
        edit_specularity(g, lights, {}, BinaryMask::ones(n, n), 0.3, image, q, {});

    GBuffer g_new = g;
    for (auto& v : g_new.roughness) v = 0.3f;
    const RenderedImage before = render_image(g, lights, {}, q, {});
    const RenderedImage after = render_image(g_new, lights, {}, q, {});
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) {
            const double residual = after.specular.at(r, c).r - before.specular.at(r, c).r;
            CHECK(out.at(r, c).r == doctest::Approx(0.3 + residual).epsilon(1e-6));
        }
}

}  // TEST_SUITE
