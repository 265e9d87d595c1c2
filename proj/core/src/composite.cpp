// Copyright 2026 The LumenForge Authors
// SPDX-License-Identifier: Apache-2.0

#include "lumen/composite.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "lumen/parallel.hpp"

namespace lumen {

namespace {

constexpr double kRatioFloor = 1e-4;
constexpr double kRayEpsilon = 1e-6;

void check_same_dims(int h, int w, int oh, int ow, const char* who) {
    if (h != oh || w != ow) throw std::invalid_argument(std::string(who) + ": dims disagree");
}

struct Hit {
    double t = std::numeric_limits<double>::infinity();
    Vec3 normal;
};

struct Triangle {
    Vec3 a, b, c, normal;
};

// Moeller-Trumbore.
bool ray_triangle(const Vec3& origin, const Vec3& dir, const Triangle& tri, double& t_out) {
    const Vec3 e1 = tri.b - tri.a;
    const Vec3 e2 = tri.c - tri.a;
    const Vec3 p = cross(dir, e2);
    const double det = dot(e1, p);
    if (std::abs(det) < 1e-12) return false;
    const double inv = 1.0 / det;
    const Vec3 s = origin - tri.a;
    const double u = dot(s, p) * inv;
    if (u < 0.0 || u > 1.0) return false;
    const Vec3 q = cross(s, e1);
    const double v = dot(dir, q) * inv;
    if (v < 0.0 || u + v > 1.0) return false;
    const double t = dot(e2, q) * inv;
    if (t <= kRayEpsilon) return false;
    t_out = t;
    return true;
}

class ObjectGeometry {
public:
    ObjectGeometry(const ObjectSpec& spec, const Vec3& plane_point, const Vec3& plane_normal) {
        if (const auto* sphere = std::get_if<SphereSpec>(&spec.shape)) {
            is_sphere_ = true;
            radius_ = sphere->radius;
            center_ = plane_point + plane_normal * sphere->radius;
            footprint_radius_ = sphere->radius;
        } else {
            const auto& hf = std::get<HeightFieldSpec>(spec.shape);
            if (hf.resolution < 2 ||
                hf.heights.size() != static_cast<std::size_t>(hf.resolution) * hf.resolution)
                throw std::invalid_argument("insert_object: malformed height field");
            const LocalFrame frame = local_frame(plane_normal);
            const int m = hf.resolution;
            const double f = hf.footprint;
            footprint_radius_ = f * 0.7071067811865476;
            const auto vertex = [&](int i, int j) {
                const double u = (static_cast<double>(j) / (m - 1) - 0.5) * f;
                const double v = (static_cast<double>(i) / (m - 1) - 0.5) * f;
                const double h = hf.heights[static_cast<std::size_t>(i) * m + j];
                return plane_point + frame.tangent * u + frame.bitangent * v + plane_normal * h;
            };
            for (int i = 0; i + 1 < m; ++i)
                for (int j = 0; j + 1 < m; ++j) {
                    const Vec3 v00 = vertex(i, j), v01 = vertex(i, j + 1);
                    const Vec3 v10 = vertex(i + 1, j), v11 = vertex(i + 1, j + 1);
                    push_triangle(v00, v01, v11, plane_normal);
                    push_triangle(v00, v11, v10, plane_normal);
                }
            bbox_pad();
        }
    }

    bool intersect(const Vec3& origin, const Vec3& dir, Hit& hit) const {
        if (is_sphere_) {
            const Vec3 oc = origin - center_;
            const double b = dot(oc, dir);
            const double c = dot(oc, oc) - radius_ * radius_;
            const double disc = b * b - c;
            if (disc < 0.0) return false;
            const double sq = std::sqrt(disc);
            double t = -b - sq;
            if (t <= kRayEpsilon) t = -b + sq;
            if (t <= kRayEpsilon) return false;
            hit.t = t;
            hit.normal = normalized(origin + dir * t - center_);
            return true;
        }
        if (!ray_box(origin, dir)) return false;
        bool found = false;
        for (const Triangle& tri : triangles_) {
            double t = 0.0;
            if (ray_triangle(origin, dir, tri, t) && t < hit.t) {
                hit.t = t;
                hit.normal = tri.normal;
                found = true;
            }
        }
        return found;
    }

    bool occludes(const Vec3& origin, const Vec3& dir) const {
        Hit h;
        return intersect(origin, dir, h);
    }

    double footprint_radius() const { return footprint_radius_; }

private:
    void push_triangle(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& up) {
        Triangle t{a, b, c, {}};
        Vec3 n = cross(b - a, c - a);
        const double len = norm(n);
        if (len < 1e-15) return;  // degenerate cell
        n = n / len;
        if (dot(n, up) < 0.0) n = -n;
        t.normal = n;
        triangles_.push_back(t);
        for (const Vec3& v : {a, b, c}) {
            box_lo_ = {std::min(box_lo_.x, v.x), std::min(box_lo_.y, v.y),
                       std::min(box_lo_.z, v.z)};
            box_hi_ = {std::max(box_hi_.x, v.x), std::max(box_hi_.y, v.y),
                       std::max(box_hi_.z, v.z)};
        }
    }

    void bbox_pad() {
        const Vec3 pad{1e-9, 1e-9, 1e-9};
        box_lo_ = box_lo_ - pad;
        box_hi_ = box_hi_ + pad;
    }

    bool ray_box(const Vec3& origin, const Vec3& dir) const {
        double t0 = 0.0, t1 = std::numeric_limits<double>::infinity();
        for (int axis = 0; axis < 3; ++axis) {
            const double o = origin[static_cast<std::size_t>(axis)];
            const double d = dir[static_cast<std::size_t>(axis)];
            const double lo = box_lo_[static_cast<std::size_t>(axis)];
            const double hi = box_hi_[static_cast<std::size_t>(axis)];
            if (std::abs(d) < 1e-15) {
                if (o < lo || o > hi) return false;
                continue;
            }
            double ta = (lo - o) / d, tb = (hi - o) / d;
            if (ta > tb) std::swap(ta, tb);
            t0 = std::max(t0, ta);
            t1 = std::min(t1, tb);
            if (t0 > t1) return false;
        }
        return true;
    }

    bool is_sphere_ = false;
    Vec3 center_;
    double radius_ = 0.0;
    double footprint_radius_ = 0.0;
    std::vector<Triangle> triangles_;
    Vec3 box_lo_{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity(),
                 std::numeric_limits<double>::infinity()};
    Vec3 box_hi_{-std::numeric_limits<double>::infinity(),
                 -std::numeric_limits<double>::infinity(),
                 -std::numeric_limits<double>::infinity()};
};

}  // namespace

void InsertionSetup::validate() const {
    original.validate();
    check_same_dims(original.height, original.width, with_object.height, with_object.width,
                    "InsertionSetup");
    check_same_dims(original.height, original.width, plane_only.height, plane_only.width,
                    "InsertionSetup");
    check_same_dims(original.height, original.width, object_mask.height, object_mask.width,
                    "InsertionSetup");
    check_same_dims(original.height, original.width, combined_mask.height, combined_mask.width,
                    "InsertionSetup");
    for (std::size_t i = 0; i < object_mask.values.size(); ++i)
        if (object_mask.values[i] && !combined_mask.values[i])
            throw std::invalid_argument("InsertionSetup: object mask escapes combined mask");
}

HdrImage ratio_composite(const InsertionSetup& setup) {
    setup.validate();
    HdrImage out = setup.original;
    for (int r = 0; r < out.height; ++r)
        for (int c = 0; c < out.width; ++c) {
            if (setup.object_mask.at(r, c)) {
                out.set(r, c, setup.with_object.at(r, c));
            } else if (setup.combined_mask.at(r, c)) {
                const Rgb i = setup.original.at(r, c);
                const Rgb all = setup.with_object.at(r, c);
                const Rgb pl = setup.plane_only.at(r, c);
                out.set(r, c, {i.r * all.r / std::max(static_cast<double>(pl.r), kRatioFloor),
                               i.g * all.g / std::max(static_cast<double>(pl.g), kRatioFloor),
                               i.b * all.b / std::max(static_cast<double>(pl.b), kRatioFloor)});
            }
        }
    return out;
}

InsertionResult insert_object(const GBuffer& g, const LightingGrid& lights,
                              const CameraModel& cam, int at_row, int at_col,
                              const PlaneSpec& plane, const ObjectSpec& object,
                              const HdrImage& image, const HemisphereQuadrature& q,
                              const BrdfConfig& cfg) {
    g.validate();
    check_same_dims(g.height, g.width, image.height, image.width, "insert_object");
    if (at_row < 0 || at_row >= g.height || at_col < 0 || at_col >= g.width)
        throw std::invalid_argument("insert_object: insertion point outside image");
    if (plane.mask) {
        check_same_dims(g.height, g.width, plane.mask->height, plane.mask->width,
                        "insert_object");
        if (!plane.mask->at(at_row, at_col))
            throw std::invalid_argument("insert_object: insertion point outside plane mask");
    }
    const double depth = g.depth_at(at_row, at_col);
    if (!(depth > 0.0)) throw std::invalid_argument("insert_object: nonpositive depth at point");

    const Vec3 plane_point = cam.point_at(at_row, at_col, g.height, g.width, depth);
    const Vec3 plane_normal = g.normal_at(at_row, at_col);
    const Rgb plane_albedo = g.albedo_at(at_row, at_col);
    const double plane_rough = g.roughness_at(at_row, at_col);

    const ObjectGeometry geometry(object, plane_point, plane_normal);
    const double plane_radius = plane.radius_scale * geometry.footprint_radius();

    // High resolution sphere expansion of the insertion point's lighting.
    const SgEnvironment& env = lights.cell_for_pixel(at_row, at_col, g.height, g.width);
    const EnvMapGrid env_grid = sg_to_grid(env, 512, 1024, GridDomain::Sphere);

    HdrImage with_object = image;
    HdrImage plane_only = image;
    BinaryMask object_mask = BinaryMask::zeros(g.height, g.width);
    BinaryMask combined_mask = BinaryMask::zeros(g.height, g.width);

    const auto shade = [&](const Vec3& point, const Vec3& normal, const Rgb& albedo,
                           double roughness, const Vec3& view, bool shadow_by_object,
                           bool block_below_plane) {
        const RadianceFn radiance = [&](const Vec3& dir) -> Rgb {
            if (block_below_plane && dot(dir, plane_normal) <= 0.0) return {};
            if (shadow_by_object && geometry.occludes(point + dir * kRayEpsilon, dir)) return {};
            return grid_lookup(env_grid, dir);
        };
        const PixelRender px =
            render_pixel_radiance({albedo, normal, roughness}, view, radiance, q, cfg);
        return px.diffuse + px.specular;
    };

    parallel_for(0, g.height, [&](int r) {
        for (int c = 0; c < g.width; ++c) {
            const Vec3 ray = cam.ray_dir(r, c, g.height, g.width);
            Hit obj_hit;
            const bool hit_object = geometry.intersect({0.0, 0.0, 0.0}, ray, obj_hit);

            const double denom = dot(plane_normal, ray);
            double plane_t = std::numeric_limits<double>::infinity();
            if (std::abs(denom) > 1e-12) {
                const double t = dot(plane_normal, plane_point) / denom;
                if (t > 0.0) plane_t = t;
            }
            const Vec3 plane_hit = ray * plane_t;
            bool on_plane = std::isfinite(plane_t);
            if (on_plane) {
                if (plane.mask)
                    on_plane = plane.mask->at(r, c);
                else
                    on_plane = norm(plane_hit - plane_point) <= plane_radius;
            }

            if (hit_object && obj_hit.t < plane_t) {
                object_mask.set(r, c, true);
                combined_mask.set(r, c, true);
                const Vec3 point = ray * obj_hit.t;
                const Vec3 view = -ray;
                with_object.set(r, c, shade(point, obj_hit.normal, object.albedo,
                                            object.roughness, view, false, true));
                if (on_plane)
                    plane_only.set(r, c, shade(plane_hit, plane_normal, plane_albedo, plane_rough,
                                               view, false, false));
                continue;
            }
            if (on_plane) {
                combined_mask.set(r, c, true);
                const Vec3 view = -ray;
                with_object.set(r, c, shade(plane_hit, plane_normal, plane_albedo, plane_rough,
                                            view, true, false));
                plane_only.set(r, c, shade(plane_hit, plane_normal, plane_albedo, plane_rough,
                                           view, false, false));
            }
        }
    });

    InsertionResult out;
    out.with_object = with_object;
    out.plane_only = plane_only;
    out.object_mask = object_mask;
    out.combined_mask = combined_mask;
    out.composite =
        ratio_composite({image, std::move(with_object), std::move(plane_only), object_mask,
                         combined_mask});
    return out;
}

HdrImage edit_material(const GBuffer& g, const LightingGrid& lights, const CameraModel& cam,
                       const BinaryMask& region, const Rgb& new_albedo, double new_roughness,
                       const HdrImage& image, const HemisphereQuadrature& q,
                       const BrdfConfig& cfg) {
    g.validate();
    check_same_dims(g.height, g.width, image.height, image.width, "edit_material");
    check_same_dims(g.height, g.width, region.height, region.width, "edit_material");
    HdrImage out = image;
    parallel_for(0, g.height, [&](int r) {
        for (int c = 0; c < g.width; ++c) {
            if (!region.at(r, c)) continue;
            const SurfaceSample s{new_albedo, g.normal_at(r, c), new_roughness};
            const Vec3 view = -cam.ray_dir(r, c, g.height, g.width);
            const SgEnvironment& env = lights.cell_for_pixel(r, c, g.height, g.width);
            const PixelRender px = render_pixel(s, view, env, q, cfg);
            out.set(r, c, px.diffuse + px.specular);
        }
    });
    return out;
}

HdrImage edit_specularity(const GBuffer& g, const LightingGrid& lights, const CameraModel& cam,
                          const BinaryMask& region, double new_roughness, const HdrImage& image,
                          const HemisphereQuadrature& q, const BrdfConfig& cfg) {
    g.validate();
    check_same_dims(g.height, g.width, image.height, image.width, "edit_specularity");
    check_same_dims(g.height, g.width, region.height, region.width, "edit_specularity");
    HdrImage out = image;
    parallel_for(0, g.height, [&](int r) {
        for (int c = 0; c < g.width; ++c) {
            if (!region.at(r, c)) continue;
            const Vec3 view = -cam.ray_dir(r, c, g.height, g.width);
            const SgEnvironment& env = lights.cell_for_pixel(r, c, g.height, g.width);
            const Vec3 normal = g.normal_at(r, c);
            const Rgb albedo = g.albedo_at(r, c);
            const PixelRender before =
                render_pixel({albedo, normal, g.roughness_at(r, c)}, view, env, q, cfg);
            const PixelRender after =
                render_pixel({albedo, normal, new_roughness}, view, env, q, cfg);
            const Rgb residual =
                (after.diffuse + after.specular) - (before.diffuse + before.specular);
            const Rgb value = image.at(r, c) + residual;
            out.set(r, c,
                    {std::max(0.0, value.r), std::max(0.0, value.g), std::max(0.0, value.b)});
        }
    });
    return out;
}

}  // namespace lumen
