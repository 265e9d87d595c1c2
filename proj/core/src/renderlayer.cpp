// Copyright 2026 The LumenForge Authors
// SPDX-License-Identifier: Apache-2.0

#include "lumen/renderlayer.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "lumen/parallel.hpp"

namespace lumen {

namespace {
constexpr double kPi = std::numbers::pi;
}

HemisphereQuadrature build_quadrature(int azimuth_bins, int elevation_bins) {
    HemisphereQuadrature q;
    q.azimuth_bins = azimuth_bins;
    q.elevation_bins = elevation_bins;
    const double dtheta = kPi / 2.0 / elevation_bins;
    const double dphi = 2.0 * kPi / azimuth_bins;
    q.directions.reserve(static_cast<std::size_t>(azimuth_bins) * elevation_bins);
    q.solid_angles.reserve(q.directions.capacity());
    q.cosine_weights.reserve(q.directions.capacity());
    for (int j = 0; j < elevation_bins; ++j) {
        const double theta = (j + 0.5) * dtheta;
        const double domega = std::sin(theta) * dtheta * dphi;
        for (int i = 0; i < azimuth_bins; ++i) {
            const double phi = (i + 0.5) * dphi;
            q.directions.push_back({std::sin(theta) * std::cos(phi),
                                    std::sin(theta) * std::sin(phi), std::cos(theta)});
            q.solid_angles.push_back(domega);
            q.cosine_weights.push_back(std::cos(theta) * domega);
        }
    }
    return q;
}

LocalFrame local_frame(const Vec3& normal) {
    LocalFrame f;
    f.normal = normal;
    const Vec3 helper = std::abs(normal.z) < 1.0 - 1e-6 ? Vec3{0.0, 0.0, 1.0} : Vec3{1.0, 0.0, 0.0};
    f.tangent = normalized(cross(helper, normal));
    f.bitangent = cross(normal, f.tangent);
    return f;
}

RadianceFn sg_radiance(const SgEnvironment& env) {
    return [env](const Vec3& dir) { return eval_sg(env, dir); };
}

RadianceFn grid_radiance(const EnvMapGrid& grid) {
    return [grid](const Vec3& dir) { return grid_lookup(grid, dir); };
}

RadianceFn sh_radiance(const ShCoeffs& coeffs) {
    return [coeffs](const Vec3& dir) {
        const Rgb v = sh_eval(coeffs, dir);
        return Rgb{std::max(0.0, v.r), std::max(0.0, v.g), std::max(0.0, v.b)};
    };
}

PixelRender render_pixel_radiance(const SurfaceSample& s, const Vec3& view, const RadianceFn& L,
                                  const HemisphereQuadrature& q, const BrdfConfig& cfg) {
    PixelRender out;
    const double n_dot_v = dot(s.normal, view);
    if (n_dot_v <= 0.0) {
        out.view_below_surface = true;
        return out;
    }
    const LocalFrame frame = local_frame(s.normal);
    const Rgb f_d = eval_diffuse(s);
    for (std::size_t i = 0; i < q.directions.size(); ++i) {
        const Vec3 light = frame.to_world(q.directions[i]);
        const Rgb radiance = L(light);
        const double w = q.cosine_weights[i];
        out.diffuse += f_d * radiance * w;
        const double f_s = eval_specular(s, {view, light}, cfg);
        out.specular += radiance * (f_s * w);
    }
    return out;
}

PixelRender render_pixel(const SurfaceSample& s, const Vec3& view, const SgEnvironment& env,
                         const HemisphereQuadrature& q, const BrdfConfig& cfg) {
    return render_pixel_radiance(s, view, sg_radiance(env), q, cfg);
}

PixelGradients render_pixel_grad(const SurfaceSample& s, const Vec3& view,
                                 const SgEnvironment& env, const HemisphereQuadrature& q,
                                 const BrdfConfig& cfg) {
    PixelGradients out;
    out.lobes.resize(env.lobes.size());
    const double n_dot_v = dot(s.normal, view);
    if (n_dot_v <= 0.0) {
        out.value.view_below_surface = true;
        return out;
    }

    // Tangent pairs at every lobe axis for the in-plane axis partials.
    for (std::size_t k = 0; k < env.lobes.size(); ++k) {
        const LocalFrame f = local_frame(env.lobes[k].xi);
        out.lobes[k].axis_tangent_u = f.tangent;
        out.lobes[k].axis_tangent_v = f.bitangent;
    }

    const LocalFrame frame = local_frame(s.normal);
    const Rgb f_d = eval_diffuse(s);
    Rgb lighting_cos_sum;
    for (std::size_t i = 0; i < q.directions.size(); ++i) {
        const Vec3 light = frame.to_world(q.directions[i]);
        const double w = q.cosine_weights[i];
        const SpecularEval f_s = eval_specular_with_droughness(s, {view, light}, cfg);

        Rgb radiance;
        for (std::size_t k = 0; k < env.lobes.size(); ++k) {
            const SgLobe& lobe = env.lobes[k];
            const double cosine = dot(light, lobe.xi);
            const double resp = std::exp(-lobe.lambda * (1.0 - cosine));
            const Rgb contribution = lobe.intensity * resp;
            radiance += contribution;

            LobeGradients& lg = out.lobes[k];
            const double dresp_dlambda = -(1.0 - cosine) * resp;
            const double du = dot(light, lg.axis_tangent_u) * lobe.lambda * resp;
            const double dv = dot(light, lg.axis_tangent_v) * lobe.lambda * resp;

            lg.d_diffuse_d_intensity += f_d * (resp * w);
            lg.d_specular_d_intensity += Rgb{1.0, 1.0, 1.0} * (f_s.value * resp * w);
            lg.d_diffuse_d_lambda += f_d * lobe.intensity * (dresp_dlambda * w);
            lg.d_specular_d_lambda += lobe.intensity * (f_s.value * dresp_dlambda * w);
            lg.d_diffuse_d_xi_u += f_d * lobe.intensity * (du * w);
            lg.d_diffuse_d_xi_v += f_d * lobe.intensity * (dv * w);
            lg.d_specular_d_xi_u += lobe.intensity * (f_s.value * du * w);
            lg.d_specular_d_xi_v += lobe.intensity * (f_s.value * dv * w);
        }

        out.value.diffuse += f_d * radiance * w;
        out.value.specular += radiance * (f_s.value * w);
        out.d_specular_d_roughness += radiance * (f_s.d_roughness * w);
        lighting_cos_sum += radiance * w;
    }

    // I_d[ch] = (A[ch]/pi) * sum(L cos domega): linear in albedo.
    out.d_diffuse_d_albedo = lighting_cos_sum / kPi;
    return out;
}

// ---------------------------------------------------------------------------
// GBuffer / LightingGrid / camera
// ---------------------------------------------------------------------------

GBuffer GBuffer::uniform(int height, int width, const Rgb& albedo, const Vec3& normal,
                         double roughness, double depth) {
    GBuffer g;
    g.height = height;
    g.width = width;
    g.albedo = HdrImage::constant(height, width, albedo);
    g.normals.resize(static_cast<std::size_t>(height) * width * 3);
    g.roughness.assign(static_cast<std::size_t>(height) * width, static_cast<float>(roughness));
    g.depth.assign(static_cast<std::size_t>(height) * width, static_cast<float>(depth));
    for (std::size_t p = 0; p < static_cast<std::size_t>(height) * width; ++p) {
        g.normals[3 * p] = static_cast<float>(normal.x);
        g.normals[3 * p + 1] = static_cast<float>(normal.y);
        g.normals[3 * p + 2] = static_cast<float>(normal.z);
    }
    return g;
}

void GBuffer::validate() const {
    if (height <= 0 || width <= 0) throw std::invalid_argument("GBuffer: non-positive dims");
    const std::size_t pixels = static_cast<std::size_t>(height) * width;
    if (albedo.height != height || albedo.width != width || normals.size() != pixels * 3 ||
        roughness.size() != pixels || depth.size() != pixels)
        throw std::invalid_argument("GBuffer: plane dimensions disagree");
    for (std::size_t p = 0; p < pixels; ++p) {
        const Vec3 n{normals[3 * p], normals[3 * p + 1], normals[3 * p + 2]};
        if (std::abs(norm(n) - 1.0) > 1e-4)
            throw std::invalid_argument("GBuffer: normal not unit length");
        if (roughness[p] < 0.0f || roughness[p] > 1.0f)
            throw std::invalid_argument("GBuffer: roughness outside [0,1]");
    }
}

GBuffer read_gbuffer(const std::filesystem::path& dir) {
    GBuffer g;
    g.albedo = read_pfm(dir / "albedo.pfm");
    g.height = g.albedo.height;
    g.width = g.albedo.width;

    const PfmData normal = read_pfm_raw(dir / "normal.pfm");
    if (normal.channels != 3 || normal.height != g.height || normal.width != g.width)
        throw std::runtime_error((dir / "normal.pfm").string() + ": bad shape for normal map");
    g.normals = normal.samples;

    const auto load_scalar = [&](const char* name) {
        const PfmData p = read_pfm_raw(dir / name);
        if (p.height != g.height || p.width != g.width)
            throw std::runtime_error((dir / name).string() + ": dims disagree with albedo");
        std::vector<float> out(static_cast<std::size_t>(g.height) * g.width);
        for (std::size_t i = 0; i < out.size(); ++i)
            out[i] = p.channels == 1 ? p.samples[i] : p.samples[3 * i];
        return out;
    };
    g.roughness = load_scalar("roughness.pfm");
    g.depth = load_scalar("depth.pfm");
    g.validate();
    return g;
}

void write_gbuffer(const GBuffer& g, const std::filesystem::path& dir) {
    g.validate();
    std::filesystem::create_directories(dir);
    write_pfm(g.albedo, dir / "albedo.pfm");
    write_pfm_raw(PfmData{g.height, g.width, 3, g.normals}, dir / "normal.pfm");
    write_pfm_raw(PfmData{g.height, g.width, 1, g.roughness}, dir / "roughness.pfm");
    write_pfm_raw(PfmData{g.height, g.width, 1, g.depth}, dir / "depth.pfm");
}

LightingGrid LightingGrid::single(const SgEnvironment& env) { return {1, 1, {env}}; }

const SgEnvironment& LightingGrid::cell_for_pixel(int r, int c, int image_height,
                                                  int image_width) const {
    if (image_height % rows != 0 || image_width % cols != 0)
        throw std::invalid_argument("LightingGrid: image dims must be multiples of grid dims");
    const int stride_r = image_height / rows;
    const int stride_c = image_width / cols;
    if (stride_r != stride_c)
        throw std::invalid_argument("LightingGrid: grid must divide the image by one common "
                                    "stride");
    return cell(r / stride_r, c / stride_c);
}

void write_lighting_grid(const LightingGrid& grid, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error(path.string() + ": cannot open for writing");
    out.precision(17);
    out << "sggrid " << grid.rows << ' ' << grid.cols << ' '
        << (grid.cells.empty() ? 0 : grid.cells.front().lobes.size()) << '\n';
    for (const SgEnvironment& env : grid.cells) {
        env.validate();
        for (const SgLobe& lobe : env.lobes)
            out << lobe.xi.x << ' ' << lobe.xi.y << ' ' << lobe.xi.z << ' ' << lobe.lambda << ' '
                << lobe.intensity.r << ' ' << lobe.intensity.g << ' ' << lobe.intensity.b << '\n';
    }
    if (!out) throw std::runtime_error(path.string() + ": write failure");
}

LightingGrid read_lighting_grid(const std::filesystem::path& path) {
    if (std::filesystem::is_directory(path)) return read_lighting_grid(path / "lights.txt");
    std::ifstream in(path);
    if (!in) throw std::runtime_error(path.string() + ": cannot open");
    std::string first;
    in >> first;
    if (first != "sggrid") {
        // Plain lobe record set: one environment shared by every pixel.
        return LightingGrid::single(read_sg_text(path));
    }
    int rows = 0, cols = 0, lobes = 0;
    if (!(in >> rows >> cols >> lobes) || rows <= 0 || cols <= 0 || lobes <= 0)
        throw std::runtime_error(path.string() + ": malformed sggrid header");
    LightingGrid grid;
    grid.rows = rows;
    grid.cols = cols;
    grid.cells.resize(static_cast<std::size_t>(rows) * cols);
    for (auto& env : grid.cells) {
        env.lobes.resize(static_cast<std::size_t>(lobes));
        for (auto& lobe : env.lobes)
            if (!(in >> lobe.xi.x >> lobe.xi.y >> lobe.xi.z >> lobe.lambda >> lobe.intensity.r >>
                  lobe.intensity.g >> lobe.intensity.b))
                throw std::runtime_error(path.string() + ": truncated sggrid payload");
        env.validate();
    }
    return grid;
}

Vec3 CameraModel::ray_dir(int r, int c, int height, int width) const {
    const double tan_half = std::tan(fov_deg * kPi / 180.0 / 2.0);
    const double px = (c + 0.5 - width / 2.0) / (width / 2.0) * tan_half;
    const double py = (height / 2.0 - r - 0.5) / (width / 2.0) * tan_half;
    return normalized({px, py, -1.0});
}

Vec3 CameraModel::point_at(int r, int c, int height, int width, double depth) const {
    const Vec3 d = ray_dir(r, c, height, width);
    return d * (depth / -d.z);
}

RenderedImage render_image(const GBuffer& g, const LightingGrid& lights, const CameraModel& cam,
                           const HemisphereQuadrature& q, const BrdfConfig& cfg,
                           const BinaryMask* mask) {
    g.validate();
    if (mask && (mask->height != g.height || mask->width != g.width))
        throw std::invalid_argument("render_image: mask dims disagree with gbuffer");
    if (g.height % lights.rows != 0 || g.width % lights.cols != 0)
        throw std::invalid_argument("render_image: lighting grid does not divide image dims");

    RenderedImage out{HdrImage::zeros(g.height, g.width), HdrImage::zeros(g.height, g.width)};
    parallel_for(0, g.height, [&](int r) {
        for (int c = 0; c < g.width; ++c) {
            if (mask && !mask->at(r, c)) continue;
            const SurfaceSample s{g.albedo_at(r, c), g.normal_at(r, c), g.roughness_at(r, c)};
            const Vec3 view = -cam.ray_dir(r, c, g.height, g.width);
            const SgEnvironment& env = lights.cell_for_pixel(r, c, g.height, g.width);
            const PixelRender px = render_pixel(s, view, env, q, cfg);
            out.diffuse.set(r, c, px.diffuse);
            out.specular.set(r, c, px.specular);
        }
    });
    return out;
}

}  // namespace lumen
