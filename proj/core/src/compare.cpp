// Copyright 2026 The LumenForge Authors
// SPDX-License-Identifier: Apache-2.0

#include "lumen/compare.hpp"

#include <cmath>
#include <stdexcept>

namespace lumen {

ProbeGBuffer make_probe_gbuffer(int size, double roughness) {
    ProbeGBuffer probe;
    probe.size = size;
    probe.gbuffer = GBuffer::uniform(size, size, Rgb{0.8, 0.8, 0.8}, Vec3{0.0, 0.0, 1.0},
                                     roughness, 1.0);
    probe.mask = BinaryMask::zeros(size, size);
    const double limit = 0.95;
    for (int r = 0; r < size; ++r)
        for (int c = 0; c < size; ++c) {
            const double x = (c + 0.5) / size * 2.0 - 1.0;
            const double y = 1.0 - (r + 0.5) / size * 2.0;
            const double rr = x * x + y * y;
            if (rr <= limit * limit) {
                probe.mask.set(r, c, true);
                const Vec3 n{x, y, std::sqrt(std::max(0.0, 1.0 - rr))};
                const std::size_t i = (static_cast<std::size_t>(r) * size + c) * 3;
                probe.gbuffer.normals[i] = static_cast<float>(n.x);
                probe.gbuffer.normals[i + 1] = static_cast<float>(n.y);
                probe.gbuffer.normals[i + 2] = static_cast<float>(n.z);
            }
        }
    return probe;
}

double grid_log_loss(const EnvMapGrid& recon, const EnvMapGrid& target) {
    if (recon.rows != target.rows || recon.cols != target.cols)
        throw std::invalid_argument("grid_log_loss: grid dims disagree");
    double loss = 0.0, total = 0.0;
    for (int r = 0; r < target.rows; ++r) {
        const double w = grid_cell_solid_angle(target, r);
        for (int c = 0; c < target.cols; ++c) {
            const Rgb a = recon.at(r, c), b = target.at(r, c);
            double cell = 0.0;
            for (int ch = 0; ch < 3; ++ch) {
                const double d = std::log1p(static_cast<double>(a[ch])) -
                                 std::log1p(static_cast<double>(b[ch]));
                cell += d * d;
            }
            loss += w * cell / 3.0;
            total += w;
        }
    }
    return loss / total;
}

namespace {

// Render the probe under a radiance function restricted to the grid domain.
HdrImage render_probe(const ProbeGBuffer& probe, const RadianceFn& base, double theta_span,
                      const HemisphereQuadrature& q, const BrdfConfig& cfg) {
    const double min_z = std::cos(theta_span);
    const RadianceFn clamped = [&](const Vec3& dir) -> Rgb {
        if (dir.z < min_z) return {};
        return base(dir);
    };
    const int size = probe.size;
    HdrImage out = HdrImage::zeros(size, size);
    const Vec3 view{0.0, 0.0, 1.0};
    for (int r = 0; r < size; ++r)
        for (int c = 0; c < size; ++c) {
            if (!probe.mask.at(r, c)) continue;
            const SurfaceSample s{probe.gbuffer.albedo_at(r, c), probe.gbuffer.normal_at(r, c),
                                  probe.gbuffer.roughness_at(r, c)};
            const PixelRender px = render_pixel_radiance(s, view, clamped, q, cfg);
            out.set(r, c, px.diffuse + px.specular);
        }
    return out;
}

double masked_mse(const HdrImage& a, const HdrImage& b, const BinaryMask& mask) {
    double acc = 0.0;
    std::size_t n = 0;
    for (int r = 0; r < a.height; ++r)
        for (int c = 0; c < a.width; ++c) {
            if (!mask.at(r, c)) continue;
            const Rgb d = a.at(r, c) - b.at(r, c);
            acc += d.r * d.r + d.g * d.g + d.b * d.b;
            ++n;
        }
    return acc / (3.0 * static_cast<double>(n));
}

}  // namespace

CompareReport compare_sh_sg(const EnvMapGrid& target, const SgFitConfig& fit_cfg, int sh_order,
                            int probe_size, double probe_roughness) {
    target.validate();
    CompareReport report;

    const FitResult fit = fit_grid(target, fit_cfg);
    report.sg_fit_final_loss = fit.final_loss;
    report.sg_line_search_warning = fit.line_search_warning;
    const ShCoeffs sh = sh_project(target, sh_order);

    // Lighting-space losses on the grid resolution.
    const EnvMapGrid sg_recon = sg_to_grid(fit.env, target.rows, target.cols, target.domain);
    EnvMapGrid sh_recon = EnvMapGrid::zeros(target.rows, target.cols, target.domain);
    for (int r = 0; r < target.rows; ++r)
        for (int c = 0; c < target.cols; ++c) {
            const Rgb v = sh_eval(sh, grid_direction(sh_recon, r, c));
            sh_recon.set(r, c, {std::max(0.0, v.r), std::max(0.0, v.g), std::max(0.0, v.b)});
        }
    report.sg_log_loss = grid_log_loss(sg_recon, target);
    report.sh_log_loss = grid_log_loss(sh_recon, target);

    // Image-space errors on the glossy probe against the target-lit render.
    const ProbeGBuffer probe = make_probe_gbuffer(probe_size, probe_roughness);
    const HemisphereQuadrature q = build_quadrature();
    const BrdfConfig cfg;
    const double span = target.theta_span();
    const HdrImage gt = render_probe(probe, grid_radiance(target), span, q, cfg);
    const HdrImage sg_img = render_probe(probe, sg_radiance(fit.env), span, q, cfg);
    const HdrImage sh_img = render_probe(probe, sh_radiance(sh), span, q, cfg);
    report.sg_render_mse = masked_mse(sg_img, gt, probe.mask);
    report.sh_render_mse = masked_mse(sh_img, gt, probe.mask);
    return report;
}

}  // namespace lumen
