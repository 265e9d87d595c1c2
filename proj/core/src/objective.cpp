// Copyright 2026 The LumenForge Authors
// SPDX-License-Identifier: Apache-2.0

#include "lumen/objective.hpp"

#include <cmath>
#include <functional>
#include <stdexcept>

namespace lumen {

namespace {

void check_dims(const HdrImage& a, const HdrImage& b, const char* who) {
    if (a.height != b.height || a.width != b.width)
        throw std::invalid_argument(std::string(who) + ": image dims disagree");
}

void check_mask(const HdrImage& a, const BinaryMask& m, const char* who) {
    if (a.height != m.height || a.width != m.width)
        throw std::invalid_argument(std::string(who) + ": mask dims disagree");
}

/// Deterministic golden-section minimizer on [lo, hi].
double golden_section(const std::function<double(double)>& f, double lo, double hi,
                      int iterations = 200) {
    constexpr double kInvPhi = 0.6180339887498949;
    double a = lo, b = hi;
    double x1 = b - kInvPhi * (b - a);
    double x2 = a + kInvPhi * (b - a);
    double f1 = f(x1), f2 = f(x2);
    for (int i = 0; i < iterations && b - a > 1e-12; ++i) {
        if (f1 < f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - kInvPhi * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + kInvPhi * (b - a);
            f2 = f(x2);
        }
    }
    return f1 < f2 ? x1 : x2;
}

}  // namespace

ScaleInvariantResult scale_invariant_l2(const HdrImage& pred, const HdrImage& gt,
                                        const BinaryMask& mask) {
    check_dims(pred, gt, "scale_invariant_l2");
    check_mask(pred, mask, "scale_invariant_l2");
    double pp = 0.0, gp = 0.0;
    std::size_t n = 0;
    for (int r = 0; r < pred.height; ++r)
        for (int c = 0; c < pred.width; ++c) {
            if (!mask.at(r, c)) continue;
            const Rgb p = pred.at(r, c), g = gt.at(r, c);
            pp += p.r * p.r + p.g * p.g + p.b * p.b;
            gp += g.r * p.r + g.g * p.g + g.b * p.b;
            ++n;
        }
    if (n == 0) throw std::invalid_argument("scale_invariant_l2: empty mask");
    const double scale = pp > 0.0 ? gp / pp : 0.0;
    double loss = 0.0;
    for (int r = 0; r < pred.height; ++r)
        for (int c = 0; c < pred.width; ++c) {
            if (!mask.at(r, c)) continue;
            const Rgb p = pred.at(r, c), g = gt.at(r, c);
            for (int ch = 0; ch < 3; ++ch) {
                const double d = g[ch] - scale * p[ch];
                loss += d * d;
            }
        }
    return {loss / (3.0 * static_cast<double>(n)), scale};
}

double masked_l2(const HdrImage& pred, const HdrImage& gt, const BinaryMask& mask) {
    check_dims(pred, gt, "masked_l2");
    check_mask(pred, mask, "masked_l2");
    double loss = 0.0;
    std::size_t n = 0;
    for (int r = 0; r < pred.height; ++r)
        for (int c = 0; c < pred.width; ++c) {
            if (!mask.at(r, c)) continue;
            const Rgb d = gt.at(r, c) - pred.at(r, c);
            loss += d.r * d.r + d.g * d.g + d.b * d.b;
            ++n;
        }
    if (n == 0) throw std::invalid_argument("masked_l2: empty mask");
    return loss / (3.0 * static_cast<double>(n));
}

DepthLossResult log_encoded_depth_loss(std::span<const float> gt_depth,
                                       std::span<const float> pred_depth, const BinaryMask& mask,
                                       double search_lo, double search_hi) {
    if (gt_depth.size() != pred_depth.size() ||
        gt_depth.size() != static_cast<std::size_t>(mask.height) * mask.width)
        throw std::invalid_argument("log_encoded_depth_loss: size mismatch");
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < gt_depth.size(); ++i) {
        if (!mask.values[i]) continue;
        if (!(gt_depth[i] > 0.0f) || !(pred_depth[i] > 0.0f))
            throw std::invalid_argument("log_encoded_depth_loss: nonpositive depth under mask");
        idx.push_back(i);
    }
    if (idx.empty()) throw std::invalid_argument("log_encoded_depth_loss: empty mask");

    const auto loss_at = [&](double log_c) {
        const double c = std::exp(log_c);
        double loss = 0.0;
        for (std::size_t i : idx) {
            const double d = std::log1p(static_cast<double>(gt_depth[i])) -
                             std::log1p(c * static_cast<double>(pred_depth[i]));
            loss += d * d;
        }
        return loss / static_cast<double>(idx.size());
    };

    if (search_lo > search_hi)
        throw std::invalid_argument("log_encoded_depth_loss: empty search window");
    const double log_c = search_lo == search_hi
                             ? std::log(search_lo)
                             : golden_section(loss_at, std::log(search_lo), std::log(search_hi));
    return {loss_at(log_c), std::exp(log_c)};
}

RenderLossResult render_loss(const HdrImage& image, const HdrImage& diffuse,
                             const HdrImage& specular, const BinaryMask& mask) {
    check_dims(image, diffuse, "render_loss");
    check_dims(image, specular, "render_loss");
    check_mask(image, mask, "render_loss");

    double dd = 0.0, ss = 0.0, ds = 0.0, id = 0.0, is = 0.0, ii = 0.0;
    std::size_t n = 0;
    for (int r = 0; r < image.height; ++r)
        for (int c = 0; c < image.width; ++c) {
            if (!mask.at(r, c)) continue;
            const Rgb i = image.at(r, c), d = diffuse.at(r, c), s = specular.at(r, c);
            for (int ch = 0; ch < 3; ++ch) {
                dd += d[ch] * d[ch];
                ss += s[ch] * s[ch];
                ds += d[ch] * s[ch];
                id += i[ch] * d[ch];
                is += i[ch] * s[ch];
                ii += i[ch] * i[ch];
            }
            ++n;
        }
    if (n == 0) throw std::invalid_argument("render_loss: empty mask");

    const auto residual = [&](double cd, double cs) {
        return (ii + cd * cd * dd + cs * cs * ss - 2.0 * cd * id - 2.0 * cs * is +
                2.0 * cd * cs * ds) /
               (3.0 * static_cast<double>(n));
    };
    const auto clamp0 = [](double v) { return v > 0.0 ? v : 0.0; };

    RenderLossResult out;
    const double det = dd * ss - ds * ds;
    const double scale = dd * ss;
    if (det <= 1e-12 * std::max(scale, 1e-300)) {
        // Linearly dependent (or vanishing) components: single coefficient.
        out.single_coefficient_fallback = true;
        out.c_diff = dd > 0.0 ? clamp0(id / dd) : 0.0;
        out.c_spec = 0.0;
    } else {
        double cd = (id * ss - is * ds) / det;
        double cs = (is * dd - id * ds) / det;
        if (cd < 0.0 || cs < 0.0) {
            // Nonnegative optimum lies on a boundary; try both axes.
            const double cd_only = dd > 0.0 ? clamp0(id / dd) : 0.0;
            const double cs_only = ss > 0.0 ? clamp0(is / ss) : 0.0;
            if (residual(cd_only, 0.0) <= residual(0.0, cs_only)) {
                cd = cd_only;
                cs = 0.0;
            } else {
                cd = 0.0;
                cs = cs_only;
            }
        }
        out.c_diff = cd;
        out.c_spec = cs;
    }
    out.loss = residual(out.c_diff, out.c_spec);
    return out;
}

SgParamLosses sg_param_losses(const SgEnvironment& pred, const SgEnvironment& gt) {
    if (pred.lobes.size() != gt.lobes.size())
        throw std::invalid_argument("sg_param_losses: lobe count mismatch");
    const std::size_t K = pred.lobes.size();
    SgParamLosses out;
    out.lambda.resize(K);
    out.xi.resize(K);
    out.intensity.resize(K);

    for (std::size_t k = 0; k < K; ++k) {
        const Vec3 d = pred.lobes[k].xi - gt.lobes[k].xi;
        out.xi[k] = dot(d, d);
    }

    // Shared log-domain scale across lobes; a per-lobe scale would zero
    // the loss trivially.
    const auto shared_scale = [&](auto value_of, int channels) {
        return golden_section(
            [&](double log_c) {
                const double c = std::exp(log_c);
                double loss = 0.0;
                for (std::size_t k = 0; k < K; ++k)
                    for (int ch = 0; ch < channels; ++ch) {
                        const double diff = std::log1p(c * value_of(pred.lobes[k], ch)) -
                                            std::log1p(value_of(gt.lobes[k], ch));
                        loss += diff * diff;
                    }
                return loss;
            },
            std::log(1e-3), std::log(1e3));
    };

    const auto lambda_of = [](const SgLobe& l, int) { return l.lambda; };
    const auto intensity_of = [](const SgLobe& l, int ch) { return l.intensity[ch]; };
    out.lambda_scale = std::exp(shared_scale(lambda_of, 1));
    out.intensity_scale = std::exp(shared_scale(intensity_of, 3));

    for (std::size_t k = 0; k < K; ++k) {
        const double dl = std::log1p(out.lambda_scale * pred.lobes[k].lambda) -
                          std::log1p(gt.lobes[k].lambda);
        out.lambda[k] = dl * dl;
        double li = 0.0;
        for (int ch = 0; ch < 3; ++ch) {
            const double df = std::log1p(out.intensity_scale * pred.lobes[k].intensity[ch]) -
                              std::log1p(gt.lobes[k].intensity[ch]);
            li += df * df;
        }
        out.intensity[k] = li / 3.0;
    }
    return out;
}

double total_loss(const LossComponents& parts, const LossWeights& w) {
    double total = w.albedo * parts.albedo + w.normal * parts.normal +
                   w.roughness * parts.roughness + w.depth * parts.depth +
                   w.lighting * parts.lighting + w.render * parts.render;
    for (double v : parts.lambda_k) total += w.lambda * v;
    for (double v : parts.xi_k) total += w.xi * v;
    for (double v : parts.intensity_k) total += w.intensity * v;
    return total;
}

ScaleSolution resolve_scales(const HdrImage& image, const HdrImage& diffuse,
                             const HdrImage& specular, const HdrImage& albedo,
                             const BinaryMask& mask) {
    check_dims(image, diffuse, "resolve_scales");
    check_dims(image, specular, "resolve_scales");
    check_dims(image, albedo, "resolve_scales");
    check_mask(image, mask, "resolve_scales");

    double dd = 0.0, ss = 0.0, ds = 0.0;
    std::size_t n = 0;
    for (int r = 0; r < image.height; ++r)
        for (int c = 0; c < image.width; ++c) {
            if (!mask.at(r, c)) continue;
            const Rgb d = diffuse.at(r, c), s = specular.at(r, c);
            for (int ch = 0; ch < 3; ++ch) {
                dd += d[ch] * d[ch];
                ss += s[ch] * s[ch];
                ds += d[ch] * s[ch];
            }
            ++n;
        }
    if (n == 0) throw std::invalid_argument("resolve_scales: empty mask");

    const RenderLossResult reg = render_loss(image, diffuse, specular, mask);
    ScaleSolution out;
    out.c_d = reg.c_diff;
    out.c_s = reg.c_spec;
    out.determinant = (dd * ss - ds * ds) / static_cast<double>(n);

    const auto albedo_max_branch = [&]() {
        double max_a = 0.0;
        for (int r = 0; r < image.height; ++r)
            for (int c = 0; c < image.width; ++c) {
                if (!mask.at(r, c)) continue;
                max_a = std::max(max_a, albedo.at(r, c).max_component());
            }
        if (max_a <= 0.0)
            throw std::invalid_argument("resolve_scales: zero albedo in albedo-max branch");
        out.branch = ScaleBranch::AlbedoMax;
        out.c_a = 1.0 / max_a;
        out.c_l = out.c_d / out.c_a;
    };

    if (out.determinant > 1e-7) {
        if (reg.c_spec > 0.0) {
            out.branch = ScaleBranch::Specular;
            out.c_l = reg.c_spec;
            out.c_a = reg.c_diff / out.c_l;
        } else {
            out.warning = true;
            albedo_max_branch();
        }
    } else {
        albedo_max_branch();
    }
    return out;
}

}  // namespace lumen
