// Copyright 2026 The LumenForge Authors
// SPDX-License-Identifier: Apache-2.0

#include "lumen/sgfit.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace lumen {

namespace {
constexpr double kPi = std::numbers::pi;
}

UnconstrainedParams UnconstrainedParams::standard_init(const SgFitConfig& cfg) {
    UnconstrainedParams u;
    u.lobes.resize(static_cast<std::size_t>(cfg.lobe_count));
    for (auto& lobe : u.lobes) lobe.lambda_hat = std::log(kPi / 2.0);
    return u;
}

std::vector<double> UnconstrainedParams::to_flat() const {
    std::vector<double> flat;
    flat.reserve(lobes.size() * 6);
    for (const Lobe& l : lobes) {
        flat.push_back(l.theta_hat);
        flat.push_back(l.phi_hat);
        flat.push_back(l.lambda_hat);
        flat.push_back(l.intensity_hat.r);
        flat.push_back(l.intensity_hat.g);
        flat.push_back(l.intensity_hat.b);
    }
    return flat;
}

UnconstrainedParams UnconstrainedParams::from_flat(std::span<const double> flat) {
    if (flat.size() % 6 != 0)
        throw std::invalid_argument("UnconstrainedParams: flat size must be a multiple of 6");
    UnconstrainedParams u;
    u.lobes.resize(flat.size() / 6);
    for (std::size_t k = 0; k < u.lobes.size(); ++k) {
        const double* p = flat.data() + 6 * k;
        u.lobes[k] = {p[0], p[1], p[2], Rgb{p[3], p[4], p[5]}};
    }
    return u;
}

RegionOffsets region_offsets(int k, const SgFitConfig& cfg) {
    if (k < 0 || k >= cfg.lobe_count)
        throw std::out_of_range("region_offsets: lobe index out of range");
    return {kPi / 4.0 * (k % 2 + 0.5), kPi / 3.0 * (k % 6 + 0.5) - kPi};
}

SgEnvironment constrain(const UnconstrainedParams& u, const SgFitConfig& cfg) {
    SgEnvironment env;
    env.lobes.resize(u.lobes.size());
    for (std::size_t k = 0; k < u.lobes.size(); ++k) {
        const auto& lobe = u.lobes[k];
        const RegionOffsets off = region_offsets(static_cast<int>(k), cfg);
        const double theta = cfg.theta_scale * std::tanh(lobe.theta_hat) + off.b;
        const double phi = cfg.phi_scale * std::tanh(lobe.phi_hat) + off.d;
        env.lobes[k].xi = {std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi),
                           std::cos(theta)};
        env.lobes[k].lambda = std::exp(lobe.lambda_hat);
        env.lobes[k].intensity = {std::exp(lobe.intensity_hat.r), std::exp(lobe.intensity_hat.g),
                                  std::exp(lobe.intensity_hat.b)};
    }
    return env;
}

namespace {

// Precomputed per-cell quantities shared by loss and gradient passes.
struct Target {
    std::vector<Vec3> dirs;
    std::vector<double> weights;  // normalized solid angles
    std::vector<Rgb> log_target;  // log(L+1)
};

Target prepare_target(const EnvMapGrid& grid) {
    grid.validate();
    Target t;
    const std::size_t cells = static_cast<std::size_t>(grid.rows) * grid.cols;
    t.dirs.reserve(cells);
    t.weights.reserve(cells);
    t.log_target.reserve(cells);
    double total = 0.0;
    for (int r = 0; r < grid.rows; ++r) {
        const double w = grid_cell_solid_angle(grid, r);
        for (int c = 0; c < grid.cols; ++c) {
            t.dirs.push_back(grid_direction(grid, r, c));
            t.weights.push_back(w);
            const Rgb L = grid.at(r, c);
            t.log_target.push_back(
                {std::log1p(L.r), std::log1p(L.g), std::log1p(L.b)});
            total += w;
        }
    }
    for (double& w : t.weights) w /= total;
    return t;
}

double loss_on_target(const SgEnvironment& env, const Target& t) {
    double loss = 0.0;
    for (std::size_t i = 0; i < t.dirs.size(); ++i) {
        const Rgb recon = eval_sg(env, t.dirs[i]);
        double cell = 0.0;
        for (int ch = 0; ch < 3; ++ch) {
            const double diff = std::log1p(recon[ch]) - t.log_target[i][ch];
            cell += diff * diff;
        }
        loss += t.weights[i] * cell / 3.0;
    }
    return loss;
}

// Loss plus analytic gradient in the unconstrained parameterization.
double loss_and_grad(const UnconstrainedParams& u, const SgFitConfig& cfg, const Target& t,
                     std::span<double> grad) {
    const std::size_t K = u.lobes.size();
    const SgEnvironment env = constrain(u, cfg);
    for (double& g : grad) g = 0.0;

    // Chain-rule factors per lobe that do not depend on the cell.
    std::vector<Vec3> dxi_dtheta(K), dxi_dphi(K);
    std::vector<double> dtheta_dhat(K), dphi_dhat(K);
    for (std::size_t k = 0; k < K; ++k) {
        const RegionOffsets off = region_offsets(static_cast<int>(k), cfg);
        const double theta = cfg.theta_scale * std::tanh(u.lobes[k].theta_hat) + off.b;
        const double phi = cfg.phi_scale * std::tanh(u.lobes[k].phi_hat) + off.d;
        const double st = std::sin(theta), ct = std::cos(theta);
        const double sp = std::sin(phi), cp = std::cos(phi);
        dxi_dtheta[k] = {ct * cp, ct * sp, -st};
        dxi_dphi[k] = {-st * sp, st * cp, 0.0};
        const double th = std::tanh(u.lobes[k].theta_hat);
        const double ph = std::tanh(u.lobes[k].phi_hat);
        dtheta_dhat[k] = cfg.theta_scale * (1.0 - th * th);
        dphi_dhat[k] = cfg.phi_scale * (1.0 - ph * ph);
    }

    double loss = 0.0;
    std::vector<double> response(K);
    for (std::size_t i = 0; i < t.dirs.size(); ++i) {
        const Vec3& dir = t.dirs[i];
        Rgb recon;
        for (std::size_t k = 0; k < K; ++k) {
            response[k] = std::exp(-env.lobes[k].lambda * (1.0 - dot(dir, env.lobes[k].xi)));
            recon += env.lobes[k].intensity * response[k];
        }
        Rgb dloss_drecon;
        double cell = 0.0;
        for (int ch = 0; ch < 3; ++ch) {
            const double diff = std::log1p(recon[ch]) - t.log_target[i][ch];
            cell += diff * diff;
            dloss_drecon.channel(ch) =
                t.weights[i] * (2.0 / 3.0) * diff / (1.0 + recon[ch]);
        }
        loss += t.weights[i] * cell / 3.0;

        for (std::size_t k = 0; k < K; ++k) {
            double* g = grad.data() + 6 * k;
            const SgLobe& lobe = env.lobes[k];
            const double resp = response[k];
            // Sensitivity of the loss to this lobe's scalar response.
            const double s = dloss_drecon.r * lobe.intensity.r +
                             dloss_drecon.g * lobe.intensity.g +
                             dloss_drecon.b * lobe.intensity.b;
            const double dresp_dcos = lobe.lambda * resp;
            g[0] += s * dresp_dcos * dot(dir, dxi_dtheta[k]) * dtheta_dhat[k];
            g[1] += s * dresp_dcos * dot(dir, dxi_dphi[k]) * dphi_dhat[k];
            g[2] += s * -(1.0 - dot(dir, lobe.xi)) * resp * lobe.lambda;
            g[3] += dloss_drecon.r * resp * lobe.intensity.r;
            g[4] += dloss_drecon.g * resp * lobe.intensity.g;
            g[5] += dloss_drecon.b * resp * lobe.intensity.b;
        }
    }
    return loss;
}

}  // namespace

double fit_loss(const SgEnvironment& env, const EnvMapGrid& target) {
    env.validate();
    return loss_on_target(env, prepare_target(target));
}

double fit_objective(const UnconstrainedParams& u, const SgFitConfig& cfg,
                     const EnvMapGrid& target, std::span<double> grad) {
    if (grad.size() != u.lobes.size() * 6)
        throw std::invalid_argument("fit_objective: gradient size must be 6 per lobe");
    return loss_and_grad(u, cfg, prepare_target(target), grad);
}

FitResult fit_grid(const EnvMapGrid& target, const SgFitConfig& cfg) {
    if (cfg.lobe_count != cfg.region_rows * cfg.region_cols)
        throw std::invalid_argument(
            "fit_grid: lobe_count must equal region_rows * region_cols");
    const Target t = prepare_target(target);

    const Objective objective = [&](std::span<const double> x, std::span<double> g) {
        return loss_and_grad(UnconstrainedParams::from_flat(x), cfg, t, g);
    };

    const LbfgsResult opt =
        lbfgs_minimize(objective, UnconstrainedParams::standard_init(cfg).to_flat(),
                       cfg.optimizer);

    FitResult result;
    result.params = UnconstrainedParams::from_flat(opt.x);
    result.env = constrain(result.params, cfg);
    result.final_loss = opt.value;
    result.trace = opt.trace;
    result.line_search_warning = opt.status == LbfgsStatus::LineSearchFailed;
    return result;
}

}  // namespace lumen
