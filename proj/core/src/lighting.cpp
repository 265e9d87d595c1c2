// Copyright 2026 The LumenForge Authors
// SPDX-License-Identifier: Apache-2.0

#include "lumen/lighting.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace lumen {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr int kMaxLobes = 64;
}  // namespace

void SgEnvironment::validate() const {
    if (lobes.empty() || lobes.size() > kMaxLobes)
        throw std::invalid_argument("SgEnvironment: lobe count must be in [1, 64]");
    for (const SgLobe& lobe : lobes) {
        if (std::abs(norm(lobe.xi) - 1.0) > 1e-6)
            throw std::invalid_argument("SgEnvironment: lobe axis not unit length");
        if (!(lobe.lambda > 0.0) || !std::isfinite(lobe.lambda))
            throw std::invalid_argument("SgEnvironment: lambda must be positive");
        for (int ch = 0; ch < 3; ++ch) {
            const double v = lobe.intensity[ch];
            if (!std::isfinite(v) || v < 0.0)
                throw std::invalid_argument("SgEnvironment: intensity must be finite and >= 0");
        }
    }
}

EnvMapGrid EnvMapGrid::zeros(int rows, int cols, GridDomain domain) {
    if (rows <= 0 || cols <= 0) throw std::invalid_argument("EnvMapGrid: non-positive dims");
    return {rows, cols, domain,
            std::vector<float>(static_cast<std::size_t>(rows) * cols * 3, 0.0f)};
}

double EnvMapGrid::theta_span() const { return domain == GridDomain::Hemisphere ? kPi / 2.0 : kPi; }

void EnvMapGrid::validate() const {
    if (rows <= 0 || cols <= 0) throw std::invalid_argument("EnvMapGrid: non-positive dims");
    if (radiance.size() != static_cast<std::size_t>(rows) * cols * 3)
        throw std::invalid_argument("EnvMapGrid: payload size does not match dims");
    for (float v : radiance)
        if (!std::isfinite(v) || v < 0.0f)
            throw std::invalid_argument("EnvMapGrid: radiance must be finite and >= 0");
}

Rgb eval_sg(const SgEnvironment& env, const Vec3& dir) {
    Rgb out;
    for (const SgLobe& lobe : env.lobes) {
        const double response = std::exp(-lobe.lambda * (1.0 - dot(dir, lobe.xi)));
        out += lobe.intensity * response;
    }
    return out;
}

SgEnvironment raw_to_hdr(const RawSgParams& raw) {
    SgEnvironment env;
    env.lobes.reserve(raw.lobes.size());
    const auto hdr_scalar = [](double v, const char* name) {
        if (!(v > -1.0 && v < 1.0))
            throw std::invalid_argument(std::string("raw_to_hdr: ") + name +
                                        " outside (-1, 1); transform diverges");
        return std::tan(kPi / 4.0 * (v + 1.0));
    };
    for (const RawSgParams::Lobe& r : raw.lobes) {
        if (norm(r.xi_raw) == 0.0) throw std::invalid_argument("raw_to_hdr: zero axis");
        SgLobe lobe;
        lobe.xi = normalized(r.xi_raw);
        lobe.lambda = hdr_scalar(r.lambda_raw, "lambda_raw");
        lobe.intensity = {hdr_scalar(r.intensity_raw.r, "intensity_raw"),
                          hdr_scalar(r.intensity_raw.g, "intensity_raw"),
                          hdr_scalar(r.intensity_raw.b, "intensity_raw")};
        env.lobes.push_back(lobe);
    }
    env.validate();
    return env;
}

Vec3 grid_direction(const EnvMapGrid& grid, int r, int c) {
    if (r < 0 || r >= grid.rows || c < 0 || c >= grid.cols)
        throw std::out_of_range("grid_direction: cell index out of range");
    const double theta = (r + 0.5) * grid.theta_span() / grid.rows;
    const double phi = (c + 0.5) * 2.0 * kPi / grid.cols;
    return {std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta)};
}

double grid_cell_solid_angle(const EnvMapGrid& grid, int r) {
    const double theta = (r + 0.5) * grid.theta_span() / grid.rows;
    return std::sin(theta) * (grid.theta_span() / grid.rows) * (2.0 * kPi / grid.cols);
}

EnvMapGrid sg_to_grid(const SgEnvironment& env, int rows, int cols, GridDomain domain) {
    env.validate();
    EnvMapGrid grid = EnvMapGrid::zeros(rows, cols, domain);
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) grid.set(r, c, eval_sg(env, grid_direction(grid, r, c)));
    return grid;
}

Rgb grid_lookup(const EnvMapGrid& grid, const Vec3& dir) {
    const double theta = std::acos(std::clamp(dir.z, -1.0, 1.0));
    if (grid.domain == GridDomain::Hemisphere && theta >= grid.theta_span()) return {};
    double phi = std::atan2(dir.y, dir.x);
    if (phi < 0.0) phi += 2.0 * kPi;
    int r = static_cast<int>(theta / grid.theta_span() * grid.rows);
    int c = static_cast<int>(phi / (2.0 * kPi) * grid.cols);
    r = std::clamp(r, 0, grid.rows - 1);
    c = std::clamp(c, 0, grid.cols - 1);
    return grid.at(r, c);
}

// ---------------------------------------------------------------------------
// Spherical harmonics
// ---------------------------------------------------------------------------

namespace {

// Associated Legendre P_l^m without the Condon-Shortley phase.
double legendre(int l, int m, double x) {
    double pmm = 1.0;
    if (m > 0) {
        const double somx2 = std::sqrt(std::max(0.0, 1.0 - x * x));
        double fact = 1.0;
        for (int i = 1; i <= m; ++i) {
            pmm *= fact * somx2;
            fact += 2.0;
        }
    }
    if (l == m) return pmm;
    double pmmp1 = x * (2.0 * m + 1.0) * pmm;
    if (l == m + 1) return pmmp1;
    double pll = 0.0;
    for (int ll = m + 2; ll <= l; ++ll) {
        pll = (x * (2.0 * ll - 1.0) * pmmp1 - (ll + m - 1.0) * pmm) / (ll - m);
        pmm = pmmp1;
        pmmp1 = pll;
    }
    return pll;
}

double sh_normalization(int l, int m) {
    double num = 1.0, den = 1.0;
    for (int i = l - m + 1; i <= l + m; ++i) den *= i;
    num = (2.0 * l + 1.0) / (4.0 * kPi);
    return std::sqrt(num / den);
}

}  // namespace

double sh_basis(int l, int m, const Vec3& dir) {
    const double cos_theta = dir.z;
    const double phi = std::atan2(dir.y, dir.x);
    const int am = std::abs(m);
    const double k = sh_normalization(l, am);
    if (m == 0) return k * legendre(l, 0, cos_theta);
    const double base = std::numbers::sqrt2 * k * legendre(l, am, cos_theta);
    return m > 0 ? base * std::cos(am * phi) : base * std::sin(am * phi);
}

ShCoeffs sh_project(const EnvMapGrid& grid, int order) {
    grid.validate();
    ShCoeffs out;
    out.order = order;
    out.coeffs.assign(static_cast<std::size_t>((order + 1) * (order + 1)), Rgb{});
    for (int r = 0; r < grid.rows; ++r) {
        const double domega = grid_cell_solid_angle(grid, r);
        for (int c = 0; c < grid.cols; ++c) {
            const Vec3 dir = grid_direction(grid, r, c);
            const Rgb radiance = grid.at(r, c);
            for (int l = 0; l <= order; ++l)
                for (int m = -l; m <= l; ++m)
                    out.coeffs[static_cast<std::size_t>(l * (l + 1) + m)] +=
                        radiance * (sh_basis(l, m, dir) * domega);
        }
    }
    return out;
}

Rgb sh_eval(const ShCoeffs& coeffs, const Vec3& dir) {
    Rgb out;
    for (int l = 0; l <= coeffs.order; ++l)
        for (int m = -l; m <= l; ++m)
            out += coeffs.coeffs[static_cast<std::size_t>(l * (l + 1) + m)] * sh_basis(l, m, dir);
    return out;
}

// ---------------------------------------------------------------------------
// Serialization
// ---------------------------------------------------------------------------

void write_sg_text(const SgEnvironment& env, const std::filesystem::path& path) {
    env.validate();
    std::ofstream out(path);
    if (!out) throw std::runtime_error(path.string() + ": cannot open for writing");
    out.precision(17);
    for (const SgLobe& lobe : env.lobes)
        out << lobe.xi.x << ' ' << lobe.xi.y << ' ' << lobe.xi.z << ' ' << lobe.lambda << ' '
            << lobe.intensity.r << ' ' << lobe.intensity.g << ' ' << lobe.intensity.b << '\n';
    if (!out) throw std::runtime_error(path.string() + ": write failure");
}

SgEnvironment read_sg_text(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error(path.string() + ": cannot open");
    SgEnvironment env;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        SgLobe lobe;
        if (!(ls >> lobe.xi.x >> lobe.xi.y >> lobe.xi.z >> lobe.lambda >> lobe.intensity.r >>
              lobe.intensity.g >> lobe.intensity.b))
            throw std::runtime_error(path.string() + ": malformed lobe record: " + line);
        env.lobes.push_back(lobe);
    }
    env.validate();
    return env;
}

HdrImage grid_to_image(const EnvMapGrid& grid) {
    grid.validate();
    return {grid.rows, grid.cols, grid.radiance};
}

EnvMapGrid image_to_grid(const HdrImage& img, GridDomain domain) {
    img.validate();
    return {img.height, img.width, domain, img.data};
}

}  // namespace lumen
