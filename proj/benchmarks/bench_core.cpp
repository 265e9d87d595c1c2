// Copyright 2026 The LumenForge Authors
// SPDX-License-Identifier: Apache-2.0

#include <benchmark/benchmark.h>

#include "lumen/brdf.hpp"
#include "lumen/lighting.hpp"
#include "lumen/renderlayer.hpp"
#include "lumen/rng.hpp"
#include "lumen/sgfit.hpp"
#include "lumen/texsynth.hpp"

namespace {

using namespace lumen;

SgEnvironment bench_env(int lobes) {
    SplitMix64 rng(7);
    SgEnvironment env;
    for (int k = 0; k < lobes; ++k) {
        const double z = rng.uniform(0.0, 1.0);
        const double phi = rng.uniform(0.0, 6.2831853);
        const double s = std::sqrt(1.0 - z * z);
        env.lobes.push_back({{s * std::cos(phi), s * std::sin(phi), z},
                             rng.uniform(1.0, 40.0),
                             Rgb{rng.uniform(0.1, 3.0), rng.uniform(0.1, 3.0),
                                 rng.uniform(0.1, 3.0)}});
    }
    return env;
}

void BM_EvalSg(benchmark::State& state) {
    const SgEnvironment env = bench_env(static_cast<int>(state.range(0)));
    const Vec3 dir = normalized({0.3, -0.2, 0.9});
    for (auto _ : state) benchmark::DoNotOptimize(eval_sg(env, dir));
}
BENCHMARK(BM_EvalSg)->Arg(1)->Arg(12);

void BM_SpecularEval(benchmark::State& state) {
    const SurfaceSample s{Rgb{0.8, 0.8, 0.8}, Vec3{0, 0, 1}, 0.2};
    const ShadingGeometry g{normalized({0.2, 0.1, 1.0}), normalized({-0.3, 0.2, 0.9})};
    const BrdfConfig cfg;
    for (auto _ : state) benchmark::DoNotOptimize(eval_specular(s, g, cfg));
}
BENCHMARK(BM_SpecularEval);

void BM_RenderPixel(benchmark::State& state) {
    const SgEnvironment env = bench_env(static_cast<int>(state.range(0)));
    const HemisphereQuadrature q = build_quadrature();
    const SurfaceSample s{Rgb{0.8, 0.8, 0.8}, normalized({0.1, 0.2, 1.0}), 0.3};
    const Vec3 view = normalized({0.0, 0.1, 1.0});
    for (auto _ : state) benchmark::DoNotOptimize(render_pixel(s, view, env, q, {}));
}
BENCHMARK(BM_RenderPixel)->Arg(1)->Arg(12);

void BM_RenderPixelGrad(benchmark::State& state) {
    const SgEnvironment env = bench_env(12);
    const HemisphereQuadrature q = build_quadrature();
    const SurfaceSample s{Rgb{0.8, 0.8, 0.8}, normalized({0.1, 0.2, 1.0}), 0.3};
    const Vec3 view = normalized({0.0, 0.1, 1.0});
    for (auto _ : state) benchmark::DoNotOptimize(render_pixel_grad(s, view, env, q, {}));
}
BENCHMARK(BM_RenderPixelGrad);

void BM_FitObjective(benchmark::State& state) {
    const SgFitConfig cfg;
    const SgEnvironment truth = bench_env(12);
    EnvMapGrid target = EnvMapGrid::zeros(16, 32, GridDomain::Hemisphere);
    for (int r = 0; r < 16; ++r)
        for (int c = 0; c < 32; ++c)
            target.set(r, c, eval_sg(truth, grid_direction(target, r, c)));
    const UnconstrainedParams u = UnconstrainedParams::standard_init(cfg);
    std::vector<double> grad(72);
    for (auto _ : state) benchmark::DoNotOptimize(fit_objective(u, cfg, target, grad));
}
BENCHMARK(BM_FitObjective);

void BM_ShProject(benchmark::State& state) {
    const SgEnvironment env = bench_env(3);
    const EnvMapGrid grid = sg_to_grid(env, 16, 32, GridDomain::Hemisphere);
    for (auto _ : state) benchmark::DoNotOptimize(sh_project(grid, 4));
}
BENCHMARK(BM_ShProject);

SvbrdfTexture bench_texture(int size) {
    SplitMix64 rng(11);
    SvbrdfTexture t = SvbrdfTexture::zeros(size, size);
    for (int r = 0; r < size; ++r)
        for (int c = 0; c < size; ++c) {
            const double v = 0.5 + 0.4 * std::sin(0.2 * r) * std::cos(0.13 * c) +
                             0.05 * rng.next_double();
            t.set_albedo(r, c, Rgb{v, v * 0.8, v * 0.6});
            t.set_roughness(r, c, std::clamp(v, 0.0, 1.0));
        }
    return t;
}

void BM_FindOptimalPatch(benchmark::State& state) {
    const SvbrdfTexture t = bench_texture(static_cast<int>(state.range(0)));
    for (auto _ : state)
        benchmark::DoNotOptimize(find_optimal_patch(t, t.height / 4, {}));
    state.SetComplexityN(state.range(0) * state.range(0));
}
BENCHMARK(BM_FindOptimalPatch)->Arg(128)->Arg(256)->Arg(512)->Complexity(benchmark::oN);

void BM_MakeTileable(benchmark::State& state) {
    const SvbrdfTexture t = bench_texture(128);
    for (auto _ : state) benchmark::DoNotOptimize(make_tileable(t, 64, {}));
}
BENCHMARK(BM_MakeTileable);

}  // namespace

BENCHMARK_MAIN();
