// Copyright 2026 The LumenForge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "lumen/vec.hpp"

namespace lumen {

/// Aligned SVBRDF maps: RGB albedo, 3-vector normals, scalar roughness.
struct SvbrdfTexture {
    int height = 0;
    int width = 0;
    std::vector<float> albedo;     // 3 per pixel
    std::vector<float> normal;     // 3 per pixel
    std::vector<float> roughness;  // 1 per pixel

    static SvbrdfTexture zeros(int height, int width);
    Rgb albedo_at(int r, int c) const {
        const std::size_t i = (static_cast<std::size_t>(r) * width + c) * 3;
        return {albedo[i], albedo[i + 1], albedo[i + 2]};
    }
    Vec3 normal_at(int r, int c) const {
        const std::size_t i = (static_cast<std::size_t>(r) * width + c) * 3;
        return {normal[i], normal[i + 1], normal[i + 2]};
    }
    double roughness_at(int r, int c) const {
        return roughness[static_cast<std::size_t>(r) * width + c];
    }
    void set_albedo(int r, int c, const Rgb& v);
    void set_normal(int r, int c, const Vec3& v);
    void set_roughness(int r, int c, double v);
    SvbrdfTexture crop(int r0, int c0, int rows, int cols) const;
    void validate() const;
};

struct TexSynthConfig {
    double lambda_albedo = 1.0;
    double lambda_normal = 1.0;
    double lambda_roughness = 1.0;
    int overlap_width = 0;       // 0 selects patch_size/8, clamped to >= 4
    double epsilon_floor = 0.1;  // denominator floor in the seam energy
};

struct Window {
    int row = 0;
    int col = 0;
    int size = 0;
};

/// Sum of channel-weighted L1 gradients perpendicular to the window
/// boundary: |grad_x| down the left/right columns, |grad_y| across the
/// top/bottom rows. Forward differences; gradients that would read past
/// the texture edge count as zero.
double boundary_gradient_energy(const SvbrdfTexture& tex, const Window& window,
                                const TexSynthConfig& cfg);

/// Argmin window by boundary_gradient_energy over row in [0, max_row],
/// col in [0, max_col] (defaults to every position), computed with
/// prefix-sum tables in O(pixels). Ties break to the smallest (row, col).
Window find_optimal_patch(const SvbrdfTexture& tex, int patch_size, const TexSynthConfig& cfg,
                          int max_row = -1, int max_col = -1);

/// Gradient-matching cost of cutting between two 4-adjacent overlap pixels
/// where `first` takes patch `label_first` and `second` patch
/// `label_second` (labels in {1,2}; patches are aligned same-size views).
double seam_energy(const SvbrdfTexture& patch1, const SvbrdfTexture& patch2,
                   std::pair<int, int> first, std::pair<int, int> second, int label_first,
                   int label_second, const TexSynthConfig& cfg);

/// Binary labeling problem over an overlap grid. Edge costs are directed:
/// hx_12[e] is paid when the lower-index endpoint takes label 1 and the
/// higher takes label 2, hx_21 for the reverse.
struct SeamProblem {
    int rows = 0;
    int cols = 0;
    std::vector<double> h12, h21;  // rows*(cols-1) horizontal edges
    std::vector<double> v12, v21;  // (rows-1)*cols vertical edges
    std::vector<std::uint8_t> forced;               // 0 free, 1, 2
    std::vector<std::pair<int, int>> tied;          // same-label pixel pairs
};

struct SeamLabels {
    int rows = 0;
    int cols = 0;
    std::vector<std::uint8_t> labels;  // 1 or 2
    double cut_cost = 0.0;
};

/// Globally minimal cut via BFS augmenting paths (Edmonds-Karp); tied
/// pairs share a label through infinite smoothness arcs. Throws when the
/// constraints are infeasible.
SeamLabels min_cut_seam(const SeamProblem& problem);

/// Cost of an explicit labeling under a SeamProblem (test oracle support).
double seam_labeling_cost(const SeamProblem& problem, const std::vector<std::uint8_t>& labels);

/// Builds the SeamProblem for two aligned overlap patches.
SeamProblem build_seam_problem(const SvbrdfTexture& patch1, const SvbrdfTexture& patch2,
                               const TexSynthConfig& cfg);

/// Two-pass graph-cut synthesis: optimal low-gradient window, wrap seam in
/// x, then wrap seam in y with the left/right boundary columns tied so the
/// x seam survives. Output tiles in both axes.
SvbrdfTexture make_tileable(const SvbrdfTexture& tex, int patch_size, const TexSynthConfig& cfg);

/// The standard per-material tile set: patches of 1/2, 1/3 and 1/4 of the
/// shorter source dimension, each made tileable independently.
std::vector<SvbrdfTexture> make_tileable_sizes(const SvbrdfTexture& tex,
                                               const TexSynthConfig& cfg);

/// Channel-weighted L1 gradient energy across the tile junctions of a 3x3
/// tiling (the wrap-around seams of the tile).
double tiling_boundary_energy(const SvbrdfTexture& tile, const TexSynthConfig& cfg);

/// 3x3 tiling of the texture (preview support).
SvbrdfTexture tile_3x3(const SvbrdfTexture& tile);

}  // namespace lumen
