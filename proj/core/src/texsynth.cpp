// Copyright 2026 The LumenForge Authors
// SPDX-License-Identifier: Apache-2.0

#include "lumen/texsynth.hpp"

#include <cmath>
#include <cstdlib>
#include <deque>
#include <limits>
#include <stdexcept>

namespace lumen {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double l1(const Rgb& v) { return std::abs(v.r) + std::abs(v.g) + std::abs(v.b); }
double l1(const Vec3& v) { return std::abs(v.x) + std::abs(v.y) + std::abs(v.z); }

// Channel-weighted L1 magnitude of the forward x-gradient at (r, c);
// zero on the last column.
double grad_x(const SvbrdfTexture& t, int r, int c, const TexSynthConfig& cfg) {
    if (c + 1 >= t.width) return 0.0;
    return cfg.lambda_albedo * l1(t.albedo_at(r, c + 1) - t.albedo_at(r, c)) +
           cfg.lambda_normal * l1(t.normal_at(r, c + 1) - t.normal_at(r, c)) +
           cfg.lambda_roughness * std::abs(t.roughness_at(r, c + 1) - t.roughness_at(r, c));
}

double grad_y(const SvbrdfTexture& t, int r, int c, const TexSynthConfig& cfg) {
    if (r + 1 >= t.height) return 0.0;
    return cfg.lambda_albedo * l1(t.albedo_at(r + 1, c) - t.albedo_at(r, c)) +
           cfg.lambda_normal * l1(t.normal_at(r + 1, c) - t.normal_at(r, c)) +
           cfg.lambda_roughness * std::abs(t.roughness_at(r + 1, c) - t.roughness_at(r, c));
}

}  // namespace

SvbrdfTexture SvbrdfTexture::zeros(int height, int width) {
    SvbrdfTexture t;
    t.height = height;
    t.width = width;
    const std::size_t pixels = static_cast<std::size_t>(height) * width;
    t.albedo.assign(pixels * 3, 0.0f);
    t.normal.assign(pixels * 3, 0.0f);
    t.roughness.assign(pixels, 0.0f);
    for (std::size_t p = 0; p < pixels; ++p) t.normal[3 * p + 2] = 1.0f;
    return t;
}

void SvbrdfTexture::set_albedo(int r, int c, const Rgb& v) {
    const std::size_t i = (static_cast<std::size_t>(r) * width + c) * 3;
    albedo[i] = static_cast<float>(v.r);
    albedo[i + 1] = static_cast<float>(v.g);
    albedo[i + 2] = static_cast<float>(v.b);
}

void SvbrdfTexture::set_normal(int r, int c, const Vec3& v) {
    const std::size_t i = (static_cast<std::size_t>(r) * width + c) * 3;
    normal[i] = static_cast<float>(v.x);
    normal[i + 1] = static_cast<float>(v.y);
    normal[i + 2] = static_cast<float>(v.z);
}

void SvbrdfTexture::set_roughness(int r, int c, double v) {
    roughness[static_cast<std::size_t>(r) * width + c] = static_cast<float>(v);
}

SvbrdfTexture SvbrdfTexture::crop(int r0, int c0, int rows, int cols) const {
    if (r0 < 0 || c0 < 0 || r0 + rows > height || c0 + cols > width)
        throw std::out_of_range("SvbrdfTexture::crop: window out of bounds");
    SvbrdfTexture out = zeros(rows, cols);
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) {
            out.set_albedo(r, c, albedo_at(r0 + r, c0 + c));
            out.set_normal(r, c, normal_at(r0 + r, c0 + c));
            out.set_roughness(r, c, roughness_at(r0 + r, c0 + c));
        }
    return out;
}

void SvbrdfTexture::validate() const {
    if (height <= 0 || width <= 0) throw std::invalid_argument("SvbrdfTexture: non-positive dims");
    const std::size_t pixels = static_cast<std::size_t>(height) * width;
    if (albedo.size() != pixels * 3 || normal.size() != pixels * 3 || roughness.size() != pixels)
        throw std::invalid_argument("SvbrdfTexture: map sizes disagree");
    for (float v : roughness)
        if (v < 0.0f || v > 1.0f)
            throw std::invalid_argument("SvbrdfTexture: roughness outside [0,1]");
}

double boundary_gradient_energy(const SvbrdfTexture& tex, const Window& w,
                                const TexSynthConfig& cfg) {
    if (w.row < 0 || w.col < 0 || w.size <= 0 || w.row + w.size > tex.height ||
        w.col + w.size > tex.width)
        throw std::out_of_range("boundary_gradient_energy: window out of bounds");
    double energy = 0.0;
    for (int r = w.row; r < w.row + w.size; ++r)
        energy += grad_x(tex, r, w.col, cfg) + grad_x(tex, r, w.col + w.size - 1, cfg);
    for (int c = w.col; c < w.col + w.size; ++c)
        energy += grad_y(tex, w.row, c, cfg) + grad_y(tex, w.row + w.size - 1, c, cfg);
    return energy;
}

Window find_optimal_patch(const SvbrdfTexture& tex, int patch_size, const TexSynthConfig& cfg,
                          int max_row, int max_col) {
    tex.validate();
    if (patch_size <= 0 || patch_size > tex.height || patch_size > tex.width)
        throw std::invalid_argument("find_optimal_patch: patch size exceeds texture dims");
    if (max_row < 0) max_row = tex.height - patch_size;
    if (max_col < 0) max_col = tex.width - patch_size;
    max_row = std::min(max_row, tex.height - patch_size);
    max_col = std::min(max_col, tex.width - patch_size);

    const int H = tex.height, W = tex.width;
    // Column-wise prefix sums of |grad_x| and row-wise of |grad_y|.
    std::vector<double> px(static_cast<std::size_t>(H + 1) * W, 0.0);
    std::vector<double> py(static_cast<std::size_t>(H) * (W + 1), 0.0);
    for (int c = 0; c < W; ++c)
        for (int r = 0; r < H; ++r)
            px[static_cast<std::size_t>(r + 1) * W + c] =
                px[static_cast<std::size_t>(r) * W + c] + grad_x(tex, r, c, cfg);
    for (int r = 0; r < H; ++r)
        for (int c = 0; c < W; ++c)
            py[static_cast<std::size_t>(r) * (W + 1) + c + 1] =
                py[static_cast<std::size_t>(r) * (W + 1) + c] + grad_y(tex, r, c, cfg);

    const auto col_sum = [&](int c, int r0, int r1) {  // sum grad_x over rows [r0, r1)
        return px[static_cast<std::size_t>(r1) * W + c] - px[static_cast<std::size_t>(r0) * W + c];
    };
    const auto row_sum = [&](int r, int c0, int c1) {  // sum grad_y over cols [c0, c1)
        return py[static_cast<std::size_t>(r) * (W + 1) + c1] -
               py[static_cast<std::size_t>(r) * (W + 1) + c0];
    };

    Window best{0, 0, patch_size};
    double best_energy = kInf;
    for (int r0 = 0; r0 <= max_row; ++r0)
        for (int c0 = 0; c0 <= max_col; ++c0) {
            const double e = col_sum(c0, r0, r0 + patch_size) +
                             col_sum(c0 + patch_size - 1, r0, r0 + patch_size) +
                             row_sum(r0, c0, c0 + patch_size) +
                             row_sum(r0 + patch_size - 1, c0, c0 + patch_size);
            if (e < best_energy) {
                best_energy = e;
                best = {r0, c0, patch_size};
            }
        }
    return best;
}

double seam_energy(const SvbrdfTexture& patch1, const SvbrdfTexture& patch2,
                   std::pair<int, int> first, std::pair<int, int> second, int label_first,
                   int label_second, const TexSynthConfig& cfg) {
    if (patch1.height != patch2.height || patch1.width != patch2.width)
        throw std::invalid_argument("seam_energy: patches must be aligned");
    const int dr = second.first - first.first;
    const int dc = second.second - first.second;
    if (!((std::abs(dr) == 1 && dc == 0) || (dr == 0 && std::abs(dc) == 1)))
        throw std::invalid_argument("seam_energy: pixels must be 4-adjacent");
    if (label_first == label_second) return 0.0;

    const SvbrdfTexture& pi = label_first == 1 ? patch1 : patch2;
    const SvbrdfTexture& pj = label_second == 1 ? patch1 : patch2;

    const auto cost_map = [&](auto value_at) {
        const auto grad = [&](const SvbrdfTexture& from, const SvbrdfTexture& to) {
            return value_at(to, second.first, second.second) -
                   value_at(from, first.first, first.second);
        };
        const double self_i = l1(grad(pi, pi));
        const double self_j = l1(grad(pj, pj));
        return std::min(l1(grad(pi, pj) - grad(pi, pi)) / std::max(self_i, cfg.epsilon_floor),
                        l1(grad(pi, pj) - grad(pj, pj)) / std::max(self_j, cfg.epsilon_floor));
    };

    const auto albedo_of = [](const SvbrdfTexture& t, int r, int c) { return t.albedo_at(r, c); };
    const auto normal_of = [](const SvbrdfTexture& t, int r, int c) { return t.normal_at(r, c); };
    double energy = cfg.lambda_albedo * cost_map(albedo_of) + cfg.lambda_normal * cost_map(normal_of);
    {
        const auto rough_of = [](const SvbrdfTexture& t, int r, int c) {
            return t.roughness_at(r, c);
        };
        const auto grad = [&](const SvbrdfTexture& from, const SvbrdfTexture& to) {
            return rough_of(to, second.first, second.second) -
                   rough_of(from, first.first, first.second);
        };
        const double self_i = std::abs(grad(pi, pi));
        const double self_j = std::abs(grad(pj, pj));
        energy += cfg.lambda_roughness *
                  std::min(std::abs(grad(pi, pj) - grad(pi, pi)) / std::max(self_i, cfg.epsilon_floor),
                           std::abs(grad(pi, pj) - grad(pj, pj)) / std::max(self_j, cfg.epsilon_floor));
    }
    return energy;
}

SeamProblem build_seam_problem(const SvbrdfTexture& patch1, const SvbrdfTexture& patch2,
                               const TexSynthConfig& cfg) {
    if (patch1.height != patch2.height || patch1.width != patch2.width)
        throw std::invalid_argument("build_seam_problem: patches must be aligned");
    SeamProblem p;
    p.rows = patch1.height;
    p.cols = patch1.width;
    p.h12.resize(static_cast<std::size_t>(p.rows) * (p.cols - 1));
    p.h21.resize(p.h12.size());
    p.v12.resize(static_cast<std::size_t>(p.rows - 1) * p.cols);
    p.v21.resize(p.v12.size());
    p.forced.assign(static_cast<std::size_t>(p.rows) * p.cols, 0);
    for (int r = 0; r < p.rows; ++r)
        for (int c = 0; c + 1 < p.cols; ++c) {
            const std::size_t e = static_cast<std::size_t>(r) * (p.cols - 1) + c;
            p.h12[e] = seam_energy(patch1, patch2, {r, c}, {r, c + 1}, 1, 2, cfg);
            p.h21[e] = seam_energy(patch1, patch2, {r, c}, {r, c + 1}, 2, 1, cfg);
        }
    for (int r = 0; r + 1 < p.rows; ++r)
        for (int c = 0; c < p.cols; ++c) {
            const std::size_t e = static_cast<std::size_t>(r) * p.cols + c;
            p.v12[e] = seam_energy(patch1, patch2, {r, c}, {r + 1, c}, 1, 2, cfg);
            p.v21[e] = seam_energy(patch1, patch2, {r, c}, {r + 1, c}, 2, 1, cfg);
        }
    return p;
}

namespace {

// Adjacency-array max-flow with BFS augmenting paths.
class MaxFlowGraph {
public:
    explicit MaxFlowGraph(int nodes) : heads_(static_cast<std::size_t>(nodes), -1) {}

    void add_edge(int u, int v, double cap_uv, double cap_vu) {
        push(u, v, cap_uv);
        push(v, u, cap_vu);
    }

    double run(int s, int t) {
        double flow = 0.0;
        std::vector<int> parent_edge(heads_.size());
        while (true) {
            std::fill(parent_edge.begin(), parent_edge.end(), -1);
            std::deque<int> queue{s};
            parent_edge[static_cast<std::size_t>(s)] = -2;
            while (!queue.empty() && parent_edge[static_cast<std::size_t>(t)] == -1) {
                const int u = queue.front();
                queue.pop_front();
                for (int e = heads_[static_cast<std::size_t>(u)]; e != -1; e = next_[static_cast<std::size_t>(e)]) {
                    const int v = to_[static_cast<std::size_t>(e)];
                    if (parent_edge[static_cast<std::size_t>(v)] == -1 && cap_[static_cast<std::size_t>(e)] > 0.0) {
                        parent_edge[static_cast<std::size_t>(v)] = e;
                        queue.push_back(v);
                    }
                }
            }
            if (parent_edge[static_cast<std::size_t>(t)] == -1) break;
            double bottleneck = kInf;
            for (int v = t; v != s;) {
                const int e = parent_edge[static_cast<std::size_t>(v)];
                bottleneck = std::min(bottleneck, cap_[static_cast<std::size_t>(e)]);
                v = to_[static_cast<std::size_t>(e ^ 1)];
            }
            if (bottleneck == kInf)
                throw std::runtime_error("min_cut_seam: infeasible hard constraints");
            for (int v = t; v != s;) {
                const int e = parent_edge[static_cast<std::size_t>(v)];
                cap_[static_cast<std::size_t>(e)] -= bottleneck;
                cap_[static_cast<std::size_t>(e ^ 1)] += bottleneck;
                v = to_[static_cast<std::size_t>(e ^ 1)];
            }
            flow += bottleneck;
        }
        return flow;
    }

    std::vector<bool> source_side(int s) const {
        std::vector<bool> reach(heads_.size(), false);
        std::deque<int> queue{s};
        reach[static_cast<std::size_t>(s)] = true;
        while (!queue.empty()) {
            const int u = queue.front();
            queue.pop_front();
            for (int e = heads_[static_cast<std::size_t>(u)]; e != -1; e = next_[static_cast<std::size_t>(e)]) {
                const int v = to_[static_cast<std::size_t>(e)];
                if (!reach[static_cast<std::size_t>(v)] && cap_[static_cast<std::size_t>(e)] > 0.0) {
                    reach[static_cast<std::size_t>(v)] = true;
                    queue.push_back(v);
                }
            }
        }
        return reach;
    }

private:
    void push(int u, int v, double cap) {
        to_.push_back(v);
        cap_.push_back(cap);
        next_.push_back(heads_[static_cast<std::size_t>(u)]);
        heads_[static_cast<std::size_t>(u)] = static_cast<int>(to_.size()) - 1;
    }

    std::vector<int> heads_;
    std::vector<int> to_;
    std::vector<int> next_;
    std::vector<double> cap_;
};

}  // namespace

SeamLabels min_cut_seam(const SeamProblem& p) {
    const int n = p.rows * p.cols;
    const int source = n, sink = n + 1;
    MaxFlowGraph graph(n + 2);
    const auto id = [&](int r, int c) { return r * p.cols + c; };

    for (int r = 0; r < p.rows; ++r)
        for (int c = 0; c + 1 < p.cols; ++c) {
            const std::size_t e = static_cast<std::size_t>(r) * (p.cols - 1) + c;
            graph.add_edge(id(r, c), id(r, c + 1), p.h12[e], p.h21[e]);
        }
    for (int r = 0; r + 1 < p.rows; ++r)
        for (int c = 0; c < p.cols; ++c) {
            const std::size_t e = static_cast<std::size_t>(r) * p.cols + c;
            graph.add_edge(id(r, c), id(r + 1, c), p.v12[e], p.v21[e]);
        }
    for (int i = 0; i < n; ++i) {
        if (p.forced[static_cast<std::size_t>(i)] == 1) graph.add_edge(source, i, kInf, 0.0);
        if (p.forced[static_cast<std::size_t>(i)] == 2) graph.add_edge(i, sink, kInf, 0.0);
    }
    for (const auto& [a, b] : p.tied) {
        graph.add_edge(a, b, kInf, kInf);
    }

    SeamLabels out;
    out.rows = p.rows;
    out.cols = p.cols;
    out.cut_cost = graph.run(source, sink);
    const std::vector<bool> on_source = graph.source_side(source);
    out.labels.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) out.labels[static_cast<std::size_t>(i)] = on_source[static_cast<std::size_t>(i)] ? 1 : 2;
    return out;
}

double seam_labeling_cost(const SeamProblem& p, const std::vector<std::uint8_t>& labels) {
    for (int i = 0; i < p.rows * p.cols; ++i)
        if (p.forced[static_cast<std::size_t>(i)] != 0 && labels[static_cast<std::size_t>(i)] != p.forced[static_cast<std::size_t>(i)])
            return kInf;
    for (const auto& [a, b] : p.tied)
        if (labels[static_cast<std::size_t>(a)] != labels[static_cast<std::size_t>(b)]) return kInf;
    double cost = 0.0;
    const auto id = [&](int r, int c) { return static_cast<std::size_t>(r) * p.cols + c; };
    for (int r = 0; r < p.rows; ++r)
        for (int c = 0; c + 1 < p.cols; ++c) {
            const std::size_t e = static_cast<std::size_t>(r) * (p.cols - 1) + c;
            const int a = labels[id(r, c)], b = labels[id(r, c + 1)];
            if (a == 1 && b == 2) cost += p.h12[e];
            if (a == 2 && b == 1) cost += p.h21[e];
        }
    for (int r = 0; r + 1 < p.rows; ++r)
        for (int c = 0; c < p.cols; ++c) {
            const std::size_t e = static_cast<std::size_t>(r) * p.cols + c;
            const int a = labels[id(r, c)], b = labels[id(r + 1, c)];
            if (a == 1 && b == 2) cost += p.v12[e];
            if (a == 2 && b == 1) cost += p.v21[e];
        }
    return cost;
}

SvbrdfTexture make_tileable(const SvbrdfTexture& tex, int patch_size, const TexSynthConfig& cfg) {
    tex.validate();
    const int s = patch_size;
    int w = cfg.overlap_width > 0 ? cfg.overlap_width : std::max(4, s / 8);
    w = std::min(w, s);
    if (w < 2) throw std::invalid_argument("make_tileable: overlap width must be >= 2");
    if (tex.height < s + w || tex.width < s + w)
        throw std::invalid_argument("make_tileable: texture too small for patch + surroundings");

    const Window win =
        find_optimal_patch(tex, s, cfg, tex.height - s - w, tex.width - s - w);
    const SvbrdfTexture strip = tex.crop(win.row, win.col, s + w, s + w);

    // Pass 1: wrap seam in x over the full strip height.
    const SvbrdfTexture left = strip.crop(0, 0, s + w, w);
    const SvbrdfTexture right = strip.crop(0, s, s + w, w);
    SeamProblem prob1 = build_seam_problem(left, right, cfg);
    for (int r = 0; r < s + w; ++r) {
        prob1.forced[static_cast<std::size_t>(r) * w + 0] = 2;
        prob1.forced[static_cast<std::size_t>(r) * w + (w - 1)] = 1;
    }
    const SeamLabels cut1 = min_cut_seam(prob1);

    SvbrdfTexture sheet = SvbrdfTexture::zeros(s + w, s);
    for (int r = 0; r < s + w; ++r)
        for (int x = 0; x < s; ++x) {
            const int src_c =
                x < w ? (cut1.labels[static_cast<std::size_t>(r) * w + x] == 1 ? x : s + x) : x;
            sheet.set_albedo(r, x, strip.albedo_at(r, src_c));
            sheet.set_normal(r, x, strip.normal_at(r, src_c));
            sheet.set_roughness(r, x, strip.roughness_at(r, src_c));
        }

    // Pass 2: wrap seam in y, keeping the x wrap intact by tying the
    // left/right boundary pixels of every overlap row.
    const SvbrdfTexture top = sheet.crop(0, 0, w, s);
    const SvbrdfTexture bottom = sheet.crop(s, 0, w, s);
    SeamProblem prob2 = build_seam_problem(top, bottom, cfg);
    for (int c = 0; c < s; ++c) {
        prob2.forced[static_cast<std::size_t>(0) * s + c] = 2;
        prob2.forced[static_cast<std::size_t>(w - 1) * s + c] = 1;
    }
    for (int r = 1; r + 1 < w; ++r) prob2.tied.push_back({r * s + 0, r * s + (s - 1)});
    const SeamLabels cut2 = min_cut_seam(prob2);

    SvbrdfTexture tile = SvbrdfTexture::zeros(s, s);
    for (int y = 0; y < s; ++y)
        for (int x = 0; x < s; ++x) {
            const int src_r =
                y < w ? (cut2.labels[static_cast<std::size_t>(y) * s + x] == 1 ? y : s + y) : y;
            tile.set_albedo(y, x, sheet.albedo_at(src_r, x));
            tile.set_normal(y, x, sheet.normal_at(src_r, x));
            tile.set_roughness(y, x, sheet.roughness_at(src_r, x));
        }
    return tile;
}

std::vector<SvbrdfTexture> make_tileable_sizes(const SvbrdfTexture& tex,
                                               const TexSynthConfig& cfg) {
    const int dim = std::min(tex.height, tex.width);
    std::vector<SvbrdfTexture> tiles;
    for (int divisor : {2, 3, 4}) tiles.push_back(make_tileable(tex, dim / divisor, cfg));
    return tiles;
}

double tiling_boundary_energy(const SvbrdfTexture& tile, const TexSynthConfig& cfg) {
    const SvbrdfTexture big = tile_3x3(tile);
    const int s = tile.height;
    double energy = 0.0;
    // Vertical junction lines: gradient across columns (k*s - 1, k*s).
    for (int k = 1; k < 3; ++k)
        for (int r = 0; r < big.height; ++r) energy += grad_x(big, r, k * tile.width - 1, cfg);
    // Horizontal junction lines.
    for (int k = 1; k < 3; ++k)
        for (int c = 0; c < big.width; ++c) energy += grad_y(big, k * s - 1, c, cfg);
    return energy;
}

SvbrdfTexture tile_3x3(const SvbrdfTexture& tile) {
    SvbrdfTexture out = SvbrdfTexture::zeros(tile.height * 3, tile.width * 3);
    for (int r = 0; r < out.height; ++r)
        for (int c = 0; c < out.width; ++c) {
            const int sr = r % tile.height, sc = c % tile.width;
            out.set_albedo(r, c, tile.albedo_at(sr, sc));
            out.set_normal(r, c, tile.normal_at(sr, sc));
            out.set_roughness(r, c, tile.roughness_at(sr, sc));
        }
    return out;
}

}  // namespace lumen
