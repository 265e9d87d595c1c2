// Copyright 2026 The LumenForge Authors
// SPDX-License-Identifier: Apache-2.0

#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include "lumen/compare.hpp"
#include "lumen/composite.hpp"
#include "lumen/matmap.hpp"
#include "lumen/objective.hpp"
#include "lumen/renderlayer.hpp"
#include "lumen/sgfit.hpp"
#include "lumen/texsynth.hpp"

namespace lumen::cli {

namespace {

namespace fs = std::filesystem;

struct Common {
    double gamma = 2.2;
    std::uint64_t seed = 42;
    bool json = false;
};

HdrImage load_image(const fs::path& path, double gamma) {
    if (path.extension() == ".png") return ldr_to_linear(read_png(path), gamma);
    return read_pfm(path);
}

void save_image(const HdrImage& img, const fs::path& path, double gamma) {
    if (path.extension() == ".png")
        write_png(linear_to_ldr(img, gamma), path);
    else
        write_pfm(img, path);
}

// Ordered key-value report with a plain-text and a JSON rendering.
class Report {
public:
    void add(const std::string& key, double value) { entries_.push_back({key, value}); }
    void print(bool as_json) const {
        if (as_json) {
            nlohmann::json j;
            for (const auto& [k, v] : entries_) j[k] = v;
            std::cout << j.dump(2) << '\n';
            return;
        }
        for (const auto& [k, v] : entries_) std::printf("%s %.10g\n", k.c_str(), v);
    }

private:
    std::vector<std::pair<std::string, double>> entries_;
};

GridDomain parse_domain(const std::string& s) {
    if (s == "hemisphere") return GridDomain::Hemisphere;
    if (s == "sphere") return GridDomain::Sphere;
    throw CLI::ValidationError("--domain must be hemisphere or sphere");
}

Rgb parse_rgb(const std::string& s) {
    Rgb out;
    if (std::sscanf(s.c_str(), "%lf,%lf,%lf", &out.r, &out.g, &out.b) != 3)
        throw CLI::ValidationError("expected r,g,b: " + s);
    return out;
}

std::pair<int, int> parse_xy(const std::string& s) {
    int x = 0, y = 0;
    if (std::sscanf(s.c_str(), "%d,%d", &x, &y) != 2)
        throw CLI::ValidationError("expected x,y: " + s);
    return {x, y};
}

ObjectSpec parse_object(const std::string& s, const Rgb& albedo, double rough) {
    ObjectSpec obj;
    obj.albedo = albedo;
    obj.roughness = rough;
    if (s.rfind("sphere:", 0) == 0) {
        obj.shape = SphereSpec{std::stod(s.substr(7))};
        return obj;
    }
    if (s.rfind("heightfield:", 0) == 0) {
        const std::string rest = s.substr(12);
        const auto colon = rest.rfind(':');
        if (colon == std::string::npos)
            throw CLI::ValidationError("expected heightfield:<pfm>:<footprint>");
        HeightFieldSpec hf;
        hf.footprint = std::stod(rest.substr(colon + 1));
        const PfmData data = read_pfm_raw(rest.substr(0, colon));
        if (data.height != data.width)
            throw std::runtime_error("height field must be square");
        hf.resolution = data.height;
        hf.heights.resize(static_cast<std::size_t>(data.height) * data.width);
        for (std::size_t i = 0; i < hf.heights.size(); ++i)
            hf.heights[i] = data.channels == 1 ? data.samples[i] : data.samples[3 * i];
        obj.shape = hf;
        return obj;
    }
    throw CLI::ValidationError("object must be sphere:<radius> or heightfield:<pfm>:<footprint>");
}

LossWeights load_weights(const fs::path& path) {
    LossWeights w;
    std::ifstream in(path);
    if (!in) throw std::runtime_error(path.string() + ": cannot open weights file");
    std::map<std::string, double*> slots{
        {"alpha_A", &w.albedo},       {"alpha_N", &w.normal},  {"alpha_R", &w.roughness},
        {"alpha_D", &w.depth},        {"alpha_L", &w.lighting}, {"alpha_ren", &w.render},
        {"alpha_lambda", &w.lambda},  {"alpha_xi", &w.xi},     {"alpha_F", &w.intensity}};
    std::string key;
    double value = 0.0;
    while (in >> key >> value) {
        const auto it = slots.find(key);
        if (it == slots.end()) throw std::runtime_error("unknown weight key: " + key);
        *it->second = value;
    }
    return w;
}

// ---------------------------------------------------------------------------
// Subcommands
// ---------------------------------------------------------------------------

int cmd_fit_sg(const fs::path& input, const std::string& domain, int lobes,
               const fs::path& out, const std::optional<fs::path>& trace_csv, int max_iters) {
    const EnvMapGrid target = image_to_grid(read_pfm(input), parse_domain(domain));
    SgFitConfig cfg;
    if (lobes != 12) {
        // Region grid stays 2 rows; azimuth regions scale with the count.
        if (lobes % 2 != 0 || lobes < 2)
            throw std::runtime_error("--lobes must be a positive even number");
        cfg.lobe_count = lobes;
        cfg.region_cols = lobes / 2;
    }
    cfg.optimizer.max_iterations = max_iters;
    const FitResult fit = fit_grid(target, cfg);
    write_sg_text(fit.env, out);
    if (trace_csv) {
        std::ofstream csv(*trace_csv);
        csv << "iteration,loss,gradient_norm\n";
        for (const auto& e : fit.trace)
            csv << e.iteration << ',' << e.value << ',' << e.gradient_norm << '\n';
    }
    std::printf("final_loss %.10g\niterations %zu\n", fit.final_loss, fit.trace.size() - 1);
    if (fit.line_search_warning) std::fprintf(stderr, "warning: line search stalled\n");
    return 0;
}

int cmd_render(const fs::path& gbuffer_dir, const fs::path& lights_path,
               const fs::path& out_diffuse, const fs::path& out_specular, double fov,
               const std::optional<fs::path>& mask_path) {
    const GBuffer g = read_gbuffer(gbuffer_dir);
    const LightingGrid lights = read_lighting_grid(lights_path);
    CameraModel cam;
    cam.fov_deg = fov;
    std::optional<BinaryMask> mask;
    if (mask_path) mask = read_mask_png(*mask_path).channel(MaskClass::Object);
    const RenderedImage out =
        render_image(g, lights, cam, build_quadrature(), {}, mask ? &*mask : nullptr);
    write_pfm(out.diffuse, out_diffuse);
    write_pfm(out.specular, out_specular);
    return 0;
}

int cmd_insert(const Common& common, const fs::path& image_path, const fs::path& gbuffer_dir,
               const fs::path& lights_path, const std::string& at, const std::string& object,
               const std::string& albedo, double rough, double plane_radius_scale,
               const std::optional<fs::path>& plane_mask, const fs::path& out) {
    const HdrImage image = load_image(image_path, common.gamma);
    const GBuffer g = read_gbuffer(gbuffer_dir);
    const LightingGrid lights = read_lighting_grid(lights_path);
    const auto [x, y] = parse_xy(at);
    PlaneSpec plane;
    plane.radius_scale = plane_radius_scale;
    if (plane_mask) plane.mask = read_mask_png(*plane_mask).channel(MaskClass::Object);
    const ObjectSpec obj = parse_object(object, parse_rgb(albedo), rough);
    const InsertionResult result =
        insert_object(g, lights, {}, y, x, plane, obj, image, build_quadrature(), {});
    save_image(result.composite, out, common.gamma);
    return 0;
}

int cmd_edit_material(const Common& common, const fs::path& image_path,
                      const fs::path& gbuffer_dir, const fs::path& lights_path,
                      const fs::path& region_path, const std::string& albedo, double rough,
                      const fs::path& out) {
    const HdrImage image = load_image(image_path, common.gamma);
    const GBuffer g = read_gbuffer(gbuffer_dir);
    const LightingGrid lights = read_lighting_grid(lights_path);
    const BinaryMask region = read_mask_png(region_path).channel(MaskClass::Object);
    const HdrImage result = edit_material(g, lights, {}, region, parse_rgb(albedo), rough, image,
                                          build_quadrature(), {});
    save_image(result, out, common.gamma);
    return 0;
}

int cmd_edit_specular(const Common& common, const fs::path& image_path,
                      const fs::path& gbuffer_dir, const fs::path& lights_path,
                      const fs::path& region_path, double rough, const fs::path& out) {
    const HdrImage image = load_image(image_path, common.gamma);
    const GBuffer g = read_gbuffer(gbuffer_dir);
    const LightingGrid lights = read_lighting_grid(lights_path);
    const BinaryMask region = read_mask_png(region_path).channel(MaskClass::Object);
    const HdrImage result =
        edit_specularity(g, lights, {}, region, rough, image, build_quadrature(), {});
    save_image(result, out, common.gamma);
    return 0;
}

SvbrdfTexture load_texture(const Common& common, const fs::path& albedo, const fs::path& normal,
                           const fs::path& rough) {
    const HdrImage a = load_image(albedo, common.gamma);
    SvbrdfTexture tex = SvbrdfTexture::zeros(a.height, a.width);
    tex.albedo = a.data;

    const PfmData n = normal.extension() == ".png"
                          ? [&] {
                                const LdrImage png = read_png(normal);
                                PfmData d{png.height, png.width, 3, {}};
                                d.samples.resize(png.data.size());
                                for (std::size_t i = 0; i < png.data.size(); ++i)
                                    d.samples[i] = png.data[i] * 2.0f - 1.0f;
                                return d;
                            }()
                          : read_pfm_raw(normal);
    if (n.height != a.height || n.width != a.width || n.channels != 3)
        throw std::runtime_error("normal map shape disagrees with albedo");
    tex.normal = n.samples;
    for (int r = 0; r < tex.height; ++r)
        for (int c = 0; c < tex.width; ++c) tex.set_normal(r, c, normalized(tex.normal_at(r, c)));

    const HdrImage rr = load_image(rough, common.gamma);
    if (rr.height != a.height || rr.width != a.width)
        throw std::runtime_error("roughness map shape disagrees with albedo");
    for (int r = 0; r < tex.height; ++r)
        for (int c = 0; c < tex.width; ++c)
            tex.set_roughness(r, c, std::clamp(rr.at(r, c).r, 0.0, 1.0));
    return tex;
}

void write_tile(const Common& common, const SvbrdfTexture& tile, const TexSynthConfig& cfg,
                const fs::path& out_dir) {
    fs::create_directories(out_dir);
    write_pfm(HdrImage{tile.height, tile.width, tile.albedo}, out_dir / "albedo.pfm");
    write_pfm_raw(PfmData{tile.height, tile.width, 3, tile.normal}, out_dir / "normal.pfm");
    write_pfm_raw(PfmData{tile.height, tile.width, 1, tile.roughness},
                  out_dir / "roughness.pfm");
    const SvbrdfTexture preview = tile_3x3(tile);
    write_png(linear_to_ldr(HdrImage{preview.height, preview.width, preview.albedo},
                            common.gamma),
              out_dir / "tiling_preview.png");
    std::printf("%s tiling_boundary_energy %.10g\n", out_dir.string().c_str(),
                tiling_boundary_energy(tile, cfg));
}

int cmd_tile(const Common& common, const fs::path& albedo, const fs::path& normal,
             const fs::path& rough, int patch, const fs::path& out_dir, int overlap,
             double lambda_a, double lambda_n, double lambda_r) {
    const SvbrdfTexture tex = load_texture(common, albedo, normal, rough);
    TexSynthConfig cfg;
    cfg.overlap_width = overlap;
    cfg.lambda_albedo = lambda_a;
    cfg.lambda_normal = lambda_n;
    cfg.lambda_roughness = lambda_r;
    if (patch > 0) {
        write_tile(common, make_tileable(tex, patch, cfg), cfg, out_dir);
    } else {
        // Standard per-material set: 1/2, 1/3 and 1/4 of the source size.
        const auto tiles = make_tileable_sizes(tex, cfg);
        for (std::size_t i = 0; i < tiles.size(); ++i)
            write_tile(common, tiles[i], cfg, out_dir / ("size" + std::to_string(i)));
    }
    return 0;
}

int cmd_compare(const Common& common, const fs::path& input, const std::string& domain,
                int order, int probe_size, double probe_rough) {
    const EnvMapGrid target = image_to_grid(read_pfm(input), parse_domain(domain));
    const CompareReport r = compare_sh_sg(target, {}, order, probe_size, probe_rough);
    Report report;
    report.add("sg_log_loss", r.sg_log_loss);
    report.add("sh_log_loss", r.sh_log_loss);
    report.add("sg_render_mse", r.sg_render_mse);
    report.add("sh_render_mse", r.sh_render_mse);
    report.add("sg_fit_final_loss", r.sg_fit_final_loss);
    report.print(common.json);
    return 0;
}

int cmd_eval_loss(const Common& common, const fs::path& gt_dir, const fs::path& pred_dir,
                  const std::optional<fs::path>& weights_path) {
    const LossWeights w = weights_path ? load_weights(*weights_path) : LossWeights{};
    LossComponents parts;
    Report report;

    // Masks: object + area light for depth, object for the rest, full
    // frame when no mask ships with the ground truth.
    std::optional<MaskImage> mask;
    if (fs::exists(gt_dir / "mask.png")) mask = read_mask_png(gt_dir / "mask.png");

    const auto has_pair = [&](const char* name) {
        return fs::exists(gt_dir / name) && fs::exists(pred_dir / name);
    };

    if (has_pair("albedo.pfm")) {
        const HdrImage gt = read_pfm(gt_dir / "albedo.pfm");
        const HdrImage pred = read_pfm(pred_dir / "albedo.pfm");
        const BinaryMask m = mask ? mask->channel(MaskClass::Object)
                                  : BinaryMask::ones(gt.height, gt.width);
        const auto r = scale_invariant_l2(pred, gt, m);
        parts.albedo = r.loss;
        report.add("L_A", r.loss);
        report.add("c_A", r.scale);
    }
    if (has_pair("normal.pfm")) {
        const PfmData gt = read_pfm_raw(gt_dir / "normal.pfm");
        const PfmData pred = read_pfm_raw(pred_dir / "normal.pfm");
        if (gt.samples.size() != pred.samples.size())
            throw std::runtime_error("normal map dims disagree");
        const BinaryMask m = mask ? mask->channel(MaskClass::Object)
                                  : BinaryMask::ones(gt.height, gt.width);
        double acc = 0.0;
        std::size_t n = 0;
        for (std::size_t p = 0; p < m.values.size(); ++p) {
            if (!m.values[p]) continue;
            for (int ch = 0; ch < 3; ++ch) {
                const double d = gt.samples[3 * p + static_cast<std::size_t>(ch)] -
                                 pred.samples[3 * p + static_cast<std::size_t>(ch)];
                acc += d * d;
            }
            ++n;
        }
        parts.normal = acc / (3.0 * static_cast<double>(n));
        report.add("L_N", parts.normal);
    }
    if (has_pair("roughness.pfm")) {
        const HdrImage gt = read_pfm(gt_dir / "roughness.pfm");
        const HdrImage pred = read_pfm(pred_dir / "roughness.pfm");
        const BinaryMask m = mask ? mask->channel(MaskClass::Object)
                                  : BinaryMask::ones(gt.height, gt.width);
        parts.roughness = masked_l2(pred, gt, m);
        report.add("L_R", parts.roughness);
    }
    if (has_pair("depth.pfm")) {
        const PfmData gt = read_pfm_raw(gt_dir / "depth.pfm");
        const PfmData pred = read_pfm_raw(pred_dir / "depth.pfm");
        std::vector<float> gtd(static_cast<std::size_t>(gt.height) * gt.width);
        std::vector<float> prd(gtd.size());
        for (std::size_t i = 0; i < gtd.size(); ++i) {
            gtd[i] = gt.channels == 1 ? gt.samples[i] : gt.samples[3 * i];
            prd[i] = pred.channels == 1 ? pred.samples[i] : pred.samples[3 * i];
        }
        BinaryMask m = BinaryMask::ones(gt.height, gt.width);
        if (mask) {
            const BinaryMask obj = mask->channel(MaskClass::Object);
            const BinaryMask area = mask->channel(MaskClass::AreaLight);
            for (std::size_t i = 0; i < m.values.size(); ++i)
                m.values[i] = obj.values[i] | area.values[i];
        }
        const auto r = log_encoded_depth_loss(gtd, prd, m);
        parts.depth = r.loss;
        report.add("L_D", r.loss);
        report.add("c_d", r.scale);
    }
    if (fs::exists(gt_dir / "image.pfm") && fs::exists(pred_dir / "diffuse.pfm") &&
        fs::exists(pred_dir / "specular.pfm")) {
        const HdrImage image = read_pfm(gt_dir / "image.pfm");
        const HdrImage diffuse = read_pfm(pred_dir / "diffuse.pfm");
        const HdrImage specular = read_pfm(pred_dir / "specular.pfm");
        const BinaryMask m = mask ? mask->channel(MaskClass::Object)
                                  : BinaryMask::ones(image.height, image.width);
        const auto r = render_loss(image, diffuse, specular, m);
        parts.render = r.loss;
        report.add("L_ren", r.loss);
        report.add("c_diff", r.c_diff);
        report.add("c_spec", r.c_spec);
    }
    if (has_pair("env.pfm")) {
        const EnvMapGrid gt = image_to_grid(read_pfm(gt_dir / "env.pfm"), GridDomain::Hemisphere);
        const EnvMapGrid pred =
            image_to_grid(read_pfm(pred_dir / "env.pfm"), GridDomain::Hemisphere);
        parts.lighting = grid_log_loss(pred, gt);
        report.add("L_L", parts.lighting);
    }
    if (has_pair("lights.txt")) {
        const SgEnvironment gt = read_sg_text(gt_dir / "lights.txt");
        const SgEnvironment pred = read_sg_text(pred_dir / "lights.txt");
        const SgParamLosses r = sg_param_losses(pred, gt);
        parts.lambda_k = r.lambda;
        parts.xi_k = r.xi;
        parts.intensity_k = r.intensity;
        double sl = 0.0, sx = 0.0, sf = 0.0;
        for (double v : r.lambda) sl += v;
        for (double v : r.xi) sx += v;
        for (double v : r.intensity) sf += v;
        report.add("L_lambda_sum", sl);
        report.add("L_xi_sum", sx);
        report.add("L_F_sum", sf);
    }

    report.add("total", total_loss(parts, w));
    report.print(common.json);
    return 0;
}

int cmd_matmap_sample(const Common& common, const fs::path& observations, double exponent,
                      double intensity, int count, const std::optional<fs::path>& table_out) {
    const ConditionalTable table = build_conditional(read_observations_csv(observations));
    if (table_out) write_table_text(table, *table_out);
    const PhongKey key = table.key_for(exponent, intensity);
    SplitMix64 rng(common.seed);
    if (common.json) {
        nlohmann::json j = nlohmann::json::array();
        for (int i = 0; i < count; ++i) j.push_back(sample_conditional(table, key, rng));
        std::cout << j.dump(2) << '\n';
    } else {
        for (int i = 0; i < count; ++i)
            std::printf("%.10g\n", sample_conditional(table, key, rng));
    }
    return 0;
}

}  // namespace

int run(int argc, char** argv) {
    CLI::App app{"lumenforge: spherical-Gaussian lighting, microfacet SVBRDF rendering and "
                 "scene-editing toolkit"};
    app.require_subcommand(1);
    app.failure_message([](const CLI::App* a, const CLI::Error& e) {
        std::string msg = CLI::FailureMessage::simple(a, e);
        const auto extras = a->remaining(true);
        if (!extras.empty()) {
            msg += "unrecognized:";
            for (const auto& t : extras) msg += " " + t;
            msg += "\n";
        }
        return msg;
    });
    Common common;
    app.add_option("--gamma", common.gamma, "display gamma for PNG I/O")->capture_default_str();
    app.add_option("--seed", common.seed, "seed for all randomized subcommands")
        ->capture_default_str();
    app.add_flag("--json", common.json, "emit machine-readable reports");

    // fit-sg
    auto* fit = app.add_subcommand("fit-sg", "fit a spherical-Gaussian mixture to an "
                                             "environment grid");
    fs::path fit_input, fit_out;
    std::optional<fs::path> fit_trace;
    std::string fit_domain = "hemisphere";
    int fit_lobes = 12, fit_iters = 400;
    fit->add_option("--input", fit_input, "environment grid PFM")->required();
    fit->add_option("--out", fit_out, "output lobe text file")->required();
    fit->add_option("--lobes", fit_lobes, "lobe count")->capture_default_str();
    fit->add_option("--domain", fit_domain, "hemisphere|sphere")->capture_default_str();
    fit->add_option("--trace", fit_trace, "iteration trace CSV");
    fit->add_option("--max-iters", fit_iters, "LBFGS iteration cap")->capture_default_str();

    // render
    auto* render = app.add_subcommand("render", "render diffuse/specular images from a "
                                                "G-buffer and SG lighting");
    fs::path r_gbuffer, r_lights, r_diffuse, r_specular;
    std::optional<fs::path> r_mask;
    double r_fov = 63.4;
    render->add_option("--gbuffer", r_gbuffer, "G-buffer directory")->required();
    render->add_option("--lights", r_lights, "SG lobe file or sggrid file")->required();
    render->add_option("--out-diffuse", r_diffuse, "diffuse output PFM")->required();
    render->add_option("--out-specular", r_specular, "specular output PFM")->required();
    render->add_option("--fov", r_fov, "horizontal field of view (degrees)")
        ->capture_default_str();
    render->add_option("--mask", r_mask, "object mask PNG");

    // insert
    auto* insert = app.add_subcommand("insert", "render a virtual object into a photograph");
    fs::path i_image, i_gbuffer, i_lights, i_out;
    std::optional<fs::path> i_plane_mask;
    std::string i_at, i_object = "sphere:0.1", i_albedo = "0.8,0.8,0.8";
    double i_rough = 0.2, i_plane_scale = 4.0;
    insert->add_option("--image", i_image, "input image (pfm|png)")->required();
    insert->add_option("--gbuffer", i_gbuffer, "G-buffer directory")->required();
    insert->add_option("--lights", i_lights, "lighting file")->required();
    insert->add_option("--at", i_at, "insertion pixel x,y")->required();
    insert->add_option("--object", i_object, "sphere:<radius> or heightfield:<pfm>:<footprint>")
        ->capture_default_str();
    insert->add_option("--albedo", i_albedo, "object albedo r,g,b")->capture_default_str();
    insert->add_option("--rough", i_rough, "object roughness")->capture_default_str();
    insert->add_option("--plane-radius-scale", i_plane_scale,
                       "plane disk radius as a multiple of the object radius")
        ->capture_default_str();
    insert->add_option("--plane-mask", i_plane_mask, "plane region mask PNG");
    insert->add_option("--out", i_out, "output image (pfm|png)")->required();

    // edit-material
    auto* edit_mat = app.add_subcommand("edit-material", "replace a region's SVBRDF and "
                                                         "re-render it");
    fs::path em_image, em_gbuffer, em_lights, em_region, em_out;
    std::string em_albedo = "0.5,0.5,0.5";
    double em_rough = 0.5;
    edit_mat->add_option("--image", em_image)->required();
    edit_mat->add_option("--gbuffer", em_gbuffer)->required();
    edit_mat->add_option("--lights", em_lights)->required();
    edit_mat->add_option("--region", em_region, "region mask PNG")->required();
    edit_mat->add_option("--albedo", em_albedo)->capture_default_str();
    edit_mat->add_option("--rough", em_rough)->capture_default_str();
    edit_mat->add_option("--out", em_out)->required();

    // edit-specular
    auto* edit_spec = app.add_subcommand("edit-specular", "change a region's roughness and "
                                                          "add the residual back");
    fs::path es_image, es_gbuffer, es_lights, es_region, es_out;
    double es_rough = 0.2;
    edit_spec->add_option("--image", es_image)->required();
    edit_spec->add_option("--gbuffer", es_gbuffer)->required();
    edit_spec->add_option("--lights", es_lights)->required();
    edit_spec->add_option("--region", es_region, "region mask PNG")->required();
    edit_spec->add_option("--rough", es_rough, "new roughness")->capture_default_str();
    edit_spec->add_option("--out", es_out)->required();

    // tile
    auto* tile = app.add_subcommand("tile", "graph-cut tileable texture synthesis");
    fs::path t_albedo, t_normal, t_rough, t_out;
    int t_patch = 0, t_overlap = 0;
    double t_la = 1.0, t_ln = 1.0, t_lr = 1.0;
    tile->add_option("--albedo", t_albedo)->required();
    tile->add_option("--normal", t_normal)->required();
    tile->add_option("--rough", t_rough)->required();
    tile->add_option("--patch", t_patch, "tile size in pixels (0 = the 1/2, 1/3, 1/4 set)")
        ->required();
    tile->add_option("--out", t_out, "output directory")->required();
    tile->add_option("--overlap", t_overlap, "overlap width (0 = patch/8)")
        ->capture_default_str();
    tile->add_option("--lambda-albedo", t_la)->capture_default_str();
    tile->add_option("--lambda-normal", t_ln)->capture_default_str();
    tile->add_option("--lambda-rough", t_lr)->capture_default_str();

    // compare-sh-sg
    auto* compare = app.add_subcommand("compare-sh-sg", "SG fit vs order-4 SH projection of "
                                                        "an environment grid");
    fs::path c_input;
    std::string c_domain = "hemisphere";
    int c_order = 4, c_probe = 64;
    double c_rough = 0.2;
    compare->add_option("--input", c_input, "environment grid PFM")->required();
    compare->add_option("--domain", c_domain)->capture_default_str();
    compare->add_option("--order", c_order, "SH order")->capture_default_str();
    compare->add_option("--probe-size", c_probe)->capture_default_str();
    compare->add_option("--probe-rough", c_rough)->capture_default_str();

    // eval-loss
    auto* eval = app.add_subcommand("eval-loss", "per-term and total loss report between "
                                                 "ground-truth and prediction directories");
    fs::path e_gt, e_pred;
    std::optional<fs::path> e_weights;
    eval->add_option("--gt", e_gt, "ground-truth directory")->required();
    eval->add_option("--pred", e_pred, "prediction directory")->required();
    eval->add_option("--weights", e_weights, "key-value weight overrides");

    // matmap-sample
    auto* matmap = app.add_subcommand("matmap-sample", "sample microfacet roughness "
                                                       "conditioned on Phong parameters");
    fs::path m_obs;
    std::optional<fs::path> m_table;
    double m_exp = 0.0, m_int = 0.0;
    int m_count = 1;
    matmap->add_option("--observations", m_obs, "observations CSV")->required();
    matmap->add_option("--exponent", m_exp, "Phong exponent")->required();
    matmap->add_option("--intensity", m_int, "Phong intensity")->required();
    matmap->add_option("--count", m_count, "samples to draw")->capture_default_str();
    matmap->add_option("--table-out", m_table, "serialize the conditional table");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (fit->parsed())
            return cmd_fit_sg(fit_input, fit_domain, fit_lobes, fit_out, fit_trace, fit_iters);
        if (render->parsed())
            return cmd_render(r_gbuffer, r_lights, r_diffuse, r_specular, r_fov, r_mask);
        if (insert->parsed())
            return cmd_insert(common, i_image, i_gbuffer, i_lights, i_at, i_object, i_albedo,
                              i_rough, i_plane_scale, i_plane_mask, i_out);
        if (edit_mat->parsed())
            return cmd_edit_material(common, em_image, em_gbuffer, em_lights, em_region,
                                     em_albedo, em_rough, em_out);
        if (edit_spec->parsed())
            return cmd_edit_specular(common, es_image, es_gbuffer, es_lights, es_region,
                                     es_rough, es_out);
        if (tile->parsed())
            return cmd_tile(common, t_albedo, t_normal, t_rough, t_patch, t_out, t_overlap,
                            t_la, t_ln, t_lr);
        if (compare->parsed())
            return cmd_compare(common, c_input, c_domain, c_order, c_probe, c_rough);
        if (eval->parsed()) return cmd_eval_loss(common, e_gt, e_pred, e_weights);
        if (matmap->parsed())
            return cmd_matmap_sample(common, m_obs, m_exp, m_int, m_count, m_table);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 1;
}

}  // namespace lumen::cli
