// torque: command-line front end for the image torque operator pipeline.
//
// Exit codes: 0 success, 1 usage error, 2 I/O error, 3 numeric/validation
// error.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "torque/bench.hpp"
#include "torque/edge_map.hpp"
#include "torque/errors.hpp"
#include "torque/eval.hpp"
#include "torque/extrema.hpp"
#include "torque/gradient_torque.hpp"
#include "torque/image.hpp"
#include "torque/mst.hpp"
#include "torque/render.hpp"
#include "torque/saliency.hpp"
#include "torque/strengthen.hpp"
#include "torque/torque_op.hpp"

namespace {

using nlohmann::json;

// "3:91:4" (start:end:step) or a comma list "3,7,11".
std::vector<int> parse_scales(const std::string& text)
{
    std::vector<int> scales;
    if (text.find(':') != std::string::npos) {
        int start = 0, end = 0, step = 0;
        char c1 = 0, c2 = 0;
        std::istringstream in(text);
        if (!(in >> start >> c1 >> end >> c2 >> step) || c1 != ':' || c2 != ':' || step <= 0)
            throw std::invalid_argument("bad scale range '" + text + "', expected start:end:step");
        for (int s = start; s <= end; s += step)
            scales.push_back(s);
    } else {
        std::istringstream in(text);
        std::string tok;
        while (std::getline(in, tok, ','))
            if (!tok.empty())
                scales.push_back(std::stoi(tok));
    }
    if (scales.empty())
        throw std::invalid_argument("empty scale list");
    return scales;
}

std::vector<double> parse_factors(const std::string& text)
{
    std::vector<double> factors;
    std::istringstream in(text);
    std::string tok;
    while (std::getline(in, tok, ','))
        if (!tok.empty())
            factors.push_back(std::stod(tok));
    if (factors.empty())
        throw std::invalid_argument("empty scale-factor list");
    return factors;
}

std::vector<int> parse_int_list(const std::string& text)
{
    std::vector<int> out;
    std::istringstream in(text);
    std::string tok;
    while (std::getline(in, tok, ','))
        if (!tok.empty())
            out.push_back(std::stoi(tok));
    return out;
}

// PFM loads as-is; PGM/PNG load as luminance samples.
torque::FloatMap load_any_map(const std::string& path)
{
    std::ifstream probe(path, std::ios::binary);
    if (!probe)
        throw torque::IoError("cannot open '" + path + "'");
    char magic[2] = {0, 0};
    probe.read(magic, 2);
    probe.close();
    if (magic[0] == 'P' && magic[1] == 'f')
        return torque::load_float_map(path);
    const torque::GrayImage img = torque::load_image(path);
    torque::FloatMap map = torque::make_float_map(img.width, img.height);
    map.samples.assign(img.samples.begin(), img.samples.end());
    return map;
}

void require_unit_range(const torque::FloatMap& map, const std::string& what)
{
    for (float v : map.samples)
        if (!(v >= 0.0f && v <= 1.0f))
            throw std::invalid_argument(what + " must hold values in [0,1]");
}

void write_text(const std::string& path, const std::string& text)
{
    std::ofstream out(path);
    if (!out)
        throw torque::IoError("cannot open '" + path + "'");
    out << text;
    if (!out)
        throw torque::IoError("write failed for '" + path + "'");
}

// Provenance sidecar with the resolved options of the run.
void write_sidecar(const std::string& output_path, const std::string& command, const json& options)
{
    if (output_path.empty())
        return;
    json j;
    j["command"] = command;
    j["options"] = options;
    write_text(output_path + ".run.json", j.dump(2) + "\n");
}

struct EdgeSourceOptions {
    std::string edges_path;    // precomputed bin-index PGM
    std::string strength_path; // external strength map, oriented by the gradient
    double threshold = 0.10;
};

void add_edge_source_options(CLI::App* cmd, EdgeSourceOptions& opt)
{
    cmd->add_option("--edges", opt.edges_path, "precomputed oriented edge map (bin-index PGM)");
    cmd->add_option("--edge-strength", opt.strength_path,
                    "external edge strength map (PFM/PGM); orientations come from the image gradient");
    cmd->add_option("--threshold", opt.threshold, "edge threshold as a fraction of the max response")
        ->capture_default_str()
        ->check(CLI::Range(1e-9, 1.0 - 1e-9));
}

torque::OrientedEdgeMap resolve_edges(const EdgeSourceOptions& opt, const torque::GrayImage& img)
{
    if (!opt.edges_path.empty())
        return torque::load_edge_map(opt.edges_path);
    if (!opt.strength_path.empty())
        return torque::import_edges(load_any_map(opt.strength_path), torque::gradient(img),
                                    opt.threshold);
    return torque::detect_edges(torque::gradient(img), opt.threshold);
}

json edge_source_json(const EdgeSourceOptions& opt)
{
    return {{"edges", opt.edges_path}, {"edge_strength", opt.strength_path},
            {"threshold", opt.threshold}};
}

std::string default_scales_text()
{
    return "3:91:4";
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"image torque operator: contour-grouping maps, extrema, saliency,\n"
                 "edge strengthening, gradient torque, and MST descriptors"};
    app.require_subcommand(1);
    app.option_defaults()->always_capture_default();

    // ---- map ----
    struct {
        std::string input, output, render_path;
        EdgeSourceOptions edges;
        int scale = 21;
        double alpha = 2.0;
        bool oracle = false;
    } map_opt;
    CLI::App* cmd_map = app.add_subcommand("map", "torque map for one patch size");
    cmd_map->add_option("-i,--input", map_opt.input, "input image (PNG or PGM)")->required();
    cmd_map->add_option("-o,--output", map_opt.output, "output torque map (PFM)")->required();
    cmd_map->add_option("--scale", map_opt.scale, "odd patch side in pixels");
    cmd_map->add_option("--alpha", map_opt.alpha, "normalization exponent");
    cmd_map->add_flag("--oracle", map_opt.oracle, "use the naive per-pixel path instead of integral images");
    cmd_map->add_option("--render", map_opt.render_path, "also write a red/blue PNG rendering");
    add_edge_source_options(cmd_map, map_opt.edges);

    // ---- volume ----
    struct {
        std::string input, output, scales = default_scales_text();
        EdgeSourceOptions edges;
        double alpha = 2.0;
    } vol_opt;
    CLI::App* cmd_volume = app.add_subcommand("volume", "multi-scale torque volume (PFM slices + JSON manifest)");
    cmd_volume->add_option("-i,--input", vol_opt.input, "input image")->required();
    cmd_volume->add_option("-o,--output", vol_opt.output, "manifest path (.json)")->required();
    cmd_volume->add_option("--scales", vol_opt.scales, "scale list, start:end:step or comma list");
    cmd_volume->add_option("--alpha", vol_opt.alpha, "normalization exponent");
    add_edge_source_options(cmd_volume, vol_opt.edges);

    // ---- reduce ----
    struct {
        std::string volume, value_out, scale_out, render_path;
    } red_opt;
    CLI::App* cmd_reduce = app.add_subcommand("reduce", "value map V and scale map S from a volume");
    cmd_reduce->add_option("--volume", red_opt.volume, "volume manifest (JSON)")->required();
    cmd_reduce->add_option("--value", red_opt.value_out, "output value map (PFM)")->required();
    cmd_reduce->add_option("--scale-map", red_opt.scale_out, "output scale map (PFM)")->required();
    cmd_reduce->add_option("--render", red_opt.render_path, "red/blue PNG rendering of V");

    // ---- extrema ----
    struct {
        std::string input, volume, output, scales = default_scales_text();
        EdgeSourceOptions edges;
        double alpha = 2.0;
        int k = 25;
    } ext_opt;
    CLI::App* cmd_extrema = app.add_subcommand("extrema", "space-scale extrema of the torque volume (JSON)");
    cmd_extrema->add_option("-i,--input", ext_opt.input, "input image (computes the volume first)");
    cmd_extrema->add_option("--volume", ext_opt.volume, "existing volume manifest (JSON)");
    cmd_extrema->add_option("-o,--output", ext_opt.output, "output extrema JSON")->required();
    cmd_extrema->add_option("--k", ext_opt.k, "extrema kept per polarity")->check(CLI::PositiveNumber);
    cmd_extrema->add_option("--scales", ext_opt.scales, "scale list when computing from an image");
    cmd_extrema->add_option("--alpha", ext_opt.alpha, "normalization exponent");
    add_edge_source_options(cmd_extrema, ext_opt.edges);

    // ---- saliency ----
    struct {
        std::string input, output, external, render_path, pgm_path, scales = default_scales_text();
        EdgeSourceOptions edges;
        double alpha = 2.0, sigma = 25.0, weight = 0.3;
        int k = 25;
        bool unweighted = false;
    } sal_opt;
    CLI::App* cmd_saliency = app.add_subcommand("saliency", "torque saliency map, optionally blended with an external map");
    cmd_saliency->add_option("-i,--input", sal_opt.input, "input image")->required();
    cmd_saliency->add_option("-o,--output", sal_opt.output, "output saliency map (PFM)")->required();
    cmd_saliency->add_option("--sigma", sal_opt.sigma, "Gaussian std in pixels")->check(CLI::PositiveNumber);
    cmd_saliency->add_option("--k", sal_opt.k, "extrema per polarity")->check(CLI::PositiveNumber);
    cmd_saliency->add_option("--external", sal_opt.external, "external saliency map in [0,1] to blend with");
    cmd_saliency->add_option("--weight", sal_opt.weight, "weight of the torque map in the blend")
        ->check(CLI::Range(0.0, 1.0));
    cmd_saliency->add_option("--scales", sal_opt.scales, "scale list");
    cmd_saliency->add_option("--alpha", sal_opt.alpha, "normalization exponent");
    cmd_saliency->add_flag("--unweighted", sal_opt.unweighted, "equal-weight Gaussians instead of |value| weights");
    cmd_saliency->add_option("--pgm", sal_opt.pgm_path, "also write an 8-bit PGM rendering");
    cmd_saliency->add_option("--render", sal_opt.render_path, "also write a PNG rendering");
    add_edge_source_options(cmd_saliency, sal_opt.edges);

    // ---- strengthen ----
    struct {
        std::string input, output, mode = "logistic", render_path, pgm_path, contribution_path;
        std::string scales = default_scales_text();
        EdgeSourceOptions edges;
        double alpha = 2.0, c0 = -2.54, c1 = 1.86, c2 = 2.69, blend = 0.5;
        int num_extrema = 5000;
        bool full_sum = false;
    } str_opt;
    CLI::App* cmd_strengthen = app.add_subcommand("strengthen", "reweigh edges by their contribution to extremal torque patches");
    cmd_strengthen->add_option("-i,--input", str_opt.input, "input image")->required();
    cmd_strengthen->add_option("-o,--output", str_opt.output, "output strengthened edge map (PFM)")->required();
    cmd_strengthen->add_option("--mode", str_opt.mode, "combination rule")
        ->check(CLI::IsMember({"logistic", "linear"}));
    cmd_strengthen->add_option("--c0", str_opt.c0, "logistic bias");
    cmd_strengthen->add_option("--c1", str_opt.c1, "logistic weight of the base edge strength");
    cmd_strengthen->add_option("--c2", str_opt.c2, "logistic weight of the torque contribution");
    cmd_strengthen->add_option("--blend", str_opt.blend, "linear-mode weight of the contribution term")
        ->check(CLI::Range(0.0, 1.0));
    cmd_strengthen->add_option("--num-extrema", str_opt.num_extrema, "extremal patches in the contribution map")
        ->check(CLI::PositiveNumber);
    cmd_strengthen->add_option("--scales", str_opt.scales, "scale list");
    cmd_strengthen->add_option("--alpha", str_opt.alpha, "normalization exponent");
    cmd_strengthen->add_flag("--full-sum", str_opt.full_sum, "sum over all patches instead of extremal ones");
    cmd_strengthen->add_option("--contribution", str_opt.contribution_path, "also write the raw contribution map (PFM)");
    cmd_strengthen->add_option("--pgm", str_opt.pgm_path, "also write an 8-bit PGM rendering");
    cmd_strengthen->add_option("--render", str_opt.render_path, "also write a PNG rendering");
    add_edge_source_options(cmd_strengthen, str_opt.edges);

    // ---- gradtorque ----
    struct {
        std::string input, output, form = "both";
        double cx = 0.0, cy = 0.0, radius = 16.0;
    } grad_opt;
    CLI::App* cmd_gradtorque = app.add_subcommand("gradtorque", "gradient torque of a disk patch (both formulations)");
    cmd_gradtorque->add_option("-i,--input", grad_opt.input, "input image")->required();
    cmd_gradtorque->add_option("--cx", grad_opt.cx, "disk center x")->required();
    cmd_gradtorque->add_option("--cy", grad_opt.cy, "disk center y")->required();
    cmd_gradtorque->add_option("--radius", grad_opt.radius, "disk radius in pixels (>= 4)")->required();
    cmd_gradtorque->add_option("--form", grad_opt.form, "formulation to evaluate")
        ->check(CLI::IsMember({"direct", "intensity", "both"}));
    cmd_gradtorque->add_option("-o,--output", grad_opt.output, "write the JSON result here instead of stdout");

    // ---- describe ----
    struct {
        std::string input, output, polarity = "both", factors = "0.5,1,2";
        std::string scales = default_scales_text();
        EdgeSourceOptions edges;
        double alpha = 2.0;
        int k = 25, n_steps = 3;
        bool magnitudes = false;
    } des_opt;
    CLI::App* cmd_describe = app.add_subcommand("describe", "MST descriptors of the MTP patches (one JSON object per line)");
    cmd_describe->add_option("-i,--input", des_opt.input, "input image")->required();
    cmd_describe->add_option("-o,--output", des_opt.output, "output JSONL file")->required();
    cmd_describe->add_option("--k", des_opt.k, "extrema per polarity")->check(CLI::PositiveNumber);
    cmd_describe->add_option("--polarity", des_opt.polarity, "patches to describe")
        ->check(CLI::IsMember({"both", "maxima", "minima"}));
    cmd_describe->add_option("--n-steps", des_opt.n_steps, "samples per direction")->check(CLI::PositiveNumber);
    cmd_describe->add_option("--scale-factors", des_opt.factors, "patch-size multipliers, comma list");
    cmd_describe->add_option("--scales", des_opt.scales, "volume scale list");
    cmd_describe->add_option("--alpha", des_opt.alpha, "normalization exponent");
    cmd_describe->add_flag("--magnitudes", des_opt.magnitudes, "store |tau| instead of signed values");
    add_edge_source_options(cmd_describe, des_opt.edges);

    // ---- eval ----
    struct {
        std::string pred, truth, output;
        double truth_threshold = 0.5;
        int thresholds = 11;
    } eval_opt;
    CLI::App* cmd_eval = app.add_subcommand("eval", "precision/recall/F curve of a prediction map (CSV)");
    cmd_eval->add_option("--pred", eval_opt.pred, "prediction map (PFM/PGM)")->required();
    cmd_eval->add_option("--truth", eval_opt.truth, "ground truth map (PFM/PGM)")->required();
    cmd_eval->add_option("--truth-threshold", eval_opt.truth_threshold, "ground truth binarization threshold");
    cmd_eval->add_option("--thresholds", eval_opt.thresholds, "number of equally spaced thresholds in [0,1]")
        ->check(CLI::Range(2, 100000));
    cmd_eval->add_option("-o,--output", eval_opt.output, "output CSV path")->required();

    // ---- render ----
    struct {
        std::string input, output;
    } ren_opt;
    CLI::App* cmd_render = app.add_subcommand("render", "red/blue PNG rendering of a signed map");
    cmd_render->add_option("-i,--input", ren_opt.input, "input map (PFM)")->required();
    cmd_render->add_option("-o,--output", ren_opt.output, "output PNG")->required();

    // ---- bench ----
    struct {
        std::string sizes = "5,21,45,81", output;
        int repeats = 5, width = 512, height = 512;
        std::uint64_t seed = 1;
        double density = 0.1, alpha = 2.0, max_ratio = 1.3;
        bool naive = false;
    } bench_opt;
    CLI::App* cmd_bench = app.add_subcommand("bench", "verify the patch-size independence of the fast path");
    cmd_bench->add_option("--sizes", bench_opt.sizes, "comma list of patch sides (>= 2 entries)");
    cmd_bench->add_option("--repeats", bench_opt.repeats, "timed repeats per size, median reported")
        ->check(CLI::Range(3, 1000));
    cmd_bench->add_option("--width", bench_opt.width, "edge map width")->check(CLI::PositiveNumber);
    cmd_bench->add_option("--height", bench_opt.height, "edge map height")->check(CLI::PositiveNumber);
    cmd_bench->add_option("--seed", bench_opt.seed, "edge map seed");
    cmd_bench->add_option("--density", bench_opt.density, "edge density of the random map");
    cmd_bench->add_option("--alpha", bench_opt.alpha, "normalization exponent");
    cmd_bench->add_option("--max-ratio", bench_opt.max_ratio, "bound on max/min per-pixel time");
    cmd_bench->add_flag("--naive", bench_opt.naive, "also time the naive path as a contrast column");
    cmd_bench->add_option("-o,--output", bench_opt.output, "write the JSON report here as well as stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (*cmd_map) {
            const torque::GrayImage img = torque::load_image(map_opt.input);
            const torque::OrientedEdgeMap edges = resolve_edges(map_opt.edges, img);
            torque::FloatMap out;
            if (map_opt.oracle) {
                out = torque::make_float_map(edges.width, edges.height);
                for (int y = 0; y < edges.height; ++y)
                    for (int x = 0; x < edges.width; ++x)
                        out.at(x, y) = static_cast<float>(
                            torque::patch_torque_naive(edges, {x, y, map_opt.scale}, map_opt.alpha));
            } else {
                out = torque::torque_map_fast(torque::TorquePrecompute(edges), map_opt.scale, map_opt.alpha);
            }
            torque::save_float_map(out, map_opt.output);
            if (!map_opt.render_path.empty())
                torque::save_png(torque::render_signed_map(out), map_opt.render_path);
            write_sidecar(map_opt.output, "map",
                          {{"input", map_opt.input}, {"scale", map_opt.scale}, {"alpha", map_opt.alpha},
                           {"oracle", map_opt.oracle}, {"edge_source", edge_source_json(map_opt.edges)}});
        } else if (*cmd_volume) {
            const torque::GrayImage img = torque::load_image(vol_opt.input);
            const torque::OrientedEdgeMap edges = resolve_edges(vol_opt.edges, img);
            const std::vector<int> scales = parse_scales(vol_opt.scales);
            const torque::TorqueVolume vol = torque::torque_volume(edges, scales, vol_opt.alpha);
            torque::save_volume(vol, vol_opt.output);
            write_sidecar(vol_opt.output, "volume",
                          {{"input", vol_opt.input}, {"scales", scales}, {"alpha", vol_opt.alpha},
                           {"edge_source", edge_source_json(vol_opt.edges)}});
        } else if (*cmd_reduce) {
            const torque::TorqueVolume vol = torque::load_volume(red_opt.volume);
            const torque::ValueScaleMaps maps = torque::reduce_volume(vol);
            torque::save_float_map(maps.value, red_opt.value_out);
            torque::save_float_map(maps.scale, red_opt.scale_out);
            if (!red_opt.render_path.empty())
                torque::save_png(torque::render_signed_map(maps.value), red_opt.render_path);
            write_sidecar(red_opt.value_out, "reduce", {{"volume", red_opt.volume}});
        } else if (*cmd_extrema) {
            torque::TorqueVolume vol;
            if (!ext_opt.volume.empty()) {
                vol = torque::load_volume(ext_opt.volume);
            } else if (!ext_opt.input.empty()) {
                const torque::GrayImage img = torque::load_image(ext_opt.input);
                const torque::OrientedEdgeMap edges = resolve_edges(ext_opt.edges, img);
                vol = torque::torque_volume(edges, parse_scales(ext_opt.scales), ext_opt.alpha);
            } else {
                throw std::invalid_argument("extrema needs either --input or --volume");
            }
            const torque::ExtremaResult found = torque::find_extrema(vol, ext_opt.k);
            write_text(ext_opt.output, torque::extrema_to_json(found) + "\n");
            write_sidecar(ext_opt.output, "extrema",
                          {{"input", ext_opt.input}, {"volume", ext_opt.volume}, {"k", ext_opt.k},
                           {"alpha", ext_opt.alpha}});
        } else if (*cmd_saliency) {
            const torque::GrayImage img = torque::load_image(sal_opt.input);
            const torque::OrientedEdgeMap edges = resolve_edges(sal_opt.edges, img);
            const torque::TorqueVolume vol =
                torque::torque_volume(edges, parse_scales(sal_opt.scales), sal_opt.alpha);
            const torque::ExtremaResult found = torque::find_extrema(vol, sal_opt.k);
            std::vector<torque::TorqueExtremum> all(found.maxima);
            all.insert(all.end(), found.minima.begin(), found.minima.end());
            torque::SaliencyMap sal = torque::saliency_from_extrema(all, sal_opt.sigma, img.width,
                                                                    img.height, !sal_opt.unweighted);
            if (!sal_opt.external.empty()) {
                const torque::FloatMap ext = load_any_map(sal_opt.external);
                require_unit_range(ext, "external saliency map");
                sal = torque::blend_saliency(sal, ext, sal_opt.weight);
            }
            torque::save_float_map(sal.map, sal_opt.output);
            if (!sal_opt.pgm_path.empty())
                torque::save_pgm(sal.map, sal_opt.pgm_path);
            if (!sal_opt.render_path.empty())
                torque::save_png(torque::render_signed_map(sal.map), sal_opt.render_path);
            write_sidecar(sal_opt.output, "saliency",
                          {{"input", sal_opt.input}, {"sigma", sal_opt.sigma}, {"k", sal_opt.k},
                           {"external", sal_opt.external}, {"weight", sal_opt.weight},
                           {"alpha", sal_opt.alpha}, {"unweighted", sal_opt.unweighted}});
        } else if (*cmd_strengthen) {
            const torque::GrayImage img = torque::load_image(str_opt.input);
            torque::FloatMap d_o;
            torque::OrientedEdgeMap edges;
            if (!str_opt.edges.strength_path.empty()) {
                d_o = load_any_map(str_opt.edges.strength_path);
                require_unit_range(d_o, "edge strength map");
                edges = torque::import_edges(d_o, torque::gradient(img), str_opt.edges.threshold);
            } else {
                const torque::GradientField grad = torque::gradient(img);
                const float max_mag = *std::max_element(grad.magnitude.begin(), grad.magnitude.end());
                d_o = torque::make_float_map(img.width, img.height);
                if (max_mag > 0.0f)
                    for (std::size_t i = 0; i < d_o.samples.size(); ++i)
                        d_o.samples[i] = grad.magnitude[i] / max_mag;
                edges = !str_opt.edges.edges_path.empty()
                            ? torque::load_edge_map(str_opt.edges.edges_path)
                            : torque::detect_edges(grad, str_opt.edges.threshold);
            }
            const torque::TorqueVolume vol =
                torque::torque_volume(edges, parse_scales(str_opt.scales), str_opt.alpha);
            const torque::FloatMap d_tau =
                torque::edge_contribution(edges, vol, str_opt.num_extrema, str_opt.full_sum);
            torque::StrengthenConfig cfg;
            cfg.mode = str_opt.mode == "linear" ? torque::StrengthenConfig::Mode::linear
                                                : torque::StrengthenConfig::Mode::logistic;
            cfg.c0 = str_opt.c0;
            cfg.c1 = str_opt.c1;
            cfg.c2 = str_opt.c2;
            cfg.blend = str_opt.blend;
            cfg.num_extrema = str_opt.num_extrema;
            const torque::FloatMap d_s = torque::strengthen(d_o, d_tau, cfg);
            torque::save_float_map(d_s, str_opt.output);
            if (!str_opt.contribution_path.empty())
                torque::save_float_map(d_tau, str_opt.contribution_path);
            if (!str_opt.pgm_path.empty())
                torque::save_pgm(d_s, str_opt.pgm_path);
            if (!str_opt.render_path.empty())
                torque::save_png(torque::render_signed_map(d_s), str_opt.render_path);
            write_sidecar(str_opt.output, "strengthen",
                          {{"input", str_opt.input}, {"mode", str_opt.mode},
                           {"c0", str_opt.c0}, {"c1", str_opt.c1}, {"c2", str_opt.c2},
                           {"blend", str_opt.blend}, {"num_extrema", str_opt.num_extrema},
                           {"full_sum", str_opt.full_sum}, {"alpha", str_opt.alpha},
                           {"edge_source", edge_source_json(str_opt.edges)}});
        } else if (*cmd_gradtorque) {
            const torque::GrayImage img = torque::load_image(grad_opt.input);
            const torque::DiskPatch disk{grad_opt.cx, grad_opt.cy, grad_opt.radius};
            json j;
            j["cx"] = disk.cx;
            j["cy"] = disk.cy;
            j["radius"] = disk.radius;
            if (grad_opt.form != "intensity")
                j["direct"] = torque::gradient_torque_direct(img, disk);
            if (grad_opt.form != "direct")
                j["intensity"] = torque::gradient_torque_intensity(img, disk);
            const std::string text = j.dump(2) + "\n";
            std::cout << text;
            if (!grad_opt.output.empty()) {
                write_text(grad_opt.output, text);
                write_sidecar(grad_opt.output, "gradtorque",
                              {{"input", grad_opt.input}, {"cx", grad_opt.cx}, {"cy", grad_opt.cy},
                               {"radius", grad_opt.radius}, {"form", grad_opt.form}});
            }
        } else if (*cmd_describe) {
            const torque::GrayImage img = torque::load_image(des_opt.input);
            const torque::OrientedEdgeMap edges = resolve_edges(des_opt.edges, img);
            const torque::TorqueVolume vol =
                torque::torque_volume(edges, parse_scales(des_opt.scales), des_opt.alpha);
            const torque::ExtremaResult found = torque::find_extrema(vol, des_opt.k);
            const torque::PolarityFilter filter =
                des_opt.polarity == "maxima" ? torque::PolarityFilter::maxima
                : des_opt.polarity == "minima" ? torque::PolarityFilter::minima
                                               : torque::PolarityFilter::both;
            torque::MstConfig cfg;
            cfg.n_steps = des_opt.n_steps;
            cfg.scale_factors = parse_factors(des_opt.factors);
            cfg.alpha = des_opt.alpha;
            cfg.magnitudes = des_opt.magnitudes;
            const torque::TorquePrecompute pre(edges);
            std::ostringstream lines;
            for (const torque::Patch& patch : torque::mtp_patches(found, filter))
                lines << torque::descriptor_to_json(torque::mst_descriptor(pre, edges, patch, cfg)) << "\n";
            write_text(des_opt.output, lines.str());
            write_sidecar(des_opt.output, "describe",
                          {{"input", des_opt.input}, {"k", des_opt.k}, {"polarity", des_opt.polarity},
                           {"n_steps", des_opt.n_steps}, {"scale_factors", cfg.scale_factors},
                           {"alpha", des_opt.alpha}, {"magnitudes", des_opt.magnitudes}});
        } else if (*cmd_eval) {
            const torque::FloatMap pred = load_any_map(eval_opt.pred);
            const torque::BinaryMap truth =
                torque::binarize(load_any_map(eval_opt.truth), eval_opt.truth_threshold);
            const std::vector<torque::PrPoint> curve =
                torque::pr_curve(pred, truth, eval_opt.thresholds);
            write_text(eval_opt.output, torque::curve_to_csv(curve));
            std::cout << "max_f " << torque::max_f(curve) << "\n";
            write_sidecar(eval_opt.output, "eval",
                          {{"pred", eval_opt.pred}, {"truth", eval_opt.truth},
                           {"truth_threshold", eval_opt.truth_threshold},
                           {"thresholds", eval_opt.thresholds}});
        } else if (*cmd_render) {
            const torque::FloatMap map = torque::load_float_map(ren_opt.input);
            torque::save_png(torque::render_signed_map(map), ren_opt.output);
            write_sidecar(ren_opt.output, "render", {{"input", ren_opt.input}});
        } else if (*cmd_bench) {
            torque::BenchConfig cfg;
            cfg.sizes = parse_int_list(bench_opt.sizes);
            cfg.repeats = bench_opt.repeats;
            cfg.width = bench_opt.width;
            cfg.height = bench_opt.height;
            cfg.seed = bench_opt.seed;
            cfg.density = bench_opt.density;
            cfg.alpha = bench_opt.alpha;
            cfg.max_ratio = bench_opt.max_ratio;
            cfg.include_naive = bench_opt.naive;
            const torque::BenchReport report = torque::run_bench(cfg);
            const std::string text = torque::bench_report_to_json(report) + "\n";
            std::cout << text;
            if (!bench_opt.output.empty())
                write_text(bench_opt.output, text);
            if (!report.within_bound) {
                std::cerr << "error: per-pixel time ratio " << report.ratio
                          << " exceeds the bound " << report.max_ratio << "\n";
                return 3;
            }
        }
    } catch (const torque::IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const torque::ComputeError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
