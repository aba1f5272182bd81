// lesionseg: skin-lesion segmentation, feature extraction, and evaluation.
//
// Commands: segment, features, eval, overlay, synth. Exit codes: 0 success,
// 1 processing error, 2 I/O error. The LESIONSEG_OUT_DIR environment
// variable, when set, prefixes every relative output path.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "lesionseg/contour.hpp"
#include "lesionseg/draw.hpp"
#include "lesionseg/errors.hpp"
#include "lesionseg/evaluation.hpp"
#include "lesionseg/features.hpp"
#include "lesionseg/image_io.hpp"
#include "lesionseg/interest_points.hpp"
#include "lesionseg/otsu.hpp"
#include "lesionseg/raster.hpp"
#include "lesionseg/snake.hpp"
#include "lesionseg/synth.hpp"

namespace {

using namespace lesionseg;
namespace fs = std::filesystem;

std::string resolve_out(const std::string& path) {
    if (path.empty())
        return path;
    const fs::path p(path);
    if (p.is_absolute())
        return path;
    const char* dir = std::getenv("LESIONSEG_OUT_DIR");
    if (!dir || !*dir)
        return path;
    std::error_code ec;
    fs::create_directories(dir, ec);
    return (fs::path(dir) / p).string();
}

void ensure_parent_dir(const std::string& path) {
    const fs::path parent = fs::path(path).parent_path();
    if (parent.empty())
        return;
    std::error_code ec;
    fs::create_directories(parent, ec);
}

void write_text_output(const std::string& path, const std::string& content) {
    ensure_parent_dir(path);
    const std::string tmp = path + ".tmp";
    std::FILE* fp = std::fopen(tmp.c_str(), "wb");
    if (!fp)
        throw IoError("cannot open for writing: " + tmp);
    const std::size_t n = std::fwrite(content.data(), 1, content.size(), fp);
    if (n != content.size() || std::fclose(fp) != 0) {
        std::remove(tmp.c_str());
        throw IoError("failed to write: " + tmp);
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0) {
        std::remove(tmp.c_str());
        throw IoError("failed to move into place: " + path);
    }
}

RasterImage driving_channel(const RasterImage& img, const std::string& channel) {
    if (channel == "luma")
        return img.channels == 1 ? img : to_grayscale(img);
    int index = -1;
    if (channel == "r")
        index = 0;
    else if (channel == "g")
        index = 1;
    else if (channel == "b")
        index = 2;
    else
        throw InvalidArgument("channel must be luma, r, g, or b");
    if (img.channels != 3)
        throw ChannelMismatch("channel selection needs a 3-channel image");
    RasterImage out = RasterImage::create(img.width, img.height, 1);
    for (int y = 0; y < img.height; ++y)
        for (int x = 0; x < img.width; ++x)
            out.at(x, y) = img.at(x, y, index);
    return out;
}

LesionRule parse_lesion_rule(const std::string& text) {
    if (text == "darkest")
        return LesionRule::darkest();
    if (text == "brightest")
        return LesionRule::brightest();
    try {
        std::size_t used = 0;
        const int index = std::stoi(text, &used);
        if (used == text.size())
            return LesionRule::class_index(index);
    } catch (const std::exception&) {
    }
    throw InvalidArgument("--lesion expects darkest, brightest, or a class index");
}

std::optional<PixelRect> parse_roi(const std::string& text) {
    if (text.empty())
        return std::nullopt;
    int x = 0, y = 0, w = 0, h = 0;
    char tail = 0;
    if (std::sscanf(text.c_str(), "%d,%d,%d,%d%c", &x, &y, &w, &h, &tail) != 4 ||
        w < 1 || h < 1)
        throw InvalidArgument("--roi expects x,y,w,h with positive size");
    return PixelRect{x, y, x + w - 1, y + h - 1};
}

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string keypoints_json(const std::vector<Keypoint>& kps) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& kp : kps) {
        nlohmann::ordered_json j;
        j["x"] = kp.x;
        j["y"] = kp.y;
        j["scale"] = kp.scale;
        j["response"] = kp.response;
        arr.push_back(std::move(j));
    }
    return arr.dump(2) + "\n";
}

std::string trace_csv(const std::vector<EnergyBreakdown>& trace) {
    std::string out = "iteration,elastic,bending,image,total\n";
    for (std::size_t i = 0; i < trace.size(); ++i) {
        out += std::to_string(i + 1);
        out += ',';
        out += format_double(trace[i].elastic);
        out += ',';
        out += format_double(trace[i].bending);
        out += ',';
        out += format_double(trace[i].image);
        out += ',';
        out += format_double(trace[i].total);
        out += '\n';
    }
    return out;
}

// Stem-keyed listing of mask files in a directory (or the single file).
std::map<std::string, std::string> mask_set(const std::vector<std::string>& paths) {
    std::map<std::string, std::string> byId;
    for (const auto& p : paths) {
        if (fs::is_directory(p)) {
            std::vector<fs::path> entries;
            for (const auto& entry : fs::directory_iterator(p)) {
                if (!entry.is_regular_file())
                    continue;
                const std::string ext = entry.path().extension().string();
                if (ext == ".png" || ext == ".pgm" || ext == ".ppm" ||
                    ext == ".jpg" || ext == ".jpeg")
                    entries.push_back(entry.path());
            }
            std::sort(entries.begin(), entries.end());
            for (const auto& e : entries)
                byId[e.stem().string()] = e.string();
        } else {
            byId[fs::path(p).stem().string()] = p;
        }
    }
    return byId;
}

struct SegmentOptions {
    std::string input;
    std::string mask_out;
    std::string overlay_out;
    std::string keypoints_out;
    std::string trace_out;
    std::string method = "snake";
    std::string channel = "luma";

    DetectorParams detector;
    InitParams init;
    std::string init_name = "hull";
    std::uint64_t seed = 0;
    SnakeParams snake;

    int classes = 4;
    std::string lesion_rule = "darkest";
    std::string roi_text;
};

int run_segment(const SegmentOptions& opt) {
    const RasterImage image = read_image(opt.input);
    const RasterImage gray = driving_channel(image, opt.channel);

    BinaryMask mask;
    std::printf("input: %s (%dx%dx%d)\n", opt.input.c_str(), image.width,
                image.height, image.channels);
    std::printf("method: %s\n", opt.method.c_str());

    if (opt.method == "snake") {
        InitParams init = opt.init;
        init.rng_seed = opt.seed;
        if (opt.init_name == "hull")
            init.strategy = InitStrategy::Hull;
        else if (opt.init_name == "random")
            init.strategy = InitStrategy::RandomSubset;
        else
            throw InvalidArgument("--init expects hull or random");

        const std::vector<Keypoint> keypoints = detect_keypoints(gray, opt.detector);
        std::printf("keypoints: %zu\n", keypoints.size());
        if (!opt.keypoints_out.empty())
            write_text_output(resolve_out(opt.keypoints_out), keypoints_json(keypoints));

        const Contour seed = seed_contour(keypoints, gray.width, gray.height, init);
        std::printf("init: %s (%zu points)\n", opt.init_name.c_str(), seed.size());

        const EnergyField field = image_energy_field(gray, opt.snake.smoothing_sigma);
        const EvolveResult result = evolve(seed, field, opt.snake);
        std::printf("sweeps: %zu\n", result.trace.size());
        std::printf("final energy: %s\n",
                    format_double(result.trace.back().total).c_str());
        if (!opt.trace_out.empty())
            write_text_output(resolve_out(opt.trace_out), trace_csv(result.trace));

        mask = contour_to_mask(result.contour, gray.width, gray.height);
        if (!opt.overlay_out.empty()) {
            const std::string path = resolve_out(opt.overlay_out);
            ensure_parent_dir(path);
            write_image(path, draw_contour_overlay(image, result.contour));
            std::printf("overlay: %s\n", path.c_str());
        }
    } else if (opt.method == "otsu") {
        const LesionRule rule = parse_lesion_rule(opt.lesion_rule);
        const std::optional<PixelRect> roi = parse_roi(opt.roi_text);
        std::printf("classes: %d\n", opt.classes);
        mask = segment_otsu(gray, opt.classes, rule, roi);
        if (!opt.overlay_out.empty()) {
            const std::string path = resolve_out(opt.overlay_out);
            ensure_parent_dir(path);
            write_image(path, draw_mask_boundary_overlay(image, mask));
            std::printf("overlay: %s\n", path.c_str());
        }
    } else {
        throw InvalidArgument("--method expects snake or otsu");
    }

    const std::string mask_path = resolve_out(opt.mask_out);
    ensure_parent_dir(mask_path);
    write_mask(mask_path, mask);
    std::printf("mask: %s (%llu lesion px)\n", mask_path.c_str(),
                static_cast<unsigned long long>(mask.count()));
    return 0;
}

int run_features(const std::string& image_path, const std::string& mask_path,
                 std::string id, const std::string& out_path) {
    const RasterImage image = read_image(image_path);
    const BinaryMask mask = read_mask(mask_path);
    if (id.empty())
        id = fs::path(image_path).stem().string();
    const FeatureReport report = region_stats(image, mask, id);
    const std::string text = feature_report_json(report).dump(2) + "\n";
    if (out_path.empty()) {
        std::fputs(text.c_str(), stdout);
    } else {
        const std::string resolved = resolve_out(out_path);
        write_text_output(resolved, text);
        std::printf("features: %s\n", resolved.c_str());
    }
    return 0;
}

int run_eval(const std::vector<std::string>& pred_paths,
             const std::vector<std::string>& ref_paths,
             const std::string& csv_path, const std::string& json_path) {
    const auto preds = mask_set(pred_paths);
    const auto refs = mask_set(ref_paths);

    std::string missing;
    for (const auto& [id, path] : preds)
        if (!refs.count(id))
            missing += " missing reference for '" + id + "';";
    for (const auto& [id, path] : refs)
        if (!preds.count(id))
            missing += " missing prediction for '" + id + "';";
    if (!missing.empty())
        throw UnmatchedIds("prediction/reference sets differ:" + missing);
    if (preds.empty())
        throw InvalidArgument("no mask pairs to evaluate");

    std::vector<EvalCase> cases;
    cases.reserve(preds.size());
    for (const auto& [id, path] : preds)
        cases.push_back({id, read_mask(path), read_mask(refs.at(id))});
    const EvalTable table = batch_evaluate(cases);

    if (!csv_path.empty()) {
        const std::string resolved = resolve_out(csv_path);
        write_text_output(resolved, render_csv(table));
        std::printf("csv: %s\n", resolved.c_str());
    }
    if (!json_path.empty()) {
        const std::string resolved = resolve_out(json_path);
        write_text_output(resolved, render_json(table).dump(2) + "\n");
        std::printf("json: %s\n", resolved.c_str());
    }
    std::printf("average recall: %.2f%%\n", table.average_recall * 100.0);
    std::printf("average precision: %.2f%%\n", table.average_precision * 100.0);
    return 0;
}

int run_overlay(const std::string& image_path, const std::string& mask_path,
                const std::string& out_path) {
    const RasterImage image = read_image(image_path);
    const BinaryMask mask = read_mask(mask_path);
    const std::string resolved = resolve_out(out_path);
    ensure_parent_dir(resolved);
    write_image(resolved, draw_mask_boundary_overlay(image, mask));
    std::printf("overlay: %s\n", resolved.c_str());
    return 0;
}

struct SynthOptions {
    std::uint64_t seed = 0;
    std::string image_out;
    std::string mask_out;
    std::string suite_dir;
    std::string shape = "disk";
    double radius = 60.0;
    double a = 70.0;
    double b = 50.0;
    double theta = 0.0;
    double amplitude = 0.1;
    int harmonics = 3;
    double noise = 4.0;
    double softness = 1.0;
};

int run_synth(const SynthOptions& opt) {
    if (!opt.suite_dir.empty()) {
        const std::string dir = resolve_out(opt.suite_dir);
        std::error_code ec;
        fs::create_directories(dir, ec);
        const auto suite = synth20_suite();
        for (const auto& c : suite) {
            const auto [img, mask] = gen_lesion_image(c.params);
            write_image((fs::path(dir) / (c.id + ".png")).string(), img);
            write_mask((fs::path(dir) / (c.id + "_mask.png")).string(), mask);
        }
        write_text_output((fs::path(dir) / "manifest.json").string(),
                          synth_manifest_json(suite).dump(2) + "\n");
        std::printf("suite: %s (%zu images)\n", dir.c_str(), suite.size());
        return 0;
    }

    SynthParams p;
    p.rng_seed = opt.seed;
    if (opt.shape == "disk")
        p.shape = DiskShape{opt.radius};
    else if (opt.shape == "ellipse")
        p.shape = EllipseShape{opt.a, opt.b, opt.theta};
    else if (opt.shape == "blob")
        p.shape = BlobShape{opt.radius, opt.amplitude, opt.harmonics};
    else
        throw InvalidArgument("--shape expects disk, ellipse, or blob");
    p.noise_sigma = opt.noise;
    p.edge_softness = opt.softness;

    const auto [img, mask] = gen_lesion_image(p);
    if (opt.image_out.empty())
        throw InvalidArgument("synth needs --out for the image");
    const std::string img_path = resolve_out(opt.image_out);
    ensure_parent_dir(img_path);
    write_image(img_path, img);
    std::printf("image: %s\n", img_path.c_str());
    if (!opt.mask_out.empty()) {
        const std::string mask_path = resolve_out(opt.mask_out);
        ensure_parent_dir(mask_path);
        write_mask(mask_path, mask);
        std::printf("mask: %s\n", mask_path.c_str());
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Skin-lesion segmentation: interest-point-seeded active "
                 "contours with an Otsu baseline"};
    app.require_subcommand(1);
    app.set_config("--config", "", "TOML-style config file (flags win)");

    SegmentOptions seg;
    CLI::App* segment = app.add_subcommand("segment", "Segment a lesion image");
    segment->add_option("input", seg.input, "input image (PNG/JPEG/PNM)")
        ->required();
    segment->add_option("--mask", seg.mask_out, "output mask path")->required();
    segment->add_option("--method", seg.method, "snake or otsu");
    segment->add_option("--channel", seg.channel, "luma, r, g, or b");
    segment->add_option("--overlay", seg.overlay_out, "overlay image path");
    segment->add_option("--dump-keypoints", seg.keypoints_out,
                        "keypoint JSON path (snake)");
    segment->add_option("--trace", seg.trace_out, "energy trace CSV path (snake)");
    segment->add_option("--octaves", seg.detector.octaves, "detector octaves");
    segment->add_option("--layers", seg.detector.layers_per_octave,
                        "layers per octave");
    segment->add_option("--base-filter", seg.detector.base_filter_size,
                        "base filter size (odd, >= 9)");
    segment->add_option("--threshold", seg.detector.response_threshold,
                        "keypoint response threshold");
    segment->add_option("--init", seg.init_name, "hull or random");
    segment->add_option("--points", seg.init.num_points, "contour points (>= 8)");
    segment->add_option("--fallback-margin", seg.init.fallback_margin,
                        "fallback rectangle margin fraction");
    segment->add_option("--seed", seg.seed, "random seed");
    segment->add_option("--alpha", seg.snake.alpha, "elastic weight");
    segment->add_option("--beta", seg.snake.beta, "bending weight");
    segment->add_option("--gamma", seg.snake.gamma, "image energy weight");
    segment->add_option("--smoothing-sigma", seg.snake.smoothing_sigma,
                        "image energy blur sigma");
    segment->add_option("--radius", seg.snake.neighborhood_radius,
                        "greedy search radius");
    segment->add_option("--iterations", seg.snake.max_iterations, "max sweeps");
    segment->add_option("--converge", seg.snake.converge_fraction,
                        "moved-fraction stop threshold");
    segment->add_option("--classes", seg.classes, "threshold classes (otsu)");
    segment->add_option("--lesion", seg.lesion_rule,
                        "lesion class: darkest, brightest, or index (otsu)");
    segment->add_option("--roi", seg.roi_text, "x,y,w,h region of interest (otsu)");

    std::string feat_image, feat_mask, feat_id, feat_out;
    CLI::App* features = app.add_subcommand("features", "Region color statistics");
    features->add_option("input", feat_image, "input image")->required();
    features->add_option("--mask", feat_mask, "lesion mask path")->required();
    features->add_option("--id", feat_id, "image id for the report");
    features->add_option("--out", feat_out, "report JSON path (default stdout)");

    std::vector<std::string> eval_pred, eval_ref;
    std::string eval_csv, eval_json;
    CLI::App* eval = app.add_subcommand("eval", "Score predictions against references");
    eval->add_option("--pred", eval_pred, "prediction mask files or directories")
        ->required();
    eval->add_option("--ref", eval_ref, "reference mask files or directories")
        ->required();
    eval->add_option("--csv", eval_csv, "output CSV path");
    eval->add_option("--json", eval_json, "output JSON path");

    std::string ov_image, ov_mask, ov_out;
    CLI::App* overlay = app.add_subcommand("overlay", "Draw a mask boundary over an image");
    overlay->add_option("input", ov_image, "input image")->required();
    overlay->add_option("--mask", ov_mask, "mask path")->required();
    overlay->add_option("--out", ov_out, "overlay output path")->required();

    SynthOptions syn;
    CLI::App* synth = app.add_subcommand("synth", "Generate synthetic lesion images");
    synth->add_option("--seed", syn.seed, "random seed");
    synth->add_option("--out", syn.image_out, "output image path");
    synth->add_option("--mask", syn.mask_out, "ground-truth mask path");
    synth->add_option("--suite", syn.suite_dir,
                      "write the 20-image benchmark suite into this directory");
    synth->add_option("--shape", syn.shape, "disk, ellipse, or blob");
    synth->add_option("--radius", syn.radius, "disk/blob radius");
    synth->add_option("--a", syn.a, "ellipse semi-axis a");
    synth->add_option("--b", syn.b, "ellipse semi-axis b");
    synth->add_option("--theta", syn.theta, "ellipse rotation (radians)");
    synth->add_option("--amplitude", syn.amplitude, "blob perturbation amplitude");
    synth->add_option("--harmonics", syn.harmonics, "blob harmonics");
    synth->add_option("--noise", syn.noise, "Gaussian noise sigma");
    synth->add_option("--softness", syn.softness, "edge blur sigma");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (app.got_subcommand(segment))
            return run_segment(seg);
        if (app.got_subcommand(features))
            return run_features(feat_image, feat_mask, feat_id, feat_out);
        if (app.got_subcommand(eval))
            return run_eval(eval_pred, eval_ref, eval_csv, eval_json);
        if (app.got_subcommand(overlay))
            return run_overlay(ov_image, ov_mask, ov_out);
        if (app.got_subcommand(synth))
            return run_synth(syn);
    } catch (const IoError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
