#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "bvguide/guidemap.hpp"
#include "bvguide/imgio.hpp"
#include "bvguide/metrics.hpp"
#include "bvguide/synth.hpp"
#include "bvguide/tiler.hpp"

namespace fs = std::filesystem;
using namespace bvguide;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;   // usage or input error
constexpr int kExitPartial = 3; // batch completed with failures

struct PipelineFlags {
    int blur_kernel = 3;
    double sigma = 0.0;
    int morph_kernel = 3;
    int threshold_override = -1; // <0 means unset

    PipelineConfig to_config() const {
        PipelineConfig cfg;
        cfg.blur = GaussianSpec{blur_kernel, sigma};
        cfg.morph = StructuringElement{morph_kernel};
        if (threshold_override >= 0)
            cfg.threshold_override = threshold_override;
        return cfg;
    }
};

void add_pipeline_flags(CLI::App* cmd, PipelineFlags& flags) {
    cmd->add_option("--blur-kernel", flags.blur_kernel, "Gaussian kernel size (odd)")
        ->capture_default_str();
    cmd->add_option("--sigma", flags.sigma, "Gaussian sigma; 0 derives it from the kernel")
        ->capture_default_str();
    cmd->add_option("--morph-kernel", flags.morph_kernel, "Square structuring element size (odd)")
        ->capture_default_str();
    cmd->add_option("--threshold-override", flags.threshold_override,
                    "Fixed A-channel threshold 0..255 instead of per-image Otsu")
        ->check(CLI::Range(0, 255));
}

bool has_image_extension(const fs::path& p) {
    std::string ext = p.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return ext == ".png" || ext == ".tif" || ext == ".tiff";
}

std::vector<fs::path> list_images(const fs::path& dir) {
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir))
        if (entry.is_regular_file() && has_image_extension(entry.path()))
            files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    return files;
}

std::vector<float> parse_sweep(const std::string& text) {
    double lo = 0, hi = 0, step = 0;
    if (std::sscanf(text.c_str(), "%lf:%lf:%lf", &lo, &hi, &step) != 3 || step <= 0 || hi < lo)
        throw InvalidArgument("--sweep expects A:B:STEP with STEP > 0 and B >= A");
    const int count = static_cast<int>(std::floor((hi - lo) / step + 1e-9)) + 1;
    std::vector<float> thresholds;
    thresholds.reserve(count);
    for (int i = 0; i < count; ++i)
        thresholds.push_back(static_cast<float>(lo + i * step));
    return thresholds;
}

void dump_stages(const PipelineStages& st, const fs::path& dir) {
    fs::create_directories(dir);
    auto norm16 = [&](const PlaneF32& p, const char* name) {
        save_png_gray16(min_max_normalize(p), dir / name);
    };
    save_png_rgb8(st.blurred, dir / "01_blur.png");
    // The A channel has a fixed [0,255] scale; later stages are normalized
    // previews of unbounded intermediates.
    PlaneF32 a_scaled(st.a_channel.width, st.a_channel.height);
    for (std::size_t i = 0; i < a_scaled.size(); ++i)
        a_scaled.data[i] = st.a_channel.data[i] / 255.0f;
    save_png_gray16(a_scaled, dir / "02_a_channel.png");
    norm16(st.heatmap, "03_heatmap.png");
    norm16(st.lum_scaled, "04_lum_scaled.png");
    norm16(st.morphed, "05_morph.png");
    norm16(st.value_scaled, "06_value_scaled.png");
    save_png_gray16(st.guide, dir / "07_guide.png");
}

// --- guide -------------------------------------------------------------------

struct GuideOptions {
    std::string input;
    std::string out_dir = ".";
    PipelineFlags pipeline;
    std::string stages_dir;
    bool png16 = false;
    bool rgba = false;
};

int run_guide(const GuideOptions& opt) {
    const fs::path input(opt.input);
    const fs::path out_dir(opt.out_dir);
    fs::create_directories(out_dir);

    PipelineConfig cfg = opt.pipeline.to_config();
    cfg.emit_stages = !opt.stages_dir.empty();

    const RgbImage img = load_rgb8(input);
    const GuideResult result = generate_guide_map(img, cfg);

    const std::string stem = input.stem().string();
    write_gmap(result.guide, out_dir / (stem + ".gmap"));
    if (opt.png16)
        save_png_gray16(result.guide, out_dir / (stem + "_guide16.png"));
    if (opt.rgba)
        save_rgba_guided(img, result.guide, out_dir / (stem + "_rgba.png"));
    if (cfg.emit_stages && result.stages)
        dump_stages(*result.stages, fs::path(opt.stages_dir));

    float lo = result.guide.data[0], hi = result.guide.data[0];
    for (const float v : result.guide.data) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    std::printf("t=%d min=%.4f max=%.4f\n", result.threshold, lo, hi);
    return kExitOk;
}

// --- batch -------------------------------------------------------------------

struct BatchOptions {
    std::string input_dir;
    std::string out_dir = ".";
    PipelineFlags pipeline;
    int tile = 512;
    int stride = -1; // defaults to tile
    std::string pad = "reflect";
    unsigned jobs = 0; // 0 -> hardware concurrency
    bool png16 = false;
    bool rgba = false;
};

int run_batch_cmd(const BatchOptions& opt) {
    const std::vector<fs::path> inputs = list_images(opt.input_dir);
    if (inputs.empty()) {
        std::fprintf(stderr, "batch: no .png/.tif/.tiff images in %s\n", opt.input_dir.c_str());
        return kExitUsage;
    }

    TileSpec spec;
    spec.tile = opt.tile;
    spec.stride = opt.stride > 0 ? opt.stride : opt.tile;
    if (opt.pad == "reflect")
        spec.pad = PadPolicy::ReflectPad;
    else if (opt.pad == "skip")
        spec.pad = PadPolicy::SkipPartial;
    else {
        std::fprintf(stderr, "batch: --pad-policy must be 'reflect' or 'skip'\n");
        return kExitUsage;
    }

    unsigned jobs = opt.jobs;
    if (jobs == 0)
        jobs = std::max(1u, std::thread::hardware_concurrency());

    const BatchSummary summary = run_batch(inputs, spec, opt.pipeline.to_config(),
                                           fs::path(opt.out_dir), jobs,
                                           BatchPreviews{opt.png16, opt.rgba});

    for (const std::string& err : summary.errors)
        std::fprintf(stderr, "batch: %s\n", err.c_str());
    std::printf("tiles=%llu failures=%llu wall=%.4f\n",
                static_cast<unsigned long long>(summary.tiles_processed),
                static_cast<unsigned long long>(summary.failures), summary.wall_seconds);
    return summary.failures == 0 ? kExitOk : kExitPartial;
}

// --- eval --------------------------------------------------------------------

struct EvalOptions {
    std::string pred;
    std::string truth;
    float threshold = 0.5f;
    std::string sweep_spec;
};

std::map<std::string, fs::path> stems_of(const fs::path& dir) {
    std::map<std::string, fs::path> by_stem;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (!entry.is_regular_file())
            continue;
        const fs::path p = entry.path();
        std::string ext = p.extension().string();
        std::transform(ext.begin(), ext.end(), ext.begin(),
                       [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
        if (ext == ".gmap" || has_image_extension(p))
            by_stem.emplace(p.stem().string(), p);
    }
    return by_stem;
}

int run_eval(const EvalOptions& opt) {
    const fs::path pred_path(opt.pred);
    const fs::path truth_path(opt.truth);

    if (fs::is_directory(pred_path) != fs::is_directory(truth_path)) {
        std::fprintf(stderr, "eval: --pred and --truth must both be files or both directories\n");
        return kExitUsage;
    }

    if (!fs::is_directory(pred_path)) {
        const PlaneF32 plane = load_plane(pred_path);
        const BinaryMask truth = load_mask(truth_path);
        if (!opt.sweep_spec.empty()) {
            for (const auto& [thr, report] : sweep(plane, truth, parse_sweep(opt.sweep_spec)))
                std::printf("thr=%.4f dsc=%.4f iou=%.4f\n", thr, report.dsc, report.iou);
        } else {
            const MetricReport report = evaluate(binarize(plane, opt.threshold), truth);
            std::printf("dsc=%.4f iou=%.4f\n", report.dsc, report.iou);
        }
        return kExitOk;
    }

    if (!opt.sweep_spec.empty()) {
        std::fprintf(stderr, "eval: --sweep is supported for single files only\n");
        return kExitUsage;
    }

    const auto preds = stems_of(pred_path);
    const auto truths = stems_of(truth_path);
    if (preds.empty()) {
        std::fprintf(stderr, "eval: no maps found in %s\n", opt.pred.c_str());
        return kExitUsage;
    }

    ConfusionCounts pooled;
    double dsc_sum = 0, iou_sum = 0;
    std::size_t pairs = 0;
    for (const auto& [stem, path] : preds) {
        const auto match = truths.find(stem);
        if (match == truths.end()) {
            std::fprintf(stderr, "eval: no ground truth for %s\n", stem.c_str());
            return kExitUsage;
        }
        const PlaneF32 plane = load_plane(path);
        const BinaryMask truth = load_mask(match->second);
        const ConfusionCounts c = confusion(binarize(plane, opt.threshold), truth);
        pooled.tp += c.tp;
        pooled.fp += c.fp;
        pooled.fn += c.fn;
        pooled.tn += c.tn;
        dsc_sum += dsc(c);
        iou_sum += iou(c);
        ++pairs;
    }

    std::printf("scope=micro dsc=%.4f iou=%.4f\n", dsc(pooled), iou(pooled));
    std::printf("scope=macro dsc=%.4f iou=%.4f\n", dsc_sum / pairs, iou_sum / pairs);
    return kExitOk;
}

// --- synth -------------------------------------------------------------------

struct SynthOptions {
    std::string out_dir = ".";
    PhantomSpec spec;
};

int run_synth(const SynthOptions& opt) {
    const fs::path out_dir(opt.out_dir);
    fs::create_directories(out_dir);
    const auto [img, mask] = generate_phantom(opt.spec);
    save_png_rgb8(img, out_dir / "phantom.png");
    save_mask_png(mask, out_dir / "mask.png");
    std::printf("phantom=%s mask=%s\n", (out_dir / "phantom.png").string().c_str(),
                (out_dir / "mask.png").string().c_str());
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"guiding-map toolkit: vessel-emphasis maps, tiled batching, "
                 "evaluation and synthetic phantoms for H&E histology"};
    app.require_subcommand(1);

    GuideOptions guide_opt;
    CLI::App* guide_cmd = app.add_subcommand("guide", "Generate a guide map for one image");
    guide_cmd->add_option("input", guide_opt.input, "Input PNG or baseline TIFF")->required();
    guide_cmd->add_option("-o,--out", guide_opt.out_dir, "Output directory")
        ->capture_default_str();
    add_pipeline_flags(guide_cmd, guide_opt.pipeline);
    guide_cmd->add_option("--dump-stages", guide_opt.stages_dir,
                          "Write every pipeline stage as PNG into this directory");
    guide_cmd->add_flag("--png16", guide_opt.png16, "Also write a 16-bit grayscale preview");
    guide_cmd->add_flag("--rgba", guide_opt.rgba, "Also write an RGBA preview (alpha = guide)");

    BatchOptions batch_opt;
    CLI::App* batch_cmd =
        app.add_subcommand("batch", "Tile a directory of images and emit per-tile GMAPs");
    batch_cmd->add_option("input_dir", batch_opt.input_dir, "Directory of input images")
        ->required();
    batch_cmd->add_option("-o,--out", batch_opt.out_dir, "Output directory")
        ->capture_default_str();
    add_pipeline_flags(batch_cmd, batch_opt.pipeline);
    batch_cmd->add_option("--tile", batch_opt.tile, "Tile size in pixels")->capture_default_str();
    batch_cmd->add_option("--stride", batch_opt.stride, "Tile stride (defaults to tile size)");
    batch_cmd->add_option("--pad-policy", batch_opt.pad, "Edge handling: reflect | skip")
        ->capture_default_str();
    batch_cmd->add_option("--jobs", batch_opt.jobs, "Worker threads (0 = all cores)");
    batch_cmd->add_flag("--png16", batch_opt.png16, "Also write 16-bit grayscale tile previews");
    batch_cmd->add_flag("--rgba", batch_opt.rgba, "Also write RGBA tile previews");

    EvalOptions eval_opt;
    CLI::App* eval_cmd =
        app.add_subcommand("eval", "Score prediction maps against ground-truth masks");
    eval_cmd->add_option("--pred", eval_opt.pred, "Prediction map/mask (GMAP or PNG), or directory")
        ->required();
    eval_cmd->add_option("--truth", eval_opt.truth, "Ground-truth mask image, or directory")
        ->required();
    eval_cmd->add_option("--threshold", eval_opt.threshold, "Binarization threshold")
        ->capture_default_str();
    eval_cmd->add_option("--sweep", eval_opt.sweep_spec, "Threshold sweep A:B:STEP");

    SynthOptions synth_opt;
    CLI::App* synth_cmd =
        app.add_subcommand("synth", "Generate a phantom image with a known vessel mask");
    synth_cmd->add_option("-o,--out", synth_opt.out_dir, "Output directory")
        ->capture_default_str();
    synth_cmd->add_option("--seed", synth_opt.spec.seed, "RNG seed")->capture_default_str();
    synth_cmd->add_option("--blobs", synth_opt.spec.n_blobs, "Number of vessel blobs")
        ->capture_default_str();
    synth_cmd->add_option("--width", synth_opt.spec.width, "Image width")->capture_default_str();
    synth_cmd->add_option("--height", synth_opt.spec.height, "Image height")
        ->capture_default_str();
    synth_cmd->add_option("--radius-min", synth_opt.spec.radius_min, "Minimum blob radius")
        ->capture_default_str();
    synth_cmd->add_option("--radius-max", synth_opt.spec.radius_max, "Maximum blob radius")
        ->capture_default_str();
    synth_cmd->add_option("--noise-sigma", synth_opt.spec.noise_sigma,
                          "Gaussian pixel noise sigma")
        ->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (*guide_cmd)
            return run_guide(guide_opt);
        if (*batch_cmd)
            return run_batch_cmd(batch_opt);
        if (*eval_cmd)
            return run_eval(eval_opt);
        if (*synth_cmd)
            return run_synth(synth_opt);
    } catch (const Error& e) {
        std::fprintf(stderr, "%s: %s\n", argv[0], e.what());
        return kExitUsage;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "%s: unexpected error: %s\n", argv[0], e.what());
        return kExitUsage;
    }
    return kExitUsage;
}
