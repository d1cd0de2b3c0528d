#include "bvguide/tiler.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <thread>

#include "bvguide/imgio.hpp"

namespace bvguide {

namespace {

namespace fs = std::filesystem;

void validate(const TileSpec& spec) {
    if (spec.tile < 1)
        throw InvalidArgument("tile size must be >= 1");
    if (spec.stride < 1 || spec.stride > spec.tile)
        throw InvalidArgument("stride must satisfy 1 <= stride <= tile");
}

int reflect101(int i, int n) {
    if (n == 1)
        return 0;
    const int period = 2 * (n - 1);
    i = std::abs(i) % period;
    return i < n ? i : period - i;
}

std::string tile_stem(const fs::path& source, std::uint32_t tile_id) {
    char suffix[8];
    std::snprintf(suffix, sizeof suffix, "_%06u", tile_id);
    return source.stem().string() + suffix;
}

} // namespace

std::vector<TileRecord> plan_tiles(int width, int height, const TileSpec& spec) {
    validate(spec);
    if (width < 1 || height < 1)
        throw InvalidArgument("plan_tiles: dimensions must be >= 1");

    std::vector<TileRecord> records;
    std::uint32_t id = 0;
    if (spec.pad == PadPolicy::SkipPartial) {
        for (int y = 0; y + spec.tile <= height; y += spec.stride)
            for (int x = 0; x + spec.tile <= width; x += spec.stride)
                records.push_back({id++, x, y, spec.tile, spec.tile, {}});
    } else {
        for (int y = 0; y < height; y += spec.stride)
            for (int x = 0; x < width; x += spec.stride)
                records.push_back({id++, x, y, spec.tile, spec.tile, {}});
    }
    return records;
}

RgbImage extract_tile(const RgbImage& src, const TileRecord& rec) {
    if (rec.w < 1 || rec.h < 1)
        throw InvalidArgument("extract_tile: empty tile rectangle");

    RgbImage out(rec.w, rec.h);
    for (int ty = 0; ty < rec.h; ++ty) {
        const int sy = reflect101(rec.y + ty, src.height);
        for (int tx = 0; tx < rec.w; ++tx) {
            const int sx = reflect101(rec.x + tx, src.width);
            const std::uint8_t* s = src.pixel(sx, sy);
            std::uint8_t* d = out.pixel(tx, ty);
            d[0] = s[0];
            d[1] = s[1];
            d[2] = s[2];
        }
    }
    return out;
}

PlaneF32 stitch(const std::vector<TileRecord>& records,
                const std::vector<PlaneF32>& planes, int width, int height) {
    if (records.size() != planes.size())
        throw InvalidArgument("stitch: records and planes differ in length");
    if (width < 1 || height < 1)
        throw InvalidArgument("stitch: dimensions must be >= 1");

    std::vector<double> sum(static_cast<std::size_t>(width) * height, 0.0);
    std::vector<std::uint32_t> hits(sum.size(), 0);

    for (std::size_t i = 0; i < records.size(); ++i) {
        const TileRecord& rec = records[i];
        const PlaneF32& plane = planes[i];
        if (plane.width != rec.w || plane.height != rec.h)
            throw DimensionMismatch("stitch: plane does not match its tile record");

        const int x0 = std::max(rec.x, 0);
        const int y0 = std::max(rec.y, 0);
        const int x1 = std::min(rec.x + rec.w, width);
        const int y1 = std::min(rec.y + rec.h, height);
        for (int y = y0; y < y1; ++y) {
            for (int x = x0; x < x1; ++x) {
                const std::size_t dst = static_cast<std::size_t>(y) * width + x;
                sum[dst] += plane.at(x - rec.x, y - rec.y);
                hits[dst] += 1;
            }
        }
    }

    PlaneF32 out(width, height);
    for (std::size_t i = 0; i < sum.size(); ++i) {
        if (hits[i] == 0)
            throw CoverageGap("stitch: uncovered pixel at index " + std::to_string(i));
        out.data[i] = static_cast<float>(sum[i] / hits[i]);
    }
    return out;
}

BatchSummary run_batch(const std::vector<fs::path>& inputs, const TileSpec& spec,
                       const PipelineConfig& cfg, const fs::path& out_dir, unsigned jobs,
                       const BatchPreviews& previews) {
    validate(spec);
    const auto started = std::chrono::steady_clock::now();

    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec)
        throw IoError("cannot create output directory " + out_dir.string());

    BatchSummary summary;

    // Decode inputs up front; a file that fails to load is one failure and
    // contributes no tiles.
    struct LoadedInput {
        fs::path path;
        RgbImage image;
    };
    std::vector<LoadedInput> loaded;
    for (const fs::path& input : inputs) {
        try {
            loaded.push_back({input, load_rgb8(input)});
        } catch (const std::exception& e) {
            summary.failures += 1;
            summary.errors.push_back(input.string() + ": " + e.what());
        }
    }

    struct Task {
        std::size_t input_index;
        TileRecord record;
    };
    std::vector<Task> tasks;
    for (std::size_t i = 0; i < loaded.size(); ++i) {
        for (TileRecord rec : plan_tiles(loaded[i].image.width, loaded[i].image.height, spec)) {
            rec.source = loaded[i].path;
            tasks.push_back({i, std::move(rec)});
        }
    }

    struct TaskResult {
        bool ok = false;
        int threshold = -1;
        std::string gmap_name;
        std::string error;
    };
    std::vector<TaskResult> results(tasks.size());

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= tasks.size())
                return;
            const Task& task = tasks[i];
            TaskResult& res = results[i];
            try {
                const RgbImage tile = extract_tile(loaded[task.input_index].image, task.record);
                const GuideResult guide = generate_guide_map(tile, cfg);
                const std::string stem = tile_stem(task.record.source, task.record.tile_id);
                res.gmap_name = stem + ".gmap";
                write_gmap(guide.guide, out_dir / res.gmap_name);
                if (previews.png16)
                    save_png_gray16(guide.guide, out_dir / (stem + "_guide16.png"));
                if (previews.rgba)
                    save_rgba_guided(tile, guide.guide, out_dir / (stem + "_rgba.png"));
                res.threshold = guide.threshold;
                res.ok = true;
            } catch (const std::exception& e) {
                res.error = task.record.source.string() + " tile " +
                            std::to_string(task.record.tile_id) + ": " + e.what();
            }
        }
    };

    const unsigned n_workers =
        std::max(1u, std::min<unsigned>(jobs, tasks.empty() ? 1u : static_cast<unsigned>(tasks.size())));
    std::vector<std::thread> pool;
    pool.reserve(n_workers);
    for (unsigned i = 0; i < n_workers; ++i)
        pool.emplace_back(worker);
    for (std::thread& t : pool)
        t.join();

    // Manifest rows in task order: byte-identical output for any worker count.
    std::ofstream manifest(out_dir / "manifest.csv", std::ios::binary | std::ios::trunc);
    if (!manifest)
        throw IoError("cannot create manifest in " + out_dir.string());
    manifest << "tile_id,source,x,y,w,h,t,gmap_path\n";
    for (std::size_t i = 0; i < tasks.size(); ++i) {
        const TaskResult& res = results[i];
        if (!res.ok) {
            summary.failures += 1;
            summary.errors.push_back(res.error);
            continue;
        }
        const TileRecord& rec = tasks[i].record;
        manifest << rec.tile_id << ',' << rec.source.string() << ',' << rec.x << ','
                 << rec.y << ',' << rec.w << ',' << rec.h << ',' << res.threshold << ','
                 << res.gmap_name << '\n';
        summary.tiles_processed += 1;
    }
    manifest.flush();
    if (!manifest)
        throw IoError("manifest write failed in " + out_dir.string());

    summary.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    return summary;
}

} // namespace bvguide
