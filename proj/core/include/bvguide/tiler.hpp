#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "bvguide/guidemap.hpp"
#include "bvguide/image.hpp"

namespace bvguide {

enum class PadPolicy {
    ReflectPad,  // edge tiles are extended to full size with reflect-101 pixels
    SkipPartial, // tiles not fully inside the source are dropped
};

struct TileSpec {
    int tile = 512;
    int stride = 512; // 1 <= stride <= tile
    PadPolicy pad = PadPolicy::ReflectPad;
};

struct TileRecord {
    std::uint32_t tile_id = 0;
    int x = 0; // tile origin in source coordinates
    int y = 0;
    int w = 0;
    int h = 0;
    std::filesystem::path source;
};

struct BatchSummary {
    std::uint64_t tiles_processed = 0;
    std::uint64_t failures = 0;
    double wall_seconds = 0.0;
    std::vector<std::string> errors; // one message per failure, in task order
};

/// Optional per-tile preview artifacts next to each GMAP.
struct BatchPreviews {
    bool png16 = false; // {stem}_{id}_guide16.png
    bool rgba = false;  // {stem}_{id}_rgba.png
};

/// Row-major grid of tiles at the given stride. With ReflectPad every tile
/// whose origin lies inside the source is emitted at full size; with
/// SkipPartial only tiles fully inside survive.
std::vector<TileRecord> plan_tiles(int width, int height, const TileSpec& spec);

/// Crop the record's rectangle, extending out-of-bounds pixels by
/// reflect-101.
RgbImage extract_tile(const RgbImage& src, const TileRecord& rec);

/// Reassemble per-tile planes into a width x height plane. Contributions
/// outside the source bounds are discarded; overlapping pixels are averaged
/// in tile order. CoverageGap if any pixel is left uncovered.
PlaneF32 stitch(const std::vector<TileRecord>& records,
                const std::vector<PlaneF32>& planes, int width, int height);

/// Tile every input, run the guide-map pipeline per tile on a pool of
/// `jobs` workers, and write one GMAP per tile plus a CSV manifest
/// (tile_id,source,x,y,w,h,t,gmap_path) to out_dir. Output bytes are
/// identical for any jobs >= 1. Per-tile errors are recorded in the summary
/// and never abort the batch.
BatchSummary run_batch(const std::vector<std::filesystem::path>& inputs,
                       const TileSpec& spec, const PipelineConfig& cfg,
                       const std::filesystem::path& out_dir, unsigned jobs,
                       const BatchPreviews& previews = {});

} // namespace bvguide
