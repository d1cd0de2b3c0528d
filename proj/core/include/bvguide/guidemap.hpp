#pragma once

#include <optional>

#include "bvguide/color.hpp"
#include "bvguide/filters.hpp"
#include "bvguide/image.hpp"
#include "bvguide/morphology.hpp"

namespace bvguide {

/// Tunables of the guide-map pipeline. Defaults reproduce the reference
/// configuration: 3x3 blur with derived sigma, 3x3 square morphology,
/// per-image Otsu threshold.
///
/// lum_scale and value_scale are the constants applied to the L and V planes
/// before the pointwise products. Any positive choice yields the same guide
/// after min-max normalization; the pair of conventions (1/255, 1) and
/// (1, 255) is kept switchable so that invariance is testable.
struct PipelineConfig {
    GaussianSpec blur{3, 0.0};
    StructuringElement morph{3};
    std::optional<int> threshold_override; // fixed bin 0..255 instead of Otsu
    bool emit_stages = false;
    float lum_scale = 1.0f / 255.0f;
    float value_scale = 1.0f;
};

/// Every intermediate of the pipeline, for inspection and testing.
struct PipelineStages {
    RgbImage blurred;      // smoothed input
    LabImage lab;          // of the blurred image
    HsvImage hsv;          // of the blurred image
    PlaneF32 a_channel;    // green-red opponent plane, [0,255]
    int threshold = -1;    // Otsu bin (or override); -1 on the degenerate path
    PlaneF32 heatmap;      // a_channel minus threshold, clamped at 0
    PlaneF32 lum_scaled;   // heatmap * (L * lum_scale)
    PlaneF32 morphed;      // after opening then closing
    PlaneF32 value_scaled; // morphed * (V * value_scale)
    PlaneF32 guide;        // min-max normalized, [0,1]
};

/// Original RGB paired with its guide map, the 4-channel model input.
struct GuidedPatch {
    RgbImage rgb;
    PlaneF32 guide;
};

struct GuideResult {
    PlaneF32 guide;
    int threshold = -1; // -1 when the histogram was degenerate
    std::optional<PipelineStages> stages;
};

/// (v - min) / (max - min); all zeros when the plane is constant.
PlaneF32 min_max_normalize(const PlaneF32& plane);

/// Pointwise product of two same-sized planes.
PlaneF32 multiply_planes(const PlaneF32& a, const PlaneF32& b);

/// Run the full pipeline: blur, convert to LAB/HSV, threshold the A channel
/// (Otsu unless overridden), subtract-clamp into a red-pixel heatmap, scale
/// by luminosity, open+close, scale by brightness, min-max normalize.
///
/// A chroma-constant input (single-bin A histogram, no override) yields an
/// all-zero guide with threshold recorded as -1 rather than an error, so
/// batch runs never abort on blank tiles. Stages are returned when
/// cfg.emit_stages is set.
GuideResult generate_guide_map(const RgbImage& img, const PipelineConfig& cfg = {});

/// Pair the original (un-blurred) RGB with its guide as channel 4.
/// Dimensions must match and the guide must lie in [0,1].
GuidedPatch assemble_guided(const RgbImage& img, const PlaneF32& guide);

} // namespace bvguide
