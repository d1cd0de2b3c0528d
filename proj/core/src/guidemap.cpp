#include "bvguide/guidemap.hpp"

#include <algorithm>
#include <cmath>

#include "bvguide/threshold.hpp"

namespace bvguide {

PlaneF32 min_max_normalize(const PlaneF32& plane) {
    float lo = plane.data[0], hi = plane.data[0];
    for (const float v : plane.data) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }

    PlaneF32 out(plane.width, plane.height);
    if (hi == lo)
        return out; // constant plane -> all zeros

    const float span = hi - lo;
    for (std::size_t i = 0; i < plane.size(); ++i)
        out.data[i] = (plane.data[i] - lo) / span;
    return out;
}

PlaneF32 multiply_planes(const PlaneF32& a, const PlaneF32& b) {
    if (!same_dims(a, b))
        throw DimensionMismatch("multiply_planes: plane dimensions differ");
    PlaneF32 out(a.width, a.height);
    for (std::size_t i = 0; i < a.size(); ++i)
        out.data[i] = a.data[i] * b.data[i];
    return out;
}

namespace {

PlaneF32 scaled(const PlaneF32& p, float factor) {
    PlaneF32 out(p.width, p.height);
    for (std::size_t i = 0; i < p.size(); ++i)
        out.data[i] = p.data[i] * factor;
    return out;
}

} // namespace

GuideResult generate_guide_map(const RgbImage& img, const PipelineConfig& cfg) {
    if (cfg.threshold_override && (*cfg.threshold_override < 0 || *cfg.threshold_override > 255))
        throw InvalidArgument("threshold_override must lie in [0,255]");
    if (cfg.lum_scale <= 0.0f || cfg.value_scale <= 0.0f)
        throw InvalidArgument("scale factors must be positive");

    RgbImage blurred = gaussian_blur_rgb(img, cfg.blur);
    LabImage lab = rgb_to_lab(blurred);
    HsvImage hsv = rgb_to_hsv(blurred);
    PlaneF32 a_channel = extract_channel(lab, Channel::A);

    int threshold = -1;
    if (cfg.threshold_override) {
        threshold = *cfg.threshold_override;
    } else {
        try {
            threshold = otsu_threshold(histogram256(a_channel)).threshold;
        } catch (const DegenerateHistogram&) {
            // No chroma evidence at all: emit a silent all-zero guide.
            GuideResult result;
            result.guide = PlaneF32(img.width, img.height);
            result.threshold = -1;
            if (cfg.emit_stages) {
                PipelineStages st;
                st.blurred = std::move(blurred);
                st.lab = std::move(lab);
                st.hsv = std::move(hsv);
                st.a_channel = std::move(a_channel);
                st.threshold = -1;
                st.heatmap = PlaneF32(img.width, img.height);
                st.lum_scaled = PlaneF32(img.width, img.height);
                st.morphed = PlaneF32(img.width, img.height);
                st.value_scaled = PlaneF32(img.width, img.height);
                st.guide = result.guide;
                result.stages = std::move(st);
            }
            return result;
        }
    }

    PlaneF32 heatmap = subtract_clamp(a_channel, static_cast<float>(threshold));
    PlaneF32 lum_scaled = multiply_planes(heatmap, scaled(lab.l, cfg.lum_scale));
    PlaneF32 morphed = close(open(lum_scaled, cfg.morph), cfg.morph);
    PlaneF32 value_scaled = multiply_planes(morphed, scaled(hsv.v, cfg.value_scale));
    PlaneF32 guide = min_max_normalize(value_scaled);

    GuideResult result;
    result.threshold = threshold;
    if (cfg.emit_stages) {
        PipelineStages st;
        st.blurred = std::move(blurred);
        st.lab = std::move(lab);
        st.hsv = std::move(hsv);
        st.a_channel = std::move(a_channel);
        st.threshold = threshold;
        st.heatmap = std::move(heatmap);
        st.lum_scaled = std::move(lum_scaled);
        st.morphed = std::move(morphed);
        st.value_scaled = std::move(value_scaled);
        st.guide = guide;
        result.stages = std::move(st);
    }
    result.guide = std::move(guide);
    return result;
}

GuidedPatch assemble_guided(const RgbImage& img, const PlaneF32& guide) {
    if (img.width != guide.width || img.height != guide.height)
        throw DimensionMismatch("assemble_guided: image and guide dimensions differ");
    for (const float v : guide.data)
        if (!(v >= 0.0f && v <= 1.0f))
            throw RangeError("assemble_guided: guide values must lie in [0,1]");
    return GuidedPatch{img, guide};
}

} // namespace bvguide
