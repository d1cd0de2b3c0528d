#pragma once

#include "bvguide/image.hpp"

namespace bvguide {

/// CIELAB image in the 8-bit-offset convention: l = L* * 255/100,
/// a = a* + 128, b = b* + 128, all clamped to [0,255]. The offset puts the
/// green-red axis on the same scale as the 256-bin histogram used for
/// thresholding.
struct LabImage {
    int width = 0;
    int height = 0;
    PlaneF32 l;
    PlaneF32 a;
    PlaneF32 b;
};

/// HSV image: h in degrees [0,360), s in [0,1], v in [0,1].
struct HsvImage {
    int width = 0;
    int height = 0;
    PlaneF32 h;
    PlaneF32 s;
    PlaneF32 v;
};

enum class Channel { L, A, B, H, S, V };

/// sRGB -> CIELAB, D65 illuminant (Xn=0.95047, Yn=1.0, Zn=1.08883), standard
/// piecewise gamma (threshold 0.04045) and piecewise cube-root f(t) with
/// delta^3 = 0.008856.
LabImage rgb_to_lab(const RgbImage& img);

/// sRGB -> HSV, hexcone model on /255-normalized pixels. v = max(r,g,b),
/// s = (v - min)/v for v > 0 else 0, h by the usual sector formula.
/// Achromatic pixels get h = 0.
HsvImage rgb_to_hsv(const RgbImage& img);

/// Copy of the named plane; ChannelMismatch if the channel does not belong
/// to the image's color space.
PlaneF32 extract_channel(const LabImage& img, Channel channel);
PlaneF32 extract_channel(const HsvImage& img, Channel channel);

} // namespace bvguide
