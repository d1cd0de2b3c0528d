#include "bvguide/color.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace bvguide {

namespace {

// sRGB D65 reference white.
constexpr double kXn = 0.95047;
constexpr double kYn = 1.0;
constexpr double kZn = 1.08883;

// Linear sRGB -> XYZ, D65. Rows sum to the white point, so gray pixels map
// to exactly zero chroma.
constexpr double kM[3][3] = {
    {0.4124564390896922, 0.35757607764390896, 0.18043748326639894},
    {0.21267285140562253, 0.7151521552878180, 0.07217499330655958},
    {0.019333895582329317, 0.11919202588130297, 0.9503040785363677},
};

double srgb_to_linear(double c) {
    return c <= 0.04045 ? c / 12.92 : std::pow((c + 0.055) / 1.055, 2.4);
}

// 8-bit inputs only ever need 256 linearizations.
const std::array<double, 256>& linear_lut() {
    static const std::array<double, 256> lut = [] {
        std::array<double, 256> t{};
        for (int i = 0; i < 256; ++i)
            t[i] = srgb_to_linear(i / 255.0);
        return t;
    }();
    return lut;
}

// CIE f(t), delta^3 = 0.008856; 841/108 = 1/(3*delta^2).
double lab_f(double t) {
    return t > 0.008856 ? std::cbrt(t) : (841.0 / 108.0) * t + 4.0 / 29.0;
}

float clamp255(double v) {
    return static_cast<float>(std::clamp(v, 0.0, 255.0));
}

} // namespace

LabImage rgb_to_lab(const RgbImage& img) {
    LabImage out;
    out.width = img.width;
    out.height = img.height;
    out.l = PlaneF32(img.width, img.height);
    out.a = PlaneF32(img.width, img.height);
    out.b = PlaneF32(img.width, img.height);

    const std::array<double, 256>& lin = linear_lut();
    const std::size_t n = img.pixel_count();
    for (std::size_t i = 0; i < n; ++i) {
        const double r = lin[img.data[i * 3 + 0]];
        const double g = lin[img.data[i * 3 + 1]];
        const double b = lin[img.data[i * 3 + 2]];

        const double x = kM[0][0] * r + kM[0][1] * g + kM[0][2] * b;
        const double y = kM[1][0] * r + kM[1][1] * g + kM[1][2] * b;
        const double z = kM[2][0] * r + kM[2][1] * g + kM[2][2] * b;

        const double fx = lab_f(x / kXn);
        const double fy = lab_f(y / kYn);
        const double fz = lab_f(z / kZn);

        const double lstar = 116.0 * fy - 16.0;
        const double astar = 500.0 * (fx - fy);
        const double bstar = 200.0 * (fy - fz);

        out.l.data[i] = clamp255(lstar * 255.0 / 100.0);
        out.a.data[i] = clamp255(astar + 128.0);
        out.b.data[i] = clamp255(bstar + 128.0);
    }
    return out;
}

HsvImage rgb_to_hsv(const RgbImage& img) {
    HsvImage out;
    out.width = img.width;
    out.height = img.height;
    out.h = PlaneF32(img.width, img.height);
    out.s = PlaneF32(img.width, img.height);
    out.v = PlaneF32(img.width, img.height);

    const std::size_t n = img.pixel_count();
    for (std::size_t i = 0; i < n; ++i) {
        const std::uint8_t rb = img.data[i * 3 + 0];
        const std::uint8_t gb = img.data[i * 3 + 1];
        const std::uint8_t bb = img.data[i * 3 + 2];
        const std::uint8_t maxb = std::max({rb, gb, bb});
        const std::uint8_t minb = std::min({rb, gb, bb});

        const double v = maxb / 255.0;
        const double c = (maxb - minb) / 255.0;

        double h = 0.0;
        double s = 0.0;
        if (maxb > 0 && c > 0.0) {
            s = c / v;
            const double r = rb / 255.0, g = gb / 255.0, b = bb / 255.0;
            if (maxb == rb) {
                h = (g - b) / c;
                if (gb < bb)
                    h += 6.0;
            } else if (maxb == gb) {
                h = 2.0 + (b - r) / c;
            } else {
                h = 4.0 + (r - g) / c;
            }
            h *= 60.0;
        }

        out.h.data[i] = static_cast<float>(h);
        out.s.data[i] = static_cast<float>(s);
        out.v.data[i] = static_cast<float>(v);
    }
    return out;
}

PlaneF32 extract_channel(const LabImage& img, Channel channel) {
    switch (channel) {
    case Channel::L: return img.l;
    case Channel::A: return img.a;
    case Channel::B: return img.b;
    default:
        throw ChannelMismatch("requested HSV channel from a LAB image");
    }
}

PlaneF32 extract_channel(const HsvImage& img, Channel channel) {
    switch (channel) {
    case Channel::H: return img.h;
    case Channel::S: return img.s;
    case Channel::V: return img.v;
    default:
        throw ChannelMismatch("requested LAB channel from an HSV image");
    }
}

} // namespace bvguide
