#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "bvguide/errors.hpp"

namespace bvguide {

/// Interleaved 8-bit sRGB raster, row-major, top-left origin.
struct RgbImage {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> data; // r,g,b per pixel, length 3*width*height

    RgbImage() = default;

    /// Zero-filled image of the given size.
    RgbImage(int w, int h) : width(w), height(h) {
        validate_dims(w, h);
        data.assign(static_cast<std::size_t>(w) * h * 3, 0);
    }

    RgbImage(int w, int h, std::vector<std::uint8_t> pixels)
        : width(w), height(h), data(std::move(pixels)) {
        validate_dims(w, h);
        if (data.size() != static_cast<std::size_t>(w) * h * 3)
            throw InvalidArgument("RgbImage: data length must be 3*width*height");
    }

    std::size_t pixel_count() const { return static_cast<std::size_t>(width) * height; }

    std::size_t offset(int x, int y) const {
        return (static_cast<std::size_t>(y) * width + x) * 3;
    }

    std::uint8_t* pixel(int x, int y) { return data.data() + offset(x, y); }
    const std::uint8_t* pixel(int x, int y) const { return data.data() + offset(x, y); }

    bool operator==(const RgbImage&) const = default;

private:
    static void validate_dims(int w, int h) {
        if (w < 1 || h < 1)
            throw InvalidArgument("image dimensions must be >= 1");
    }
};

/// Single-channel 32-bit float raster, row-major, top-left origin.
struct PlaneF32 {
    int width = 0;
    int height = 0;
    std::vector<float> data; // length width*height

    PlaneF32() = default;

    PlaneF32(int w, int h, float fill = 0.0f) : width(w), height(h) {
        validate_dims(w, h);
        data.assign(static_cast<std::size_t>(w) * h, fill);
    }

    PlaneF32(int w, int h, std::vector<float> values)
        : width(w), height(h), data(std::move(values)) {
        validate_dims(w, h);
        if (data.size() != static_cast<std::size_t>(w) * h)
            throw InvalidArgument("PlaneF32: data length must be width*height");
    }

    std::size_t size() const { return data.size(); }

    float& at(int x, int y) { return data[static_cast<std::size_t>(y) * width + x]; }
    float at(int x, int y) const { return data[static_cast<std::size_t>(y) * width + x]; }

    bool operator==(const PlaneF32&) const = default;

private:
    static void validate_dims(int w, int h) {
        if (w < 1 || h < 1)
            throw InvalidArgument("plane dimensions must be >= 1");
    }
};

/// Boolean raster used for ground-truth and thresholded prediction masks.
struct BinaryMask {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> data; // 0 or 1 per pixel

    BinaryMask() = default;

    BinaryMask(int w, int h, bool fill = false) : width(w), height(h) {
        validate_dims(w, h);
        data.assign(static_cast<std::size_t>(w) * h, fill ? 1 : 0);
    }

    BinaryMask(int w, int h, std::vector<std::uint8_t> values)
        : width(w), height(h), data(std::move(values)) {
        validate_dims(w, h);
        if (data.size() != static_cast<std::size_t>(w) * h)
            throw InvalidArgument("BinaryMask: data length must be width*height");
    }

    std::size_t size() const { return data.size(); }

    bool at(int x, int y) const { return data[static_cast<std::size_t>(y) * width + x] != 0; }
    void set(int x, int y, bool v) { data[static_cast<std::size_t>(y) * width + x] = v ? 1 : 0; }

    bool operator==(const BinaryMask&) const = default;

private:
    static void validate_dims(int w, int h) {
        if (w < 1 || h < 1)
            throw InvalidArgument("mask dimensions must be >= 1");
    }
};

inline bool same_dims(const PlaneF32& a, const PlaneF32& b) {
    return a.width == b.width && a.height == b.height;
}

} // namespace bvguide
