#pragma once

#include <filesystem>

#include "bvguide/image.hpp"

namespace bvguide {

/// Decode an 8-bit PNG or baseline TIFF into an RGB raster.
///
/// Grayscale inputs are replicated to three channels and an alpha channel,
/// when present, is dropped. Palette, CMYK and non-8-bit inputs are rejected
/// with UnsupportedFormat. TIFF support covers single-plane baseline 8-bit
/// RGB/RGBA only.
RgbImage load_rgb8(const std::filesystem::path& path);

/// Write an 8-bit RGB PNG.
void save_png_rgb8(const RgbImage& img, const std::filesystem::path& path);

/// Write a 16-bit grayscale PNG; pixel = round(v * 65535), half away from
/// zero. All plane values must lie in [0,1] (RangeError otherwise).
void save_png_gray16(const PlaneF32& plane, const std::filesystem::path& path);

/// Write an 8-bit RGBA PNG whose alpha channel is round(guide * 255).
/// A lossy preview of the 4-channel training input; use GMAP for exact
/// exchange. Guide values must lie in [0,1] and dimensions must match.
void save_rgba_guided(const RgbImage& rgb, const PlaneF32& guide,
                      const std::filesystem::path& path);

/// Write a mask as an 8-bit grayscale PNG (0 / 255).
void save_mask_png(const BinaryMask& mask, const std::filesystem::path& path);

// --- GMAP: lossless float32 guide-map exchange format ----------------------
//
// byte 0..3   magic ASCII "GMAP"
// byte 4..5   version, u16 little-endian, = 1
// byte 6..7   reserved, u16 little-endian, = 0
// byte 8..11  width,  u32 little-endian
// byte 12..15 height, u32 little-endian
// then width*height IEEE-754 binary32 little-endian values, row-major,
// top-left origin.

/// Serialize a plane to the GMAP format, bit-exact.
void write_gmap(const PlaneF32& plane, const std::filesystem::path& path);

/// Exact inverse of write_gmap.
PlaneF32 read_gmap(const std::filesystem::path& path);

// --- helpers used by evaluation and the CLI --------------------------------

/// Load a float map from a GMAP file (by magic) or a PNG. 8-bit PNGs map to
/// v/255 (RGB collapses to max(r,g,b)/255), 16-bit grayscale PNGs to v/65535.
PlaneF32 load_plane(const std::filesystem::path& path);

/// Load a mask image: any nonzero pixel is true.
BinaryMask load_mask(const std::filesystem::path& path);

} // namespace bvguide
