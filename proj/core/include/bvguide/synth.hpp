#pragma once

#include <array>
#include <cstdint>
#include <utility>

#include "bvguide/image.hpp"

namespace bvguide {

/// Synthetic H&E-like phantom: red elliptical blobs on a pink background,
/// with a known ground-truth mask. Default colors put the blobs far from the
/// background along the green-red opponent axis, which is the contrast the
/// guide-map pipeline exploits.
struct PhantomSpec {
    int width = 512;
    int height = 512;
    unsigned n_blobs = 8;
    int radius_min = 10; // pixels, >= 1
    int radius_max = 28; // must fit within the image
    std::array<std::uint8_t, 3> blob_color{180, 30, 40};        // erythrocyte red
    std::array<std::uint8_t, 3> background_color{235, 200, 220}; // eosin pink
    double noise_sigma = 5.0;
    std::uint32_t seed = 0;
};

/// Deterministic given the spec. Blobs are non-overlapping filled ellipses;
/// the mask is true exactly on blob pixels. Gaussian pixel noise (clamped to
/// bytes) is added from a pinned generator: std::mt19937 seeded with
/// spec.seed, modulo-bounded integer draws for geometry, then Box-Muller
/// normals consumed per pixel in row-major order, channels r,g,b.
/// PlacementFailure if a non-overlapping placement cannot be found within
/// 1000 attempts for some blob.
std::pair<RgbImage, BinaryMask> generate_phantom(const PhantomSpec& spec);

} // namespace bvguide
