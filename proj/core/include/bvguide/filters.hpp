#pragma once

#include <vector>

#include "bvguide/image.hpp"

namespace bvguide {

/// 1-D Gaussian kernel parameters. sigma = 0 means "derive from kernel_size":
/// k = 3 maps to the fixed binomial kernel [0.25, 0.5, 0.25], otherwise
/// sigma = 0.3*((k-1)/2 - 1) + 0.8.
struct GaussianSpec {
    int kernel_size = 3; // odd, >= 1
    double sigma = 0.0;  // >= 0
};

/// Normalized 1-D kernel of length kernel_size (sums to 1 within 1e-9).
std::vector<double> gaussian_kernel(const GaussianSpec& spec);

/// Separable Gaussian blur of an 8-bit RGB image: each channel is convolved
/// horizontally then vertically, borders handled by reflect-101 (mirror
/// without repeating the edge pixel). Intermediate math in float, result
/// rounded half away from zero back to 8-bit.
RgbImage gaussian_blur_rgb(const RgbImage& img, const GaussianSpec& spec);

} // namespace bvguide
