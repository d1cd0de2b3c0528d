#pragma once

#include <array>
#include <cstdint>

#include "bvguide/image.hpp"

namespace bvguide {

/// 256-bin histogram of a [0,255]-valued plane.
struct Histogram256 {
    std::array<std::uint64_t, 256> counts{};
    std::uint64_t total = 0;
};

struct OtsuResult {
    int threshold = 0;                  // bin index 0..255
    double between_class_variance = 0.0;
};

/// bin = floor(clamp(v, 0, 255)); v = 255 lands in bin 255. Values outside
/// [0,255] beyond 1e-6 slack raise RangeError.
Histogram256 histogram256(const PlaneF32& plane);

/// Otsu's method: the threshold t maximizing the between-class variance
/// sigma_b^2(t) = w0*w1*(mu0-mu1)^2, where class 0 is bins <= t and class 1
/// is bins > t. Splits with an empty class are excluded; ties break to the
/// smallest t. DegenerateHistogram if all mass lies in a single bin.
OtsuResult otsu_threshold(const Histogram256& hist);

/// out(p) = max(plane(p) - t, 0).
PlaneF32 subtract_clamp(const PlaneF32& plane, float t);

} // namespace bvguide
