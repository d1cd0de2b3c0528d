#pragma once

#include "bvguide/image.hpp"

namespace bvguide {

/// Full square k x k neighborhood, k odd.
struct StructuringElement {
    int size = 3;
};

/// Grayscale erosion: per-pixel min over the k x k neighborhood,
/// replicate border.
PlaneF32 erode(const PlaneF32& plane, const StructuringElement& se);

/// Grayscale dilation: per-pixel max over the k x k neighborhood,
/// replicate border.
PlaneF32 dilate(const PlaneF32& plane, const StructuringElement& se);

/// Opening: dilate(erode(plane)). Removes small bright objects.
PlaneF32 open(const PlaneF32& plane, const StructuringElement& se);

/// Closing: erode(dilate(plane)). Fills small dark holes.
PlaneF32 close(const PlaneF32& plane, const StructuringElement& se);

} // namespace bvguide
