#include "bvguide/morphology.hpp"

#include <algorithm>

namespace bvguide {

namespace {

void validate(const StructuringElement& se) {
    if (se.size < 1 || se.size % 2 == 0)
        throw InvalidKernelSize("structuring element size must be odd and >= 1");
}

int clamp_index(int i, int n) { return std::clamp(i, 0, n - 1); }

template <typename Cmp>
PlaneF32 separable_extremum(const PlaneF32& plane, int k, Cmp better) {
    const int half = k / 2;
    const int w = plane.width, h = plane.height;

    // Square SE: row pass then column pass give the exact k x k extremum.
    PlaneF32 mid(w, h);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            float best = plane.at(clamp_index(x - half, w), y);
            for (int i = -half + 1; i <= half; ++i) {
                const float v = plane.at(clamp_index(x + i, w), y);
                if (better(v, best))
                    best = v;
            }
            mid.at(x, y) = best;
        }
    }

    PlaneF32 out(w, h);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            float best = mid.at(x, clamp_index(y - half, h));
            for (int i = -half + 1; i <= half; ++i) {
                const float v = mid.at(x, clamp_index(y + i, h));
                if (better(v, best))
                    best = v;
            }
            out.at(x, y) = best;
        }
    }
    return out;
}

} // namespace

PlaneF32 erode(const PlaneF32& plane, const StructuringElement& se) {
    validate(se);
    if (se.size == 1)
        return plane;
    return separable_extremum(plane, se.size, [](float a, float b) { return a < b; });
}

PlaneF32 dilate(const PlaneF32& plane, const StructuringElement& se) {
    validate(se);
    if (se.size == 1)
        return plane;
    return separable_extremum(plane, se.size, [](float a, float b) { return a > b; });
}

PlaneF32 open(const PlaneF32& plane, const StructuringElement& se) {
    return dilate(erode(plane, se), se);
}

PlaneF32 close(const PlaneF32& plane, const StructuringElement& se) {
    return erode(dilate(plane, se), se);
}

} // namespace bvguide
