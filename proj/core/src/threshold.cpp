#include "bvguide/threshold.hpp"

#include <algorithm>
#include <cmath>

namespace bvguide {

Histogram256 histogram256(const PlaneF32& plane) {
    Histogram256 hist;
    for (const float v : plane.data) {
        if (v < -1e-6f || v > 255.0f + 1e-6f)
            throw RangeError("histogram256: value outside [0,255]");
        const float clamped = std::clamp(v, 0.0f, 255.0f);
        const int bin = static_cast<int>(std::floor(clamped));
        hist.counts[std::min(bin, 255)] += 1;
    }
    hist.total = plane.size();
    return hist;
}

OtsuResult otsu_threshold(const Histogram256& hist) {
    const std::uint64_t total = hist.total;

    std::uint64_t weighted_total = 0;
    for (int i = 0; i < 256; ++i)
        weighted_total += static_cast<std::uint64_t>(i) * hist.counts[i];

    int best_t = -1;
    double best_var = -1.0;

    std::uint64_t cum_count = 0;
    std::uint64_t cum_weighted = 0;
    for (int t = 0; t < 256; ++t) {
        cum_count += hist.counts[t];
        cum_weighted += static_cast<std::uint64_t>(t) * hist.counts[t];

        const std::uint64_t count1 = total - cum_count;
        if (cum_count == 0 || count1 == 0)
            continue;

        const double w0 = static_cast<double>(cum_count) / static_cast<double>(total);
        const double w1 = static_cast<double>(count1) / static_cast<double>(total);
        const double mu0 = static_cast<double>(cum_weighted) / static_cast<double>(cum_count);
        const double mu1 = static_cast<double>(weighted_total - cum_weighted) /
                           static_cast<double>(count1);
        const double var = w0 * w1 * (mu0 - mu1) * (mu0 - mu1);
        if (var > best_var) {
            best_var = var;
            best_t = t;
        }
    }

    if (best_t < 0)
        throw DegenerateHistogram("all histogram mass lies in a single bin");
    return OtsuResult{best_t, best_var};
}

PlaneF32 subtract_clamp(const PlaneF32& plane, float t) {
    PlaneF32 out(plane.width, plane.height);
    for (std::size_t i = 0; i < plane.size(); ++i)
        out.data[i] = std::max(plane.data[i] - t, 0.0f);
    return out;
}

} // namespace bvguide
