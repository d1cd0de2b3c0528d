#include "bvguide/metrics.hpp"

#include <algorithm>

namespace bvguide {

ConfusionCounts confusion(const BinaryMask& pred, const BinaryMask& truth) {
    if (pred.width != truth.width || pred.height != truth.height)
        throw DimensionMismatch("confusion: mask dimensions differ");

    ConfusionCounts c;
    for (std::size_t i = 0; i < pred.size(); ++i) {
        const bool p = pred.data[i] != 0;
        const bool t = truth.data[i] != 0;
        if (p && t)
            ++c.tp;
        else if (p && !t)
            ++c.fp;
        else if (!p && t)
            ++c.fn;
        else
            ++c.tn;
    }
    return c;
}

double dsc(const ConfusionCounts& counts) {
    const std::uint64_t denom = 2 * counts.tp + counts.fp + counts.fn;
    if (denom == 0)
        return 1.0; // both masks empty: perfect agreement
    return 2.0 * static_cast<double>(counts.tp) / static_cast<double>(denom);
}

double iou(const ConfusionCounts& counts) {
    const std::uint64_t denom = counts.tp + counts.fp + counts.fn;
    if (denom == 0)
        return 1.0;
    return static_cast<double>(counts.tp) / static_cast<double>(denom);
}

BinaryMask binarize(const PlaneF32& plane, float thr) {
    BinaryMask mask(plane.width, plane.height);
    for (std::size_t i = 0; i < plane.size(); ++i)
        mask.data[i] = plane.data[i] > thr ? 1 : 0;
    return mask;
}

MetricReport evaluate(const BinaryMask& pred, const BinaryMask& truth) {
    const ConfusionCounts c = confusion(pred, truth);
    return MetricReport{dsc(c), iou(c), c};
}

std::vector<std::pair<float, MetricReport>>
sweep(const PlaneF32& plane, const BinaryMask& truth, const std::vector<float>& thresholds) {
    if (plane.width != truth.width || plane.height != truth.height)
        throw DimensionMismatch("sweep: plane and mask dimensions differ");
    if (!std::is_sorted(thresholds.begin(), thresholds.end()))
        throw InvalidArgument("sweep: thresholds must be sorted ascending");

    std::vector<std::pair<float, MetricReport>> reports;
    reports.reserve(thresholds.size());
    for (const float thr : thresholds)
        reports.emplace_back(thr, evaluate(binarize(plane, thr), truth));
    return reports;
}

} // namespace bvguide
