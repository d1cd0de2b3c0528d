#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "bvguide/image.hpp"

namespace bvguide {

struct ConfusionCounts {
    std::uint64_t tp = 0;
    std::uint64_t fp = 0;
    std::uint64_t fn = 0;
    std::uint64_t tn = 0;
};

struct MetricReport {
    double dsc = 0.0;
    double iou = 0.0;
    ConfusionCounts counts;
};

/// Per-pixel tally of pred against truth (dimensions must match).
ConfusionCounts confusion(const BinaryMask& pred, const BinaryMask& truth);

/// Dice similarity coefficient 2*tp / (2*tp + fp + fn);
/// 1.0 when both masks are empty.
double dsc(const ConfusionCounts& counts);

/// Intersection over union tp / (tp + fp + fn); 1.0 when both masks are empty.
double iou(const ConfusionCounts& counts);

/// mask(p) = plane(p) > thr (strict).
BinaryMask binarize(const PlaneF32& plane, float thr);

/// One report per threshold; thresholds must be sorted ascending.
std::vector<std::pair<float, MetricReport>>
sweep(const PlaneF32& plane, const BinaryMask& truth, const std::vector<float>& thresholds);

/// Convenience: full report for one prediction mask.
MetricReport evaluate(const BinaryMask& pred, const BinaryMask& truth);

} // namespace bvguide
