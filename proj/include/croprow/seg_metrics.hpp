#pragma once

#include <cstdint>

#include "croprow/image.hpp"

namespace croprow {

/// Pixel confusion counts with white as the positive class; gt is the
/// reference, pred the candidate.
struct ConfusionCounts {
    std::uint64_t tp = 0;
    std::uint64_t fp = 0;
    std::uint64_t fn = 0;
    std::uint64_t tn = 0;

    std::uint64_t total() const { return tp + fp + fn + tn; }
};

struct SegScores {
    double accuracy = 0.0;
    double iou = 0.0;
    ConfusionCounts counts;
    bool both_empty = false; // neither mask had a white pixel; iou fixed at 1
};

ConfusionCounts confusion_counts(const BinaryMask& gt, const BinaryMask& pred);

/// (tp + tn) / total.
double pixel_accuracy(const ConfusionCounts& c);
double pixel_accuracy(const BinaryMask& gt, const BinaryMask& pred);

/// tp / (tp + fp + fn); an empty union scores 1.
double iou_white(const ConfusionCounts& c);
double iou_white(const BinaryMask& gt, const BinaryMask& pred);

SegScores score_masks(const BinaryMask& gt, const BinaryMask& pred);

} // namespace croprow
