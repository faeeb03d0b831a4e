#include "croprow/seg_metrics.hpp"

#include "croprow/error.hpp"

namespace croprow {

ConfusionCounts confusion_counts(const BinaryMask& gt, const BinaryMask& pred) {
    if (gt.width != pred.width || gt.height != pred.height) {
        throw Error(ErrorCode::DimensionMismatch, "mask sizes differ: " +
                                                      std::to_string(gt.width) + "x" +
                                                      std::to_string(gt.height) + " vs " +
                                                      std::to_string(pred.width) + "x" +
                                                      std::to_string(pred.height));
    }
    ConfusionCounts c;
    const std::size_t n = gt.bits.size();
    for (std::size_t i = 0; i < n; ++i) {
        const bool g = gt.bits[i] != 0;
        const bool p = pred.bits[i] != 0;
        if (g && p) {
            ++c.tp;
        } else if (!g && p) {
            ++c.fp;
        } else if (g && !p) {
            ++c.fn;
        } else {
            ++c.tn;
        }
    }
    return c;
}

double pixel_accuracy(const ConfusionCounts& c) {
    const std::uint64_t total = c.total();
    if (total == 0) return 1.0;
    return static_cast<double>(c.tp + c.tn) / static_cast<double>(total);
}

double pixel_accuracy(const BinaryMask& gt, const BinaryMask& pred) {
    return pixel_accuracy(confusion_counts(gt, pred));
}

double iou_white(const ConfusionCounts& c) {
    const std::uint64_t uni = c.tp + c.fp + c.fn;
    if (uni == 0) return 1.0;
    return static_cast<double>(c.tp) / static_cast<double>(uni);
}

double iou_white(const BinaryMask& gt, const BinaryMask& pred) {
    return iou_white(confusion_counts(gt, pred));
}

SegScores score_masks(const BinaryMask& gt, const BinaryMask& pred) {
    SegScores s;
    s.counts = confusion_counts(gt, pred);
    s.accuracy = pixel_accuracy(s.counts);
    s.iou = iou_white(s.counts);
    s.both_empty = (s.counts.tp + s.counts.fp + s.counts.fn) == 0;
    return s;
}

} // namespace croprow
