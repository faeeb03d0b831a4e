#include "croprow/angle_metric.hpp"

#include <algorithm>
#include <cmath>

#include "croprow/cluster.hpp"
#include "croprow/error.hpp"

namespace croprow {

namespace {

/// Angular extent of a cluster: members are unwrapped to the representative
/// nearest the cluster's circular mean, then measured max - min. Valid while
/// the cluster diameter stays below a half turn.
double cluster_span(const std::vector<RowAngle>& members) {
    const double mean = circular_mean(members);
    double lo = 0.0;
    double hi = 0.0;
    bool first = true;
    for (const RowAngle& m : members) {
        double d = std::fmod(m.degrees - mean, 180.0);
        if (d > 90.0) d -= 180.0;
        if (d <= -90.0) d += 180.0;
        if (first) {
            lo = hi = d;
            first = false;
        } else {
            lo = std::min(lo, d);
            hi = std::max(hi, d);
        }
    }
    return hi - lo;
}

} // namespace

AngleErrorResult pair_and_score(const std::vector<RowAngle>& gt,
                                const std::vector<RowAngle>& pred,
                                double eps2,
                                int min_pts) {
    std::vector<TaggedAngle> tagged;
    tagged.reserve(gt.size() + pred.size());
    for (const RowAngle& a : gt) tagged.push_back({a, AngleOrigin::GroundTruth});
    for (const RowAngle& a : pred) tagged.push_back({a, AngleOrigin::Prediction});

    std::vector<RowAngle> values;
    values.reserve(tagged.size());
    for (const TaggedAngle& t : tagged) values.push_back(t.angle);

    const ClusterLabeling labeling = dbscan_circular(values, eps2, min_pts);

    std::vector<std::vector<RowAngle>> members(static_cast<std::size_t>(labeling.cluster_count));
    std::vector<int> gt_count(static_cast<std::size_t>(labeling.cluster_count), 0);
    std::vector<int> pred_count(static_cast<std::size_t>(labeling.cluster_count), 0);
    AngleErrorResult result;
    for (std::size_t i = 0; i < tagged.size(); ++i) {
        const int label = labeling.labels[i];
        if (label == kNoise) {
            // min_pts > 1 can leave isolated angles unclustered; count them
            // as unmatched just like singleton clusters.
            if (tagged[i].origin == AngleOrigin::GroundTruth) {
                ++result.unmatched_gt;
            } else {
                ++result.unmatched_pred;
            }
            continue;
        }
        members[static_cast<std::size_t>(label)].push_back(tagged[i].angle);
        if (tagged[i].origin == AngleOrigin::GroundTruth) {
            ++gt_count[static_cast<std::size_t>(label)];
        } else {
            ++pred_count[static_cast<std::size_t>(label)];
        }
    }

    double total = 0.0;
    for (int c = 0; c < labeling.cluster_count; ++c) {
        const auto& cluster = members[static_cast<std::size_t>(c)];
        if (cluster.size() >= 2) {
            ++result.k;
            const double span = cluster_span(cluster);
            result.cluster_spans.push_back(span);
            total += span;
            if (gt_count[static_cast<std::size_t>(c)] > 0 &&
                pred_count[static_cast<std::size_t>(c)] > 0) {
                ++result.mixed_origin_k;
            }
        } else if (cluster.size() == 1) {
            if (gt_count[static_cast<std::size_t>(c)] > 0) {
                ++result.unmatched_gt;
            } else {
                ++result.unmatched_pred;
            }
        }
    }
    if (result.k > 0) result.mean_error = total / result.k;
    return result;
}

PairEvaluation evaluate_pair(const BinaryMask& gt, const BinaryMask& pred,
                             const PipelineConfig& config) {
    if (gt.width != pred.width || gt.height != pred.height) {
        throw Error(ErrorCode::DimensionMismatch, "mask sizes differ: " +
                                                      std::to_string(gt.width) + "x" +
                                                      std::to_string(gt.height) + " vs " +
                                                      std::to_string(pred.width) + "x" +
                                                      std::to_string(pred.height));
    }
    PairEvaluation out;
    out.scores = score_masks(gt, pred);

    const std::vector<CropRow> gt_rows = detect_rows(gt, config);
    const std::vector<CropRow> pred_rows = detect_rows(pred, config);
    out.gt_row_count = static_cast<int>(gt_rows.size());
    out.pred_row_count = static_cast<int>(pred_rows.size());

    std::vector<RowAngle> gt_angles;
    gt_angles.reserve(gt_rows.size());
    for (const CropRow& r : gt_rows) gt_angles.push_back(r.angle);
    std::vector<RowAngle> pred_angles;
    pred_angles.reserve(pred_rows.size());
    for (const CropRow& r : pred_rows) pred_angles.push_back(r.angle);

    out.angle = pair_and_score(gt_angles, pred_angles, config.eps2, config.min_pts);
    return out;
}

} // namespace croprow
