#pragma once

#include <optional>
#include <vector>

#include "croprow/config.hpp"
#include "croprow/image.hpp"
#include "croprow/seg_metrics.hpp"
#include "croprow/types.hpp"

namespace croprow {

enum class AngleOrigin { GroundTruth, Prediction };

struct TaggedAngle {
    RowAngle angle;
    AngleOrigin origin = AngleOrigin::GroundTruth;
};

/// Output of the second-stage clustering across ground-truth and predicted
/// angles. mean_error is absent when no cluster holds at least two members.
struct AngleErrorResult {
    int k = 0;                         // clusters with >= 2 members
    std::vector<double> cluster_spans; // per such cluster, max-min after unwrap
    std::optional<double> mean_error;
    int unmatched_gt = 0;    // singleton clusters holding one ground-truth angle
    int unmatched_pred = 0;  // singleton clusters holding one predicted angle
    int mixed_origin_k = 0;  // of the k clusters, how many mix both origins
};

/// Clusters the union of both angle lists with DBSCAN (eps2, the same
/// circular metric) and averages the angular span of every cluster that has
/// at least two members.
AngleErrorResult pair_and_score(const std::vector<RowAngle>& gt,
                                const std::vector<RowAngle>& pred,
                                double eps2,
                                int min_pts = 1);

/// Everything evaluate reports for one ground-truth/prediction mask pair.
struct PairEvaluation {
    AngleErrorResult angle;
    SegScores scores;
    int gt_row_count = 0;
    int pred_row_count = 0;
};

/// Runs the detection pipeline on both masks and scores them against each
/// other. Throws DimensionMismatch when the masks disagree in size.
PairEvaluation evaluate_pair(const BinaryMask& gt, const BinaryMask& pred,
                             const PipelineConfig& config);

} // namespace croprow
