#pragma once

#include <utility>
#include <vector>

#include "croprow/config.hpp"
#include "croprow/image.hpp"
#include "croprow/types.hpp"

namespace croprow {

constexpr int kNoise = -1;

/// DBSCAN labeling: per-input cluster id (0..cluster_count-1, each cluster
/// nonempty) or kNoise.
struct ClusterLabeling {
    std::vector<int> labels;
    int cluster_count = 0;
};

/// DBSCAN over the circular angle metric d(a,b) = min(|a-b|, 180-|a-b|).
/// A point is core iff it has >= min_pts neighbors within eps, itself
/// included. Expansion follows input order with ascending-index tie-break,
/// so the labeling is deterministic.
ClusterLabeling dbscan_circular(const std::vector<RowAngle>& values, double eps, int min_pts);

/// The cluster member whose angle is closest to vertical; ties prefer the
/// non-negative angle, then the smaller rho.
CropRow select_candidate(const std::vector<std::pair<RowAngle, LineRT>>& cluster);

/// Full first-stage pipeline: skeletonize -> Hough -> peaks -> vertical
/// angles -> stage-1 DBSCAN -> one representative per cluster, sorted by
/// rho ascending.
std::vector<CropRow> detect_rows(const BinaryMask& mask, const PipelineConfig& config);

} // namespace croprow
