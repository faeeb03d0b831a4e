#include "croprow/cluster.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

#include "croprow/error.hpp"
#include "croprow/hough.hpp"
#include "croprow/preprocess.hpp"

namespace croprow {

namespace {

std::vector<int> neighbors_within(const std::vector<RowAngle>& values, std::size_t i, double eps) {
    std::vector<int> out;
    for (std::size_t j = 0; j < values.size(); ++j) {
        if (circular_distance(values[i], values[j]) <= eps) out.push_back(static_cast<int>(j));
    }
    return out;
}

} // namespace

ClusterLabeling dbscan_circular(const std::vector<RowAngle>& values, double eps, int min_pts) {
    if (eps < 0.0) throw Error(ErrorCode::InvalidArgument, "dbscan eps must be >= 0");
    if (min_pts < 1) throw Error(ErrorCode::InvalidArgument, "dbscan min_pts must be >= 1");

    const std::size_t n = values.size();
    ClusterLabeling result;
    result.labels.assign(n, kNoise);

    std::vector<char> visited(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        if (visited[i]) continue;
        visited[i] = 1;
        std::vector<int> seeds = neighbors_within(values, i, eps);
        if (static_cast<int>(seeds.size()) < min_pts) continue; // stays noise unless claimed as border later

        const int cluster = result.cluster_count++;
        result.labels[i] = cluster;
        std::deque<int> queue(seeds.begin(), seeds.end());
        while (!queue.empty()) {
            const int j = queue.front();
            queue.pop_front();
            if (result.labels[j] == kNoise) result.labels[j] = cluster; // border point
            if (visited[j]) continue;
            visited[j] = 1;
            result.labels[j] = cluster;
            std::vector<int> expansion = neighbors_within(values, static_cast<std::size_t>(j), eps);
            if (static_cast<int>(expansion.size()) >= min_pts) {
                for (int k : expansion) queue.push_back(k);
            }
        }
    }
    return result;
}

CropRow select_candidate(const std::vector<std::pair<RowAngle, LineRT>>& cluster) {
    if (cluster.empty()) throw Error(ErrorCode::InvalidArgument, "select_candidate: empty cluster");
    std::size_t best = 0;
    for (std::size_t i = 1; i < cluster.size(); ++i) {
        const double a = std::abs(cluster[i].first.degrees);
        const double b = std::abs(cluster[best].first.degrees);
        if (a < b) {
            best = i;
        } else if (a == b) {
            const bool i_nonneg = cluster[i].first.degrees >= 0.0;
            const bool best_nonneg = cluster[best].first.degrees >= 0.0;
            if (i_nonneg != best_nonneg) {
                if (i_nonneg) best = i;
            } else if (cluster[i].second.rho < cluster[best].second.rho) {
                best = i;
            }
        }
    }
    CropRow row;
    row.angle = cluster[best].first;
    row.rho = cluster[best].second.rho;
    row.member_count = static_cast<int>(cluster.size());
    return row;
}

std::vector<CropRow> detect_rows(const BinaryMask& mask, const PipelineConfig& config) {
    config.validate();
    SkeletonResult skeleton = skeletonize(mask, config.max_thin_iterations);
    HoughAccumulator acc = hough_transform(skeleton.mask, config.theta_res, config.rho_res);
    std::vector<LineRT> peaks = find_peaks(acc, config.vote_threshold, config.nms_radius);

    std::vector<RowAngle> angles;
    angles.reserve(peaks.size());
    for (const LineRT& p : peaks) angles.push_back(angle_from_vertical(p));

    ClusterLabeling labeling = dbscan_circular(angles, config.eps1, config.min_pts);
    std::vector<std::vector<std::pair<RowAngle, LineRT>>> clusters(
        static_cast<std::size_t>(labeling.cluster_count));
    for (std::size_t i = 0; i < peaks.size(); ++i) {
        const int label = labeling.labels[i];
        if (label == kNoise) continue;
        clusters[static_cast<std::size_t>(label)].emplace_back(angles[i], peaks[i]);
    }

    std::vector<CropRow> rows;
    rows.reserve(clusters.size());
    for (const auto& cluster : clusters) {
        if (!cluster.empty()) rows.push_back(select_candidate(cluster));
    }
    std::sort(rows.begin(), rows.end(), [](const CropRow& a, const CropRow& b) {
        if (a.rho != b.rho) return a.rho < b.rho;
        return a.angle.degrees < b.angle.degrees;
    });
    return rows;
}

} // namespace croprow
