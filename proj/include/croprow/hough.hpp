#pragma once

#include "croprow/image.hpp"
#include "croprow/types.hpp"

namespace croprow {

/// Vote grid over the (theta, rho) parameter space. Theta bins sit at
/// i * theta_res for i in [0, 180/theta_res); rho bins at k * rho_res for
/// signed k covering [-D, +D] with D the image diagonal.
struct HoughAccumulator {
    int theta_bins = 0;
    double theta_res = 1.0;   // degrees
    int rho_half_bins = 0;    // bins on each side of rho = 0
    double rho_res = 1.0;     // pixels
    std::vector<long> votes;  // theta_bins x (2*rho_half_bins + 1)

    int rho_bins() const { return 2 * rho_half_bins + 1; }
    long at(int theta_idx, int rho_idx) const {
        return votes[static_cast<std::size_t>(theta_idx) * rho_bins() + rho_idx];
    }
    long& at(int theta_idx, int rho_idx) {
        return votes[static_cast<std::size_t>(theta_idx) * rho_bins() + rho_idx];
    }
    double theta_of(int theta_idx) const { return theta_idx * theta_res; }
    double rho_of(int rho_idx) const { return (rho_idx - rho_half_bins) * rho_res; }
    long total_votes() const;

    /// Merge by addition; grids must have identical geometry.
    void add(const HoughAccumulator& other);
};

/// Standard (rho, theta) Hough transform: every white pixel casts one vote
/// per theta bin, at rho bin round((x cos + y sin) / rho_res) using the
/// bin's own theta value. theta_res must divide 180 evenly.
HoughAccumulator hough_transform(const BinaryMask& mask, double theta_res, double rho_res);

struct NmsRadius {
    int theta_bins = 2;
    int rho_bins = 2;
};

/// Bins with votes >= vote_threshold that win their non-maximum-suppression
/// neighborhood (plateau ties go to the lexicographically first bin).
/// Ordered by votes descending, ties by (theta, rho) ascending.
std::vector<LineRT> find_peaks(const HoughAccumulator& acc, long vote_threshold, NmsRadius nms);

/// Deviation of the line direction from the image vertical: theta for
/// theta <= 90, otherwise theta - 180. Bijection [0,180) -> (-90, 90].
RowAngle angle_from_vertical(const LineRT& line);

} // namespace croprow
