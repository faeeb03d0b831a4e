#include "croprow/hough.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "croprow/error.hpp"

namespace croprow {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

long HoughAccumulator::total_votes() const {
    return std::accumulate(votes.begin(), votes.end(), 0L);
}

void HoughAccumulator::add(const HoughAccumulator& other) {
    if (theta_bins != other.theta_bins || rho_half_bins != other.rho_half_bins ||
        theta_res != other.theta_res || rho_res != other.rho_res)
        throw Error(ErrorCode::InvalidArgument, "accumulator geometries differ");
    for (std::size_t i = 0; i < votes.size(); ++i) votes[i] += other.votes[i];
}

HoughAccumulator hough_transform(const BinaryMask& mask, double theta_res, double rho_res) {
    if (theta_res <= 0.0 || rho_res <= 0.0)
        throw Error(ErrorCode::InvalidArgument, "hough: resolutions must be > 0");
    double bins_f = 180.0 / theta_res;
    int theta_bins = static_cast<int>(std::lround(bins_f));
    if (theta_bins < 1 || std::fabs(bins_f - theta_bins) > 1e-9)
        throw Error(ErrorCode::InvalidArgument, "hough: theta_res must divide 180 evenly");

    double diagonal = std::ceil(std::hypot(mask.width, mask.height));
    HoughAccumulator acc;
    acc.theta_bins = theta_bins;
    acc.theta_res = theta_res;
    acc.rho_res = rho_res;
    acc.rho_half_bins = static_cast<int>(std::ceil(diagonal / rho_res));
    acc.votes.assign(static_cast<std::size_t>(theta_bins) * acc.rho_bins(), 0);

    std::vector<double> cos_t(theta_bins), sin_t(theta_bins);
    for (int i = 0; i < theta_bins; ++i) {
        double th = acc.theta_of(i) * kPi / 180.0;
        cos_t[i] = std::cos(th);
        sin_t[i] = std::sin(th);
    }

    const int rho_bins = acc.rho_bins();
    for (int y = 0; y < mask.height; ++y) {
        for (int x = 0; x < mask.width; ++x) {
            if (!mask.at(x, y)) continue;
            for (int i = 0; i < theta_bins; ++i) {
                double rho = x * cos_t[i] + y * sin_t[i];
                int k = static_cast<int>(std::llround(rho / rho_res)) + acc.rho_half_bins;
                acc.votes[static_cast<std::size_t>(i) * rho_bins + k] += 1;
            }
        }
    }
    return acc;
}

std::vector<LineRT> find_peaks(const HoughAccumulator& acc, long vote_threshold, NmsRadius nms) {
    if (vote_threshold < 1)
        throw Error(ErrorCode::InvalidArgument, "find_peaks: vote_threshold must be >= 1");
    std::vector<LineRT> peaks;
    const int rho_bins = acc.rho_bins();
    for (int ti = 0; ti < acc.theta_bins; ++ti) {
        for (int ri = 0; ri < rho_bins; ++ri) {
            long v = acc.at(ti, ri);
            if (v < vote_threshold) continue;
            bool is_peak = true;
            int t_lo = std::max(0, ti - nms.theta_bins);
            int t_hi = std::min(acc.theta_bins - 1, ti + nms.theta_bins);
            int r_lo = std::max(0, ri - nms.rho_bins);
            int r_hi = std::min(rho_bins - 1, ri + nms.rho_bins);
            for (int tj = t_lo; tj <= t_hi && is_peak; ++tj) {
                for (int rj = r_lo; rj <= r_hi; ++rj) {
                    if (tj == ti && rj == ri) continue;
                    long w = acc.at(tj, rj);
                    // Plateaus: the lexicographically first bin wins.
                    if (w > v || (w == v && std::pair(tj, rj) < std::pair(ti, ri))) {
                        is_peak = false;
                        break;
                    }
                }
            }
            if (is_peak) peaks.push_back(LineRT{acc.rho_of(ri), acc.theta_of(ti), v});
        }
    }
    std::sort(peaks.begin(), peaks.end(), [](const LineRT& a, const LineRT& b) {
        if (a.votes != b.votes) return a.votes > b.votes;
        if (a.theta != b.theta) return a.theta < b.theta;
        return a.rho < b.rho;
    });
    return peaks;
}

RowAngle angle_from_vertical(const LineRT& line) {
    return RowAngle{line.theta <= 90.0 ? line.theta : line.theta - 180.0};
}

} // namespace croprow
