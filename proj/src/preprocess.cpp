#include "croprow/preprocess.hpp"

#include <array>
#include <cmath>

#include "croprow/error.hpp"

namespace croprow {

namespace {

// Zhang-Suen neighborhood P2..P9, clockwise from north, with x right and
// y down.
constexpr std::array<std::pair<int, int>, 8> kNeighbors = {{
    {0, -1},  // P2 N
    {1, -1},  // P3 NE
    {1, 0},   // P4 E
    {1, 1},   // P5 SE
    {0, 1},   // P6 S
    {-1, 1},  // P7 SW
    {-1, 0},  // P8 W
    {-1, -1}, // P9 NW
}};

// One Zhang-Suen subiteration; marks then deletes simultaneously.
// Returns the number of pixels removed.
std::size_t thin_subiteration(BinaryMask& mask, bool second_pass) {
    std::vector<std::size_t> to_delete;
    for (int y = 0; y < mask.height; ++y) {
        for (int x = 0; x < mask.width; ++x) {
            if (!mask.at(x, y)) continue;
            std::array<int, 8> p;
            for (int i = 0; i < 8; ++i)
                p[i] = mask.at_clamped(x + kNeighbors[i].first, y + kNeighbors[i].second) ? 1 : 0;
            int b = 0;
            for (int v : p) b += v;
            if (b < 2 || b > 6) continue;
            int transitions = 0;
            for (int i = 0; i < 8; ++i)
                if (p[i] == 0 && p[(i + 1) % 8] == 1) ++transitions;
            if (transitions != 1) continue;
            // p[0]=P2, p[2]=P4, p[4]=P6, p[6]=P8
            if (!second_pass) {
                if (p[0] * p[2] * p[4] != 0) continue;
                if (p[2] * p[4] * p[6] != 0) continue;
            } else {
                if (p[0] * p[2] * p[6] != 0) continue;
                if (p[0] * p[4] * p[6] != 0) continue;
            }
            to_delete.push_back(static_cast<std::size_t>(y) * mask.width + x);
        }
    }
    for (std::size_t idx : to_delete) mask.bits[idx] = 0;
    return to_delete.size();
}

} // namespace

SkeletonResult skeletonize(const BinaryMask& mask, int max_iterations) {
    if (max_iterations < 1)
        throw Error(ErrorCode::InvalidArgument, "skeletonize: max_iterations must be >= 1");
    SkeletonResult result{mask, {}};
    while (result.report.iterations < max_iterations) {
        std::size_t removed = thin_subiteration(result.mask, false);
        removed += thin_subiteration(result.mask, true);
        if (removed == 0) break;
        result.report.removed_pixels += removed;
        ++result.report.iterations;
    }
    if (result.report.iterations == max_iterations) {
        // A full extra pass decides whether we actually reached fixpoint.
        BinaryMask probe = result.mask;
        std::size_t more = thin_subiteration(probe, false) + thin_subiteration(probe, true);
        result.report.converged = more == 0;
    }
    return result;
}

GrayImage excess_green(const RgbImage& img) {
    GrayImage out(img.width, img.height);
    for (std::size_t i = 0; i < out.samples.size(); ++i) {
        long r = img.samples[3 * i];
        long g = img.samples[3 * i + 1];
        long b = img.samples[3 * i + 2];
        long s = r + g + b;
        // value = floor((ExG + 1)/3 * 255) with ExG = (2g - r - b)/s, done in
        // exact integer arithmetic: (2g - r - b + s) * 255 / (3 s).
        long v = s == 0 ? 85 : (2 * g - r - b + s) * 255 / (3 * s);
        out.samples[i] = static_cast<std::uint8_t>(v);
    }
    return out;
}

OtsuResult otsu_threshold(const std::vector<std::uint64_t>& histogram) {
    if (histogram.size() != 256)
        throw Error(ErrorCode::InvalidArgument, "otsu: histogram must have 256 bins");
    std::uint64_t total = 0;
    std::uint64_t total_sum = 0;
    for (int v = 0; v < 256; ++v) {
        total += histogram[v];
        total_sum += histogram[v] * static_cast<std::uint64_t>(v);
    }

    // Between-class variance of the split {<= t} vs {> t} is proportional to
    // (s0*N - S*n0)^2 / (n0*n1). For totals small enough the argmax is found
    // by exact cross-multiplied comparison so ties always resolve to the
    // smallest t; very large histograms fall back to long double.
    bool exact = total <= 400000;
    OtsuResult best;
    unsigned __int128 best_num = 0;
    std::uint64_t best_den = 1;
    long double best_val = 0.0L;
    bool found = false;
    std::uint64_t n0 = 0, s0 = 0;
    for (int t = 0; t < 256; ++t) {
        n0 += histogram[t];
        s0 += histogram[t] * static_cast<std::uint64_t>(t);
        std::uint64_t n1 = total - n0;
        if (n0 == 0 || n1 == 0) continue;
        __int128 a = static_cast<__int128>(s0) * total - static_cast<__int128>(total_sum) * n0;
        if (a < 0) a = -a;
        std::uint64_t den = n0 * n1;
        bool better;
        if (exact) {
            unsigned __int128 num = static_cast<unsigned __int128>(a) * static_cast<unsigned __int128>(a);
            better = !found || num * best_den > best_num * den;
            if (better) {
                best_num = num;
                best_den = den;
            }
        } else {
            long double val = static_cast<long double>(a) * static_cast<long double>(a) /
                              static_cast<long double>(den);
            better = !found || val > best_val;
            if (better) best_val = val;
        }
        if (better) {
            found = true;
            best.threshold = t;
        }
    }
    if (!found || (exact && best_num == 0) || (!exact && best_val == 0.0L))
        return OtsuResult{127, true};
    return best;
}

OtsuResult otsu_threshold(const GrayImage& img) {
    std::vector<std::uint64_t> hist(256, 0);
    for (std::uint8_t s : img.samples) ++hist[s];
    return otsu_threshold(hist);
}

} // namespace croprow
