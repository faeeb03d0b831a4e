#pragma once

#include "croprow/image.hpp"

namespace croprow {

/// Diagnostics from the thinning step.
struct ThinningReport {
    int iterations = 0;          // full two-subiteration passes that removed pixels
    std::size_t removed_pixels = 0;
    bool converged = true;       // false when max_iterations stopped the loop early
};

struct SkeletonResult {
    BinaryMask mask;
    ThinningReport report;
};

/// Zhang-Suen two-subiteration thinning applied until fixpoint (or until
/// max_iterations, flagged in the report). Output white pixels are a subset
/// of the input's; 8-connectivity of each component is preserved. Pixels
/// outside the image read as black.
SkeletonResult skeletonize(const BinaryMask& mask, int max_iterations = 100);

/// Excess green index over chromatic coordinates: with S = R+G+B and
/// r = R/S, g = G/S, b = B/S, ExG = 2g - r - b in [-1, 2] (S = 0 gives
/// ExG = 0), mapped linearly to 8-bit by floor((ExG+1)/3 * 255).
GrayImage excess_green(const RgbImage& img);

struct OtsuResult {
    int threshold = 127;
    bool degenerate = false; // constant image: no split has any variance
};

/// Smallest t maximizing the between-class variance of the split
/// {sample <= t} vs {sample > t} over the 256-bin histogram. A constant
/// image returns 127 with the degenerate flag set.
OtsuResult otsu_threshold(const GrayImage& img);

/// Same sweep applied to a raw 256-bin histogram.
OtsuResult otsu_threshold(const std::vector<std::uint64_t>& histogram);

} // namespace croprow
