#pragma once

#include <vector>

#include "croprow/config.hpp"
#include "croprow/image.hpp"
#include "croprow/types.hpp"

namespace croprow {

struct VegetationMaskResult {
    BinaryMask mask;
    int threshold_used = 0;      // the binarize cut actually applied
    bool otsu_degenerate = false;
};

/// Excess-green index -> threshold (Otsu over the index histogram, or the
/// configured fixed cut) -> binarize -> morphological opening with a square
/// structuring element of side 2*open_radius+1. Out-of-image pixels count
/// as black for both erosion and dilation.
VegetationMaskResult vegetation_mask(const RgbImage& img, const BaselineConfig& config);

/// vegetation_mask followed by detect_rows under config.row_pipeline.
std::vector<CropRow> classic_detect(const RgbImage& img, const BaselineConfig& config);

/// Morphological opening used by vegetation_mask, exposed for reuse.
BinaryMask open_square(const BinaryMask& mask, int radius);

} // namespace croprow
