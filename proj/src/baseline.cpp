#include "croprow/baseline.hpp"

#include "croprow/cluster.hpp"
#include "croprow/error.hpp"
#include "croprow/preprocess.hpp"

namespace croprow {

namespace {

BinaryMask erode_square(const BinaryMask& mask, int radius) {
    BinaryMask out(mask.width, mask.height);
    for (int y = 0; y < mask.height; ++y) {
        for (int x = 0; x < mask.width; ++x) {
            bool keep = true;
            for (int dy = -radius; keep && dy <= radius; ++dy) {
                for (int dx = -radius; dx <= radius; ++dx) {
                    if (!mask.at_clamped(x + dx, y + dy)) {
                        keep = false;
                        break;
                    }
                }
            }
            out.set(x, y, keep);
        }
    }
    return out;
}

BinaryMask dilate_square(const BinaryMask& mask, int radius) {
    BinaryMask out(mask.width, mask.height);
    for (int y = 0; y < mask.height; ++y) {
        for (int x = 0; x < mask.width; ++x) {
            bool hit = false;
            for (int dy = -radius; !hit && dy <= radius; ++dy) {
                for (int dx = -radius; dx <= radius; ++dx) {
                    if (mask.at_clamped(x + dx, y + dy)) {
                        hit = true;
                        break;
                    }
                }
            }
            out.set(x, y, hit);
        }
    }
    return out;
}

} // namespace

BinaryMask open_square(const BinaryMask& mask, int radius) {
    if (radius < 0) throw Error(ErrorCode::InvalidArgument, "open radius must be >= 0");
    if (radius == 0) return mask;
    return dilate_square(erode_square(mask, radius), radius);
}

VegetationMaskResult vegetation_mask(const RgbImage& img, const BaselineConfig& config) {
    config.validate();
    const GrayImage index = excess_green(img);

    VegetationMaskResult result;
    if (config.use_otsu) {
        const OtsuResult otsu = otsu_threshold(index);
        // Otsu's threshold is the top of the dark class; binarize is
        // >=-inclusive, so the white class starts one level above it.
        result.threshold_used = otsu.threshold + 1;
        result.otsu_degenerate = otsu.degenerate;
    } else {
        result.threshold_used = config.fixed_threshold;
    }
    result.mask = open_square(binarize(index, result.threshold_used), config.open_radius);
    return result;
}

std::vector<CropRow> classic_detect(const RgbImage& img, const BaselineConfig& config) {
    return detect_rows(vegetation_mask(img, config).mask, config.row_pipeline);
}

} // namespace croprow
