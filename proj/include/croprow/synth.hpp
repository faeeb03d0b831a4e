#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "croprow/image.hpp"
#include "croprow/types.hpp"

namespace croprow {

/// One straight crop row: angle from vertical, signed perpendicular offset
/// from the image origin (the Hough rho of the center line), stroke width,
/// and gap intervals as fractions of the row's in-image extent.
struct RowSpec {
    RowAngle angle;
    double offset = 0.0;
    int width = 1;
    std::vector<std::pair<double, double>> gaps;
};

struct SceneSpec {
    int width = 0;
    int height = 0;
    std::vector<RowSpec> rows;
    double speckle_density = 0.0;
    std::uint64_t seed = 0;

    void validate() const;
};

/// SplitMix64. The stream is consumed one draw per pixel in row-major order
/// when sprinkling speckle, so layouts with the same seed share a pattern.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    /// Uniform in [0,1) with 53 significant bits.
    double next_unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

private:
    std::uint64_t state_;
};

/// Rows plus seeded speckle. Speckle never lands within 3 px of a row band.
BinaryMask render_mask(const SceneSpec& spec);

/// Rows only; the ground-truth counterpart of render_mask (weeds are not
/// crop rows).
BinaryMask render_gt_mask(const SceneSpec& spec);

/// crop_color exactly where render_mask is white, soil_color elsewhere.
RgbImage render_rgb(const SceneSpec& spec, std::array<std::uint8_t, 3> crop_color,
                    std::array<std::uint8_t, 3> soil_color);

/// Shifts each row angle by its delta, wrapped into (-90, 90].
SceneSpec perturb_spec(const SceneSpec& spec, const std::vector<double>& angle_deltas);

SceneSpec scene_from_json(const std::string& text);
std::string scene_to_json(const SceneSpec& spec);

} // namespace croprow
