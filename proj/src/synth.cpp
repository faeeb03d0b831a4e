#include "croprow/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <json.hpp>

#include "croprow/error.hpp"

namespace croprow {

namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;

bool in_gap(const RowSpec& row, double fraction) {
    for (const auto& [start, end] : row.gaps) {
        if (fraction >= start && fraction < end) return true;
    }
    return false;
}

/// Paints one row. The walk follows the major axis (the one the line varies
/// least along) so every step lands on a fresh scanline; the stroke width is
/// laid out across the minor axis.
void paint_row(BinaryMask& mask, const RowSpec& row) {
    const double theta = row_angle_to_theta(row.angle) * kDegToRad;
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    const int lo = -((row.width - 1) / 2);
    const int hi = row.width / 2;

    if (std::abs(c) >= std::numbers::sqrt2 / 2.0) {
        // Near-vertical: x = (rho - y*sin) / cos, one center per scan row.
        for (int y = 0; y < mask.height; ++y) {
            const double fraction = (y + 0.5) / mask.height;
            if (in_gap(row, fraction)) continue;
            const long cx = std::lround((row.offset - y * s) / c);
            for (int d = lo; d <= hi; ++d) {
                const long x = cx + d;
                if (x >= 0 && x < mask.width) mask.set(static_cast<int>(x), y, true);
            }
        }
    } else {
        for (int x = 0; x < mask.width; ++x) {
            const double fraction = (x + 0.5) / mask.width;
            if (in_gap(row, fraction)) continue;
            const long cy = std::lround((row.offset - x * c) / s);
            for (int d = lo; d <= hi; ++d) {
                const long y = cy + d;
                if (y >= 0 && y < mask.height) mask.set(x, static_cast<int>(y), true);
            }
        }
    }
}

bool near_any_row(const SceneSpec& spec, int x, int y) {
    for (const RowSpec& row : spec.rows) {
        const double theta = row_angle_to_theta(row.angle) * kDegToRad;
        const double dist =
            std::abs(x * std::cos(theta) + y * std::sin(theta) - row.offset);
        if (dist < row.width / 2.0 + 3.5) return true;
    }
    return false;
}

} // namespace

void SceneSpec::validate() const {
    if (width < 32 || height < 32)
        throw Error(ErrorCode::InvalidArgument, "scene size must be at least 32x32");
    if (!(speckle_density >= 0.0 && speckle_density < 0.5))
        throw Error(ErrorCode::InvalidArgument, "speckle_density must be in [0, 0.5)");
    for (const RowSpec& row : rows) {
        if (row.width < 1) throw Error(ErrorCode::InvalidArgument, "row width must be >= 1");
        if (!(row.angle.degrees > -90.0 && row.angle.degrees <= 90.0))
            throw Error(ErrorCode::InvalidArgument, "row angle must lie in (-90, 90]");
        auto sorted = row.gaps;
        std::sort(sorted.begin(), sorted.end());
        double prev_end = 0.0;
        for (const auto& [start, end] : sorted) {
            if (start < 0.0 || end > 1.0 || start > end)
                throw Error(ErrorCode::InvalidArgument, "gap intervals must satisfy 0 <= start <= end <= 1");
            if (start < prev_end)
                throw Error(ErrorCode::InvalidArgument, "gap intervals must not overlap");
            prev_end = end;
        }
    }
}

BinaryMask render_gt_mask(const SceneSpec& spec) {
    spec.validate();
    BinaryMask mask(spec.width, spec.height);
    for (const RowSpec& row : spec.rows) paint_row(mask, row);
    return mask;
}

BinaryMask render_mask(const SceneSpec& spec) {
    BinaryMask mask = render_gt_mask(spec);
    if (spec.speckle_density <= 0.0) return mask;
    // One draw per pixel keeps the stream aligned to pixel index, so the
    // same seed sprinkles the same pattern whatever the row layout.
    SplitMix64 rng(spec.seed);
    for (int y = 0; y < spec.height; ++y) {
        for (int x = 0; x < spec.width; ++x) {
            const double u = rng.next_unit();
            if (u < spec.speckle_density && !near_any_row(spec, x, y)) mask.set(x, y, true);
        }
    }
    return mask;
}

RgbImage render_rgb(const SceneSpec& spec, std::array<std::uint8_t, 3> crop_color,
                    std::array<std::uint8_t, 3> soil_color) {
    if (crop_color == soil_color)
        throw Error(ErrorCode::InvalidArgument, "crop and soil colors must differ");
    const BinaryMask mask = render_mask(spec);
    RgbImage img(spec.width, spec.height);
    for (int y = 0; y < spec.height; ++y) {
        for (int x = 0; x < spec.width; ++x) {
            const auto& color = mask.at(x, y) ? crop_color : soil_color;
            img.set(x, y, color[0], color[1], color[2]);
        }
    }
    return img;
}

SceneSpec perturb_spec(const SceneSpec& spec, const std::vector<double>& angle_deltas) {
    if (angle_deltas.size() != spec.rows.size())
        throw Error(ErrorCode::InvalidArgument,
                    "perturb_spec: " + std::to_string(angle_deltas.size()) + " deltas for " +
                        std::to_string(spec.rows.size()) + " rows");
    SceneSpec out = spec;
    for (std::size_t i = 0; i < out.rows.size(); ++i) {
        out.rows[i].angle = RowAngle{wrap_half_turn(out.rows[i].angle.degrees + angle_deltas[i])};
    }
    return out;
}

SceneSpec scene_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::Parse, std::string("scene json: ") + e.what());
    }
    try {
        SceneSpec spec;
        spec.width = j.at("size").at(0).get<int>();
        spec.height = j.at("size").at(1).get<int>();
        for (const auto& row_json : j.value("rows", nlohmann::json::array())) {
            RowSpec row;
            row.angle = RowAngle{row_json.at("angle").get<double>()};
            row.offset = row_json.at("offset").get<double>();
            row.width = row_json.at("width").get<int>();
            for (const auto& gap : row_json.value("gaps", nlohmann::json::array())) {
                row.gaps.emplace_back(gap.at(0).get<double>(), gap.at(1).get<double>());
            }
            spec.rows.push_back(std::move(row));
        }
        spec.speckle_density = j.value("speckle_density", 0.0);
        spec.seed = j.value("seed", std::uint64_t{0});
        spec.validate();
        return spec;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::Parse, std::string("scene json: ") + e.what());
    }
}

std::string scene_to_json(const SceneSpec& spec) {
    nlohmann::json rows = nlohmann::json::array();
    for (const RowSpec& row : spec.rows) {
        nlohmann::json gaps = nlohmann::json::array();
        for (const auto& [start, end] : row.gaps) gaps.push_back({start, end});
        rows.push_back({{"angle", row.angle.degrees},
                        {"offset", row.offset},
                        {"width", row.width},
                        {"gaps", std::move(gaps)}});
    }
    nlohmann::json j{{"size", {spec.width, spec.height}},
                     {"rows", std::move(rows)},
                     {"speckle_density", spec.speckle_density},
                     {"seed", spec.seed}};
    return j.dump(2) + "\n";
}

} // namespace croprow
