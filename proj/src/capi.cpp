#include "croprow.h"

#include <cstdlib>
#include <cstring>
#include <string>

#include <json.hpp>

#include "croprow/angle_metric.hpp"
#include "croprow/baseline.hpp"
#include "croprow/cluster.hpp"
#include "croprow/config.hpp"
#include "croprow/error.hpp"
#include "croprow/harness.hpp"
#include "croprow/image.hpp"
#include "croprow/synth.hpp"
#include "croprow/types.hpp"

struct crp_image {
    croprow::RgbImage v;
};
struct crp_mask {
    croprow::BinaryMask v;
};
struct crp_config {
    croprow::PipelineConfig pipeline;
    croprow::BaselineConfig baseline;
};
struct crp_rows {
    std::vector<croprow::CropRow> v;
};
struct crp_report {
    croprow::RunReport v;
};
struct crp_scene {
    croprow::SceneSpec v;
};

namespace {

thread_local std::string g_last_error;

crp_status map_code(croprow::ErrorCode code) {
    switch (code) {
    case croprow::ErrorCode::InvalidArgument: return CRP_ERR_INVALID_ARGUMENT;
    case croprow::ErrorCode::Io: return CRP_ERR_IO;
    case croprow::ErrorCode::Decode: return CRP_ERR_DECODE;
    case croprow::ErrorCode::Parse: return CRP_ERR_PARSE;
    case croprow::ErrorCode::DimensionMismatch: return CRP_ERR_DIMENSION_MISMATCH;
    }
    return CRP_ERR_UNKNOWN;
}

template <typename Fn>
crp_status guarded(Fn&& fn) {
    try {
        return fn();
    } catch (const croprow::Error& e) {
        g_last_error = e.what();
        return map_code(e.code());
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return CRP_ERR_UNKNOWN;
    } catch (...) {
        g_last_error = "unknown error";
        return CRP_ERR_UNKNOWN;
    }
}

crp_status fail_invalid(const char* message) {
    g_last_error = message;
    return CRP_ERR_INVALID_ARGUMENT;
}

char* copy_string(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

croprow::RgbImage to_rgb(croprow::DecodedImage&& decoded) {
    if (auto* rgb = std::get_if<croprow::RgbImage>(&decoded)) return std::move(*rgb);
    const auto& gray = std::get<croprow::GrayImage>(decoded);
    croprow::RgbImage img(gray.width, gray.height);
    for (int y = 0; y < gray.height; ++y) {
        for (int x = 0; x < gray.width; ++x) {
            const std::uint8_t v = gray.at(x, y);
            img.set(x, y, v, v, v);
        }
    }
    return img;
}

nlohmann::json rows_json(const std::vector<croprow::CropRow>& rows) {
    nlohmann::json arr = nlohmann::json::array();
    for (const croprow::CropRow& row : rows) {
        arr.push_back({{"angle_deg", row.angle.degrees},
                       {"rho", row.rho},
                       {"members", row.member_count}});
    }
    return arr;
}

} // namespace

extern "C" {

const char* crp_last_error(void) { return g_last_error.c_str(); }

const char* crp_version(void) { return croprow::kToolVersion; }

void crp_image_free(crp_image* image) { delete image; }
void crp_mask_free(crp_mask* mask) { delete mask; }
void crp_config_free(crp_config* config) { delete config; }
void crp_rows_free(crp_rows* rows) { delete rows; }
void crp_report_free(crp_report* report) { delete report; }
void crp_scene_free(crp_scene* scene) { delete scene; }
void crp_string_free(char* text) { std::free(text); }

crp_config* crp_config_new(void) { return new crp_config; }

crp_status crp_config_update_json(crp_config* config, const char* json_text) {
    if (!config || !json_text) return fail_invalid("crp_config_update_json: null argument");
    return guarded([&] {
        croprow::PipelineConfig pipeline = config->pipeline;
        croprow::BaselineConfig baseline = config->baseline;
        croprow::config_update_from_json(json_text, pipeline, baseline);
        config->pipeline = pipeline;
        config->baseline = baseline;
        return CRP_OK;
    });
}

crp_status crp_config_to_json(const crp_config* config, char** out_json) {
    if (!config || !out_json) return fail_invalid("crp_config_to_json: null argument");
    return guarded([&] {
        *out_json = copy_string(croprow::config_to_json(config->pipeline, config->baseline));
        return CRP_OK;
    });
}

crp_status crp_image_read(const char* path, crp_image** out) {
    if (!path || !out) return fail_invalid("crp_image_read: null argument");
    return guarded([&] {
        auto bytes = croprow::read_file(path);
        *out = new crp_image{to_rgb(croprow::decode_image(bytes))};
        return CRP_OK;
    });
}

crp_status crp_mask_read(const char* path, int threshold, crp_mask** out) {
    if (!path || !out) return fail_invalid("crp_mask_read: null argument");
    return guarded([&] {
        auto bytes = croprow::read_file(path);
        *out = new crp_mask{croprow::binarize(croprow::decode_gray(bytes), threshold)};
        return CRP_OK;
    });
}

crp_status crp_image_write(const crp_image* image, const char* path) {
    if (!image || !path) return fail_invalid("crp_image_write: null argument");
    return guarded([&] {
        croprow::write_file(path, croprow::encode_rgb(image->v));
        return CRP_OK;
    });
}

crp_status crp_mask_write(const crp_mask* mask, const char* path) {
    if (!mask || !path) return fail_invalid("crp_mask_write: null argument");
    return guarded([&] {
        croprow::write_file(path, croprow::encode_mask(mask->v));
        return CRP_OK;
    });
}

int crp_image_width(const crp_image* image) { return image ? image->v.width : 0; }
int crp_image_height(const crp_image* image) { return image ? image->v.height : 0; }
int crp_mask_width(const crp_mask* mask) { return mask ? mask->v.width : 0; }
int crp_mask_height(const crp_mask* mask) { return mask ? mask->v.height : 0; }

uint64_t crp_mask_white_count(const crp_mask* mask) {
    return mask ? static_cast<uint64_t>(mask->v.white_count()) : 0;
}

crp_status crp_mask_to_image(const crp_mask* mask, crp_image** out) {
    if (!mask || !out) return fail_invalid("crp_mask_to_image: null argument");
    return guarded([&] {
        *out = new crp_image{croprow::mask_to_rgb(mask->v)};
        return CRP_OK;
    });
}

crp_status crp_mask_resize(const crp_mask* mask, int width, int height, crp_mask** out) {
    if (!mask || !out) return fail_invalid("crp_mask_resize: null argument");
    return guarded([&] {
        *out = new crp_mask{croprow::resize_global(mask->v, width, height)};
        return CRP_OK;
    });
}

crp_status crp_image_resize(const crp_image* image, int width, int height, crp_image** out) {
    if (!image || !out) return fail_invalid("crp_image_resize: null argument");
    return guarded([&] {
        *out = new crp_image{croprow::resize_global(image->v, width, height)};
        return CRP_OK;
    });
}

crp_status crp_detect_rows(const crp_mask* mask, const crp_config* config, crp_rows** out) {
    if (!mask || !config || !out) return fail_invalid("crp_detect_rows: null argument");
    return guarded([&] {
        *out = new crp_rows{croprow::detect_rows(mask->v, config->pipeline)};
        return CRP_OK;
    });
}

crp_status crp_baseline_detect(const crp_image* image, const crp_config* config,
                               crp_rows** out) {
    if (!image || !config || !out) return fail_invalid("crp_baseline_detect: null argument");
    return guarded([&] {
        *out = new crp_rows{croprow::classic_detect(image->v, config->baseline)};
        return CRP_OK;
    });
}

crp_status crp_vegetation_mask(const crp_image* image, const crp_config* config,
                               crp_mask** out, int* threshold_used, int* otsu_degenerate) {
    if (!image || !config || !out) return fail_invalid("crp_vegetation_mask: null argument");
    return guarded([&] {
        croprow::VegetationMaskResult result =
            croprow::vegetation_mask(image->v, config->baseline);
        if (threshold_used) *threshold_used = result.threshold_used;
        if (otsu_degenerate) *otsu_degenerate = result.otsu_degenerate ? 1 : 0;
        *out = new crp_mask{std::move(result.mask)};
        return CRP_OK;
    });
}

size_t crp_rows_count(const crp_rows* rows) { return rows ? rows->v.size() : 0; }

double crp_rows_angle_deg(const crp_rows* rows, size_t index) {
    if (!rows || index >= rows->v.size()) return 0.0;
    return rows->v[index].angle.degrees;
}

double crp_rows_rho(const crp_rows* rows, size_t index) {
    if (!rows || index >= rows->v.size()) return 0.0;
    return rows->v[index].rho;
}

int crp_rows_member_count(const crp_rows* rows, size_t index) {
    if (!rows || index >= rows->v.size()) return 0;
    return rows->v[index].member_count;
}

crp_status crp_rows_to_json(const crp_rows* rows, char** out_json) {
    if (!rows || !out_json) return fail_invalid("crp_rows_to_json: null argument");
    return guarded([&] {
        *out_json = copy_string(rows_json(rows->v).dump(2) + "\n");
        return CRP_OK;
    });
}

crp_status crp_overlay(const crp_image* image, const crp_rows* rows, uint8_t r, uint8_t g,
                       uint8_t b, crp_image** out) {
    if (!image || !rows || !out) return fail_invalid("crp_overlay: null argument");
    return guarded([&] {
        *out = new crp_image{croprow::overlay_rows(image->v, rows->v, r, g, b)};
        return CRP_OK;
    });
}

crp_status crp_evaluate_pair_json(const crp_mask* gt, const crp_mask* pred,
                                  const crp_config* config, char** out_json) {
    if (!gt || !pred || !config || !out_json)
        return fail_invalid("crp_evaluate_pair_json: null argument");
    return guarded([&] {
        const croprow::PairEvaluation e =
            croprow::evaluate_pair(gt->v, pred->v, config->pipeline);
        nlohmann::json j{
            {"accuracy", e.scores.accuracy},
            {"iou", e.scores.iou},
            {"tp", e.scores.counts.tp},
            {"fp", e.scores.counts.fp},
            {"fn", e.scores.counts.fn},
            {"tn", e.scores.counts.tn},
            {"both_empty", e.scores.both_empty},
            {"gt_rows", e.gt_row_count},
            {"pred_rows", e.pred_row_count},
            {"k", e.angle.k},
            {"cluster_spans_deg", e.angle.cluster_spans},
            {"unmatched_gt", e.angle.unmatched_gt},
            {"unmatched_pred", e.angle.unmatched_pred},
            {"mixed_origin_k", e.angle.mixed_origin_k},
        };
        if (e.angle.mean_error) {
            j["mean_angle_error_deg"] = *e.angle.mean_error;
        } else {
            j["mean_angle_error_deg"] = nullptr;
        }
        *out_json = copy_string(j.dump(2) + "\n");
        return CRP_OK;
    });
}

crp_status crp_evaluate_manifest(const char* manifest_path, const crp_config* config,
                                 int workers, int use_baseline, crp_report** out) {
    if (!manifest_path || !config || !out)
        return fail_invalid("crp_evaluate_manifest: null argument");
    return guarded([&] {
        const std::vector<croprow::Sample> samples = croprow::load_manifest(manifest_path);
        croprow::RunReport report =
            use_baseline
                ? croprow::evaluate_dataset_baseline(samples, config->baseline, workers)
                : croprow::evaluate_dataset(samples, config->pipeline, workers);
        const bool partial = !report.failures.empty();
        *out = new crp_report{std::move(report)};
        if (partial) {
            g_last_error = "some samples failed; see the report's failure list";
            return CRP_ERR_PARTIAL;
        }
        return CRP_OK;
    });
}

crp_status crp_report_render(const crp_report* report, const char* format, char** out) {
    if (!report || !format || !out) return fail_invalid("crp_report_render: null argument");
    return guarded([&] {
        croprow::ReportFormat f;
        const std::string name = format;
        if (name == "csv") {
            f = croprow::ReportFormat::Csv;
        } else if (name == "json") {
            f = croprow::ReportFormat::Json;
        } else if (name == "markdown") {
            f = croprow::ReportFormat::Markdown;
        } else {
            throw croprow::Error(croprow::ErrorCode::InvalidArgument,
                                 "unknown report format '" + name + "'");
        }
        *out = copy_string(croprow::emit_report(report->v, f));
        return CRP_OK;
    });
}

crp_status crp_report_parse(const char* json_text, crp_report** out) {
    if (!json_text || !out) return fail_invalid("crp_report_parse: null argument");
    return guarded([&] {
        *out = new crp_report{croprow::report_from_json(json_text)};
        return CRP_OK;
    });
}

int crp_report_failure_count(const crp_report* report) {
    return report ? static_cast<int>(report->v.failures.size()) : 0;
}

crp_status crp_scene_parse(const char* json_text, crp_scene** out) {
    if (!json_text || !out) return fail_invalid("crp_scene_parse: null argument");
    return guarded([&] {
        *out = new crp_scene{croprow::scene_from_json(json_text)};
        return CRP_OK;
    });
}

crp_status crp_scene_to_json(const crp_scene* scene, char** out_json) {
    if (!scene || !out_json) return fail_invalid("crp_scene_to_json: null argument");
    return guarded([&] {
        *out_json = copy_string(croprow::scene_to_json(scene->v));
        return CRP_OK;
    });
}

crp_status crp_scene_render_mask(const crp_scene* scene, crp_mask** out) {
    if (!scene || !out) return fail_invalid("crp_scene_render_mask: null argument");
    return guarded([&] {
        *out = new crp_mask{croprow::render_mask(scene->v)};
        return CRP_OK;
    });
}

crp_status crp_scene_render_gt_mask(const crp_scene* scene, crp_mask** out) {
    if (!scene || !out) return fail_invalid("crp_scene_render_gt_mask: null argument");
    return guarded([&] {
        *out = new crp_mask{croprow::render_gt_mask(scene->v)};
        return CRP_OK;
    });
}

crp_status crp_scene_render_rgb(const crp_scene* scene, uint8_t crop_r, uint8_t crop_g,
                                uint8_t crop_b, uint8_t soil_r, uint8_t soil_g,
                                uint8_t soil_b, crp_image** out) {
    if (!scene || !out) return fail_invalid("crp_scene_render_rgb: null argument");
    return guarded([&] {
        *out = new crp_image{croprow::render_rgb(scene->v, {crop_r, crop_g, crop_b},
                                                 {soil_r, soil_g, soil_b})};
        return CRP_OK;
    });
}

} // extern "C"
