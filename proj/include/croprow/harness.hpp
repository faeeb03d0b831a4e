#pragma once

#include <optional>
#include <string>
#include <vector>

#include "croprow/angle_metric.hpp"
#include "croprow/config.hpp"
#include "croprow/image.hpp"

namespace croprow {

inline constexpr const char* kToolVersion = "0.1.0";

/// Field-scenario categories of the evaluation dataset, plus a bucket for
/// unlabeled samples.
enum class Category {
    HorizontalShadow,
    SlopeCurve,
    Discontinuities,
    FrontShadow,
    DenseWeed,
    LargeCrops,
    SmallCrops,
    Sunlight,
    TyreTracks,
    SparseWeed,
    Uncategorized,
};

/// Accepts "a".."j"; the empty token maps to Uncategorized.
Category category_from_token(const std::string& token);
std::string category_id(Category c);   // "a".."j" or "uncategorized"
std::string category_name(Category c); // display name

struct Sample {
    std::string image_path; // optional; baseline and overlay use it
    std::string gt_mask_path;
    std::string pred_mask_path;
    Category category = Category::Uncategorized;
};

/// CSV manifest with header `image,gt_mask,pred_mask,category`. Paths
/// resolve relative to the manifest's directory; referenced mask files must
/// be readable. Errors name the 1-based data row.
std::vector<Sample> load_manifest(const std::string& path);

struct CategoryReport {
    std::string id;
    std::string name;
    int sample_count = 0;
    double mean_accuracy = 0.0; // fraction in [0,1]
    double mean_iou = 0.0;
    std::optional<double> mean_angle_error; // degrees, over samples with k >= 1
    double detection_rate = 0.0;            // fraction of samples with k >= 1
    double mean_gt_rows = 0.0;
    double mean_pred_rows = 0.0;
};

struct SampleFailure {
    int row = 0; // 1-based position in the sample list
    std::string message;
};

struct RunReport {
    std::vector<CategoryReport> per_category;
    CategoryReport overall; // id "ALL", name "Overall"
    PipelineConfig config_echo;
    std::string tool_version = kToolVersion;
    std::vector<SampleFailure> failures;
    std::vector<std::string> notes;
};

/// Scores every sample's prediction mask against its ground truth and
/// aggregates per category. Per-sample decode and dimension failures are
/// recorded in the report rather than thrown. Results do not depend on
/// worker count.
RunReport evaluate_dataset(const std::vector<Sample>& samples, const PipelineConfig& config,
                           int workers = 1);

/// Same aggregation, but predictions come from the classical detector run
/// on each sample's image column instead of a prediction mask file.
RunReport evaluate_dataset_baseline(const std::vector<Sample>& samples,
                                    const BaselineConfig& config, int workers = 1);

/// Nearest-neighbor resize; preserves the value set.
BinaryMask resize_global(const BinaryMask& mask, int target_w = 512, int target_h = 512);
GrayImage resize_global(const GrayImage& img, int target_w = 512, int target_h = 512);
/// Bilinear resize.
RgbImage resize_global(const RgbImage& img, int target_w = 512, int target_h = 512);

enum class ReportFormat { Csv, Json, Markdown };

std::string emit_report(const RunReport& report, ReportFormat format);
RunReport report_from_json(const std::string& text);

} // namespace croprow
