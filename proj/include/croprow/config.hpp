#pragma once

#include <string>

#include "croprow/hough.hpp"

namespace croprow {

/// Knobs for the mask -> rows pipeline (Hough discretization, peak
/// threshold, clustering radii). Defaults are calibrated on synthetic
/// scenes; vote_threshold in particular needs retuning per image scale.
struct PipelineConfig {
    double theta_res = 0.5;       // degrees per Hough theta bin
    double rho_res = 1.0;         // pixels per Hough rho bin
    long vote_threshold = 140;    // minimum Hough votes for a line
    NmsRadius nms_radius{2, 2};
    double eps1 = 2.0;            // stage-1 DBSCAN radius, degrees
    double eps2 = 5.0;            // stage-2 DBSCAN radius, degrees
    int min_pts = 1;
    int max_thin_iterations = 100;

    void validate() const;
};

/// Classical baseline: vegetation index -> threshold -> opening -> shared
/// row pipeline.
struct BaselineConfig {
    bool use_otsu = true;
    int fixed_threshold = 128;    // used when use_otsu is off
    int open_radius = 1;          // square structuring element; 0 disables
    PipelineConfig row_pipeline;

    void validate() const;
};

/// Merge JSON fields (flat object, same keys as config_to_json) into an
/// existing config pair. Unknown keys are rejected.
void config_update_from_json(const std::string& json_text, PipelineConfig& pipeline,
                             BaselineConfig& baseline);

/// Flat JSON echo of both configs.
std::string config_to_json(const PipelineConfig& pipeline, const BaselineConfig& baseline);

} // namespace croprow
