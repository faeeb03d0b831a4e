#include "croprow/config.hpp"

#include <json.hpp>

#include "croprow/error.hpp"

namespace croprow {

void PipelineConfig::validate() const {
    if (theta_res <= 0.0 || rho_res <= 0.0)
        throw Error(ErrorCode::InvalidArgument, "config: resolutions must be > 0");
    if (eps1 <= 0.0 || eps2 <= 0.0)
        throw Error(ErrorCode::InvalidArgument, "config: eps1 and eps2 must be > 0");
    if (min_pts < 1) throw Error(ErrorCode::InvalidArgument, "config: min_pts must be >= 1");
    if (vote_threshold < 1)
        throw Error(ErrorCode::InvalidArgument, "config: vote_threshold must be >= 1");
    if (max_thin_iterations < 1)
        throw Error(ErrorCode::InvalidArgument, "config: max_thin_iterations must be >= 1");
    if (nms_radius.theta_bins < 0 || nms_radius.rho_bins < 0)
        throw Error(ErrorCode::InvalidArgument, "config: nms radii must be >= 0");
}

void BaselineConfig::validate() const {
    if (open_radius < 0) throw Error(ErrorCode::InvalidArgument, "config: open_radius must be >= 0");
    if (fixed_threshold < 0 || fixed_threshold > 255)
        throw Error(ErrorCode::InvalidArgument, "config: fixed_threshold must be in [0,255]");
    row_pipeline.validate();
}

void config_update_from_json(const std::string& json_text, PipelineConfig& pipeline,
                             BaselineConfig& baseline) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::Parse, std::string("config: ") + e.what());
    }
    if (!j.is_object()) throw Error(ErrorCode::Parse, "config: expected a JSON object");
    try {
        for (auto& [key, value] : j.items()) {
            if (key == "theta_res") pipeline.theta_res = value.get<double>();
            else if (key == "rho_res") pipeline.rho_res = value.get<double>();
            else if (key == "vote_threshold") pipeline.vote_threshold = value.get<long>();
            else if (key == "nms_theta_bins") pipeline.nms_radius.theta_bins = value.get<int>();
            else if (key == "nms_rho_bins") pipeline.nms_radius.rho_bins = value.get<int>();
            else if (key == "eps1") pipeline.eps1 = value.get<double>();
            else if (key == "eps2") pipeline.eps2 = value.get<double>();
            else if (key == "min_pts") pipeline.min_pts = value.get<int>();
            else if (key == "max_thin_iterations") pipeline.max_thin_iterations = value.get<int>();
            else if (key == "use_otsu") baseline.use_otsu = value.get<bool>();
            else if (key == "fixed_threshold") baseline.fixed_threshold = value.get<int>();
            else if (key == "open_radius") baseline.open_radius = value.get<int>();
            else throw Error(ErrorCode::Parse, "config: unknown key '" + key + "'");
        }
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::Parse, std::string("config: ") + e.what());
    }
    baseline.row_pipeline = pipeline;
    pipeline.validate();
    baseline.validate();
}

std::string config_to_json(const PipelineConfig& pipeline, const BaselineConfig& baseline) {
    nlohmann::json j{
        {"theta_res", pipeline.theta_res},
        {"rho_res", pipeline.rho_res},
        {"vote_threshold", pipeline.vote_threshold},
        {"nms_theta_bins", pipeline.nms_radius.theta_bins},
        {"nms_rho_bins", pipeline.nms_radius.rho_bins},
        {"eps1", pipeline.eps1},
        {"eps2", pipeline.eps2},
        {"min_pts", pipeline.min_pts},
        {"max_thin_iterations", pipeline.max_thin_iterations},
        {"use_otsu", baseline.use_otsu},
        {"fixed_threshold", baseline.fixed_threshold},
        {"open_radius", baseline.open_radius},
    };
    return j.dump();
}

} // namespace croprow
