#include "croprow/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <thread>

#include <json.hpp>

#include "croprow/baseline.hpp"
#include "croprow/error.hpp"

namespace croprow {

namespace {

constexpr int kCategoryCount = 11;

const char* const kCategoryIds[kCategoryCount] = {
    "a", "b", "c", "d", "e", "f", "g", "h", "i", "j", "uncategorized",
};

const char* const kCategoryNames[kCategoryCount] = {
    "Horizontal Shadow", "Slope/ Curve", "Discontinuities", "Front Shadow",
    "Dense Weed",        "Large Crops",  "Small Crops",     "Sunlight",
    "Tyre Tracks",       "Sparse Weed",  "Uncategorized",
};

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> fields;
    std::string current;
    for (char ch : line) {
        if (ch == ',') {
            fields.push_back(current);
            current.clear();
        } else {
            current += ch;
        }
    }
    fields.push_back(current);
    return fields;
}

std::string resolve_path(const std::filesystem::path& base, const std::string& field) {
    if (field.empty()) return {};
    return (base / std::filesystem::path(field)).string();
}

void require_readable(const std::string& path, int row) {
    std::ifstream f(path, std::ios::binary);
    if (!f.good())
        throw Error(ErrorCode::Io, "manifest row " + std::to_string(row) + ": cannot read '" +
                                       path + "'");
}

BinaryMask load_mask(const std::string& path) {
    return binarize(decode_gray(read_file(path)), 128);
}

struct SampleOutcome {
    bool ok = false;
    PairEvaluation eval;
    std::string error;
};

struct Accumulator {
    int count = 0;
    double sum_accuracy = 0.0;
    double sum_iou = 0.0;
    double sum_gt_rows = 0.0;
    double sum_pred_rows = 0.0;
    int detected = 0;
    double sum_angle_error = 0.0;

    void add(const PairEvaluation& e) {
        ++count;
        sum_accuracy += e.scores.accuracy;
        sum_iou += e.scores.iou;
        sum_gt_rows += e.gt_row_count;
        sum_pred_rows += e.pred_row_count;
        if (e.angle.mean_error.has_value()) {
            ++detected;
            sum_angle_error += *e.angle.mean_error;
        }
    }

    CategoryReport report(std::string id, std::string name) const {
        CategoryReport r;
        r.id = std::move(id);
        r.name = std::move(name);
        r.sample_count = count;
        if (count > 0) {
            r.mean_accuracy = sum_accuracy / count;
            r.mean_iou = sum_iou / count;
            r.mean_gt_rows = sum_gt_rows / count;
            r.mean_pred_rows = sum_pred_rows / count;
            r.detection_rate = static_cast<double>(detected) / count;
        }
        if (detected > 0) r.mean_angle_error = sum_angle_error / detected;
        return r;
    }
};

template <typename EvalOne>
RunReport run_evaluation(const std::vector<Sample>& samples, const PipelineConfig& echo,
                         int workers, EvalOne&& eval_one) {
    if (samples.empty())
        throw Error(ErrorCode::InvalidArgument, "evaluate: sample list is empty");
    echo.validate();

    const std::size_t n = samples.size();
    std::vector<SampleOutcome> outcomes(n);
    auto run_one = [&](std::size_t i) {
        try {
            outcomes[i].eval = eval_one(samples[i]);
            outcomes[i].ok = true;
        } catch (const std::exception& e) {
            outcomes[i].error = e.what();
        }
    };

    const int pool = std::clamp<int>(workers, 1, static_cast<int>(n));
    if (pool <= 1) {
        for (std::size_t i = 0; i < n; ++i) run_one(i);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> threads;
        threads.reserve(static_cast<std::size_t>(pool));
        for (int t = 0; t < pool; ++t) {
            threads.emplace_back([&] {
                for (;;) {
                    const std::size_t i = next.fetch_add(1);
                    if (i >= n) return;
                    run_one(i);
                }
            });
        }
        for (std::thread& t : threads) t.join();
    }

    // Aggregation always walks samples in index order so the report is
    // identical whatever the worker count.
    RunReport report;
    report.config_echo = echo;
    std::map<Category, Accumulator> per_category;
    Accumulator all;
    for (std::size_t i = 0; i < n; ++i) {
        if (!outcomes[i].ok) {
            report.failures.push_back({static_cast<int>(i) + 1, outcomes[i].error});
            continue;
        }
        per_category[samples[i].category].add(outcomes[i].eval);
        all.add(outcomes[i].eval);
    }
    for (const auto& [cat, acc] : per_category) {
        report.per_category.push_back(acc.report(category_id(cat), category_name(cat)));
    }
    report.overall = all.report("ALL", "Overall");
    return report;
}

std::string format_double(const char* fmt, double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), fmt, v);
    return buf;
}

std::string csv_row(const CategoryReport& c) {
    std::string angle = c.mean_angle_error ? format_double("%.4f", *c.mean_angle_error) : "NA";
    return c.id + "," + c.name + "," + std::to_string(c.sample_count) + "," +
           format_double("%.2f", c.mean_accuracy * 100.0) + "," +
           format_double("%.4f", c.mean_iou) + "," + angle + "," +
           format_double("%.4f", c.detection_rate) + "," +
           format_double("%.2f", c.mean_gt_rows) + "," +
           format_double("%.2f", c.mean_pred_rows) + "\n";
}

std::string markdown_row(const CategoryReport& c) {
    std::string angle =
        c.mean_angle_error ? format_double("%.4f", *c.mean_angle_error) + "°" : "NA";
    return "| " + c.name + " | " + format_double("%.2f", c.mean_accuracy * 100.0) + "% | " +
           format_double("%.4f", c.mean_iou) + " | " + angle + " |\n";
}

nlohmann::json pipeline_to_json(const PipelineConfig& p) {
    return nlohmann::json{
        {"theta_res", p.theta_res},
        {"rho_res", p.rho_res},
        {"vote_threshold", p.vote_threshold},
        {"nms_theta_bins", p.nms_radius.theta_bins},
        {"nms_rho_bins", p.nms_radius.rho_bins},
        {"eps1", p.eps1},
        {"eps2", p.eps2},
        {"min_pts", p.min_pts},
        {"max_thin_iterations", p.max_thin_iterations},
    };
}

nlohmann::json category_to_json(const CategoryReport& c) {
    nlohmann::json j{
        {"id", c.id},
        {"name", c.name},
        {"samples", c.sample_count},
        {"accuracy", c.mean_accuracy},
        {"mean_iou", c.mean_iou},
        {"detection_rate", c.detection_rate},
        {"mean_gt_rows", c.mean_gt_rows},
        {"mean_pred_rows", c.mean_pred_rows},
    };
    if (c.mean_angle_error) {
        j["angle_error_deg"] = *c.mean_angle_error;
    } else {
        j["angle_error_deg"] = nullptr;
    }
    return j;
}

CategoryReport category_from_json(const nlohmann::json& j) {
    CategoryReport c;
    c.id = j.at("id").get<std::string>();
    c.name = j.at("name").get<std::string>();
    c.sample_count = j.at("samples").get<int>();
    c.mean_accuracy = j.at("accuracy").get<double>();
    c.mean_iou = j.at("mean_iou").get<double>();
    c.detection_rate = j.at("detection_rate").get<double>();
    c.mean_gt_rows = j.at("mean_gt_rows").get<double>();
    c.mean_pred_rows = j.at("mean_pred_rows").get<double>();
    const auto& angle = j.at("angle_error_deg");
    if (!angle.is_null()) c.mean_angle_error = angle.get<double>();
    return c;
}

} // namespace

Category category_from_token(const std::string& token) {
    if (token.empty()) return Category::Uncategorized;
    if (token.size() == 1 && token[0] >= 'a' && token[0] <= 'j')
        return static_cast<Category>(token[0] - 'a');
    throw Error(ErrorCode::Parse, "unknown category '" + token + "'");
}

std::string category_id(Category c) { return kCategoryIds[static_cast<int>(c)]; }

std::string category_name(Category c) { return kCategoryNames[static_cast<int>(c)]; }

std::vector<Sample> load_manifest(const std::string& path) {
    std::ifstream file(path);
    if (!file.good()) throw Error(ErrorCode::Io, "cannot open manifest '" + path + "'");
    const std::filesystem::path base = std::filesystem::absolute(path).parent_path();

    std::vector<std::string> lines;
    std::string line;
    while (std::getline(file, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        lines.push_back(line);
    }
    if (lines.empty()) throw Error(ErrorCode::Parse, "manifest is empty");
    if (lines[0] != "image,gt_mask,pred_mask,category")
        throw Error(ErrorCode::Parse,
                    "manifest header must be 'image,gt_mask,pred_mask,category'");

    std::vector<Sample> samples;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (lines[i].empty()) continue;
        const int row = static_cast<int>(samples.size()) + 1;
        const std::vector<std::string> fields = split_fields(lines[i]);
        if (fields.size() != 4)
            throw Error(ErrorCode::Parse, "manifest row " + std::to_string(row) + ": expected 4 fields, got " +
                                              std::to_string(fields.size()));
        Sample s;
        s.image_path = resolve_path(base, fields[0]);
        s.gt_mask_path = resolve_path(base, fields[1]);
        s.pred_mask_path = resolve_path(base, fields[2]);
        try {
            s.category = category_from_token(fields[3]);
        } catch (const Error& e) {
            throw Error(ErrorCode::Parse, "manifest row " + std::to_string(row) + ": " + e.what());
        }
        if (s.gt_mask_path.empty())
            throw Error(ErrorCode::Parse, "manifest row " + std::to_string(row) + ": gt_mask is required");
        require_readable(s.gt_mask_path, row);
        if (!s.pred_mask_path.empty()) require_readable(s.pred_mask_path, row);
        if (!s.image_path.empty()) require_readable(s.image_path, row);
        samples.push_back(std::move(s));
    }
    return samples;
}

RunReport evaluate_dataset(const std::vector<Sample>& samples, const PipelineConfig& config,
                           int workers) {
    return run_evaluation(samples, config, workers, [&](const Sample& s) {
        if (s.pred_mask_path.empty())
            throw Error(ErrorCode::InvalidArgument, "sample has no prediction mask");
        const BinaryMask gt = load_mask(s.gt_mask_path);
        const BinaryMask pred = load_mask(s.pred_mask_path);
        return evaluate_pair(gt, pred, config);
    });
}

RunReport evaluate_dataset_baseline(const std::vector<Sample>& samples,
                                    const BaselineConfig& config, int workers) {
    config.validate();
    RunReport report =
        run_evaluation(samples, config.row_pipeline, workers, [&](const Sample& s) {
            if (s.image_path.empty())
                throw Error(ErrorCode::InvalidArgument, "sample has no image for the baseline");
            const RgbImage img = decode_rgb(read_file(s.image_path));
            const BinaryMask gt = load_mask(s.gt_mask_path);
            const BinaryMask pred = vegetation_mask(img, config).mask;
            return evaluate_pair(gt, pred, config.row_pipeline);
        });
    report.notes.push_back(
        "baseline predictions: excess-green index thresholding plus square opening stood in "
        "for the learned segmentation; rows were extracted with the shared skeleton/Hough "
        "pipeline");
    return report;
}

BinaryMask resize_global(const BinaryMask& mask, int target_w, int target_h) {
    if (target_w < 1 || target_h < 1)
        throw Error(ErrorCode::InvalidArgument, "resize target must be positive");
    BinaryMask out(target_w, target_h);
    for (int y = 0; y < target_h; ++y) {
        const int sy = std::min(mask.height - 1,
                                static_cast<int>((y + 0.5) * mask.height / target_h));
        for (int x = 0; x < target_w; ++x) {
            const int sx = std::min(mask.width - 1,
                                    static_cast<int>((x + 0.5) * mask.width / target_w));
            out.set(x, y, mask.at(sx, sy));
        }
    }
    return out;
}

GrayImage resize_global(const GrayImage& img, int target_w, int target_h) {
    if (target_w < 1 || target_h < 1)
        throw Error(ErrorCode::InvalidArgument, "resize target must be positive");
    GrayImage out(target_w, target_h);
    for (int y = 0; y < target_h; ++y) {
        const int sy =
            std::min(img.height - 1, static_cast<int>((y + 0.5) * img.height / target_h));
        for (int x = 0; x < target_w; ++x) {
            const int sx =
                std::min(img.width - 1, static_cast<int>((x + 0.5) * img.width / target_w));
            out.at(x, y) = img.at(sx, sy);
        }
    }
    return out;
}

RgbImage resize_global(const RgbImage& img, int target_w, int target_h) {
    if (target_w < 1 || target_h < 1)
        throw Error(ErrorCode::InvalidArgument, "resize target must be positive");
    RgbImage out(target_w, target_h);
    const double sx_scale = static_cast<double>(img.width) / target_w;
    const double sy_scale = static_cast<double>(img.height) / target_h;
    for (int y = 0; y < target_h; ++y) {
        const double fy = std::clamp((y + 0.5) * sy_scale - 0.5, 0.0, img.height - 1.0);
        const int y0 = static_cast<int>(fy);
        const int y1 = std::min(y0 + 1, img.height - 1);
        const double wy = fy - y0;
        for (int x = 0; x < target_w; ++x) {
            const double fx = std::clamp((x + 0.5) * sx_scale - 0.5, 0.0, img.width - 1.0);
            const int x0 = static_cast<int>(fx);
            const int x1 = std::min(x0 + 1, img.width - 1);
            const double wx = fx - x0;
            for (int ch = 0; ch < 3; ++ch) {
                const double top = img.at(x0, y0, ch) * (1.0 - wx) + img.at(x1, y0, ch) * wx;
                const double bottom = img.at(x0, y1, ch) * (1.0 - wx) + img.at(x1, y1, ch) * wx;
                const double value = top * (1.0 - wy) + bottom * wy;
                out.set_channel(x, y, ch, static_cast<std::uint8_t>(std::lround(value)));
            }
        }
    }
    return out;
}

std::string emit_report(const RunReport& report, ReportFormat format) {
    switch (format) {
    case ReportFormat::Csv: {
        std::string out =
            "category_id,category_name,samples,accuracy,mean_iou,angle_error_deg,"
            "detection_rate,mean_gt_rows,mean_pred_rows\n";
        for (const CategoryReport& c : report.per_category) out += csv_row(c);
        out += csv_row(report.overall);
        return out;
    }
    case ReportFormat::Markdown: {
        std::string out = "| Category Name | Accuracy | Mean IoU | Angle Error |\n"
                          "| --- | --- | --- | --- |\n";
        for (const CategoryReport& c : report.per_category) out += markdown_row(c);
        out += markdown_row(report.overall);
        return out;
    }
    case ReportFormat::Json: {
        nlohmann::json categories = nlohmann::json::array();
        for (const CategoryReport& c : report.per_category)
            categories.push_back(category_to_json(c));
        nlohmann::json failures = nlohmann::json::array();
        for (const SampleFailure& f : report.failures)
            failures.push_back({{"row", f.row}, {"message", f.message}});
        nlohmann::json j{
            {"tool_version", report.tool_version},
            {"config", pipeline_to_json(report.config_echo)},
            {"categories", std::move(categories)},
            {"overall", category_to_json(report.overall)},
            {"failures", std::move(failures)},
            {"notes", report.notes},
        };
        return j.dump(2) + "\n";
    }
    }
    throw Error(ErrorCode::InvalidArgument, "unknown report format");
}

RunReport report_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::Parse, std::string("report json: ") + e.what());
    }
    try {
        RunReport report;
        report.tool_version = j.at("tool_version").get<std::string>();
        PipelineConfig pipeline;
        BaselineConfig baseline;
        config_update_from_json(j.at("config").dump(), pipeline, baseline);
        report.config_echo = pipeline;
        for (const auto& c : j.at("categories")) report.per_category.push_back(category_from_json(c));
        report.overall = category_from_json(j.at("overall"));
        for (const auto& f : j.value("failures", nlohmann::json::array())) {
            report.failures.push_back(
                {f.at("row").get<int>(), f.at("message").get<std::string>()});
        }
        for (const auto& note : j.value("notes", nlohmann::json::array())) {
            report.notes.push_back(note.get<std::string>());
        }
        return report;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::Parse, std::string("report json: ") + e.what());
    }
}

} // namespace croprow
