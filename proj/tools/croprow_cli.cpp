// Command-line frontend. Everything goes through the C API in croprow.h;
// no library internals are visible here.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "croprow.h"

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitPartial = 2;
constexpr int kExitFatal = 3;

struct StringDeleter {
    void operator()(char* p) const { crp_string_free(p); }
};
using CString = std::unique_ptr<char, StringDeleter>;

struct ConfigDeleter {
    void operator()(crp_config* p) const { crp_config_free(p); }
};
struct MaskDeleter {
    void operator()(crp_mask* p) const { crp_mask_free(p); }
};
struct ImageDeleter {
    void operator()(crp_image* p) const { crp_image_free(p); }
};
struct RowsDeleter {
    void operator()(crp_rows* p) const { crp_rows_free(p); }
};
struct ReportDeleter {
    void operator()(crp_report* p) const { crp_report_free(p); }
};
struct SceneDeleter {
    void operator()(crp_scene* p) const { crp_scene_free(p); }
};

using Config = std::unique_ptr<crp_config, ConfigDeleter>;
using Mask = std::unique_ptr<crp_mask, MaskDeleter>;
using Image = std::unique_ptr<crp_image, ImageDeleter>;
using Rows = std::unique_ptr<crp_rows, RowsDeleter>;
using Report = std::unique_ptr<crp_report, ReportDeleter>;
using Scene = std::unique_ptr<crp_scene, SceneDeleter>;

[[noreturn]] void die(int code, const std::string& message) {
    std::cerr << "croprow: " << message << "\n";
    std::exit(code);
}

void die_status(crp_status status, const std::string& what) {
    int code = kExitFatal;
    if (status == CRP_ERR_INVALID_ARGUMENT) code = kExitUsage;
    die(code, what + ": " + crp_last_error());
}

std::string read_text_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f.good()) die(kExitFatal, "cannot read '" + path + "'");
    std::ostringstream out;
    out << f.rdbuf();
    return out.str();
}

void write_output(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f.good()) die(kExitFatal, "cannot write '" + path + "'");
    f << text;
    if (!f.good()) die(kExitFatal, "cannot write '" + path + "'");
}

/// Flag values are staged here and only forwarded for flags the user
/// actually passed, so precedence stays defaults < config file < flags.
struct ConfigFlags {
    double theta_res = 0.0;
    double rho_res = 0.0;
    long vote_threshold = 0;
    int nms_theta_bins = 0;
    int nms_rho_bins = 0;
    double eps1 = 0.0;
    double eps2 = 0.0;
    int min_pts = 0;
    int max_thin_iterations = 0;
    bool use_otsu = false;
    bool no_otsu = false;
    int fixed_threshold = 0;
    int open_radius = 0;
    std::string config_file;

    void attach(CLI::App* cmd) {
        cmd->add_option("--config", config_file, "JSON config file merged over the defaults");
        cmd->add_option("--theta-res", theta_res, "Hough theta resolution, degrees per bin");
        cmd->add_option("--rho-res", rho_res, "Hough rho resolution, pixels per bin");
        cmd->add_option("--vote-threshold", vote_threshold, "minimum Hough votes for a peak");
        cmd->add_option("--nms-theta-bins", nms_theta_bins, "peak suppression radius, theta bins");
        cmd->add_option("--nms-rho-bins", nms_rho_bins, "peak suppression radius, rho bins");
        cmd->add_option("--eps1", eps1, "stage-1 clustering radius, degrees");
        cmd->add_option("--eps2", eps2, "stage-2 clustering radius, degrees");
        cmd->add_option("--min-pts", min_pts, "DBSCAN core-point threshold");
        cmd->add_option("--max-thin-iterations", max_thin_iterations, "skeletonizer pass cap");
        cmd->add_flag("--use-otsu", use_otsu, "baseline: threshold the vegetation index with Otsu");
        cmd->add_flag("--no-otsu", no_otsu, "baseline: use --fixed-threshold instead of Otsu");
        cmd->add_option("--fixed-threshold", fixed_threshold,
                        "baseline: vegetation index cut when Otsu is off");
        cmd->add_option("--open-radius", open_radius, "baseline: opening radius, 0 disables");
    }

    Config build(const CLI::App* cmd) const {
        Config config(crp_config_new());
        if (!config_file.empty()) {
            const std::string text = read_text_file(config_file);
            const crp_status s = crp_config_update_json(config.get(), text.c_str());
            if (s != CRP_OK)
                die(kExitUsage, "config file '" + config_file + "': " + crp_last_error());
        }
        std::ostringstream j;
        j << "{";
        bool first = true;
        auto put = [&](const char* key, const std::string& value) {
            if (!first) j << ",";
            first = false;
            j << "\"" << key << "\":" << value;
        };
        auto passed = [&](const char* name) { return cmd->count(name) > 0; };
        if (passed("--theta-res")) put("theta_res", std::to_string(theta_res));
        if (passed("--rho-res")) put("rho_res", std::to_string(rho_res));
        if (passed("--vote-threshold")) put("vote_threshold", std::to_string(vote_threshold));
        if (passed("--nms-theta-bins")) put("nms_theta_bins", std::to_string(nms_theta_bins));
        if (passed("--nms-rho-bins")) put("nms_rho_bins", std::to_string(nms_rho_bins));
        if (passed("--eps1")) put("eps1", std::to_string(eps1));
        if (passed("--eps2")) put("eps2", std::to_string(eps2));
        if (passed("--min-pts")) put("min_pts", std::to_string(min_pts));
        if (passed("--max-thin-iterations"))
            put("max_thin_iterations", std::to_string(max_thin_iterations));
        if (passed("--use-otsu")) put("use_otsu", "true");
        if (passed("--no-otsu")) put("use_otsu", "false");
        if (passed("--fixed-threshold")) put("fixed_threshold", std::to_string(fixed_threshold));
        if (passed("--open-radius")) put("open_radius", std::to_string(open_radius));
        j << "}";
        const std::string overrides = j.str();
        if (overrides != "{}") {
            const crp_status s = crp_config_update_json(config.get(), overrides.c_str());
            if (s != CRP_OK) die(kExitUsage, std::string("flags: ") + crp_last_error());
        }
        return config;
    }
};

std::string rows_to_json(const crp_rows* rows) {
    char* raw = nullptr;
    const crp_status s = crp_rows_to_json(rows, &raw);
    if (s != CRP_OK) die_status(s, "rows");
    CString text(raw);
    return text.get();
}

std::string render_report(const crp_report* report, const std::string& format) {
    char* raw = nullptr;
    const crp_status s = crp_report_render(report, format.c_str(), &raw);
    if (s != CRP_OK) die_status(s, "report");
    CString text(raw);
    return text.get();
}

int run_manifest_eval(const std::string& manifest, const Config& config, int workers,
                      bool baseline, const std::string& format, const std::string& out_path) {
    crp_report* raw = nullptr;
    const crp_status s =
        crp_evaluate_manifest(manifest.c_str(), config.get(), workers, baseline ? 1 : 0, &raw);
    if (s != CRP_OK && s != CRP_ERR_PARTIAL) die_status(s, "evaluate '" + manifest + "'");
    Report report(raw);
    write_output(out_path, render_report(report.get(), format));
    if (s == CRP_ERR_PARTIAL) {
        std::cerr << "croprow: " << crp_report_failure_count(report.get())
                  << " sample(s) failed; see the report's failure list\n";
        return kExitPartial;
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Crop-row detection, synthesis and evaluation toolkit"};
    app.require_subcommand(1);
    app.failure_message(CLI::FailureMessage::help);

    // eval ------------------------------------------------------------
    auto* eval = app.add_subcommand("eval", "Score prediction masks against ground truth");
    std::string eval_manifest;
    int eval_workers = 1;
    std::string eval_format = "csv";
    std::string eval_out;
    eval->add_option("--manifest", eval_manifest, "CSV manifest")->required();
    eval->add_option("--workers", eval_workers, "worker threads (result is identical)");
    eval->add_option("--format", eval_format, "csv, json or markdown")
        ->check(CLI::IsMember({"csv", "json", "markdown"}));
    eval->add_option("--out", eval_out, "output file ('-' = stdout)");
    ConfigFlags eval_flags;
    eval_flags.attach(eval);

    // detect ----------------------------------------------------------
    auto* detect = app.add_subcommand("detect", "Detect rows in one binary mask");
    std::string detect_mask;
    int detect_threshold = 128;
    std::string detect_out;
    std::string detect_overlay;
    detect->add_option("--mask", detect_mask, "mask image (PGM/PNG)")->required();
    detect->add_option("--threshold", detect_threshold, "binarize cut for the mask file");
    detect->add_option("--out", detect_out, "rows JSON output ('-' = stdout)");
    detect->add_option("--overlay", detect_overlay, "write mask+rows overlay image here (PPM)");
    ConfigFlags detect_flags;
    detect_flags.attach(detect);

    // baseline ----------------------------------------------------------
    auto* baseline = app.add_subcommand(
        "baseline", "Classical detector: vegetation index -> threshold -> row pipeline");
    std::string baseline_image;
    std::string baseline_manifest;
    int baseline_workers = 1;
    std::string baseline_format = "csv";
    std::string baseline_out;
    std::string baseline_overlay;
    std::string baseline_vegmask;
    baseline->add_option("--image", baseline_image, "single RGB image -> rows JSON");
    baseline->add_option("--manifest", baseline_manifest,
                         "manifest with image+gt columns -> evaluation report");
    baseline->add_option("--workers", baseline_workers, "worker threads for --manifest");
    baseline->add_option("--format", baseline_format, "report format for --manifest")
        ->check(CLI::IsMember({"csv", "json", "markdown"}));
    baseline->add_option("--out", baseline_out, "output file ('-' = stdout)");
    baseline->add_option("--overlay", baseline_overlay, "write image+rows overlay here (PPM)");
    baseline->add_option("--veg-mask", baseline_vegmask, "write the vegetation mask here (PGM)");
    ConfigFlags baseline_flags;
    baseline_flags.attach(baseline);

    // synth -------------------------------------------------------------
    auto* synth = app.add_subcommand("synth", "Render a synthetic scene from a JSON spec");
    std::string synth_scene;
    std::string synth_mask;
    std::string synth_gt_mask;
    std::string synth_rgb;
    bool synth_echo = false;
    std::vector<int> synth_crop_color{40, 180, 60};
    std::vector<int> synth_soil_color{120, 85, 50};
    synth->add_option("--scene", synth_scene, "scene spec JSON file")->required();
    synth->add_option("--mask", synth_mask, "write the speckled mask here (PGM)");
    synth->add_option("--gt-mask", synth_gt_mask, "write the rows-only mask here (PGM)");
    synth->add_option("--rgb", synth_rgb, "write the rendered RGB image here (PPM)");
    synth->add_option("--crop-color", synth_crop_color, "crop RGB, three values 0-255")
        ->expected(3);
    synth->add_option("--soil-color", synth_soil_color, "soil RGB, three values 0-255")
        ->expected(3);
    synth->add_flag("--echo-spec", synth_echo, "print the normalized spec JSON to stdout");

    // report ------------------------------------------------------------
    auto* report_cmd = app.add_subcommand("report", "Re-render a JSON run report");
    std::string report_in;
    std::string report_format = "markdown";
    std::string report_out;
    report_cmd->add_option("--in", report_in, "run report JSON file")->required();
    report_cmd->add_option("--format", report_format, "csv, json or markdown")
        ->check(CLI::IsMember({"csv", "json", "markdown"}));
    report_cmd->add_option("--out", report_out, "output file ('-' = stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    if (eval->parsed()) {
        Config config = eval_flags.build(eval);
        return run_manifest_eval(eval_manifest, config, eval_workers, false, eval_format,
                                 eval_out);
    }

    if (detect->parsed()) {
        Config config = detect_flags.build(detect);
        crp_mask* mask_raw = nullptr;
        crp_status s = crp_mask_read(detect_mask.c_str(), detect_threshold, &mask_raw);
        if (s != CRP_OK) die_status(s, "mask '" + detect_mask + "'");
        Mask mask(mask_raw);
        crp_rows* rows_raw = nullptr;
        s = crp_detect_rows(mask.get(), config.get(), &rows_raw);
        if (s != CRP_OK) die_status(s, "detect");
        Rows rows(rows_raw);
        write_output(detect_out, rows_to_json(rows.get()));
        if (!detect_overlay.empty()) {
            crp_image* base_raw = nullptr;
            s = crp_mask_to_image(mask.get(), &base_raw);
            if (s != CRP_OK) die_status(s, "overlay");
            Image base(base_raw);
            crp_image* over_raw = nullptr;
            s = crp_overlay(base.get(), rows.get(), 255, 0, 0, &over_raw);
            if (s != CRP_OK) die_status(s, "overlay");
            Image over(over_raw);
            s = crp_image_write(over.get(), detect_overlay.c_str());
            if (s != CRP_OK) die_status(s, "overlay '" + detect_overlay + "'");
        }
        return 0;
    }

    if (baseline->parsed()) {
        Config config = baseline_flags.build(baseline);
        if (baseline_image.empty() == baseline_manifest.empty())
            die(kExitUsage, "baseline needs exactly one of --image or --manifest");
        if (!baseline_manifest.empty()) {
            return run_manifest_eval(baseline_manifest, config, baseline_workers, true,
                                     baseline_format, baseline_out);
        }
        crp_image* img_raw = nullptr;
        crp_status s = crp_image_read(baseline_image.c_str(), &img_raw);
        if (s != CRP_OK) die_status(s, "image '" + baseline_image + "'");
        Image img(img_raw);
        if (!baseline_vegmask.empty()) {
            crp_mask* veg_raw = nullptr;
            s = crp_vegetation_mask(img.get(), config.get(), &veg_raw, nullptr, nullptr);
            if (s != CRP_OK) die_status(s, "vegetation mask");
            Mask veg(veg_raw);
            s = crp_mask_write(veg.get(), baseline_vegmask.c_str());
            if (s != CRP_OK) die_status(s, "vegetation mask '" + baseline_vegmask + "'");
        }
        crp_rows* rows_raw = nullptr;
        s = crp_baseline_detect(img.get(), config.get(), &rows_raw);
        if (s != CRP_OK) die_status(s, "baseline detect");
        Rows rows(rows_raw);
        write_output(baseline_out, rows_to_json(rows.get()));
        if (!baseline_overlay.empty()) {
            crp_image* over_raw = nullptr;
            s = crp_overlay(img.get(), rows.get(), 255, 0, 0, &over_raw);
            if (s != CRP_OK) die_status(s, "overlay");
            Image over(over_raw);
            s = crp_image_write(over.get(), baseline_overlay.c_str());
            if (s != CRP_OK) die_status(s, "overlay '" + baseline_overlay + "'");
        }
        return 0;
    }

    if (synth->parsed()) {
        if (synth_mask.empty() && synth_gt_mask.empty() && synth_rgb.empty() && !synth_echo)
            die(kExitUsage, "synth needs at least one of --mask, --gt-mask, --rgb, --echo-spec");
        const std::string text = read_text_file(synth_scene);
        crp_scene* scene_raw = nullptr;
        crp_status s = crp_scene_parse(text.c_str(), &scene_raw);
        if (s != CRP_OK) die_status(s, "scene '" + synth_scene + "'");
        Scene scene(scene_raw);
        if (synth_echo) {
            char* raw = nullptr;
            s = crp_scene_to_json(scene.get(), &raw);
            if (s != CRP_OK) die_status(s, "scene");
            CString echo(raw);
            std::cout << echo.get();
        }
        if (!synth_mask.empty()) {
            crp_mask* m_raw = nullptr;
            s = crp_scene_render_mask(scene.get(), &m_raw);
            if (s != CRP_OK) die_status(s, "render mask");
            Mask m(m_raw);
            s = crp_mask_write(m.get(), synth_mask.c_str());
            if (s != CRP_OK) die_status(s, "mask '" + synth_mask + "'");
        }
        if (!synth_gt_mask.empty()) {
            crp_mask* m_raw = nullptr;
            s = crp_scene_render_gt_mask(scene.get(), &m_raw);
            if (s != CRP_OK) die_status(s, "render gt mask");
            Mask m(m_raw);
            s = crp_mask_write(m.get(), synth_gt_mask.c_str());
            if (s != CRP_OK) die_status(s, "gt mask '" + synth_gt_mask + "'");
        }
        if (!synth_rgb.empty()) {
            auto byte = [&](int v, const char* what) -> uint8_t {
                if (v < 0 || v > 255) die(kExitUsage, std::string(what) + " out of range 0-255");
                return static_cast<uint8_t>(v);
            };
            crp_image* img_raw = nullptr;
            s = crp_scene_render_rgb(scene.get(), byte(synth_crop_color[0], "--crop-color"),
                                     byte(synth_crop_color[1], "--crop-color"),
                                     byte(synth_crop_color[2], "--crop-color"),
                                     byte(synth_soil_color[0], "--soil-color"),
                                     byte(synth_soil_color[1], "--soil-color"),
                                     byte(synth_soil_color[2], "--soil-color"), &img_raw);
            if (s != CRP_OK) die_status(s, "render rgb");
            Image img(img_raw);
            s = crp_image_write(img.get(), synth_rgb.c_str());
            if (s != CRP_OK) die_status(s, "rgb '" + synth_rgb + "'");
        }
        return 0;
    }

    if (report_cmd->parsed()) {
        const std::string text = read_text_file(report_in);
        crp_report* rep_raw = nullptr;
        const crp_status s = crp_report_parse(text.c_str(), &rep_raw);
        if (s != CRP_OK) die_status(s, "report '" + report_in + "'");
        Report rep(rep_raw);
        write_output(report_out, render_report(rep.get(), report_format));
        return 0;
    }

    return kExitUsage;
}
