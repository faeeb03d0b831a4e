// Exercises the shared library through croprow.h alone, the way an external
// consumer would: no C++ headers from the core.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <croprow.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;

    explicit TempDir(const std::string& tag) {
        path = fs::temp_directory_path() / ("croprow_capi_" + tag);
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }

    std::string file(const std::string& name) const { return (path / name).string(); }
};

/// Owns a char* from the library for the current scope.
struct OwnedString {
    char* ptr = nullptr;

    ~OwnedString() { crp_string_free(ptr); }
    std::string str() const { return ptr ? std::string(ptr) : std::string(); }
};

const char* kSceneOneRow = R"({
  "size": [512, 512], "seed": 7,
  "rows": [{"angle": 12.0, "offset": 200.0, "width": 3, "gaps": []}],
  "speckle_density": 0.0
})";

const char* kSceneTwoRows = R"({
  "size": [512, 512], "seed": 8,
  "rows": [
    {"angle": -15.0, "offset": -160.0, "width": 3, "gaps": []},
    {"angle": 10.0, "offset": 330.0, "width": 3, "gaps": [[0.2, 0.3]]}
  ],
  "speckle_density": 0.0
})";

crp_mask* render_scene_mask(const char* json) {
    crp_scene* scene = nullptr;
    REQUIRE(crp_scene_parse(json, &scene) == CRP_OK);
    crp_mask* mask = nullptr;
    REQUIRE(crp_scene_render_mask(scene, &mask) == CRP_OK);
    crp_scene_free(scene);
    return mask;
}

double circ_diff(double a, double b) {
    double d = std::fabs(a - b);
    return std::min(d, 180.0 - d);
}

} // namespace

TEST_CASE("version string matches the documented release") {
    CHECK(std::string(crp_version()) == "0.1.0");
}

TEST_CASE("null arguments fail with a message, not a crash") {
    CHECK(crp_config_update_json(nullptr, "{}") == CRP_ERR_INVALID_ARGUMENT);
    CHECK(std::string(crp_last_error()).find("null") != std::string::npos);
    CHECK(crp_image_read(nullptr, nullptr) == CRP_ERR_INVALID_ARGUMENT);
    CHECK(crp_detect_rows(nullptr, nullptr, nullptr) == CRP_ERR_INVALID_ARGUMENT);
    CHECK(crp_scene_parse(nullptr, nullptr) == CRP_ERR_INVALID_ARGUMENT);
    crp_report* report = nullptr;
    CHECK(crp_report_render(nullptr, "csv", nullptr) == CRP_ERR_INVALID_ARGUMENT);
    CHECK(crp_report_parse("{}", &report) == CRP_ERR_PARSE);
    CHECK(report == nullptr);
    // frees tolerate null
    crp_image_free(nullptr);
    crp_mask_free(nullptr);
    crp_config_free(nullptr);
    crp_rows_free(nullptr);
    crp_report_free(nullptr);
    crp_scene_free(nullptr);
    crp_string_free(nullptr);
}

TEST_CASE("config json round-trips and rejects unknown keys unchanged") {
    crp_config* config = crp_config_new();
    REQUIRE(config != nullptr);

    OwnedString before;
    REQUIRE(crp_config_to_json(config, &before.ptr) == CRP_OK);
    CHECK(before.str().find("\"vote_threshold\":140") != std::string::npos);

    REQUIRE(crp_config_update_json(config, R"({"vote_threshold": 90, "eps1": 3.0})") ==
            CRP_OK);
    OwnedString after;
    REQUIRE(crp_config_to_json(config, &after.ptr) == CRP_OK);
    CHECK(after.str().find("\"vote_threshold\":90") != std::string::npos);
    CHECK(after.str().find("\"eps1\":3.0") != std::string::npos);

    // a rejected update leaves the config untouched
    CHECK(crp_config_update_json(config, R"({"votes": 5})") == CRP_ERR_PARSE);
    CHECK(std::string(crp_last_error()).find("votes") != std::string::npos);
    CHECK(crp_config_update_json(config, "{") == CRP_ERR_PARSE);
    CHECK(crp_config_update_json(config, R"({"eps1": -2.0})") == CRP_ERR_INVALID_ARGUMENT);
    OwnedString unchanged;
    REQUIRE(crp_config_to_json(config, &unchanged.ptr) == CRP_OK);
    CHECK(unchanged.str() == after.str());

    crp_config_free(config);
}

TEST_CASE("scene json parses, serializes, and renders deterministic masks") {
    crp_scene* scene = nullptr;
    REQUIRE(crp_scene_parse(kSceneTwoRows, &scene) == CRP_OK);
    OwnedString json;
    REQUIRE(crp_scene_to_json(scene, &json.ptr) == CRP_OK);

    crp_scene* reparsed = nullptr;
    REQUIRE(crp_scene_parse(json.ptr, &reparsed) == CRP_OK);
    crp_mask* a = nullptr;
    crp_mask* b = nullptr;
    REQUIRE(crp_scene_render_mask(scene, &a) == CRP_OK);
    REQUIRE(crp_scene_render_mask(reparsed, &b) == CRP_OK);
    CHECK(crp_mask_width(a) == 512);
    CHECK(crp_mask_height(a) == 512);
    CHECK(crp_mask_white_count(a) == crp_mask_white_count(b));
    CHECK(crp_mask_white_count(a) > 1000);

    crp_mask* gt = nullptr;
    REQUIRE(crp_scene_render_gt_mask(scene, &gt) == CRP_OK);
    CHECK(crp_mask_white_count(gt) == crp_mask_white_count(a)); // no speckle here

    crp_scene* bad = nullptr;
    CHECK(crp_scene_parse("{\"rows\": []}", &bad) == CRP_ERR_PARSE);
    CHECK(crp_scene_parse(R"({"size": [16, 16], "seed": 1, "rows": [],
                             "speckle_density": 0.0})",
                          &bad) == CRP_ERR_INVALID_ARGUMENT);

    crp_mask_free(a);
    crp_mask_free(b);
    crp_mask_free(gt);
    crp_scene_free(scene);
    crp_scene_free(reparsed);
}

TEST_CASE("masks and images write and read back through files") {
    TempDir dir("io");
    crp_mask* mask = render_scene_mask(kSceneOneRow);
    REQUIRE(crp_mask_write(mask, dir.file("m.pgm").c_str()) == CRP_OK);

    crp_mask* back = nullptr;
    REQUIRE(crp_mask_read(dir.file("m.pgm").c_str(), 128, &back) == CRP_OK);
    CHECK(crp_mask_white_count(back) == crp_mask_white_count(mask));

    crp_image* img = nullptr;
    REQUIRE(crp_mask_to_image(mask, &img) == CRP_OK);
    REQUIRE(crp_image_write(img, dir.file("m.ppm").c_str()) == CRP_OK);
    crp_image* img_back = nullptr;
    REQUIRE(crp_image_read(dir.file("m.ppm").c_str(), &img_back) == CRP_OK);
    CHECK(crp_image_width(img_back) == 512);
    CHECK(crp_image_height(img_back) == 512);

    // grayscale files are promoted to RGB when read as images
    crp_image* promoted = nullptr;
    REQUIRE(crp_image_read(dir.file("m.pgm").c_str(), &promoted) == CRP_OK);
    CHECK(crp_image_width(promoted) == 512);

    crp_image* missing = nullptr;
    CHECK(crp_image_read(dir.file("nope.ppm").c_str(), &missing) == CRP_ERR_IO);
    std::ofstream(dir.file("junk.pgm"), std::ios::binary) << "P5\n4 4\n255\nab";
    crp_mask* junk = nullptr;
    CHECK(crp_mask_read(dir.file("junk.pgm").c_str(), 128, &junk) == CRP_ERR_DECODE);
    CHECK(std::string(crp_last_error()).find("pnm") != std::string::npos);

    crp_mask_free(mask);
    crp_mask_free(back);
    crp_image_free(img);
    crp_image_free(img_back);
    crp_image_free(promoted);
}

TEST_CASE("resize returns fresh handles of the requested size") {
    crp_mask* mask = render_scene_mask(kSceneOneRow);
    crp_mask* small = nullptr;
    REQUIRE(crp_mask_resize(mask, 128, 96, &small) == CRP_OK);
    CHECK(crp_mask_width(small) == 128);
    CHECK(crp_mask_height(small) == 96);
    CHECK(crp_mask_white_count(small) > 0);

    crp_mask* invalid = nullptr;
    CHECK(crp_mask_resize(mask, 0, 10, &invalid) == CRP_ERR_INVALID_ARGUMENT);

    crp_image* img = nullptr;
    REQUIRE(crp_mask_to_image(mask, &img) == CRP_OK);
    crp_image* half = nullptr;
    REQUIRE(crp_image_resize(img, 256, 256, &half) == CRP_OK);
    CHECK(crp_image_width(half) == 256);

    crp_mask_free(mask);
    crp_mask_free(small);
    crp_image_free(img);
    crp_image_free(half);
}

TEST_CASE("detect_rows finds planted rows and reports them in rho order") {
    crp_mask* mask = render_scene_mask(kSceneTwoRows);
    crp_config* config = crp_config_new();
    crp_rows* rows = nullptr;
    REQUIRE(crp_detect_rows(mask, config, &rows) == CRP_OK);
    REQUIRE(crp_rows_count(rows) == 2);
    CHECK(crp_rows_rho(rows, 0) < crp_rows_rho(rows, 1));
    CHECK(circ_diff(crp_rows_angle_deg(rows, 0), -15.0) <= 0.5);
    CHECK(circ_diff(crp_rows_angle_deg(rows, 1), 10.0) <= 0.5);
    CHECK(crp_rows_member_count(rows, 0) >= 1);
    // out-of-range accessors return zeros rather than reading past the end
    CHECK(crp_rows_angle_deg(rows, 99) == 0.0);
    CHECK(crp_rows_rho(rows, 99) == 0.0);
    CHECK(crp_rows_member_count(rows, 99) == 0);

    OwnedString json;
    REQUIRE(crp_rows_to_json(rows, &json.ptr) == CRP_OK);
    CHECK(json.str().find("\"angle_deg\"") != std::string::npos);
    CHECK(json.str().find("\"rho\"") != std::string::npos);

    crp_image* canvas = nullptr;
    REQUIRE(crp_mask_to_image(mask, &canvas) == CRP_OK);
    crp_image* painted = nullptr;
    REQUIRE(crp_overlay(canvas, rows, 255, 0, 0, &painted) == CRP_OK);
    CHECK(crp_image_width(painted) == 512);

    crp_rows_free(rows);
    crp_config_free(config);
    crp_mask_free(mask);
    crp_image_free(canvas);
    crp_image_free(painted);
}

TEST_CASE("baseline detect and vegetation mask run from an rgb scene") {
    crp_scene* scene = nullptr;
    REQUIRE(crp_scene_parse(kSceneOneRow, &scene) == CRP_OK);
    crp_image* img = nullptr;
    REQUIRE(crp_scene_render_rgb(scene, 40, 180, 60, 120, 85, 50, &img) == CRP_OK);
    crp_config* config = crp_config_new();

    crp_mask* veg = nullptr;
    int threshold = -1;
    int degenerate = -1;
    REQUIRE(crp_vegetation_mask(img, config, &veg, &threshold, &degenerate) == CRP_OK);
    CHECK(threshold > 0);
    CHECK(degenerate == 0);
    CHECK(crp_mask_white_count(veg) > 0);

    crp_rows* rows = nullptr;
    REQUIRE(crp_baseline_detect(img, config, &rows) == CRP_OK);
    REQUIRE(crp_rows_count(rows) == 1);
    CHECK(circ_diff(crp_rows_angle_deg(rows, 0), 12.0) <= 0.5);

    crp_rows_free(rows);
    crp_mask_free(veg);
    crp_config_free(config);
    crp_image_free(img);
    crp_scene_free(scene);
}

TEST_CASE("pair evaluation emits a json scorecard") {
    crp_mask* gt = render_scene_mask(kSceneTwoRows);
    crp_config* config = crp_config_new();
    OwnedString json;
    REQUIRE(crp_evaluate_pair_json(gt, gt, config, &json.ptr) == CRP_OK);
    const std::string text = json.str();
    CHECK(text.find("\"accuracy\": 1.0") != std::string::npos);
    CHECK(text.find("\"iou\": 1.0") != std::string::npos);
    CHECK(text.find("\"mean_angle_error_deg\": 0.0") != std::string::npos);
    CHECK(text.find("\"k\": 2") != std::string::npos);

    crp_mask* small = nullptr;
    REQUIRE(crp_mask_resize(gt, 64, 64, &small) == CRP_OK);
    OwnedString bad;
    CHECK(crp_evaluate_pair_json(gt, small, config, &bad.ptr) == CRP_ERR_DIMENSION_MISMATCH);

    crp_mask_free(gt);
    crp_mask_free(small);
    crp_config_free(config);
}

TEST_CASE("manifest evaluation renders reports and flags partial failures") {
    TempDir dir("manifest");
    crp_mask* m1 = render_scene_mask(kSceneOneRow);
    crp_mask* m2 = render_scene_mask(kSceneTwoRows);
    REQUIRE(crp_mask_write(m1, dir.file("a.pgm").c_str()) == CRP_OK);
    REQUIRE(crp_mask_write(m2, dir.file("b.pgm").c_str()) == CRP_OK);
    crp_mask* tiny = nullptr;
    REQUIRE(crp_mask_resize(m1, 64, 64, &tiny) == CRP_OK);
    REQUIRE(crp_mask_write(tiny, dir.file("tiny.pgm").c_str()) == CRP_OK);

    std::ofstream(dir.file("ok.csv"), std::ios::binary)
        << "image,gt_mask,pred_mask,category\n"
        << ",a.pgm,a.pgm,c\n"
        << ",b.pgm,b.pgm,c\n"
        << ",a.pgm,a.pgm,i\n";
    crp_config* config = crp_config_new();
    crp_report* report = nullptr;
    REQUIRE(crp_evaluate_manifest(dir.file("ok.csv").c_str(), config, 2, 0, &report) ==
            CRP_OK);
    CHECK(crp_report_failure_count(report) == 0);

    OwnedString csv;
    REQUIRE(crp_report_render(report, "csv", &csv.ptr) == CRP_OK);
    CHECK(csv.str().find("c,Discontinuities,2,") != std::string::npos);
    CHECK(csv.str().find("ALL,Overall,3,100.00,1.0000,0.0000,1.0000,") != std::string::npos);
    OwnedString md;
    REQUIRE(crp_report_render(report, "markdown", &md.ptr) == CRP_OK);
    CHECK(md.str().find("| Overall | 100.00% | 1.0000 | 0.0000\xC2\xB0 |") !=
          std::string::npos);
    OwnedString bad_format;
    CHECK(crp_report_render(report, "yaml", &bad_format.ptr) == CRP_ERR_INVALID_ARGUMENT);

    // json render -> parse -> render reproduces the csv
    OwnedString json;
    REQUIRE(crp_report_render(report, "json", &json.ptr) == CRP_OK);
    crp_report* parsed = nullptr;
    REQUIRE(crp_report_parse(json.ptr, &parsed) == CRP_OK);
    OwnedString csv2;
    REQUIRE(crp_report_render(parsed, "csv", &csv2.ptr) == CRP_OK);
    CHECK(csv2.str() == csv.str());

    // a sample with mismatched dimensions fails alone; the run still reports
    std::ofstream(dir.file("partial.csv"), std::ios::binary)
        << "image,gt_mask,pred_mask,category\n"
        << ",a.pgm,a.pgm,c\n"
        << ",a.pgm,tiny.pgm,c\n";
    crp_report* partial = nullptr;
    CHECK(crp_evaluate_manifest(dir.file("partial.csv").c_str(), config, 1, 0, &partial) ==
          CRP_ERR_PARTIAL);
    REQUIRE(partial != nullptr);
    CHECK(crp_report_failure_count(partial) == 1);
    OwnedString partial_csv;
    REQUIRE(crp_report_render(partial, "csv", &partial_csv.ptr) == CRP_OK);
    CHECK(partial_csv.str().find("c,Discontinuities,1,") != std::string::npos);

    crp_report* none = nullptr;
    CHECK(crp_evaluate_manifest(dir.file("absent.csv").c_str(), config, 1, 0, &none) ==
          CRP_ERR_IO);

    crp_report_free(report);
    crp_report_free(parsed);
    crp_report_free(partial);
    crp_config_free(config);
    crp_mask_free(m1);
    crp_mask_free(m2);
    crp_mask_free(tiny);
}

TEST_CASE("manifest evaluation with baseline predictions reads the image column") {
    TempDir dir("baseline_manifest");
    crp_scene* scene = nullptr;
    REQUIRE(crp_scene_parse(kSceneOneRow, &scene) == CRP_OK);
    crp_image* img = nullptr;
    REQUIRE(crp_scene_render_rgb(scene, 40, 180, 60, 120, 85, 50, &img) == CRP_OK);
    crp_mask* gt = nullptr;
    REQUIRE(crp_scene_render_gt_mask(scene, &gt) == CRP_OK);
    REQUIRE(crp_image_write(img, dir.file("img.ppm").c_str()) == CRP_OK);
    REQUIRE(crp_mask_write(gt, dir.file("gt.pgm").c_str()) == CRP_OK);
    std::ofstream(dir.file("m.csv"), std::ios::binary)
        << "image,gt_mask,pred_mask,category\nimg.ppm,gt.pgm,,f\n";

    crp_config* config = crp_config_new();
    crp_report* report = nullptr;
    REQUIRE(crp_evaluate_manifest(dir.file("m.csv").c_str(), config, 1, 1, &report) ==
            CRP_OK);
    OwnedString json;
    REQUIRE(crp_report_render(report, "json", &json.ptr) == CRP_OK);
    CHECK(json.str().find("excess-green") != std::string::npos);
    CHECK(json.str().find("\"f\"") != std::string::npos);

    crp_report_free(report);
    crp_config_free(config);
    crp_mask_free(gt);
    crp_image_free(img);
    crp_scene_free(scene);
}
